#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "heliocast/fastmath.hpp"

namespace fm = heliocast::fastmath;

namespace {

double rel_err(double got, double want) {
    if (got == want) return 0.0;
    return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

}  // namespace

TEST(FastMath, ExpMatchesLibmAcrossRanges) {
    std::mt19937_64 rng(42);
    double worst = 0.0;
    auto probe = [&](double lo, double hi, int n) {
        std::uniform_real_distribution<double> d(lo, hi);
        for (int i = 0; i < n; ++i) {
            const double x = d(rng);
            worst = std::max(worst, rel_err(fm::exp_d(x), std::exp(x)));
        }
    };
    probe(-1.0, 1.0, 20000);
    probe(-40.0, 40.0, 20000);
    probe(-709.0, 709.5, 20000);  // full normal range incl. near-overflow
    EXPECT_LT(worst, 5e-15);
}

TEST(FastMath, ExpExtremes) {
    EXPECT_EQ(fm::exp_d(710.0), std::numeric_limits<double>::infinity());
    EXPECT_EQ(fm::exp_d(-800.0), 0.0);
    EXPECT_EQ(fm::exp_d(0.0), 1.0);
    // around the secant clear-sky twilight band arguments
    for (double x : {439.2, 670.0, 709.7, -739.9, -700.1}) {
        const double want = std::exp(x);
        EXPECT_LT(rel_err(fm::exp_d(x), want), 1e-13) << x;
    }
}

TEST(FastMath, LogMatchesLibm) {
    std::mt19937_64 rng(7);
    double worst_abs = 0.0;
    auto probe = [&](double lo, double hi, int n) {
        std::uniform_real_distribution<double> d(lo, hi);
        for (int i = 0; i < n; ++i) {
            const double x = d(rng);
            worst_abs = std::max(worst_abs, std::fabs(fm::log_d(x) - std::log(x)));
        }
    };
    probe(1e-4, 1.0, 30000);  // cos-zenith domain
    probe(1.0, 1e4, 30000);   // air-mass domain
    EXPECT_LT(worst_abs, 1e-14);
    EXPECT_EQ(fm::log_d(1.0), 0.0);
}

TEST(FastMath, SpanKernelsMatchScalar) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-700.0, 700.0);
    std::vector<double> x(257), y(257);
    for (auto& v : x) v = d(rng);
    fm::exp_span(x.data(), y.data(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        EXPECT_EQ(y[i], fm::exp_d(x[i]));
    }
}
