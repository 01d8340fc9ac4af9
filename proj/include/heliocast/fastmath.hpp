#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <limits>

namespace heliocast::fastmath {

// Double-precision exp/log kernels. They exist so the gridded clear-sky pass
// can run transcendentals inside auto-vectorized loops instead of calling
// libm per cell; accuracy is a few ulp, pinned by tests against libm and by
// the scalar-vs-grid equivalence suite.

inline constexpr double kExpOverflowArg = 709.782712893384;
inline constexpr double kExpUnderflowArg = -745.2;

namespace detail {

/// Core kernel, branch-free. Contract: x in [-708, 710]. Above the overflow
/// threshold the power-of-two scaling overflows naturally to +inf; the lower
/// bound keeps results in the normal range (subnormal multiplies stall).
inline double exp_core(double x) {
    constexpr double kInvLn2 = 1.44269504088896340736;
    constexpr double kLn2Hi = 6.93147180369123816490e-01;
    constexpr double kLn2Lo = 1.90821492927058770002e-10;
    // round-to-nearest via the 2^52 magic constant (|x*kInvLn2| < 2^31 here)
    constexpr double kShift = 0x1.8p52;

    const double kd = (x * kInvLn2 + kShift) - kShift;
    const double r = (x - kd * kLn2Hi) - kd * kLn2Lo;

    // Taylor series to r^12; |r| <= 0.3466 so truncation is < 2e-16 relative.
    double p = 1.0 / 479001600.0;
    p = p * r + 1.0 / 39916800.0;
    p = p * r + 1.0 / 3628800.0;
    p = p * r + 1.0 / 362880.0;
    p = p * r + 1.0 / 40320.0;
    p = p * r + 1.0 / 5040.0;
    p = p * r + 1.0 / 720.0;
    p = p * r + 1.0 / 120.0;
    p = p * r + 1.0 / 24.0;
    p = p * r + 1.0 / 6.0;
    p = p * r + 0.5;
    p = p * r + 1.0;
    p = p * r + 1.0;

    // scale by 2^k in two exact power-of-two factors so deep negative k
    // stays representable until the final rounding
    const std::int64_t k = std::int64_t(kd);
    const std::int64_t k1 = k >> 1;
    const std::int64_t k2 = k - k1;
    const double s1 = std::bit_cast<double>(std::uint64_t(k1 + 1023) << 52);
    const double s2 = std::bit_cast<double>(std::uint64_t(k2 + 1023) << 52);
    return (p * s1) * s2;
}

}  // namespace detail

/// Branch-free exp over the clamped domain [-708, 710]; +inf above the
/// overflow threshold. Callers that need exact zero below -700 flush the
/// result themselves (the clear-sky kernels do).
inline double exp_unchecked(double x) {
    const double lo = x < -708.0 ? -708.0 : x;  // stays clear of subnormal scaling stalls
    return detail::exp_core(lo > 710.0 ? 710.0 : lo);
}

/// Full-range exp for scalar callers: exact 0 below the underflow threshold,
/// +inf above overflow, like libm.
inline double exp_d(double x) {
    if (x > kExpOverflowArg) return std::numeric_limits<double>::infinity();
    if (x < kExpUnderflowArg) return 0.0;
    return detail::exp_core(x);
}

/// Branch-free ln(x) for finite normal x > 0 (inputs here are cosines in
/// (1e-4, 1] and air masses in [1, 1e4], all well inside the normal range).
inline double log_unchecked(double x) {
    constexpr double kLn2Hi = 6.93147180369123816490e-01;
    constexpr double kLn2Lo = 1.90821492927058770002e-10;
    // mantissa split at ~sqrt(2) via the musl-style offset trick
    constexpr std::uint64_t kOff = 0x3FE6000000000000ULL;

    const std::uint64_t ix = std::bit_cast<std::uint64_t>(x);
    const std::uint64_t tmp = ix - kOff;
    const std::int64_t e = std::int64_t(tmp) >> 52;  // arithmetic shift
    const double m = std::bit_cast<double>(ix - (tmp & 0xFFF0000000000000ULL));

    // m in [0.6875, 1.375); 2*atanh-style odd series in s = (m-1)/(m+1)
    const double s = (m - 1.0) / (m + 1.0);
    const double z = s * s;
    double p = 1.0 / 19.0;
    p = p * z + 1.0 / 17.0;
    p = p * z + 1.0 / 15.0;
    p = p * z + 1.0 / 13.0;
    p = p * z + 1.0 / 11.0;
    p = p * z + 1.0 / 9.0;
    p = p * z + 1.0 / 7.0;
    p = p * z + 1.0 / 5.0;
    p = p * z + 1.0 / 3.0;
    p = p * z + 1.0;
    const double lnm = 2.0 * s * p;
    const double ed = double(e);
    return ed * kLn2Hi + (lnm + ed * kLn2Lo);
}

inline double log_d(double x) { return log_unchecked(x); }

inline void exp_span(const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = exp_d(x[i]);
}

inline void log_span(const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = log_d(x[i]);
}

}  // namespace heliocast::fastmath
