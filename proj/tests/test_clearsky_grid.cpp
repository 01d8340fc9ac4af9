#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "heliocast/clearsky.hpp"

using namespace heliocast;

namespace {

/// Relative disagreement; bitwise-equal values (including both-inf and exact
/// zeros) count as zero error.
double rel_diff(double a, double b) {
    if (a == b) return 0.0;
    return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b));
}

/// The independent oracle: drive the public scalar API cell by cell.
std::vector<double> scalar_loop_oracle(const GeoGrid& grid, UtcTime t,
                                       const ClearSkyParams& params) {
    std::vector<double> out(grid.cells());
    const int doy = day_of_year(t);
    for (int i = 0; i < grid.height; ++i) {
        for (int j = 0; j < grid.width; ++j) {
            ClearSkyParams cell = params;
            cell.elevation_raster.clear();
            cell.turbidity_raster.clear();
            if (!params.elevation_raster.empty()) {
                cell.elevation_m = params.elevation_raster[std::size_t(i) * grid.width + j];
            }
            if (!params.turbidity_raster.empty()) {
                cell.linke_turbidity = params.turbidity_raster[std::size_t(i) * grid.width + j];
            }
            const double z = solar_zenith(grid.lat(i), grid.lon(j), t);
            out[std::size_t(i) * grid.width + j] = clear_sky_ghi_scalar(z, cell, doy);
        }
    }
    return out;
}

GeoGrid random_grid(std::mt19937_64& rng, int h, int w) {
    std::uniform_real_distribution<double> lat_d(-70.0, 70.0);
    std::uniform_real_distribution<double> lon_d(-170.0, 170.0);
    std::uniform_real_distribution<double> step_d(0.02, 0.4);
    const double dlat = step_d(rng), dlon = step_d(rng);
    double lat0 = lat_d(rng);
    lat0 = std::min(lat0, 90.0 - 0.5);
    return GeoGrid(lat0, lon_d(rng), dlat, dlon, h, w);
}

}  // namespace

TEST(ClearSkyGrid, MatchesScalarLoopOracle) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::int64_t> t_d(parse_time("2022-01-01T00:00Z"),
                                                    parse_time("2028-12-31T23:00Z"));
    double worst = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
        const GeoGrid grid = random_grid(rng, 40, 30);
        const UtcTime t = (t_d(rng) / 3600) * 3600;
        ClearSkyParams p;
        p.linke_turbidity = 2.0 + 2.0 * (rep % 3);
        const ClearSkyField field = clear_sky_grid(grid, t, p);
        const auto oracle = scalar_loop_oracle(grid, t, p);
        for (std::size_t k = 0; k < oracle.size(); ++k) {
            worst = std::max(worst, rel_diff(field.ghi[k], oracle[k]));
        }
    }
    EXPECT_LE(worst, 1e-6);
}

TEST(ClearSkyGrid, MatchesOracleWithElevationAndTurbidityRasters) {
    std::mt19937_64 rng(77);
    const GeoGrid grid = random_grid(rng, 24, 24);
    ClearSkyParams p;
    std::uniform_real_distribution<double> h_d(-100.0, 4000.0);
    std::uniform_real_distribution<double> tl_d(1.5, 6.0);
    for (std::size_t k = 0; k < grid.cells(); ++k) {
        p.elevation_raster.push_back(h_d(rng));
        p.turbidity_raster.push_back(tl_d(rng));
    }
    const UtcTime t = parse_time("2025-07-03T09:00Z");
    const ClearSkyField field = clear_sky_grid(grid, t, p);
    const auto oracle = scalar_loop_oracle(grid, t, p);
    double worst = 0.0;
    for (std::size_t k = 0; k < oracle.size(); ++k) {
        worst = std::max(worst, rel_diff(field.ghi[k], oracle[k]));
    }
    EXPECT_LE(worst, 1e-6);
    EXPECT_FALSE(field.uniform_coeffs);
}

TEST(ClearSkyGrid, KastenYoungModeMatchesOracle) {
    std::mt19937_64 rng(5150);
    const GeoGrid grid = random_grid(rng, 32, 32);
    ClearSkyParams p;
    p.air_mass_model = AirMassModel::KastenYoung;
    const UtcTime t = parse_time("2026-02-11T17:00Z");
    const ClearSkyField field = clear_sky_grid(grid, t, p);
    const auto oracle = scalar_loop_oracle(grid, t, p);
    double worst = 0.0;
    for (std::size_t k = 0; k < oracle.size(); ++k) {
        worst = std::max(worst, rel_diff(field.ghi[k], oracle[k]));
    }
    EXPECT_LE(worst, 1e-6);
}

TEST(ClearSkyGrid, NightCellsExactZero) {
    // a time/domain combination straddling the terminator
    const GeoGrid grid(55.0, -30.0, 0.5, 0.5, 64, 64);
    const UtcTime t = parse_time("2025-01-05T18:00Z");
    ClearSkyParams p;
    const ClearSkyField field = clear_sky_grid(grid, t, p);
    int night_cells = 0;
    for (int i = 0; i < grid.height; ++i) {
        for (int j = 0; j < grid.width; ++j) {
            const double cz = cos_solar_zenith(grid.lat(i), grid.lon(j), t);
            if (cz <= kCosZenithNightEps) {
                ++night_cells;
                // bit-exact zero
                EXPECT_EQ(field.ghi[std::size_t(i) * grid.width + j], 0.0);
            }
        }
    }
    EXPECT_GT(night_cells, 0) << "test domain should contain night cells";
}

TEST(ClearSkyGrid, AllNightGridIsAllZero) {
    const GeoGrid grid(45.0, 0.0, 0.1, 0.1, 16, 16);
    const UtcTime t = parse_time("2025-01-05T00:00Z");  // local midnight in Europe
    const ClearSkyField field = clear_sky_grid(grid, t, ClearSkyParams{});
    for (double v : field.ghi) EXPECT_EQ(v, 0.0);
}

TEST(ClearSkyGrid, PartitionCountInvariance) {
    const GeoGrid grid(40.0, 100.0, 0.05, 0.05, 61, 53);
    const UtcTime t = parse_time("2025-06-11T05:00Z");
    ClearSkyParams p;
    const ClearSkyField one = clear_sky_grid(grid, t, p, 1);
    for (int workers : {2, 3, 7}) {
        const ClearSkyField many = clear_sky_grid(grid, t, p, workers);
        ASSERT_EQ(one.ghi.size(), many.ghi.size());
        for (std::size_t k = 0; k < one.ghi.size(); ++k) {
            // bit-identical regardless of partitioning
            EXPECT_EQ(one.ghi[k], many.ghi[k]);
        }
    }
}

TEST(ClearSkyGrid, TurbidityMonotoneElementwise) {
    const GeoGrid grid(20.0, 10.0, 0.25, 0.25, 32, 32);
    const UtcTime t = parse_time("2025-04-01T11:00Z");
    ClearSkyParams lo, hi;
    lo.linke_turbidity = 2.0;
    hi.linke_turbidity = 5.0;
    const auto f_lo = clear_sky_grid(grid, t, lo);
    const auto f_hi = clear_sky_grid(grid, t, hi);
    for (std::size_t k = 0; k < f_lo.ghi.size(); ++k) {
        EXPECT_GE(f_lo.ghi[k], f_hi.ghi[k]);
    }
}

TEST(ClearSkyGrid, ShapeMismatchRejected) {
    const GeoGrid grid(10.0, 10.0, 0.1, 0.1, 8, 8);
    ClearSkyParams p;
    p.elevation_raster.assign(17, 0.0);
    EXPECT_THROW(clear_sky_grid(grid, parse_time("2025-01-01T12:00Z"), p), ShapeError);
}

TEST(ClearSkyGrid, FieldMetadata) {
    const GeoGrid grid(10.0, 10.0, 0.1, 0.1, 8, 8);
    const auto f = clear_sky_grid(grid, parse_time("2025-12-31T12:00Z"), ClearSkyParams{});
    EXPECT_NEAR(f.i0, 1412.8341, 1e-3);
    EXPECT_TRUE(f.uniform_coeffs);
    EXPECT_DOUBLE_EQ(f.coeff_at(5).c_g1, 0.868);
}
