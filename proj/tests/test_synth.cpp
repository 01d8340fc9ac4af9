#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numeric>

#include "heliocast/synth.hpp"

using namespace heliocast;

namespace {

WorldConfig small_world(std::uint64_t seed = 7) {
    WorldConfig cfg;
    cfg.grid = GeoGrid(34.0, 110.0, 0.05, 0.05, 32, 32);
    cfg.seed = seed;
    return cfg;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / a.size();
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / b.size();
    double num = 0, da = 0, db = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - ma) * (b[i] - mb);
        da += (a[i] - ma) * (a[i] - ma);
        db += (b[i] - mb) * (b[i] - mb);
    }
    return num / std::max(1e-12, std::sqrt(da * db));
}

}  // namespace

TEST(Advect, IdentityWithoutWindOrStochastics) {
    WorldConfig cfg = small_world();
    cfg.cloud_birth_rate = 0.0;
    cfg.cloud_decay_rate = 0.0;
    WorldState st = init_world(cfg, parse_time("2025-05-01T00:00Z"));
    std::fill(st.wind_u.begin(), st.wind_u.end(), 0.0);
    std::fill(st.wind_v.begin(), st.wind_v.end(), 0.0);
    const WorldState next = advect_step(st, cfg, 1.0, 1);
    for (std::size_t k = 0; k < st.cloud.size(); ++k) {
        EXPECT_DOUBLE_EQ(next.cloud[k], st.cloud[k]);
    }
}

TEST(Advect, PeriodicUniformWindShiftsOneColumn) {
    WorldConfig cfg = small_world();
    cfg.periodic = true;
    cfg.cloud_birth_rate = 0.0;
    cfg.cloud_decay_rate = 0.0;
    WorldState st = init_world(cfg, parse_time("2025-05-01T00:00Z"));
    std::fill(st.wind_u.begin(), st.wind_u.end(), cfg.grid.dlon);  // one cell/hour east
    std::fill(st.wind_v.begin(), st.wind_v.end(), 0.0);
    const WorldState next = advect_step(st, cfg, 1.0, 1);
    const int W = cfg.grid.width;
    for (int i = 0; i < cfg.grid.height; ++i) {
        for (int j = 0; j < W; ++j) {
            const int jsrc = (j - 1 + W) % W;
            EXPECT_NEAR(next.cloud[std::size_t(i) * W + j],
                        st.cloud[std::size_t(i) * W + jsrc], 1e-12);
        }
    }
}

TEST(Advect, GeometricDecayClosedForm) {
    WorldConfig cfg = small_world();
    cfg.cloud_birth_rate = 0.0;
    cfg.cloud_decay_rate = 0.125;
    WorldState st = init_world(cfg, parse_time("2025-05-01T00:00Z"));
    const double c0 = 0.8;
    std::fill(st.cloud.begin(), st.cloud.end(), c0);
    std::fill(st.wind_u.begin(), st.wind_u.end(), 0.0);
    std::fill(st.wind_v.begin(), st.wind_v.end(), 0.0);
    const int steps = 12;
    for (int k = 1; k <= steps; ++k) st = advect_step(st, cfg, 1.0, std::uint64_t(k));
    const double want = c0 * std::pow(1.0 - cfg.cloud_decay_rate, steps);
    for (double v : st.cloud) EXPECT_NEAR(v, want, 1e-6);
}

TEST(Advect, CloudBoundsPreserved) {
    WorldConfig cfg = small_world(42);
    cfg.cloud_birth_rate = 1.0;
    WorldState st = init_world(cfg, parse_time("2025-05-01T00:00Z"));
    for (int k = 1; k <= 20; ++k) {
        st = advect_step(st, cfg, 1.0, std::uint64_t(k));
        for (double v : st.cloud) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
    }
}

TEST(Satellite, ClearSceneDaytime) {
    WorldConfig cfg = small_world();
    WorldState st = init_world(cfg, 0);
    std::fill(st.cloud.begin(), st.cloud.end(), 0.0);
    st.time = parse_time("2025-06-15T04:00Z");  // local midday at 110E
    const RasterStack sat = render_satellite(st, cfg, st.time);
    for (std::size_t k = 0; k < cfg.grid.cells(); ++k) {
        EXPECT_EQ(sat.data[k], 0.0f);                          // VIS
        EXPECT_FLOAT_EQ(sat.data[3 * cfg.grid.cells() + k], 1.0f);  // IR proxy
    }
}

TEST(Satellite, NightVisibleAllZero) {
    WorldConfig cfg = small_world(9);
    WorldState st = init_world(cfg, 0);
    st.time = parse_time("2025-06-15T17:00Z");  // local night at 110E
    const RasterStack sat = render_satellite(st, cfg, st.time);
    for (std::size_t k = 0; k < cfg.grid.cells(); ++k) {
        EXPECT_EQ(sat.data[k], 0.0f);
    }
}

TEST(Satellite, FullCloudDaytimeSaturates) {
    WorldConfig cfg = small_world();
    WorldState st = init_world(cfg, 0);
    std::fill(st.cloud.begin(), st.cloud.end(), 1.0);
    st.time = parse_time("2025-06-15T04:00Z");
    const RasterStack sat = render_satellite(st, cfg, st.time);
    for (std::size_t k = 0; k < cfg.grid.cells(); ++k) {
        EXPECT_FLOAT_EQ(sat.data[k], 1.0f);
    }
}

TEST(Meteo, BlockMeanOfUniformCloud) {
    WorldConfig cfg = small_world();
    cfg.meteo_noise_sigma = 0.0;
    WorldState st = init_world(cfg, 0);
    std::fill(st.cloud.begin(), st.cloud.end(), 0.4);
    const RasterStack m = render_meteo(st, cfg, parse_time("2025-05-01T00:00Z"), 0);
    EXPECT_EQ(m.H(), 8);
    EXPECT_EQ(m.W(), 8);
    const int tcc = m.channel_index("TCC");
    for (float v : m.frame(0, tcc)) EXPECT_NEAR(v, 0.4f, 1e-6f);
}

TEST(Meteo, DeterministicUnderFixedSeed) {
    WorldConfig cfg = small_world(1234);
    WorldState st = init_world(cfg, 0);
    const UtcTime t = parse_time("2025-05-01T06:00Z");
    const RasterStack a = render_meteo(st, cfg, t, 3);
    const RasterStack b = render_meteo(st, cfg, t, 3);
    EXPECT_EQ(a.data, b.data);
}

TEST(GhiTruth, AttenuationLaw) {
    WorldConfig cfg = small_world();
    WorldState st = init_world(cfg, 0);
    const UtcTime t = parse_time("2025-06-15T04:00Z");
    const ClearSkyField cs = clear_sky_grid(cfg.grid, t, cfg.clear_sky_params());

    std::fill(st.cloud.begin(), st.cloud.end(), 0.0);
    RasterStack g0 = render_ghi_truth(st, cfg, t);
    for (std::size_t k = 0; k < cfg.grid.cells(); ++k) {
        EXPECT_FLOAT_EQ(g0.data[k], float(cs.ghi[k]));
    }

    cfg.attenuation_alpha = 1.0;
    std::fill(st.cloud.begin(), st.cloud.end(), 1.0);
    RasterStack g1 = render_ghi_truth(st, cfg, t);
    for (float v : g1.data) EXPECT_EQ(v, 0.0f);

    cfg.attenuation_alpha = 0.8;
    std::fill(st.cloud.begin(), st.cloud.end(), 0.5);
    RasterStack g2 = render_ghi_truth(st, cfg, t);
    for (std::size_t k = 0; k < cfg.grid.cells(); ++k) {
        EXPECT_NEAR(g2.data[k], float(0.6 * cs.ghi[k]), 1e-3f);
    }
}

TEST(GhiTruth, NeverExceedsClearSkyAndZeroAtNight) {
    WorldConfig cfg = small_world(77);
    WorldState st = init_world(cfg, 0);
    for (UtcTime t : {parse_time("2025-06-15T04:00Z"), parse_time("2025-06-15T17:00Z"),
                      parse_time("2025-06-15T23:00Z")}) {
        const ClearSkyField cs = clear_sky_grid(cfg.grid, t, cfg.clear_sky_params());
        const RasterStack g = render_ghi_truth(st, cfg, t);
        for (std::size_t k = 0; k < cfg.grid.cells(); ++k) {
            EXPECT_LE(g.data[k], float(cs.ghi[k]) + 1e-6f);
            if (cs.ghi[k] == 0.0) EXPECT_EQ(g.data[k], 0.0f);
        }
    }
}

TEST(Episode, WindowArithmetic) {
    EXPECT_EQ(window_count(30), 1);
    EXPECT_EQ(window_count(53), 24);
    WorldConfig cfg = small_world();
    EXPECT_THROW(generate_episode(cfg, 0, 29), RangeError);
}

TEST(Episode, DeterministicShards) {
    WorldConfig cfg = small_world(555);
    const UtcTime start = parse_time("2025-04-10T00:00Z");
    const Episode a = generate_episode(cfg, start, 30);
    const Episode b = generate_episode(cfg, start, 30);
    EXPECT_EQ(a.satellite.data, b.satellite.data);
    EXPECT_EQ(a.meteo.data, b.meteo.data);
    EXPECT_EQ(a.tcdc.data, b.tcdc.data);
    EXPECT_EQ(a.ghi.data, b.ghi.data);
}

TEST(Episode, RoundTripThroughShards) {
    WorldConfig cfg = small_world(556);
    const Episode ep = generate_episode(cfg, parse_time("2025-04-10T00:00Z"), 30);
    const std::string dir = std::filesystem::temp_directory_path() / "heliocast_ep_test";
    write_episode(ep, dir);
    const Episode back = read_episode(cfg, dir);
    EXPECT_EQ(back.hours, ep.hours);
    EXPECT_EQ(back.satellite.data, ep.satellite.data);
    EXPECT_EQ(back.meteo.data, ep.meteo.data);
    std::filesystem::remove_all(dir);
}

TEST(Episode, ManifestRoundTrip) {
    const std::string path =
        (std::filesystem::temp_directory_path() / "heliocast_manifest_test.txt").string();
    std::filesystem::remove(path);
    append_manifest_line(path, "shards/ep0", 1735689600, 53, 42);
    append_manifest_line(path, "shards/ep1", 1735776000, 53, 43);
    const auto entries = read_manifest(path);
    ASSERT_EQ(entries.size(), 2u);
    EXPECT_EQ(entries[0].dir, "shards/ep0");
    EXPECT_EQ(entries[1].seed, 43u);
    std::filesystem::remove(path);
}

TEST(World, LeadTimeDecorrelation) {
    // with birth/decay on, correlation between cloud(t) and cloud(t+k) falls
    // with k on average; this is what makes pure extrapolation degrade
    const int kMaxLead = 8, kEpisodes = 100;
    std::vector<double> mean_corr(kMaxLead + 1, 0.0);
    for (int e = 0; e < kEpisodes; ++e) {
        WorldConfig cfg = small_world(1000 + std::uint64_t(e));
        WorldState st = init_world(cfg, parse_time("2025-03-01T00:00Z"));
        const std::vector<double> base = st.cloud;
        for (int k = 1; k <= kMaxLead; ++k) {
            st = advect_step(st, cfg, 1.0, std::uint64_t(k));
            mean_corr[k] += pearson(base, st.cloud);
        }
    }
    for (int k = 1; k <= kMaxLead; ++k) mean_corr[k] /= kEpisodes;
    for (int k = 2; k <= kMaxLead; ++k) {
        EXPECT_LT(mean_corr[k], mean_corr[k - 1] + 1e-3)
            << "correlation should decay with lead, lead " << k;
    }
    EXPECT_LT(mean_corr[kMaxLead], mean_corr[1] - 0.05);
}
