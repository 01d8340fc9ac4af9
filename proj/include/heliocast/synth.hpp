#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "heliocast/bgsr.hpp"
#include "heliocast/clearsky.hpp"
#include "heliocast/errors.hpp"
#include "heliocast/grid.hpp"
#include "heliocast/raster.hpp"
#include "heliocast/regrid.hpp"
#include "heliocast/rng.hpp"

namespace heliocast {

// Synthetic cloud-advection world: the fully observable oracle used for
// training, ablations and acceptance runs. Pseudo-satellite frames, coarse
// meteorological analyses, TCDC and GHI truth all derive from one cloud
// field, so every forecast can be scored against exact ground truth.

struct WorldConfig {
    GeoGrid grid = GeoGrid(34.0, 110.0, 0.05, 0.05, 64, 64);
    int coarse_factor = 4;
    int horizon_hours = 24;
    std::uint64_t seed = 1;
    double wind_scale = 0.08;        // degrees/hour, typical advection speed
    double cloud_birth_rate = 0.35;  // per-hour probability of a birth event
    double cloud_decay_rate = 0.04;  // per-hour exponential decay
    double attenuation_alpha = 0.75;
    double meteo_noise_sigma = 0.02;
    int birth_blobs_per_event = 3;
    int extra_meteo_channels = 0;  // appended noise channels, exercise larger C1
    bool periodic = false;         // wrap advection (test mode)
    double linke_turbidity = 3.0;
    // Kasten-Young air mass for the world's radiative truth: the printed
    // secant form explodes in the twilight ring and would inject unbounded
    // values into training targets.
    AirMassModel air_mass_model = AirMassModel::KastenYoung;

    void validate() const {
        if (grid.height % coarse_factor != 0 || grid.width % coarse_factor != 0) {
            throw ParamError("coarse_factor must divide the grid dimensions");
        }
        if (attenuation_alpha < 0.0 || attenuation_alpha > 1.0) {
            throw ParamError("attenuation alpha must be in [0, 1]");
        }
        if (cloud_birth_rate < 0.0 || cloud_birth_rate > 1.0 || cloud_decay_rate < 0.0 ||
            cloud_decay_rate > 1.0) {
            throw ParamError("birth/decay rates must be in [0, 1]");
        }
    }

    ClearSkyParams clear_sky_params() const {
        ClearSkyParams p;
        p.linke_turbidity = linke_turbidity;
        p.air_mass_model = air_mass_model;
        return p;
    }
};

struct WorldState {
    std::vector<double> cloud;   // optical-depth proxy in [0, 1], fine grid
    std::vector<double> wind_u;  // eastward, degrees/hour
    std::vector<double> wind_v;  // northward, degrees/hour
    UtcTime time = 0;
};

namespace detail {

/// Smooth random field: mean plus a few large-scale sinusoidal modes.
inline std::vector<double> smooth_field(const GeoGrid& g, Rng& rng, double mean,
                                        double amplitude) {
    std::vector<double> f(g.cells(), mean);
    const int modes = 3;
    for (int m = 0; m < modes; ++m) {
        const double kx = rng.uniform(0.5, 2.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
        const double ky = rng.uniform(0.5, 2.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
        const double phase = rng.uniform(0.0, 2.0 * kPi);
        const double amp = amplitude * rng.uniform(0.3, 1.0) / modes * 2.0;
        for (int i = 0; i < g.height; ++i) {
            for (int j = 0; j < g.width; ++j) {
                const double x = double(j) / g.width, y = double(i) / g.height;
                f[std::size_t(i) * g.width + j] +=
                    amp * std::sin(2.0 * kPi * (kx * x + ky * y) + phase);
            }
        }
    }
    return f;
}

inline void add_blob(std::vector<double>& cloud, const GeoGrid& g, double ci, double cj,
                     double radius_cells, double amplitude) {
    const double r2 = radius_cells * radius_cells;
    for (int i = 0; i < g.height; ++i) {
        for (int j = 0; j < g.width; ++j) {
            const double di = i - ci, dj = j - cj;
            const double w = std::exp(-(di * di + dj * dj) / (2.0 * r2));
            double& v = cloud[std::size_t(i) * g.width + j];
            v = std::min(1.0, v + amplitude * w);
        }
    }
}

/// Bilinear sample with clamped (or periodic) boundary, grid-index space.
inline double sample_bilinear(const std::vector<double>& f, const GeoGrid& g, double fi,
                              double fj, bool periodic) {
    const int H = g.height, W = g.width;
    if (periodic) {
        fi = std::fmod(fi, double(H));
        if (fi < 0) fi += H;
        fj = std::fmod(fj, double(W));
        if (fj < 0) fj += W;
        const int i0 = int(fi) % H, j0 = int(fj) % W;
        const int i1 = (i0 + 1) % H, j1 = (j0 + 1) % W;
        const double fy = fi - std::floor(fi), fx = fj - std::floor(fj);
        return (1 - fy) * ((1 - fx) * f[std::size_t(i0) * W + j0] +
                           fx * f[std::size_t(i0) * W + j1]) +
               fy * ((1 - fx) * f[std::size_t(i1) * W + j0] +
                     fx * f[std::size_t(i1) * W + j1]);
    }
    fi = std::clamp(fi, 0.0, double(H - 1));
    fj = std::clamp(fj, 0.0, double(W - 1));
    const int i0 = std::min(int(fi), H > 1 ? H - 2 : 0);
    const int j0 = std::min(int(fj), W > 1 ? W - 2 : 0);
    const double fy = H > 1 ? fi - i0 : 0.0, fx = W > 1 ? fj - j0 : 0.0;
    const int i1 = H > 1 ? i0 + 1 : i0, j1 = W > 1 ? j0 + 1 : j0;
    return (1 - fy) * ((1 - fx) * f[std::size_t(i0) * W + j0] +
                       fx * f[std::size_t(i0) * W + j1]) +
           fy * ((1 - fx) * f[std::size_t(i1) * W + j0] + fx * f[std::size_t(i1) * W + j1]);
}

}  // namespace detail

/// Fresh world state at `start`; cloud cover, winds and phases all derive
/// from the config seed.
inline WorldState init_world(const WorldConfig& cfg, UtcTime start) {
    cfg.validate();
    Rng rng(derive_seed(cfg.seed, "world-init"));
    WorldState st;
    st.time = start;
    st.cloud = detail::smooth_field(cfg.grid, rng, 0.35, 0.45);
    for (double& v : st.cloud) v = std::clamp(v, 0.0, 1.0);
    st.wind_u = detail::smooth_field(cfg.grid, rng, cfg.wind_scale * 0.6, cfg.wind_scale);
    st.wind_v = detail::smooth_field(cfg.grid, rng, 0.0, cfg.wind_scale * 0.7);
    return st;
}

/// Semi-Lagrangian advection step plus stochastic birth and exponential
/// decay. `step_index` seeds the stochastic part so episodes replay exactly.
inline WorldState advect_step(const WorldState& state, const WorldConfig& cfg, double dt_hours,
                              std::uint64_t step_index) {
    cfg.validate();
    const GeoGrid& g = cfg.grid;
    WorldState next;
    next.time = state.time + UtcTime(std::llround(dt_hours * 3600.0));
    next.wind_u = state.wind_u;
    next.wind_v = state.wind_v;
    next.cloud.resize(g.cells());

    // backtrace departure points in grid-index units
    for (int i = 0; i < g.height; ++i) {
        for (int j = 0; j < g.width; ++j) {
            const std::size_t k = std::size_t(i) * g.width + j;
            const double di = state.wind_v[k] * dt_hours / g.dlat;  // north -> smaller i
            const double dj = state.wind_u[k] * dt_hours / g.dlon;
            next.cloud[k] =
                detail::sample_bilinear(state.cloud, g, double(i) + di, double(j) - dj,
                                        cfg.periodic);
        }
    }

    Rng rng(derive_seed(cfg.seed, "world-step", step_index));
    if (rng.uniform() < cfg.cloud_birth_rate * dt_hours) {
        for (int b = 0; b < cfg.birth_blobs_per_event; ++b) {
            detail::add_blob(next.cloud, g, rng.uniform(0.0, g.height - 1.0),
                             rng.uniform(0.0, g.width - 1.0),
                             rng.uniform(2.0, 0.12 * std::max(g.height, g.width) + 2.0),
                             rng.uniform(0.25, 0.85));
        }
    }
    const double keep = std::pow(1.0 - cfg.cloud_decay_rate, dt_hours);
    for (double& v : next.cloud) v = std::clamp(v * keep, 0.0, 1.0);

    // winds drift slowly so the flow is not frozen
    Rng wrng(derive_seed(cfg.seed, "wind-drift", step_index));
    const double du = wrng.normal(0.0, 0.02 * cfg.wind_scale);
    const double dv = wrng.normal(0.0, 0.02 * cfg.wind_scale);
    for (double& v : next.wind_u) v += du;
    for (double& v : next.wind_v) v += dv;
    return next;
}

/// Four pseudo-bands: visible reflectance (cloud under daylight), two
/// water-vapor proxies (blurred cloud at two radii), thermal window
/// (1 - cloud). Deterministic given state and timestamp.
inline RasterStack render_satellite(const WorldState& state, const WorldConfig& cfg,
                                    UtcTime timestamp) {
    const GeoGrid& g = cfg.grid;
    RasterStack out(g, {timestamp}, {"VIS", "WV1", "WV2", "IR"});

    // daylight mask from solar geometry
    std::vector<float> daylight(g.cells());
    {
        const SunEphemeris eph = sun_ephemeris(timestamp);
        const double sd = std::sin(eph.declination_rad), cd = std::cos(eph.declination_rad);
        const double base = minutes_of_day(timestamp) + eph.eq_time_minutes;
        for (int i = 0; i < g.height; ++i) {
            const double lat = g.lat(i) * kDegToRad;
            const double a = std::sin(lat) * sd, b = std::cos(lat) * cd;
            for (int j = 0; j < g.width; ++j) {
                const double ha =
                    detail::hour_angle_deg(base + 4.0 * detail::normalize_lon(g.lon(j))) *
                    kDegToRad;
                daylight[std::size_t(i) * g.width + j] =
                    (a + b * std::cos(ha)) > kCosZenithNightEps ? 1.0f : 0.0f;
            }
        }
    }

    auto box_blur = [&](const std::vector<double>& src, int radius) {
        std::vector<double> tmp(src.size()), dst(src.size());
        const int H = g.height, W = g.width;
        for (int i = 0; i < H; ++i) {
            for (int j = 0; j < W; ++j) {
                double acc = 0.0;
                int n = 0;
                for (int d = -radius; d <= radius; ++d) {
                    const int jj = std::clamp(j + d, 0, W - 1);
                    acc += src[std::size_t(i) * W + jj];
                    ++n;
                }
                tmp[std::size_t(i) * W + j] = acc / n;
            }
        }
        for (int i = 0; i < H; ++i) {
            for (int j = 0; j < W; ++j) {
                double acc = 0.0;
                int n = 0;
                for (int d = -radius; d <= radius; ++d) {
                    const int ii = std::clamp(i + d, 0, H - 1);
                    acc += tmp[std::size_t(ii) * W + j];
                    ++n;
                }
                dst[std::size_t(i) * W + j] = acc / n;
            }
        }
        return dst;
    };
    const std::vector<double> wv1 = box_blur(state.cloud, 1);
    const std::vector<double> wv2 = box_blur(state.cloud, 3);

    for (std::size_t k = 0; k < g.cells(); ++k) {
        out.data[k] = float(state.cloud[k]) * daylight[k];                  // VIS
        out.data[g.cells() + k] = float(wv1[k]);                           // WV1
        out.data[2 * g.cells() + k] = float(wv2[k]);                       // WV2
        out.data[3 * g.cells() + k] = float(1.0 - state.cloud[k]);         // IR
    }
    return out;
}

inline std::vector<std::string> meteo_channel_names(const WorldConfig& cfg) {
    std::vector<std::string> names = {"TCC", "U", "V"};
    for (int e = 0; e < cfg.extra_meteo_channels; ++e) {
        names.push_back("X" + std::to_string(e + 1));
    }
    return names;
}

/// Coarse analysis emulation: block means of cloud and winds plus seeded
/// Gaussian observation noise.
inline RasterStack render_meteo(const WorldState& state, const WorldConfig& cfg,
                                UtcTime timestamp, std::uint64_t frame_index) {
    cfg.validate();
    const GeoGrid& g = cfg.grid;
    RasterStack fine(g, {timestamp}, meteo_channel_names(cfg));
    const std::size_t cells = g.cells();
    for (std::size_t k = 0; k < cells; ++k) {
        fine.data[k] = float(state.cloud[k]);
        fine.data[cells + k] = float(state.wind_u[k]);
        fine.data[2 * cells + k] = float(state.wind_v[k]);
    }
    Rng xrng(derive_seed(cfg.seed, "meteo-extra", frame_index));
    for (int e = 0; e < cfg.extra_meteo_channels; ++e) {
        for (std::size_t k = 0; k < cells; ++k) {
            fine.data[(3 + e) * cells + k] = float(xrng.normal(0.0, 1.0));
        }
    }

    RasterStack coarse = block_average(fine, cfg.coarse_factor);
    if (cfg.meteo_noise_sigma > 0.0) {
        Rng nrng(derive_seed(cfg.seed, "meteo-noise", frame_index));
        for (float& v : coarse.data) v += float(nrng.normal(0.0, cfg.meteo_noise_sigma));
    }
    return coarse;
}

/// GHI truth: clear-sky irradiance attenuated by the cloud field.
inline RasterStack render_ghi_truth(const WorldState& state, const WorldConfig& cfg,
                                    UtcTime timestamp) {
    const GeoGrid& g = cfg.grid;
    const ClearSkyField cs = clear_sky_grid(g, timestamp, cfg.clear_sky_params());
    RasterStack out(g, {timestamp}, {"GHI"});
    for (std::size_t k = 0; k < g.cells(); ++k) {
        out.data[k] = float(cs.ghi[k] * (1.0 - cfg.attenuation_alpha * state.cloud[k]));
    }
    return out;
}

/// One generated episode: aligned hourly stacks for satellite, coarse meteo,
/// TCDC truth and GHI truth.
struct Episode {
    WorldConfig config;
    UtcTime start = 0;
    int hours = 0;
    RasterStack satellite;  // fine, 4 channels
    RasterStack meteo;      // coarse, C1 channels
    RasterStack tcdc;       // fine, 1 channel
    RasterStack ghi;        // fine, 1 channel
};

/// Minimum hours so one stage-1 window (6 past frames + 24 future targets)
/// can be cut from the episode.
inline constexpr int kMinEpisodeHours = 30;
inline constexpr int kSatWindow = 6;
inline constexpr int kLeadHours = 24;

inline int window_count(int hours) { return hours - (kSatWindow + kLeadHours) + 1; }

inline Episode generate_episode(const WorldConfig& cfg, UtcTime start, int hours) {
    cfg.validate();
    if (hours < kMinEpisodeHours) {
        throw RangeError("episode needs at least " + std::to_string(kMinEpisodeHours) +
                         " hours, got " + std::to_string(hours));
    }
    Episode ep;
    ep.config = cfg;
    ep.start = start;
    ep.hours = hours;

    std::vector<std::int64_t> times(hours);
    for (int h = 0; h < hours; ++h) times[h] = start + h * kSecondsPerHour;

    ep.satellite = RasterStack(cfg.grid, times, {"VIS", "WV1", "WV2", "IR"});
    ep.tcdc = RasterStack(cfg.grid, times, {"TCDC"});
    ep.ghi = RasterStack(cfg.grid, times, {"GHI"});

    WorldState st = init_world(cfg, start);
    std::vector<RasterStack> meteo_frames;
    meteo_frames.reserve(hours);
    for (int h = 0; h < hours; ++h) {
        if (h > 0) st = advect_step(st, cfg, 1.0, std::uint64_t(h));
        const UtcTime t = times[h];
        const RasterStack sat = render_satellite(st, cfg, t);
        const RasterStack ghi = render_ghi_truth(st, cfg, t);
        std::copy(sat.data.begin(), sat.data.end(),
                  ep.satellite.data.begin() + std::size_t(h) * 4 * cfg.grid.cells());
        for (std::size_t k = 0; k < cfg.grid.cells(); ++k) {
            ep.tcdc.data[std::size_t(h) * cfg.grid.cells() + k] = float(st.cloud[k]);
        }
        std::copy(ghi.data.begin(), ghi.data.end(),
                  ep.ghi.data.begin() + std::size_t(h) * cfg.grid.cells());
        meteo_frames.push_back(render_meteo(st, cfg, t, std::uint64_t(h)));
    }
    ep.meteo = RasterStack(meteo_frames[0].grid, times, meteo_frames[0].channels);
    const std::size_t frame_floats = std::size_t(ep.meteo.C()) * meteo_frames[0].grid.cells();
    for (int h = 0; h < hours; ++h) {
        std::copy(meteo_frames[h].data.begin(), meteo_frames[h].data.end(),
                  ep.meteo.data.begin() + std::size_t(h) * frame_floats);
    }
    return ep;
}

/// Writes an episode as BGSR shards plus one manifest line per shard set.
inline void write_episode(const Episode& ep, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    write_raster_file(ep.satellite, dir + "/satellite.bgsr");
    write_raster_file(ep.meteo, dir + "/meteo.bgsr");
    write_raster_file(ep.tcdc, dir + "/tcdc.bgsr");
    write_raster_file(ep.ghi, dir + "/ghi.bgsr");
}

inline Episode read_episode(const WorldConfig& cfg, const std::string& dir) {
    Episode ep;
    ep.config = cfg;
    ep.satellite = read_raster_file(dir + "/satellite.bgsr");
    ep.meteo = read_raster_file(dir + "/meteo.bgsr");
    ep.tcdc = read_raster_file(dir + "/tcdc.bgsr");
    ep.ghi = read_raster_file(dir + "/ghi.bgsr");
    ep.start = ep.satellite.times.front();
    ep.hours = ep.satellite.T();
    return ep;
}

inline void append_manifest_line(const std::string& manifest_path, const std::string& shard_dir,
                                 UtcTime start, int hours, std::uint64_t seed) {
    std::ofstream out(manifest_path, std::ios::app);
    if (!out) throw IoError("cannot open manifest: " + manifest_path);
    out << shard_dir << ' ' << start << ' ' << hours << ' ' << seed << '\n';
}

struct ManifestEntry {
    std::string dir;
    UtcTime start;
    int hours;
    std::uint64_t seed;
};

inline std::vector<ManifestEntry> read_manifest(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw IoError("cannot open manifest: " + manifest_path);
    std::vector<ManifestEntry> entries;
    ManifestEntry e;
    while (in >> e.dir >> e.start >> e.hours >> e.seed) entries.push_back(e);
    return entries;
}

}  // namespace heliocast
