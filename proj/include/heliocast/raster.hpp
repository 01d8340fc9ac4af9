#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "heliocast/errors.hpp"
#include "heliocast/grid.hpp"
#include "heliocast/time.hpp"

namespace heliocast {

/// Missing values are quiet NaN in memory and -9999.0 in BGSR payloads.
inline constexpr float kMissingEncoded = -9999.0f;

inline float missing_value() { return std::numeric_limits<float>::quiet_NaN(); }
inline bool is_missing(float v) { return std::isnan(v); }

/// time x channel x row x col field container. Values are conceptually
/// immutable once a stack is populated; operations return new stacks.
struct RasterStack {
    GeoGrid grid;
    std::vector<std::int64_t> times;    // epoch seconds, uniform step
    std::vector<std::string> channels;  // names, <= 16 ASCII bytes each
    std::vector<float> data;            // [t][c][h][w]

    RasterStack() = default;
    RasterStack(GeoGrid g, std::vector<std::int64_t> ts, std::vector<std::string> chans)
        : grid(g), times(std::move(ts)), channels(std::move(chans)) {
        validate_axes();
        data.assign(std::size_t(T()) * C() * grid.cells(), 0.0f);
    }

    int T() const { return int(times.size()); }
    int C() const { return int(channels.size()); }
    int H() const { return grid.height; }
    int W() const { return grid.width; }

    void validate_axes() const {
        if (times.empty()) throw ShapeError("raster stack needs at least one time");
        if (channels.empty()) throw ShapeError("raster stack needs at least one channel");
        if (times.size() > 1) {
            const std::int64_t step = times[1] - times[0];
            if (step <= 0) throw ParamError("time axis must be strictly increasing");
            for (std::size_t i = 2; i < times.size(); ++i) {
                if (times[i] - times[i - 1] != step) {
                    throw ParamError("time axis must have a uniform step");
                }
            }
        }
        for (const auto& name : channels) {
            if (name.empty() || name.size() > 16) {
                throw ParamError("channel name must be 1..16 bytes: '" + name + "'");
            }
        }
    }

    std::int64_t step_seconds() const {
        return times.size() > 1 ? times[1] - times[0] : kSecondsPerHour;
    }

    std::size_t index(int t, int c, int i, int j) const {
        return ((std::size_t(t) * C() + c) * H() + i) * W() + j;
    }
    float at(int t, int c, int i, int j) const { return data[index(t, c, i, j)]; }
    float& at(int t, int c, int i, int j) { return data[index(t, c, i, j)]; }

    std::span<const float> frame(int t, int c) const {
        return {data.data() + index(t, c, 0, 0), grid.cells()};
    }
    std::span<float> frame(int t, int c) {
        return {data.data() + index(t, c, 0, 0), grid.cells()};
    }

    int channel_index(std::string_view name) const {
        for (int c = 0; c < C(); ++c) {
            if (channels[c] == name) return c;
        }
        return -1;
    }

    int time_index(std::int64_t t) const {
        if (times.empty() || t < times.front() || t > times.back()) return -1;
        const std::int64_t step = step_seconds();
        if ((t - times.front()) % step != 0) return -1;
        return int((t - times.front()) / step);
    }

    /// New stack restricted to the named channels, order preserved.
    RasterStack select_channels(const std::vector<std::string>& names) const {
        RasterStack out(grid, times, names);
        for (std::size_t k = 0; k < names.size(); ++k) {
            const int c = channel_index(names[k]);
            if (c < 0) throw UsageError("unknown channel: '" + names[k] + "'");
            for (int t = 0; t < T(); ++t) {
                auto src = frame(t, c);
                auto dst = out.frame(t, int(k));
                std::copy(src.begin(), src.end(), dst.begin());
            }
        }
        return out;
    }
};

/// SSRD hourly accumulation (J m^-2) to mean GHI (W m^-2).
inline double ssrd_to_ghi(double ssrd_j_per_m2) {
    return (ssrd_j_per_m2 < 0.0 ? 0.0 : ssrd_j_per_m2) / 3600.0;
}

/// Stack-wide conversion; counts negative inputs clipped to zero.
inline RasterStack ssrd_to_ghi(const RasterStack& ssrd, std::size_t* clipped = nullptr) {
    RasterStack out = ssrd;
    std::size_t clips = 0;
    for (float& v : out.data) {
        if (is_missing(v)) continue;
        if (v < 0.0f) {
            v = 0.0f;
            ++clips;
        }
        v = float(double(v) / 3600.0);
    }
    if (clipped) *clipped = clips;
    return out;
}

enum class ChannelKind { SatelliteBand, SingleLevel, PressureLevel };

struct ChannelSchema {
    std::string name;
    ChannelKind kind = ChannelKind::SingleLevel;
    int level_hpa = 0;  // pressure-level channels only
};

inline constexpr int kPressureLevels[7] = {50, 250, 500, 600, 700, 850, 925};

/// Stage-1 meteorological schema at production scale: 6 single-level
/// variables plus 5 atmospheric variables on 7 pressure levels. The full
/// table is 41 channels; the model contract is 39, so two geopotential
/// levels are dropped. Which two is a configuration choice
/// (schema.drop_z_levels, default "50,925").
inline std::vector<ChannelSchema> stage1_meteo_schema(
    const std::vector<int>& drop_z_levels = {50, 925}) {
    std::vector<ChannelSchema> out;
    for (const char* name : {"LCC", "TCC", "TCW", "TCWV", "FDIR", "SSRD"}) {
        out.push_back({name, ChannelKind::SingleLevel, 0});
    }
    for (const char* var : {"U", "V", "T", "Q", "Z"}) {
        for (int lvl : kPressureLevels) {
            if (std::string_view(var) == "Z") {
                bool dropped = false;
                for (int d : drop_z_levels) {
                    if (d == lvl) dropped = true;
                }
                if (dropped) continue;
            }
            out.push_back({std::string(var) + std::to_string(lvl), ChannelKind::PressureLevel,
                           lvl});
        }
    }
    return out;
}

/// Stage-2 radiation-relevant subset: TCW, TCWV, FDIR, SSRD plus specific
/// humidity on all 7 levels (11 channels).
inline std::vector<ChannelSchema> stage2_meteo_schema() {
    std::vector<ChannelSchema> out;
    for (const char* name : {"TCW", "TCWV", "FDIR", "SSRD"}) {
        out.push_back({name, ChannelKind::SingleLevel, 0});
    }
    for (int lvl : kPressureLevels) {
        out.push_back({"Q" + std::to_string(lvl), ChannelKind::PressureLevel, lvl});
    }
    return out;
}

}  // namespace heliocast
