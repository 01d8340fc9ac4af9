#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "heliocast/errors.hpp"
#include "heliocast/raster.hpp"

namespace heliocast {

inline constexpr double kStdFloor = 1e-6;

/// Per-channel standardization statistics, fit on the training split.
struct NormStats {
    std::vector<std::string> channels;
    std::vector<double> mean;
    std::vector<double> stddev;  // floored at kStdFloor

    int channel_index(const std::string& name) const {
        for (std::size_t c = 0; c < channels.size(); ++c) {
            if (channels[c] == name) return int(c);
        }
        return -1;
    }
};

/// Population mean/stddev per channel over all times and cells; missing
/// values are excluded. An all-missing channel is a StatsError.
inline NormStats fit_norm_stats(const RasterStack& stack) {
    NormStats st;
    st.channels = stack.channels;
    st.mean.resize(stack.C());
    st.stddev.resize(stack.C());
    for (int c = 0; c < stack.C(); ++c) {
        double sum = 0.0, sum2 = 0.0;
        std::size_t n = 0;
        for (int t = 0; t < stack.T(); ++t) {
            for (float v : stack.frame(t, c)) {
                if (is_missing(v)) continue;
                sum += v;
                sum2 += double(v) * v;
                ++n;
            }
        }
        if (n == 0) {
            throw StatsError("channel '" + stack.channels[c] + "' has no valid samples");
        }
        const double m = sum / double(n);
        const double var = std::max(0.0, sum2 / double(n) - m * m);
        st.mean[c] = m;
        st.stddev[c] = std::max(std::sqrt(var), kStdFloor);
    }
    return st;
}

/// (x - mean) / std per channel; channels are matched by name.
inline RasterStack apply_norm(const RasterStack& stack, const NormStats& st) {
    RasterStack out = stack;
    for (int c = 0; c < stack.C(); ++c) {
        const int k = st.channel_index(stack.channels[c]);
        if (k < 0) throw UsageError("no stats for channel '" + stack.channels[c] + "'");
        const float m = float(st.mean[k]);
        const float inv = float(1.0 / st.stddev[k]);
        for (int t = 0; t < stack.T(); ++t) {
            for (float& v : out.frame(t, c)) {
                if (!is_missing(v)) v = (v - m) * inv;
            }
        }
    }
    return out;
}

/// Inverse of apply_norm.
inline RasterStack invert_norm(const RasterStack& stack, const NormStats& st) {
    RasterStack out = stack;
    for (int c = 0; c < stack.C(); ++c) {
        const int k = st.channel_index(stack.channels[c]);
        if (k < 0) throw UsageError("no stats for channel '" + stack.channels[c] + "'");
        const float m = float(st.mean[k]);
        const float s = float(st.stddev[k]);
        for (int t = 0; t < stack.T(); ++t) {
            for (float& v : out.frame(t, c)) {
                if (!is_missing(v)) v = v * s + m;
            }
        }
    }
    return out;
}

}  // namespace heliocast
