#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "heliocast/errors.hpp"
#include "heliocast/raster.hpp"

namespace heliocast {

/// Bilinear interpolation of every frame onto a target grid. Cell-center
/// convention; target centers outside the source center box clamp to the
/// border cell. Coverage requires at least partial overlap of the center
/// boxes.
inline RasterStack bilinear_regrid(const RasterStack& src, const GeoGrid& target) {
    const GeoGrid& sg = src.grid;
    const double src_lat_lo = sg.lat(sg.height - 1), src_lat_hi = sg.lat0;
    const double src_lon_lo = sg.lon0, src_lon_hi = sg.lon(sg.width - 1);
    const double tgt_lat_lo = target.lat(target.height - 1), tgt_lat_hi = target.lat0;
    const double tgt_lon_lo = target.lon0, tgt_lon_hi = target.lon(target.width - 1);
    if (tgt_lat_lo > src_lat_hi || tgt_lat_hi < src_lat_lo || tgt_lon_lo > src_lon_hi ||
        tgt_lon_hi < src_lon_lo) {
        throw CoverageError("regrid target does not overlap source extent");
    }

    RasterStack out(target, src.times, src.channels);
    const int SH = sg.height, SW = sg.width;

    // fractional source coordinates of each target row/column, clamped
    std::vector<double> row_f(target.height), col_f(target.width);
    for (int i = 0; i < target.height; ++i) {
        row_f[i] = std::clamp((sg.lat0 - target.lat(i)) / sg.dlat, 0.0, double(SH - 1));
    }
    for (int j = 0; j < target.width; ++j) {
        col_f[j] = std::clamp((target.lon(j) - sg.lon0) / sg.dlon, 0.0, double(SW - 1));
    }

    for (int t = 0; t < src.T(); ++t) {
        for (int c = 0; c < src.C(); ++c) {
            auto in = src.frame(t, c);
            auto dst = out.frame(t, c);
            for (int i = 0; i < target.height; ++i) {
                const int i0 = std::min(int(row_f[i]), SH > 1 ? SH - 2 : 0);
                const double fy = SH > 1 ? row_f[i] - i0 : 0.0;
                for (int j = 0; j < target.width; ++j) {
                    const int j0 = std::min(int(col_f[j]), SW > 1 ? SW - 2 : 0);
                    const double fx = SW > 1 ? col_f[j] - j0 : 0.0;
                    const int i1 = SH > 1 ? i0 + 1 : i0;
                    const int j1 = SW > 1 ? j0 + 1 : j0;
                    const double v00 = in[std::size_t(i0) * SW + j0];
                    const double v01 = in[std::size_t(i0) * SW + j1];
                    const double v10 = in[std::size_t(i1) * SW + j0];
                    const double v11 = in[std::size_t(i1) * SW + j1];
                    dst[std::size_t(i) * target.width + j] =
                        float((1.0 - fy) * ((1.0 - fx) * v00 + fx * v01) +
                              fy * ((1.0 - fx) * v10 + fx * v11));
                }
            }
        }
    }
    return out;
}

/// Block mean over factor x factor cells (grid sides must divide evenly).
/// Used to emulate a coarse analysis from a fine field.
inline RasterStack block_average(const RasterStack& src, int factor) {
    if (factor < 1) throw ParamError("block_average factor must be >= 1");
    if (src.H() % factor != 0 || src.W() % factor != 0) {
        throw ShapeError("block_average factor must divide grid dimensions");
    }
    const int CH = src.H() / factor, CW = src.W() / factor;
    GeoGrid coarse(src.grid.lat0 - (factor - 1) * 0.5 * src.grid.dlat,
                   src.grid.lon0 + (factor - 1) * 0.5 * src.grid.dlon,
                   src.grid.dlat * factor, src.grid.dlon * factor, CH, CW);
    RasterStack out(coarse, src.times, src.channels);
    const double inv = 1.0 / (double(factor) * factor);
    for (int t = 0; t < src.T(); ++t) {
        for (int c = 0; c < src.C(); ++c) {
            auto in = src.frame(t, c);
            auto dst = out.frame(t, c);
            for (int bi = 0; bi < CH; ++bi) {
                for (int bj = 0; bj < CW; ++bj) {
                    double acc = 0.0;
                    for (int di = 0; di < factor; ++di) {
                        const std::size_t base = std::size_t(bi * factor + di) * src.W();
                        for (int dj = 0; dj < factor; ++dj) {
                            acc += in[base + bj * factor + dj];
                        }
                    }
                    dst[std::size_t(bi) * CW + bj] = float(acc * inv);
                }
            }
        }
    }
    return out;
}

namespace detail {

struct LatLonBox {
    double lat_lo, lat_hi, lon_lo, lon_hi;
};

inline LatLonBox center_box(const GeoGrid& g) {
    return {g.lat(g.height - 1), g.lat0, g.lon0, g.lon(g.width - 1)};
}

}  // namespace detail

/// Crops every stack to the largest lat/lon box common to all of them
/// (cell-center convention; cells whose centers fall inside the box are
/// kept). Throws CoverageError when the intersection is empty.
inline std::vector<RasterStack> crop_to_intersection(const std::vector<RasterStack>& stacks) {
    if (stacks.empty()) return {};
    detail::LatLonBox box = detail::center_box(stacks[0].grid);
    for (std::size_t k = 1; k < stacks.size(); ++k) {
        const auto b = detail::center_box(stacks[k].grid);
        box.lat_lo = std::max(box.lat_lo, b.lat_lo);
        box.lat_hi = std::min(box.lat_hi, b.lat_hi);
        box.lon_lo = std::max(box.lon_lo, b.lon_lo);
        box.lon_hi = std::min(box.lon_hi, b.lon_hi);
    }
    if (box.lat_lo > box.lat_hi + 1e-9 || box.lon_lo > box.lon_hi + 1e-9) {
        throw CoverageError("stacks have no common spatial intersection");
    }

    constexpr double kTol = 1e-6;
    std::vector<RasterStack> out;
    out.reserve(stacks.size());
    for (const auto& s : stacks) {
        const GeoGrid& g = s.grid;
        // first/last row whose center lies inside the box
        const int i_first = std::max(0, int(std::ceil((g.lat0 - box.lat_hi) / g.dlat - kTol)));
        const int i_last =
            std::min(g.height - 1, int(std::floor((g.lat0 - box.lat_lo) / g.dlat + kTol)));
        const int j_first = std::max(0, int(std::ceil((box.lon_lo - g.lon0) / g.dlon - kTol)));
        const int j_last =
            std::min(g.width - 1, int(std::floor((box.lon_hi - g.lon0) / g.dlon + kTol)));
        if (i_first > i_last || j_first > j_last) {
            throw CoverageError("intersection holds no cell centers for " + g.describe());
        }
        GeoGrid cg(g.lat(i_first), g.lon(j_first), g.dlat, g.dlon, i_last - i_first + 1,
                   j_last - j_first + 1);
        RasterStack cropped(cg, s.times, s.channels);
        for (int t = 0; t < s.T(); ++t) {
            for (int c = 0; c < s.C(); ++c) {
                auto in = s.frame(t, c);
                auto dst = cropped.frame(t, c);
                for (int i = 0; i < cg.height; ++i) {
                    const float* srow = in.data() + std::size_t(i + i_first) * g.width + j_first;
                    std::copy(srow, srow + cg.width, dst.data() + std::size_t(i) * cg.width);
                }
            }
        }
        out.push_back(std::move(cropped));
    }
    return out;
}

}  // namespace heliocast
