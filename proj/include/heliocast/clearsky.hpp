#pragma once

#include <cmath>
#include <thread>
#include <vector>

#include "heliocast/errors.hpp"
#include "heliocast/fastmath.hpp"
#include "heliocast/grid.hpp"
#include "heliocast/simd.hpp"
#include "heliocast/solar.hpp"
#include "heliocast/time.hpp"

namespace heliocast {

/// Exponent arguments below this are flushed to a zero result; the true value
/// would be < 1e-300 of the prefactor and subnormal rounding would otherwise
/// dominate the scalar-vs-grid comparison.
inline constexpr double kGhiExpFlushArg = -700.0;

struct ClearSkyParams {
    double elevation_m = 0.0;
    std::vector<double> elevation_raster;  // optional, H*W; empty = uniform
    double linke_turbidity = 3.0;
    std::vector<double> turbidity_raster;  // optional, H*W; empty = uniform
    AirMassModel air_mass_model = AirMassModel::SecantAsPrinted;

    void validate(std::size_t cells = 0) const {
        if (!(linke_turbidity >= 1.0)) {
            throw ParamError("Linke turbidity must be >= 1");
        }
        for (double tl : turbidity_raster) {
            if (!(tl >= 1.0)) throw ParamError("Linke turbidity raster has entries < 1");
        }
        if (!std::isfinite(elevation_m)) throw ParamError("elevation must be finite");
        for (double h : elevation_raster) {
            if (!std::isfinite(h)) throw ParamError("elevation raster has non-finite entries");
        }
        if (cells != 0) {
            if (!elevation_raster.empty() && elevation_raster.size() != cells) {
                throw ShapeError("elevation raster does not match grid cell count");
            }
            if (!turbidity_raster.empty() && turbidity_raster.size() != cells) {
                throw ShapeError("turbidity raster does not match grid cell count");
            }
        }
    }
};

struct ClearSkyField {
    GeoGrid grid;
    double i0 = 0.0;                      // extraterrestrial irradiance for the instant
    std::vector<double> ghi;              // H*W, W m^-2
    std::vector<ElevationCoeffs> coeffs;  // size 1 when elevation is uniform, else H*W
    bool uniform_coeffs = true;

    const ElevationCoeffs& coeff_at(std::size_t cell) const {
        return uniform_coeffs ? coeffs[0] : coeffs[cell];
    }
};

/// Clear-sky GHI at one point. Zenith in degrees; exact 0 at night. The two
/// printed exponential factors are evaluated as one exp of the summed
/// argument: toward the horizon the factors underflow/overflow separately
/// (0*inf), while the sum keeps the limit well-defined.
inline double clear_sky_ghi_scalar(double zenith_deg, const ClearSkyParams& params, int doy) {
    params.validate();
    const double i0 = extraterrestrial_irradiance(doy);
    const double cosz = std::cos(zenith_deg * kDegToRad);
    if (cosz <= kCosZenithNightEps) return 0.0;

    double am;
    if (params.air_mass_model == AirMassModel::SecantAsPrinted) {
        am = 1.0 / cosz;
    } else {
        am = 1.0 / (cosz + 0.50572 * std::pow(96.07995 - zenith_deg, -1.6364));
    }
    const ElevationCoeffs k = elevation_coeffs(params.elevation_m);
    const double tl = params.linke_turbidity;
    const double arg =
        -k.c_g2 * am * (k.f_h1 + k.f_h2 * (tl - 1.0)) + 0.01 * std::pow(am, 1.8);
    if (arg < kGhiExpFlushArg) return 0.0;
    const double ghi = k.c_g1 * i0 * cosz * std::exp(arg);
    return ghi < 0.0 ? 0.0 : ghi;
}

namespace detail {

struct ClearSkyRowContext {
    // per-timestamp constants
    double sin_decl, cos_decl;
    double i0;
    double tst_base_minutes;  // minutes of day + equation of time
    // per-column cos(hour angle)
    std::vector<double> cos_ha;
};

/// Fills one row of the GHI raster. Secant air mass path: the per-cell work
/// is one FMA for cos z plus the fused exponential, evaluated with the
/// fastmath kernels so the loop vectorizes.
template <bool Uniform>
inline void clear_sky_row_secant(const ClearSkyRowContext& ctx, double sin_lat, double cos_lat,
                                 const double* cg1xI0, const double* a_coef, double cg1xI0_u,
                                 double a_u, double* out, int width) {
    simd::SecantRowParams prm;
    prm.a_row = sin_lat * ctx.sin_decl;
    prm.b_row = cos_lat * ctx.cos_decl;
    prm.a_u = a_u;
    prm.k_u = cg1xI0_u;
    simd::secant_row<Uniform>(ctx.cos_ha.data(), a_coef, cg1xI0, out, width, prm);
}

/// Kasten-Young air mass path; optional mode, readability over throughput.
inline void clear_sky_row_ky(const ClearSkyRowContext& ctx, double sin_lat, double cos_lat,
                             const double* cg1xI0, const double* a_coef, bool uniform,
                             double cg1xI0_u, double a_u, double* out, int width) {
    const double a_row = sin_lat * ctx.sin_decl;
    const double b_row = cos_lat * ctx.cos_decl;
    for (int j = 0; j < width; ++j) {
        double c = a_row + b_row * ctx.cos_ha[j];
        c = c > 1.0 ? 1.0 : (c < -1.0 ? -1.0 : c);
        if (c <= kCosZenithNightEps) {
            out[j] = 0.0;
            continue;
        }
        const double z_deg = std::acos(c) * kRadToDeg;
        const double am = 1.0 / (c + 0.50572 * std::pow(96.07995 - z_deg, -1.6364));
        const double A = uniform ? a_u : a_coef[j];
        const double K = uniform ? cg1xI0_u : cg1xI0[j];
        const double arg = -A * am + 0.01 * std::pow(am, 1.8);
        if (arg < kGhiExpFlushArg) {
            out[j] = 0.0;
            continue;
        }
        const double ghi = K * c * std::exp(arg);
        out[j] = ghi < 0.0 ? 0.0 : ghi;
    }
}

}  // namespace detail

/// Clear-sky GHI over a full raster in one pass. Per-timestamp geometry is
/// hoisted, per-row and per-column trigonometry precomputed, and the per-cell
/// remainder runs through SIMD kernels. Rows are independent units of work:
/// output is bit-identical for any row-band partitioning, so `num_threads`
/// only changes wall time (0 = hardware concurrency).
inline ClearSkyField clear_sky_grid(const GeoGrid& grid, UtcTime t,
                                    const ClearSkyParams& params, int num_threads = 0) {
    params.validate(grid.cells());
    const int H = grid.height, W = grid.width;

    ClearSkyField field;
    field.grid = grid;
    field.i0 = extraterrestrial_irradiance(day_of_year(t));
    field.ghi.assign(grid.cells(), 0.0);
    field.uniform_coeffs = params.elevation_raster.empty();
    if (field.uniform_coeffs) {
        field.coeffs = {elevation_coeffs(params.elevation_m)};
    } else {
        field.coeffs.resize(grid.cells());
        for (std::size_t i = 0; i < grid.cells(); ++i) {
            field.coeffs[i] = elevation_coeffs(params.elevation_raster[i]);
        }
    }

    detail::ClearSkyRowContext ctx;
    const SunEphemeris eph = sun_ephemeris(t);
    ctx.sin_decl = std::sin(eph.declination_rad);
    ctx.cos_decl = std::cos(eph.declination_rad);
    ctx.i0 = field.i0;
    ctx.tst_base_minutes = minutes_of_day(t) + eph.eq_time_minutes;
    ctx.cos_ha.resize(W);
    for (int j = 0; j < W; ++j) {
        const double tst = ctx.tst_base_minutes + 4.0 * detail::normalize_lon(grid.lon(j));
        ctx.cos_ha[j] = std::cos(detail::hour_angle_deg(tst) * kDegToRad);
    }

    // per-cell prefactors when elevation/turbidity vary
    const bool uniform = field.uniform_coeffs && params.turbidity_raster.empty();
    const ElevationCoeffs ku = elevation_coeffs(params.elevation_m);
    const double a_u = ku.c_g2 * (ku.f_h1 + ku.f_h2 * (params.linke_turbidity - 1.0));
    const double k_u = ku.c_g1 * field.i0;
    std::vector<double> a_cell, k_cell;
    if (!uniform) {
        a_cell.resize(grid.cells());
        k_cell.resize(grid.cells());
        for (std::size_t i = 0; i < grid.cells(); ++i) {
            const ElevationCoeffs& k = field.coeff_at(i);
            const double tl =
                params.turbidity_raster.empty() ? params.linke_turbidity : params.turbidity_raster[i];
            a_cell[i] = k.c_g2 * (k.f_h1 + k.f_h2 * (tl - 1.0));
            k_cell[i] = k.c_g1 * field.i0;
        }
    }

    auto run_rows = [&](int row_begin, int row_end) {
        for (int i = row_begin; i < row_end; ++i) {
            const double lat = grid.lat(i) * kDegToRad;
            const double sin_lat = std::sin(lat);
            const double cos_lat = std::cos(lat);
            double* out = field.ghi.data() + std::size_t(i) * W;
            const double* krow = uniform ? nullptr : k_cell.data() + std::size_t(i) * W;
            const double* arow = uniform ? nullptr : a_cell.data() + std::size_t(i) * W;
            if (params.air_mass_model == AirMassModel::SecantAsPrinted) {
                if (uniform) {
                    detail::clear_sky_row_secant<true>(ctx, sin_lat, cos_lat, krow, arow, k_u,
                                                       a_u, out, W);
                } else {
                    detail::clear_sky_row_secant<false>(ctx, sin_lat, cos_lat, krow, arow, k_u,
                                                        a_u, out, W);
                }
            } else {
                detail::clear_sky_row_ky(ctx, sin_lat, cos_lat, krow, arow, uniform, k_u, a_u,
                                         out, W);
            }
        }
    };

    if (num_threads == 0) {
        num_threads = int(std::thread::hardware_concurrency());
        if (num_threads < 1) num_threads = 1;
    }
    if (num_threads <= 1 || H == 1) {
        run_rows(0, H);
    } else {
        const int nt = std::min(num_threads, H);
        std::vector<std::thread> workers;
        workers.reserve(nt);
        const int band = (H + nt - 1) / nt;
        for (int w = 0; w < nt; ++w) {
            const int b = w * band;
            const int e = std::min(H, b + band);
            if (b < e) workers.emplace_back(run_rows, b, e);
        }
        for (auto& th : workers) th.join();
    }
    return field;
}

/// The reference path the throughput contract compares against: loop the
/// public scalar operations over every cell.
inline ClearSkyField clear_sky_grid_naive(const GeoGrid& grid, UtcTime t,
                                          const ClearSkyParams& params) {
    params.validate(grid.cells());
    ClearSkyField field;
    field.grid = grid;
    field.i0 = extraterrestrial_irradiance(day_of_year(t));
    field.ghi.assign(grid.cells(), 0.0);
    field.uniform_coeffs = params.elevation_raster.empty();
    if (field.uniform_coeffs) {
        field.coeffs = {elevation_coeffs(params.elevation_m)};
    } else {
        field.coeffs.resize(grid.cells());
        for (std::size_t i = 0; i < grid.cells(); ++i) {
            field.coeffs[i] = elevation_coeffs(params.elevation_raster[i]);
        }
    }
    const int doy = day_of_year(t);
    for (int i = 0; i < grid.height; ++i) {
        for (int j = 0; j < grid.width; ++j) {
            const std::size_t cell = std::size_t(i) * grid.width + j;
            ClearSkyParams at;
            at.air_mass_model = params.air_mass_model;
            at.elevation_m = params.elevation_raster.empty() ? params.elevation_m
                                                             : params.elevation_raster[cell];
            at.linke_turbidity = params.turbidity_raster.empty() ? params.linke_turbidity
                                                                 : params.turbidity_raster[cell];
            const double z = solar_zenith(grid.lat(i), grid.lon(j), t);
            field.ghi[cell] = clear_sky_ghi_scalar(z, at, doy);
        }
    }
    return field;
}

}  // namespace heliocast
