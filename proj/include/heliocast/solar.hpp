#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "heliocast/errors.hpp"
#include "heliocast/time.hpp"

namespace heliocast {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kRadToDeg = 180.0 / kPi;

/// Below this cosine of the zenith angle a cell counts as night: air mass is
/// undefined and clear-sky GHI is forced to exactly zero.
inline constexpr double kCosZenithNightEps = 1e-4;

/// Solar constant scale of the extraterrestrial-irradiance formula.
inline constexpr double kSolarConstant = 1367.7;

enum class AirMassModel {
    SecantAsPrinted,  // AM = 1/cos(z); diverges toward the horizon
    KastenYoung,      // optional variant, bounded (~38) at the horizon
};

/// Top-of-atmosphere normal irradiance for a calendar day of year.
inline double extraterrestrial_irradiance(int doy) {
    if (doy < 1 || doy > 366) {
        throw RangeError("day of year out of range: " + std::to_string(doy));
    }
    return kSolarConstant * (1.0 + 0.033 * std::cos(2.0 * kPi * double(doy) / 365.0));
}

struct SunEphemeris {
    double declination_rad;
    double eq_time_minutes;
};

/// Spencer-type Fourier series for declination and equation of time. The
/// fractional-year phase runs on a continuous day count modulo the mean
/// tropical year, which keeps the series free of the calendar leap-day
/// sawtooth (measured <= 0.15 deg zenith error vs an almanac ephemeris over
/// 2020-2030; documented budget is 0.5 deg).
inline SunEphemeris sun_ephemeris(UtcTime t) {
    detail::check_supported(t);
    constexpr double kTropicalYear = 365.2425;
    constexpr std::int64_t kEpoch2000 = 946684800LL;  // 2000-01-01T00:00Z
    const double days = double(t - kEpoch2000) / 86400.0;
    double frac = std::fmod(days, kTropicalYear) / kTropicalYear;
    if (frac < 0.0) frac += 1.0;
    const double g = 2.0 * kPi * frac;

    const double cg = std::cos(g), sg = std::sin(g);
    const double c2g = std::cos(2.0 * g), s2g = std::sin(2.0 * g);
    const double c3g = std::cos(3.0 * g), s3g = std::sin(3.0 * g);

    const double decl = 0.006918 - 0.399912 * cg + 0.070257 * sg - 0.006758 * c2g +
                        0.000907 * s2g - 0.002697 * c3g + 0.001480 * s3g;
    const double eqt =
        229.18 * (0.000075 + 0.001868 * cg - 0.032077 * sg - 0.014615 * c2g - 0.040849 * s2g);
    return {decl, eqt};
}

namespace detail {

inline double normalize_lon(double lon_deg) {
    double l = std::fmod(lon_deg + 180.0, 360.0);
    if (l < 0.0) l += 360.0;
    return l - 180.0;
}

/// Hour angle in degrees from true solar time expressed in minutes.
inline double hour_angle_deg(double tst_minutes) {
    double ha = tst_minutes / 4.0 - 180.0;
    ha = std::fmod(ha + 180.0, 360.0);
    if (ha < 0.0) ha += 360.0;
    return ha - 180.0;
}

inline void check_lat_lon(double lat_deg, double lon_deg) {
    if (!(lat_deg >= -90.0 && lat_deg <= 90.0)) {
        throw RangeError("latitude out of range: " + std::to_string(lat_deg));
    }
    if (!(lon_deg >= -180.0 && lon_deg <= 360.0)) {
        throw RangeError("longitude out of range: " + std::to_string(lon_deg));
    }
}

}  // namespace detail

/// Cosine of the solar zenith angle.
inline double cos_solar_zenith(double lat_deg, double lon_deg, UtcTime t) {
    detail::check_lat_lon(lat_deg, lon_deg);
    const SunEphemeris eph = sun_ephemeris(t);
    const double tst =
        minutes_of_day(t) + eph.eq_time_minutes + 4.0 * detail::normalize_lon(lon_deg);
    const double ha = detail::hour_angle_deg(tst) * kDegToRad;
    const double lat = lat_deg * kDegToRad;
    const double sd = std::sin(eph.declination_rad);
    const double cd = std::cos(eph.declination_rad);
    const double c = std::sin(lat) * sd + (std::cos(lat) * cd) * std::cos(ha);
    return std::clamp(c, -1.0, 1.0);
}

/// Solar zenith angle in degrees, in [0, 180].
inline double solar_zenith(double lat_deg, double lon_deg, UtcTime t) {
    return std::acos(cos_solar_zenith(lat_deg, lon_deg, t)) * kRadToDeg;
}

/// Relative air mass; empty = night sentinel (cos z <= eps).
inline std::optional<double> air_mass(double cos_zenith,
                                      AirMassModel model = AirMassModel::SecantAsPrinted) {
    if (!(cos_zenith >= -1.0 && cos_zenith <= 1.0)) {
        throw RangeError("cos_zenith out of [-1, 1]");
    }
    if (cos_zenith <= kCosZenithNightEps) return std::nullopt;
    if (model == AirMassModel::SecantAsPrinted) {
        return 1.0 / cos_zenith;
    }
    const double z_deg = std::acos(cos_zenith) * kRadToDeg;
    return 1.0 / (cos_zenith + 0.50572 * std::pow(96.07995 - z_deg, -1.6364));
}

struct SolarGeometry {
    double zenith_deg;
    double cos_zenith;
    int day_of_year;
    std::optional<double> air_mass;  // empty = night
};

inline SolarGeometry solar_geometry(double lat_deg, double lon_deg, UtcTime t,
                                    AirMassModel model = AirMassModel::SecantAsPrinted) {
    const double c = cos_solar_zenith(lat_deg, lon_deg, t);
    return SolarGeometry{std::acos(c) * kRadToDeg, c, day_of_year(t), air_mass(c, model)};
}

struct ElevationCoeffs {
    double c_g1;
    double c_g2;
    double f_h1;
    double f_h2;
};

/// Elevation-dependent coefficients of the clear-sky model.
inline ElevationCoeffs elevation_coeffs(double h_meters) {
    return ElevationCoeffs{5.09e-5 * h_meters + 0.868, 3.92e-5 * h_meters + 0.0387,
                           std::exp(-h_meters / 8000.0), std::exp(-h_meters / 1250.0)};
}

}  // namespace heliocast
