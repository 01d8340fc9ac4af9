#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "heliocast/errors.hpp"

namespace heliocast {

/// Plate-carree raster geometry. Coordinates name cell centers; row 0 is the
/// northernmost row and rows advance south, columns advance east.
struct GeoGrid {
    double lat0 = 0.0;  // center latitude of row 0
    double lon0 = 0.0;  // center longitude of column 0
    double dlat = 1.0;  // per-row step, positive
    double dlon = 1.0;  // per-column step, positive
    int height = 1;
    int width = 1;

    GeoGrid() = default;
    GeoGrid(double lat0_, double lon0_, double dlat_, double dlon_, int h, int w)
        : lat0(lat0_), lon0(lon0_), dlat(dlat_), dlon(dlon_), height(h), width(w) {
        validate();
    }

    void validate() const {
        if (!(dlat > 0.0) || !(dlon > 0.0)) throw ParamError("grid steps must be positive");
        if (height < 1 || width < 1) throw ParamError("grid must have at least one cell");
        const double lat_last = lat(height - 1);
        if (lat0 > 90.0 || lat_last < -90.0) {
            throw RangeError("grid cell centers leave [-90, 90] latitude");
        }
        const double lon_last = lon(width - 1);
        if (lon0 < -180.0 || lon_last > 360.0) {
            throw RangeError("grid cell centers leave [-180, 360] longitude");
        }
    }

    double lat(int row) const { return lat0 - row * dlat; }
    double lon(int col) const { return lon0 + col * dlon; }

    std::size_t cells() const { return std::size_t(height) * std::size_t(width); }

    bool same_geometry(const GeoGrid& o, double tol = 1e-9) const {
        return height == o.height && width == o.width && std::fabs(lat0 - o.lat0) <= tol &&
               std::fabs(lon0 - o.lon0) <= tol && std::fabs(dlat - o.dlat) <= tol &&
               std::fabs(dlon - o.dlon) <= tol;
    }

    std::string describe() const {
        return std::to_string(height) + "x" + std::to_string(width) + " grid at (" +
               std::to_string(lat0) + ", " + std::to_string(lon0) + ") step (" +
               std::to_string(dlat) + ", " + std::to_string(dlon) + ")";
    }
};

}  // namespace heliocast
