#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace heliocast {

/// Base of all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value outside its documented domain (day-of-year, timestamps, horizons).
class RangeError : public Error {
public:
    using Error::Error;
};

/// Tensor / raster dimension mismatch.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Invalid model or physics parameter (e.g. Linke turbidity < 1).
class ParamError : public Error {
public:
    using Error::Error;
};

/// Grids with no common spatial overlap.
class CoverageError : public Error {
public:
    using Error::Error;
};

/// Malformed BGSR (or checkpoint) byte stream; carries the byte offset of
/// the first inconsistency.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte offset " + std::to_string(offset) + ")"),
          offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Filesystem / stream failure.
class IoError : public Error {
public:
    using Error::Error;
};

/// API misuse (detached graphs, unknown config keys, bad CLI flags).
class UsageError : public Error {
public:
    using Error::Error;
};

/// Numerical abort (NaN loss and friends).
class NumericError : public Error {
public:
    using Error::Error;
};

/// Statistics cannot be derived (e.g. all-missing channel).
class StatsError : public Error {
public:
    using Error::Error;
};

}  // namespace heliocast
