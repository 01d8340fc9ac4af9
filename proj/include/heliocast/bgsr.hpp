#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "heliocast/errors.hpp"
#include "heliocast/raster.hpp"

namespace heliocast {

// BGSR binary raster, little-endian throughout:
//   [0..3]   magic "BGSR"
//   [4..7]   u32 version = 1
//   [8..23]  u32 T, C, H, W
//   [24..55] f64 lat0, lon0, dlat, dlon
//   [56..63] i64 epoch seconds of first frame
//   [64..67] u32 step seconds
//   then 16*C bytes of channel names (ASCII, space-padded)
//   then T*C*H*W f32 payload, [t][c][h][w] row-major
// Serialized size: 68 + 16*C + 4*T*C*H*W.

inline constexpr std::uint32_t kBgsrVersion = 1;
inline constexpr std::size_t kBgsrHeaderBytes = 68;

namespace detail {

template <typename T>
void put_le(std::string& out, T v) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    const U u = std::bit_cast<U>(v);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        out.push_back(char((u >> (8 * i)) & 0xFF));
    }
}

template <typename T>
T get_le(const unsigned char* p) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    U u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        u |= U(p[i]) << (8 * i);
    }
    return std::bit_cast<T>(u);
}

}  // namespace detail

inline std::size_t bgsr_size_bytes(const RasterStack& s) {
    return kBgsrHeaderBytes + 16 * std::size_t(s.C()) +
           4 * std::size_t(s.T()) * s.C() * s.grid.cells();
}

/// Serializes a stack; returns the byte count written.
inline std::size_t write_raster(const RasterStack& stack, std::ostream& out) {
    stack.validate_axes();
    std::string header;
    header.reserve(kBgsrHeaderBytes + 16 * stack.C());
    header += "BGSR";
    detail::put_le<std::uint32_t>(header, kBgsrVersion);
    detail::put_le<std::uint32_t>(header, std::uint32_t(stack.T()));
    detail::put_le<std::uint32_t>(header, std::uint32_t(stack.C()));
    detail::put_le<std::uint32_t>(header, std::uint32_t(stack.H()));
    detail::put_le<std::uint32_t>(header, std::uint32_t(stack.W()));
    detail::put_le<double>(header, stack.grid.lat0);
    detail::put_le<double>(header, stack.grid.lon0);
    detail::put_le<double>(header, stack.grid.dlat);
    detail::put_le<double>(header, stack.grid.dlon);
    detail::put_le<std::int64_t>(header, stack.times.front());
    detail::put_le<std::uint32_t>(header, std::uint32_t(stack.step_seconds()));
    for (const auto& name : stack.channels) {
        std::string padded = name;
        padded.resize(16, ' ');
        header += padded;
    }
    out.write(header.data(), std::streamsize(header.size()));

    // payload, NaN encoded as the missing sentinel
    std::string buf;
    const std::size_t cells = stack.grid.cells();
    buf.reserve(cells * 4);
    for (int t = 0; t < stack.T(); ++t) {
        for (int c = 0; c < stack.C(); ++c) {
            buf.clear();
            for (float v : stack.frame(t, c)) {
                detail::put_le<float>(buf, is_missing(v) ? kMissingEncoded : v);
            }
            out.write(buf.data(), std::streamsize(buf.size()));
        }
    }
    if (!out) throw IoError("write failed while emitting BGSR stream");
    return bgsr_size_bytes(stack);
}

inline RasterStack read_raster(std::istream& in) {
    unsigned char header[kBgsrHeaderBytes];
    in.read(reinterpret_cast<char*>(header), kBgsrHeaderBytes);
    if (std::size_t(in.gcount()) != kBgsrHeaderBytes) {
        throw FormatError("truncated BGSR header", std::size_t(in.gcount()));
    }
    if (std::memcmp(header, "BGSR", 4) != 0) {
        throw FormatError("bad magic, expected 'BGSR'", 0);
    }
    const auto version = detail::get_le<std::uint32_t>(header + 4);
    if (version != kBgsrVersion) {
        throw FormatError("unsupported BGSR version " + std::to_string(version), 4);
    }
    const auto T = detail::get_le<std::uint32_t>(header + 8);
    const auto C = detail::get_le<std::uint32_t>(header + 12);
    const auto H = detail::get_le<std::uint32_t>(header + 16);
    const auto W = detail::get_le<std::uint32_t>(header + 20);
    if (T == 0 || C == 0 || H == 0 || W == 0) {
        throw FormatError("zero-sized axis in header", 8);
    }
    GeoGrid grid;
    try {
        grid = GeoGrid(detail::get_le<double>(header + 24), detail::get_le<double>(header + 32),
                       detail::get_le<double>(header + 40), detail::get_le<double>(header + 48),
                       int(H), int(W));
    } catch (const Error& e) {
        throw FormatError(std::string("invalid grid header: ") + e.what(), 24);
    }
    const auto t0 = detail::get_le<std::int64_t>(header + 56);
    const auto step = detail::get_le<std::uint32_t>(header + 64);
    if (step == 0) throw FormatError("zero time step", 64);

    std::vector<std::string> channels(C);
    std::vector<char> namebuf(16 * C);
    in.read(namebuf.data(), std::streamsize(namebuf.size()));
    if (std::size_t(in.gcount()) != namebuf.size()) {
        throw FormatError("truncated channel table", kBgsrHeaderBytes + std::size_t(in.gcount()));
    }
    for (std::uint32_t c = 0; c < C; ++c) {
        std::string name(namebuf.data() + 16 * c, 16);
        while (!name.empty() && name.back() == ' ') name.pop_back();
        if (name.empty()) throw FormatError("empty channel name", kBgsrHeaderBytes + 16 * c);
        channels[c] = name;
    }

    std::vector<std::int64_t> times(T);
    for (std::uint32_t t = 0; t < T; ++t) times[t] = t0 + std::int64_t(t) * step;

    RasterStack stack(grid, std::move(times), std::move(channels));
    const std::size_t payload_off = kBgsrHeaderBytes + 16 * std::size_t(C);
    const std::size_t n = stack.data.size();
    std::vector<unsigned char> raw(n * 4);
    in.read(reinterpret_cast<char*>(raw.data()), std::streamsize(raw.size()));
    if (std::size_t(in.gcount()) != raw.size()) {
        throw FormatError("payload shorter than header promises",
                          payload_off + std::size_t(in.gcount()));
    }
    for (std::size_t i = 0; i < n; ++i) {
        float v = detail::get_le<float>(raw.data() + 4 * i);
        stack.data[i] = (v == kMissingEncoded) ? missing_value() : v;
    }
    return stack;
}

inline std::size_t write_raster_file(const RasterStack& stack, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    return write_raster(stack, out);
}

inline RasterStack read_raster_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    return read_raster(in);
}

}  // namespace heliocast
