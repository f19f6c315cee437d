#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <system_error>

namespace diffflow {

// Simulation time is integer picoseconds. All Table-level quantities
// (12 us transmission of a 1500 B packet at 1 Gbps, 3/12 us service
// times) are exact in this unit, which keeps event ordering free of
// floating-point ties.
using simtime_ps = std::int64_t;

inline constexpr simtime_ps kPsPerSecond = 1'000'000'000'000LL;
inline constexpr simtime_ps kPsPerMicro = 1'000'000LL;

constexpr simtime_ps microseconds(double us) {
    return static_cast<simtime_ps>(us * static_cast<double>(kPsPerMicro));
}

constexpr double to_seconds(simtime_ps t) {
    return static_cast<double>(t) / static_cast<double>(kPsPerSecond);
}

inline simtime_ps seconds_to_ps(double s) {
    return static_cast<simtime_ps>(std::llround(s * static_cast<double>(kPsPerSecond)));
}

// Transmission time of `bytes` over a `bits_per_second` link, rounded
// to the nearest picosecond.
inline simtime_ps transmission_time_ps(std::int64_t bytes, double bits_per_second) {
    return static_cast<simtime_ps>(
        std::llround(static_cast<double>(bytes) * 8.0 / bits_per_second *
                     static_cast<double>(kPsPerSecond)));
}

// splitmix64, used to derive independent seeds for the per-module RNG
// streams from one user-facing seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(base ^ splitmix64(stream));
}

// Shortest round-trip decimal form of a double. Every value written to
// CSV goes through this so that re-parsing an output file reproduces
// the exact in-memory value (aggregate files are recomputable bit for
// bit from the per-flow files).
inline std::string format_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw std::runtime_error("format_double: to_chars failed");
    return std::string(buf, ptr);
}

inline double parse_double(std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc()) throw std::runtime_error("parse_double: bad number: " + std::string(s));
    return v;
}

}  // namespace diffflow
