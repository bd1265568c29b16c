#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace freeframe {

/// Bad user input (malformed words, files, flags, parameter domains).
class input_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A request that exceeds a configured enumeration or arithmetic capacity.
class capacity_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Coefficients below this magnitude are dropped after arithmetic ops.
inline constexpr double kDropTolerance = 1e-15;

/// Default ball radius for materialized word enumerations (~1.06M words).
inline constexpr int kDefaultRadiusCap = 12;

/// Frame blocks are capped here: prefix sums of (2*3^k-1)^3 overflow
/// 128-bit arithmetic from k = 27 on.
inline constexpr int kMaxBlock = 26;

using uint128 = unsigned __int128;

inline std::string to_string(uint128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v != 0) {
        s.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
        v /= 10;
    }
    return {s.rbegin(), s.rend()};
}

inline uint128 parse_uint128(std::string_view text) {
    if (text.empty()) throw input_error("empty integer literal");
    constexpr uint128 kMax = ~uint128{0};
    uint128 v = 0;
    for (char c : text) {
        if (c < '0' || c > '9') throw input_error("invalid integer literal: " + std::string(text));
        unsigned d = static_cast<unsigned>(c - '0');
        if (v > (kMax - d) / 10) throw input_error("integer literal out of range: " + std::string(text));
        v = v * 10 + d;
    }
    return v;
}

/// Shortest round-trip decimal form of a double (used for all emitted output).
inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

/// SplitMix64: tiny deterministic generator, stable across platforms.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [-1, 1].
    double uniform_sym() { return 2.0 * uniform01() - 1.0; }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

private:
    std::uint64_t state_;
};

/// Runs fn(i) for i in [0, n). Results must be written to per-index slots so
/// the outcome does not depend on the thread count.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(n));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace freeframe
