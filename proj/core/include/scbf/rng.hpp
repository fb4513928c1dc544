#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace scbf {

/// Counter-seeded xoshiro256++ stream. Streams are derived from
/// (seed, stream, substream) through splitmix64, so any stream can be
/// constructed independently of all others; trajectory results do not
/// depend on scheduling order.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t substream = 0) {
        std::uint64_t x = seed;
        x = splitmix(x) ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
        x = splitmix(x) ^ (0xbf58476d1ce4e5b9ULL * (substream + 1));
        for (auto& si : s_) {
            x = splitmix(x);
            si = x;
        }
        // xoshiro must not start from the all-zero state
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x1ULL;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0,1], safe as a log argument.
    double uniform01_open0() { return 1.0 - uniform01(); }

    double exponential(double rate) { return -std::log(uniform01_open0()) / rate; }

    /// Standard normal via Box-Muller (two uniforms per call, no cached spare,
    /// so the consumption pattern is stable).
    double normal() {
        const double u1 = uniform01_open0();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Index into a cumulative-weight table (cumw.back() == total mass).
    std::size_t discrete(const std::vector<double>& cumw) {
        const double x = uniform01() * cumw.back();
        auto it = std::upper_bound(cumw.begin(), cumw.end(), x);
        if (it == cumw.end()) --it;
        return static_cast<std::size_t>(it - cumw.begin());
    }

private:
    static std::uint64_t splitmix(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t s_[4];
};

}  // namespace scbf
