#pragma once

#include <cmath>
#include <cstdint>

namespace hkm {

/// Splittable counter-based generator (SplitMix64 core).
///
/// A stream is identified by its seed; `split(key)` derives a child stream
/// from the parent's identity and `key` only, never from the draw position.
/// Deriving branch streams from path keys makes results independent of the
/// order in which sibling branches are explored.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Child stream keyed by `key`; depends on this stream's identity only.
    Rng split(std::uint64_t key) const {
        return Rng(mix(seed_ ^ mix(key + 0x632be59bd9b4e019ULL)));
    }

    /// Uniform index in [0, n), n >= 1.
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>((static_cast<__uint128_t>(next_u64()) * n) >> 64);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (no spare caching; two draws per call).
    double normal() {
        double u1 = uniform_double();
        double u2 = uniform_double();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    bool coin() { return (next_u64() >> 63) != 0; }

    /// Truncated geometric size: P[s] proportional to 2^-s over 1..cap.
    int geometric_size(int cap) {
        int s = 1;
        while (s < cap && coin()) ++s;
        return s;
    }

    std::uint64_t seed() const { return seed_; }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t state_;
};

}  // namespace hkm
