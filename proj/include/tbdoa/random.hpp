#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "tbdoa/tensor.hpp"

namespace tbdoa {

/// Seeded random stream with the draws the simulator needs. Every consumer
/// owns its own stream, so concurrent use of distinct streams is safe and
/// results do not depend on execution order.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) { seed_from(seed, 0, 0); }

    /// Substream for (master seed, outer index, inner index), e.g. one per
    /// Monte-Carlo trial. Distinct tuples give well-separated streams.
    RandomStream(std::uint64_t master, std::uint64_t outer, std::uint64_t inner) {
        seed_from(master, outer, inner);
    }

    /// Uniform draw on (0, 1]; never returns 0 so log() is safe.
    double uniform() {
        return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard circular complex Gaussian: E|z|^2 = 1, real and imaginary
    /// parts independent N(0, 1/2).
    cxd complex_normal() {
        const double r = std::sqrt(-std::log(uniform()));
        const double phi = 2.0 * std::numbers::pi * uniform();
        return {r * std::cos(phi), r * std::sin(phi)};
    }

    /// Fresh seed for a child stream.
    std::uint64_t next_seed() { return eng_(); }

  private:
    void seed_from(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
        std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                          static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                          static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
        eng_.seed(seq);
    }

    std::mt19937_64 eng_;
};

} // namespace tbdoa
