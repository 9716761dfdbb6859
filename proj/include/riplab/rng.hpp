#pragma once

#include <cstdint>
#include <random>

namespace riplab {

/// Project-wide random source: MT19937-64 (fully specified by the C++
/// standard, so streams are reproducible byte-exact across platforms).
/// Uniform doubles take the top 53 bits of one 64-bit draw; normals use the
/// Box-Muller transform on two uniforms, both outputs consumed in order.
/// Ports in other languages can replicate streams from this description.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller.
    double normal();

    /// Integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Rejection sampling keeps the distribution exactly uniform.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace riplab
