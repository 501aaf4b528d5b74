// Deterministic random numbers for reproducible simulations.
//
// The generator is splitmix64 (Steele, Lea, Flood: "Fast splittable
// pseudorandom number generators", public-domain reference constants), chosen
// over std::mt19937 + std::normal_distribution because the standard
// distributions are implementation-defined: the same seed must produce the
// same bytes on every platform. Gaussian variates come from the Box-Muller
// transform, two per pair of uniforms.

#ifndef BAKERCODE_RNG_HPP
#define BAKERCODE_RNG_HPP

#include <cmath>
#include <cstdint>

namespace bakercode {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// splitmix64 output mixer.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() { return mix64(state_ += kGolden); }

    // Uniform on [0, 1), a 53-bit dyadic rational.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform on [-1, 1), dyadic with denominator 2^52; baker's-map
    // trajectories of such seeds are exact in double precision.
    double uniform_symmetric() { return uniform01() * 2.0 - 1.0; }

private:
    std::uint64_t state_;
};

// Standard normal variates via Box-Muller on splitmix64 uniforms.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] so the log is finite.
        const double u1 = static_cast<double>((rng_.next() >> 11) + 1) * 0x1.0p-53;
        const double u2 = rng_.uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    SplitMix64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Sub-seed derivation: fold each index into the master seed through the
// splitmix64 mixer. Serial and fanned-out runs that draw per-block streams
// from derive_seed(master, snr_index, trial, block) agree bit for bit.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c) {
    std::uint64_t h = master;
    h = mix64(h + kGolden + a);
    h = mix64(h + kGolden + b);
    h = mix64(h + kGolden + c);
    return h;
}

}  // namespace bakercode

#endif  // BAKERCODE_RNG_HPP
