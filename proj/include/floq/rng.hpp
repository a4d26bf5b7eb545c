#pragma once

#include <complex>
#include <cstdint>

namespace floq {

// Reproducible 64-bit generator used for all test corpora and experiment
// trials. The exact update rules are part of the file-format contract:
// two runs with the same seed produce identical potentials on any platform.
//
//   state mixing (splitmix64):  z = (x += 0x9E3779B97F4A7C15);
//                               z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
//                               z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
//                               return z ^ (z >> 31);
//   stream (xorshift64*):       x ^= x >> 12; x ^= x << 25; x ^= x >> 27;
//                               return x * 0x2545F4914F6CDD1D;
//
// Stream splitting: substream(seed, i) seeds a fresh generator with
// splitmix64 applied to (splitmix64(seed) ^ splitmix64(i + 1)), so trial i
// of an experiment draws from a stream independent of every other trial.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(mix(seed)) {
        if (state_ == 0) state_ = 0x9E3779B97F4A7C15ull;  // xorshift state must be nonzero
    }

    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        return Rng(mix(seed) ^ mix(index + 1));
    }

    std::uint64_t next_u64() {
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545F4914F6CDD1Dull;
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [-1, 1).
    double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Real and imaginary parts independently uniform in [-1, 1).
    std::complex<double> complex_pm1() {
        const double re = uniform_pm1();
        const double im = uniform_pm1();
        return {re, im};
    }

    /// Nonnegative integer below n.
    int below(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

  private:
    static std::uint64_t mix(std::uint64_t x) {
        std::uint64_t z = x + 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace floq
