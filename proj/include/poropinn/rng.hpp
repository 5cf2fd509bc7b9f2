#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace poropinn {

// Deterministic random source shared by initialization and sampling.
//
// The draw algorithms are fixed here rather than delegated to
// std::uniform_real_distribution / std::normal_distribution, whose exact
// output sequences are implementation-defined and would make checkpoints
// differ across standard libraries.
//   uniform01: top 53 bits of an mt19937_64 word, in [0, 1)
//   normal:    Box-Muller on two uniforms, pairs consumed in order
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform in (0, 1]; used where log() or a power law needs a nonzero draw.
    double uniform01_open_low() { return 1.0 - uniform01(); }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01_open_low();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    std::uint64_t raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Decorrelates the per-purpose streams (init, sampling, ...) derived from one
// user-facing seed.  splitmix64 finalizer.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace poropinn
