#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace fraccd {

// Every stochastic component in the library draws from this generator so that
// a (seed, algorithm id) pair pinned in a run manifest reproduces the run.
inline constexpr const char* kRngAlgorithmId = "mt19937_64+box-muller";

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in (0,1]; never returns 0 so it is safe under log().
    double uniform_open() {
        return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
    }

    // Uniform in [0,1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform in {0,...,n-1} by rejection, bias-free.
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t v = gen_();
        while (v >= limit) v = gen_();
        return v % n;
    }

    // Box-Muller on top of the raw uniforms keeps the normal stream independent
    // of the standard library's unspecified normal_distribution algorithm.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_open();
        const double u2 = uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * std::numbers::pi * u2;
        spare_ = mag * std::sin(ang);
        have_spare_ = true;
        return mag * std::cos(ang);
    }

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace fraccd
