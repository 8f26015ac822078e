#pragma once

#include <cmath>
#include <cstdint>

namespace oa {

// splitmix64 finalizer (Steele/Lea/Flood constants).
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Per-trial seed derivation: mixes (masterSeed, cell index, trial index).
// Documented so alternate implementations can reproduce the streams.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    return mix64(mix64(master ^ mix64(a + 1)) ^ mix64(b + 0x5851f42d4c957f2dull));
}

// Counter-based generator: output i is splitmix64(seed + i * golden).
// Stateless apart from the counter, so streams are reproducible across
// platforms and thread counts. Normal variates via Box-Muller, which keeps
// the stream layout fixed (two uniforms per pair of normals).
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64() { return mix64(seed_ + 0x9e3779b97f4a7c15ull * counter_++); }

    // uniform in (0,1)
    double uniform() {
        const std::uint64_t bits = next_u64() >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    // +1 with probability p, else -1
    double pm1(double p) { return uniform() < p ? 1.0 : -1.0; }

  private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace oa
