#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace ctseg {

// Deterministic random source for the firefly search and the phantom
// generator. mt19937_64 output is fully specified by the standard; the
// uniform and normal transforms are written out explicitly here instead of
// using std::*_distribution, whose algorithms are implementation-defined
// and would break seed-for-seed reproducibility across toolchains.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    // Uniform in [0, 1): top 53 bits of the generator word.
    double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; the second value of each pair is
    // cached so draw order stays a pure function of the seed.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = (double(eng_() >> 11) + 1.0) * 0x1.0p-53; // (0, 1]
        double u2 = double(eng_() >> 11) * 0x1.0p-53;         // [0, 1)
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = kTwoPi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    uint64_t next_u64() { return eng_(); }

private:
    static constexpr double kTwoPi = 6.283185307179586476925286766559;
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

constexpr uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Per-item seed for batch work: mixing the global seed with the item name
// makes each image's random stream independent of scheduling order and of
// which other images happen to be in the corpus.
inline uint64_t derive_seed(uint64_t global_seed, std::string_view item) {
    uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a over the item name
    for (unsigned char c : item) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return splitmix64(global_seed ^ h);
}

} // namespace ctseg
