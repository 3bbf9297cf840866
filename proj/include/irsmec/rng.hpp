#ifndef IRSMEC_RNG_HPP
#define IRSMEC_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace irsmec {

/// Seedable random stream built on mt19937_64 with explicit uniform/normal
/// transforms, so sequences are reproducible regardless of the standard
/// library's distribution internals.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Inclusive integer range.
    int uniform_int(int lo, int hi) {
        if (hi <= lo) return lo;
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(engine_() % span);
    }

    /// Standard normal via Box-Muller, one spare cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    /// Circularly-symmetric complex Gaussian with unit variance
    /// (variance 1/2 per real component).
    std::complex<double> cgaussian() {
        const double s = 0.7071067811865476;
        return {s * normal(), s * normal()};
    }

    /// Derives an independent substream.
    Rng fork() { return Rng(engine_() ^ 0x9e3779b97f4a7c15ull); }

  private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Mixes a base seed with a stream tag (e.g. solver id) into a new seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t x = seed + 0x9e3779b97f4a7c15ull * (tag + 1);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

}  // namespace irsmec

#endif
