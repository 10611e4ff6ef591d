#ifndef LOEM_RNG_HPP
#define LOEM_RNG_HPP

#include <cmath>
#include <cstdint>

namespace loem {

// splitmix64 stream. Small, fast, and bit-identical on every platform, which
// the byte-identical report contract relies on (std::uniform_real_distribution
// is not pinned down by the standard).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Derive an independent stream, e.g. one per restart or per worker task.
    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        Rng mix(seed);
        std::uint64_t a = mix.next();
        Rng idx(index + 0x9e3779b97f4a7c15ULL);
        return Rng(a ^ idx.next());
    }

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; caches the spare.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace loem

#endif
