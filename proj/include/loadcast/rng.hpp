#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace loadcast {

namespace detail {
/// splitmix64 finalizer; used to spread user seeds and derive sub-streams.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

/// Deterministic random source. The generator is std::mt19937_64 (its output
/// sequence is pinned by the standard); all distributions are computed here
/// rather than with std:: distribution objects, whose sequences are
/// implementation-defined. Identical seeds therefore give identical streams
/// on every platform.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed)
        : seed_(seed), gen_(detail::mix64(seed)) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (two uniforms per pair, cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        // u1 == 0 would take log(0); nudge to the smallest representable draw
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Uniform index in [0, n). n must be > 0.
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Independent child stream; deterministic in (seed, stream id).
    SeededRng derive(std::uint64_t stream) const {
        return SeededRng(detail::mix64(seed_ ^ detail::mix64(stream)));
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Fisher-Yates shuffle driven by SeededRng, so permutations do not depend
/// on the standard library's std::shuffle implementation.
template <typename T>
void shuffle(std::vector<T>& items, SeededRng& rng) {
    if (items.size() < 2) return;
    for (std::size_t i = items.size() - 1; i > 0; --i) {
        const std::size_t j = rng.index(i + 1);
        std::swap(items[i], items[j]);
    }
}

}  // namespace loadcast
