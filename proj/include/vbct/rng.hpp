#ifndef VBCT_RNG_HPP
#define VBCT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "vbct/common.hpp"

namespace vbct::rng {

// splitmix64 finalizer; used to derive independent per-trial seeds from (seed, index).
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return mix64(base ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// All sampling goes through these helpers rather than std::*_distribution,
// which are implementation-defined and would break byte-identical reruns.
class Stream {
  public:
    explicit Stream(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform in [0, 1) with 53 random bits
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    // uniform integer in [0, n), rejection sampled so every value is equally likely
    std::uint64_t uniform_below(std::uint64_t n) {
        if (n == 0) throw param_error("uniform_below: n must be positive");
        if (n == 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t r;
        do { r = eng_(); } while (r >= limit);
        return r % n;
    }

    // Poisson by CDF inversion in long double; adequate for desk-scale means.
    std::uint64_t poisson(double mean) {
        if (!(mean > 0.0) || mean > 500.0)
            throw param_error("poisson: mean must be in (0, 500]");
        const long double u = static_cast<long double>(uniform01());
        long double p = std::exp(-static_cast<long double>(mean));
        long double cdf = p;
        std::uint64_t k = 0;
        while (u >= cdf && k < 100000) {
            ++k;
            p *= static_cast<long double>(mean) / static_cast<long double>(k);
            cdf += p;
        }
        return k;
    }

    // Poisson conditioned on a positive draw; round counts of zero are meaningless.
    std::uint64_t poisson_positive(double mean) {
        std::uint64_t k;
        do { k = poisson(mean); } while (k == 0);
        return k;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[uniform_below(i)]);
    }

  private:
    std::mt19937_64 eng_;
};

} // namespace vbct::rng

#endif
