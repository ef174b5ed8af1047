#ifndef LOADSCHED_PRNG_HPP
#define LOADSCHED_PRNG_HPP

#include <cstdint>
#include <vector>

namespace loadsched {

// splitmix64: tiny, fast, reproducible across platforms. Every random choice in
// the project (trace shuffles, store fill, swarm search, benchmarks, test data)
// flows through this generator so runs are bit-stable given a seed.
class SplitMix64 {
  public:
    using result_type = std::uint64_t;

    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    constexpr std::uint64_t operator()() { return next(); }

    // Uniform integer in [0, bound) by modulo; bound must be nonzero.
    constexpr std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

    // Uniform double in [0, 1) with 53 random bits.
    constexpr double next_double() {
        return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0);
    }

    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~0ULL; }

  private:
    std::uint64_t state_;
};

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// In-place Fisher-Yates: swap a[i] with a[j], j = next() mod (i+1), i descending.
template <typename T>
void fisher_yates_shuffle(std::vector<T>& a, SplitMix64& rng) {
    for (std::size_t i = a.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        T tmp = a[i - 1];
        a[i - 1] = a[j];
        a[j] = tmp;
    }
}

} // namespace loadsched

#endif
