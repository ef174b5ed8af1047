#include "doctest.h"

#include <algorithm>
#include <vector>

#include "loadsched/prng.hpp"

using namespace loadsched;

TEST_CASE("splitmix64 matches the published reference stream") {
    SplitMix64 rng(0);
    CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
    CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
    CHECK(rng.next() == 0x06C45D188009454FULL);

    SplitMix64 rng42(42);
    CHECK(rng42.next() == 0xBDD732262FEB6E95ULL);
    CHECK(rng42.next() == 0x28EFE333B266F103ULL);
}

TEST_CASE("golden gamma constant") {
    CHECK(kGoldenGamma == 0x9E3779B97F4A7C15ULL);
}

TEST_CASE("next_below reduces by modulo") {
    SplitMix64 a(7), b(7);
    for (int i = 0; i < 100; ++i) {
        std::uint64_t raw = a.next();
        CHECK(b.next_below(10) == raw % 10);
    }
}

TEST_CASE("next_double uses the top 53 bits and stays in [0, 1)") {
    SplitMix64 rng(1);
    double d = rng.next_double();
    CHECK(d == doctest::Approx(0.5665615751722809).epsilon(1e-15));
    for (int i = 0; i < 1000; ++i) {
        double v = rng.next_double();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("generator satisfies the uniform random bit generator interface") {
    CHECK(SplitMix64::min() == 0);
    CHECK(SplitMix64::max() == ~0ULL);
    SplitMix64 rng(3);
    CHECK(rng() == SplitMix64(3).next());
}

TEST_CASE("shuffle produces a permutation, deterministically") {
    std::vector<std::uint32_t> v(100);
    for (std::uint32_t i = 0; i < 100; ++i) v[i] = i;
    SplitMix64 rng(12345);
    fisher_yates_shuffle(v, rng);

    std::vector<std::uint32_t> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (std::uint32_t i = 0; i < 100; ++i) CHECK(sorted[i] == i);

    std::vector<std::uint32_t> w(100);
    for (std::uint32_t i = 0; i < 100; ++i) w[i] = i;
    SplitMix64 rng2(12345);
    fisher_yates_shuffle(w, rng2);
    CHECK(v == w);
}

TEST_CASE("shuffle of eight ids under the epoch-stream seed, frozen") {
    // Stream seed for epoch 0 of a seed-42 run; the expected order was
    // computed once by an independent reference implementation.
    std::vector<std::uint64_t> v{0, 1, 2, 3, 4, 5, 6, 7};
    SplitMix64 rng(42 ^ (kGoldenGamma * 1));
    fisher_yates_shuffle(v, rng);
    CHECK(v == std::vector<std::uint64_t>{7, 4, 1, 2, 5, 6, 0, 3});
}

TEST_CASE("shuffle leaves empty and single-element vectors alone") {
    std::vector<int> empty;
    SplitMix64 rng(1);
    fisher_yates_shuffle(empty, rng);
    CHECK(empty.empty());
    CHECK(rng.next() == SplitMix64(1).next()); // no draws consumed

    std::vector<int> one{42};
    fisher_yates_shuffle(one, rng);
    CHECK(one == std::vector<int>{42});
}
