#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "ace/rng.hpp"

using ace::RandomStream;
using ace::derive_seed;
using ace::substream;

TEST_CASE("streams replay bit-identically from the same seed") {
    RandomStream a(12345), b(12345);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("derive_seed separates labels and indices") {
    std::set<std::uint64_t> seeds;
    for (std::uint64_t master : {0ull, 1ull, 42ull})
        for (const char* label : {"a", "b", "nk.table"})
            for (std::uint64_t index : {0ull, 1ull, 7ull})
                seeds.insert(derive_seed(master, label, index));
    CHECK(seeds.size() == 3u * 3u * 3u);

    // Same coordinates, same stream.
    CHECK(derive_seed(9, "x", 3) == derive_seed(9, "x", 3));
}

TEST_CASE("substreams are insensitive to other streams' consumption") {
    RandomStream a = substream(7, "alpha", 0);
    const auto first = a.next_u64();

    RandomStream noise = substream(7, "beta", 0);
    for (int i = 0; i < 100; ++i) noise.next_u64();

    RandomStream a2 = substream(7, "alpha", 0);
    CHECK(a2.next_u64() == first);
}

TEST_CASE("next_unit stays in [0,1) and fills the range") {
    RandomStream s(99);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double u = s.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo < 0.01);
    CHECK(hi > 0.99);
}

TEST_CASE("next_normal consumes exactly two draws and has sane moments") {
    RandomStream s(5);
    RandomStream mirror(5);
    (void)s.next_normal(0.0, 1.0);
    mirror.next_u64();
    mirror.next_u64();
    CHECK(s.state() == mirror.state());

    RandomStream t(17);
    double sum = 0.0, sq = 0.0;
    const int n = 50000;
    for (int i = 0; i < n; ++i) {
        const double z = t.next_normal(2.0, 3.0);
        sum += z;
        sq += z * z;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(mean == doctest::Approx(2.0).epsilon(0.02));
    CHECK(var == doctest::Approx(9.0).epsilon(0.05));
}

TEST_CASE("next_below is bounded and covers all residues") {
    RandomStream s(3);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const auto v = s.next_below(7);
        CHECK(v < 7);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);
}
