#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "ace/landscape.hpp"

using namespace ace;
using nk::Configuration;
using nk::InteractionPattern;
using nk::Landscape;
using nk::LandscapeSpec;

namespace {

// Independent table oracle: reads the text dump with its own parser and its
// own pattern-index arithmetic, never touching the Landscape accessors.
struct DumpOracle {
    int n = 0;
    std::map<int, std::vector<int>> partners;
    std::map<std::pair<int, int>, double> entries;

    explicit DumpOracle(const std::string& dump) {
        std::istringstream is(dump);
        std::string line;
        while (std::getline(is, line)) {
            std::istringstream ls(line);
            std::string kw;
            ls >> kw;
            if (kw == "n") {
                ls >> n;
            } else if (kw == "interactions") {
                int i;
                std::string colon;
                ls >> i >> colon;
                int j;
                while (ls >> j) partners[i].push_back(j);
            } else if (kw == "table") {
                int i, p;
                std::string v;
                ls >> i >> p >> v;
                entries[{i, p}] = std::strtod(v.c_str(), nullptr);
            }
        }
    }

    double contribution(const std::vector<int>& bits, int attribute) const {
        int index = bits[attribute];
        const auto& ps = partners.at(attribute);
        for (std::size_t t = 0; t < ps.size(); ++t)
            index |= bits[ps[t]] << (t + 1);
        return entries.at({attribute, index});
    }

    double fitness(const std::vector<int>& bits) const {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) sum += contribution(bits, i);
        return sum / n;
    }
};

Landscape constant_landscape(int n, double value) {
    LandscapeSpec spec{n, 0, InteractionPattern::AdjacentCyclic, {}, 0};
    std::vector<std::vector<int>> sets(n);
    std::vector<std::vector<double>> tables(n, std::vector<double>{value, value});
    return nk::from_parts(spec, sets, tables);
}

}  // namespace

TEST_CASE("generate: k=0 gives empty interaction sets and 2-entry tables") {
    auto l = nk::generate({4, 0, InteractionPattern::AdjacentCyclic, {}, 1});
    for (int i = 0; i < 4; ++i) {
        CHECK(l.interaction_sets[i].empty());
        CHECK(l.tables[i].size() == 2);
    }
}

TEST_CASE("generate: k=n-1 gives full interaction and 16-entry tables at n=4") {
    for (auto pattern : {InteractionPattern::AdjacentCyclic,
                         InteractionPattern::RandomWithoutReplacement}) {
        auto l = nk::generate({4, 3, pattern, {}, 9});
        for (int i = 0; i < 4; ++i) {
            CHECK(l.interaction_sets[i].size() == 3);
            CHECK(l.tables[i].size() == 16);
        }
    }
}

TEST_CASE("generate: adjacent-cyclic wraps around") {
    auto l = nk::generate({6, 1, InteractionPattern::AdjacentCyclic, {}, 5});
    // Last attribute's single partner is the first attribute.
    CHECK(l.interaction_sets[5] == std::vector<int>{0});
}

TEST_CASE("generate: block-diagonal structure and table sizes") {
    LandscapeSpec spec{5, 0, InteractionPattern::BlockDiagonal, {2, 3}, 11};
    auto l = nk::generate(spec);
    CHECK(l.interaction_sets[0] == std::vector<int>{1});
    CHECK(l.interaction_sets[1] == std::vector<int>{0});
    CHECK(l.interaction_sets[2] == std::vector<int>{3, 4});
    CHECK(l.tables[0].size() == 4);   // 2^blocksize
    CHECK(l.tables[2].size() == 8);
}

TEST_CASE("generate: invalid specs are rejected") {
    CHECK_THROWS_AS((void)nk::generate({0, 0, InteractionPattern::AdjacentCyclic, {}, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)nk::generate({4, 4, InteractionPattern::AdjacentCyclic, {}, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)nk::generate({4, -1, InteractionPattern::AdjacentCyclic, {}, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        (void)nk::generate({4, 0, InteractionPattern::BlockDiagonal, {2, 3}, 0}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        (void)nk::generate({4, 0, InteractionPattern::BlockDiagonal, {}, 0}),
        std::invalid_argument);
}

TEST_CASE("generate is deterministic") {
    LandscapeSpec spec{8, 3, InteractionPattern::RandomWithoutReplacement, {}, 77};
    auto a = nk::generate(spec);
    auto b = nk::generate(spec);
    CHECK(a.interaction_sets == b.interaction_sets);
    CHECK(a.tables == b.tables);
}

TEST_CASE("fitness: constant tables give the constant") {
    auto l = constant_landscape(5, 0.5);
    CHECK(nk::fitness(l, Configuration::from_string("00000")) == 0.5);
    CHECK(nk::fitness(l, Configuration::from_string("10101")) == 0.5);
}

TEST_CASE("fitness: hand-built 2-attribute landscape") {
    LandscapeSpec spec{2, 0, InteractionPattern::AdjacentCyclic, {}, 0};
    auto l = nk::from_parts(spec, {{}, {}}, {{0.0, 1.0}, {0.0, 1.0}});
    CHECK(nk::fitness(l, Configuration::from_string("11")) == 1.0);
    CHECK(nk::fitness(l, Configuration::from_string("00")) == 0.0);
    CHECK(nk::fitness(l, Configuration::from_string("10")) == 0.5);
}

TEST_CASE("fitness: length mismatch is an error") {
    auto l = constant_landscape(4, 0.5);
    CHECK_THROWS_AS((void)nk::fitness(l, Configuration::from_string("00000")),
                    std::invalid_argument);
}

TEST_CASE("fitness matches an independent read of the table dump") {
    // n=4, k=1 adjacent-cyclic, seed 42, d = 0101.
    auto l = nk::generate({4, 1, InteractionPattern::AdjacentCyclic, {}, 42});
    DumpOracle oracle(nk::dump_tables(l));
    const std::vector<int> bits{0, 1, 0, 1};
    const double expected = oracle.fitness(bits);
    CHECK(nk::fitness(l, Configuration::from_string("0101")) ==
          doctest::Approx(expected).epsilon(1e-15));

    // And across random configurations of a rugged landscape.
    auto r = nk::generate({9, 4, InteractionPattern::RandomWithoutReplacement, {}, 3});
    DumpOracle roracle(nk::dump_tables(r));
    RandomStream s(1);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> b(9);
        Configuration c;
        for (auto& x : b) x = static_cast<int>(s.next_below(2));
        for (int x : b) c.bits.push_back(static_cast<std::uint8_t>(x));
        CHECK(nk::fitness(r, c) == doctest::Approx(roracle.fitness(b)).epsilon(1e-15));
    }
}

TEST_CASE("global_optimum: constant tables tie-break to the zero vector") {
    auto l = constant_landscape(6, 0.5);
    auto opt = nk::global_optimum(l);
    CHECK(opt.config == Configuration::from_string("000000"));
    CHECK(opt.value == 0.5);
}

TEST_CASE("global_optimum: separable k=0 landscape picks per-bit maxima") {
    LandscapeSpec spec{3, 0, InteractionPattern::AdjacentCyclic, {}, 0};
    auto l = nk::from_parts(spec, {{}, {}, {}},
                            {{0.2, 0.9}, {0.1, 0.4}, {0.3, 0.8}});
    auto opt = nk::global_optimum(l);
    CHECK(opt.config == Configuration::from_string("111"));
    CHECK(opt.value == doctest::Approx((0.9 + 0.4 + 0.8) / 3));
}

TEST_CASE("global_optimum agrees with an independent enumeration of the dump") {
    auto l = nk::generate({10, 3, InteractionPattern::AdjacentCyclic, {}, 7});
    DumpOracle oracle(nk::dump_tables(l));

    double best = -1.0;
    std::vector<int> best_bits;
    for (int u = 0; u < (1 << 10); ++u) {
        std::vector<int> bits(10);
        for (int i = 0; i < 10; ++i) bits[i] = (u >> (9 - i)) & 1;
        const double v = oracle.fitness(bits);
        if (v > best) {
            best = v;
            best_bits = bits;
        }
    }
    auto opt = nk::global_optimum(l);
    CHECK(opt.value == doctest::Approx(best).epsilon(1e-15));
    for (int i = 0; i < 10; ++i) CHECK(opt.config.bits[i] == best_bits[i]);
}

TEST_CASE("global_optimum refuses n over the cap") {
    auto l = constant_landscape(6, 0.5);
    CHECK_THROWS_AS((void)nk::global_optimum(l, 5), std::invalid_argument);
    CHECK_THROWS_AS((void)nk::local_optima_census(l, 5), std::invalid_argument);
}

TEST_CASE("census: k=0 landscapes are single-peaked") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        for (int n = 2; n <= 10; n += 2) {
            auto l = nk::generate({n, 0, InteractionPattern::AdjacentCyclic, {}, seed});
            auto census = nk::local_optima_census(l);
            REQUIRE(census.count() == 1);
            CHECK(census.optima[0] == nk::global_optimum(l).config);
        }
    }
}

TEST_CASE("census: constant tables have no strict optimum") {
    auto l = constant_landscape(5, 0.5);
    CHECK(nk::local_optima_census(l).count() == 0);
}

TEST_CASE("census: ruggedness grows with k at n=10") {
    const int seeds = 100;
    double mean_k9 = 0.0, mean_k5 = 0.0;
    for (std::uint64_t seed = 0; seed < seeds; ++seed) {
        mean_k9 += nk::local_optima_census(
                       nk::generate({10, 9, InteractionPattern::AdjacentCyclic, {},
                                     seed}))
                       .count();
        mean_k5 += nk::local_optima_census(
                       nk::generate({10, 5, InteractionPattern::AdjacentCyclic, {},
                                     seed}))
                       .count();
    }
    mean_k9 /= seeds;
    mean_k5 /= seeds;
    CHECK(mean_k9 > mean_k5);
    CHECK(mean_k5 > 1.0);
}

TEST_CASE("census members beat every neighbor; the optimum dominates all") {
    auto l = nk::generate({8, 4, InteractionPattern::RandomWithoutReplacement, {}, 21});
    auto census = nk::local_optima_census(l);
    auto opt = nk::global_optimum(l);
    for (const auto& c : census.optima) {
        const double v = nk::fitness(l, c);
        CHECK(v <= opt.value);
        for (const auto& nb : nk::hamming_neighbors(c, 1))
            CHECK(v > nk::fitness(l, nb));
    }
}

TEST_CASE("hamming_neighbors: radius 1 flips each bit in order") {
    auto nbs = nk::hamming_neighbors(Configuration::from_string("000"), 1);
    REQUIRE(nbs.size() == 3);
    CHECK(nbs[0] == Configuration::from_string("100"));
    CHECK(nbs[1] == Configuration::from_string("010"));
    CHECK(nbs[2] == Configuration::from_string("001"));
}

TEST_CASE("hamming_neighbors: radius n is the complement") {
    auto nbs = nk::hamming_neighbors(Configuration::from_string("0110"), 4);
    REQUIRE(nbs.size() == 1);
    CHECK(nbs[0] == Configuration::from_string("1001"));
}

TEST_CASE("hamming_neighbors: counts follow binomials") {
    auto c = Configuration::from_string("00000");
    CHECK(nk::hamming_neighbors(c, 2).size() == 10);
    CHECK(nk::hamming_neighbors(c, 3).size() == 10);
    auto two = nk::hamming_neighbors(Configuration::from_string("01"), 1);
    REQUIRE(two.size() == 2);
    CHECK(two[0] == Configuration::from_string("11"));
    CHECK(two[1] == Configuration::from_string("00"));
}

TEST_CASE("fitness stays within [0,1] and below the optimum") {
    auto l = nk::generate({10, 6, InteractionPattern::RandomWithoutReplacement, {}, 13});
    auto opt = nk::global_optimum(l);
    for (int u = 0; u < (1 << 10); ++u) {
        const double v = nk::fitness(l, nk::config_from_index(u, 10));
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(v <= opt.value);
    }
}

TEST_CASE("table dump round-trips bit-exactly") {
    auto l = nk::generate({7, 2, InteractionPattern::RandomWithoutReplacement, {}, 123});
    auto back = nk::parse_tables(nk::dump_tables(l));
    CHECK(back.spec.n == l.spec.n);
    CHECK(back.spec.k == l.spec.k);
    CHECK(back.spec.seed == l.spec.seed);
    CHECK(back.interaction_sets == l.interaction_sets);
    REQUIRE(back.tables.size() == l.tables.size());
    for (std::size_t i = 0; i < l.tables.size(); ++i) {
        REQUIRE(back.tables[i].size() == l.tables[i].size());
        for (std::size_t p = 0; p < l.tables[i].size(); ++p)
            CHECK(back.tables[i][p] == l.tables[i][p]);  // bit-exact
    }
}

TEST_CASE("configuration index mapping is big-endian and invertible") {
    CHECK(nk::config_from_index(0b1011, 4) == Configuration::from_string("1011"));
    for (int u = 0; u < 32; ++u)
        CHECK(nk::index_from_config(nk::config_from_index(u, 5)) ==
              static_cast<std::uint64_t>(u));
}
