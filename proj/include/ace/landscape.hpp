#pragma once

// NK fitness landscapes: N binary attributes, each contributing a value that
// depends on its own state and the states of K interaction partners. Fitness
// of a configuration is the arithmetic mean of the N contributions, so it
// always lies in [0,1] and stays comparable across different N.
//
// Table lookup convention (also used by the text dump): the local pattern
// index of attribute i packs its own bit into bit 0 and the bits of its
// interaction partners, in stored order, into bits 1..k.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ace/rng.hpp"

namespace ace::nk {

/// N-bit decision vector. bits[i] is 0 or 1. Ordering comparisons are
/// lexicographic on the bit sequence.
struct Configuration {
    std::vector<std::uint8_t> bits;

    int size() const { return static_cast<int>(bits.size()); }
    std::string to_string() const;
    static Configuration from_string(std::string_view s);

    friend bool operator==(const Configuration&, const Configuration&) = default;
    friend auto operator<=>(const Configuration&, const Configuration&) = default;
};

/// Configuration whose bits spell the big-endian binary expansion of
/// `index` (bits[0] is the most significant). Enumerating index 0..2^n-1
/// therefore visits configurations in lexicographic order.
Configuration config_from_index(std::uint64_t index, int n);
std::uint64_t index_from_config(const Configuration& c);

enum class InteractionPattern {
    AdjacentCyclic,
    RandomWithoutReplacement,
    BlockDiagonal,
};

std::string_view to_string(InteractionPattern p);
InteractionPattern pattern_from_string(std::string_view s);

struct LandscapeSpec {
    int n = 0;
    int k = 0;
    InteractionPattern pattern = InteractionPattern::AdjacentCyclic;
    /// Sizes of the contiguous blocks; block-diagonal only, must sum to n.
    /// Within a block every attribute interacts with every other member,
    /// so the k field is not consulted for this pattern.
    std::vector<int> block_sizes;
    std::uint64_t seed = 0;
};

struct Landscape {
    LandscapeSpec spec;
    /// Per attribute, the co-determining attribute indices. Adjacent-cyclic
    /// stores them in cyclic order i+1..i+k (mod n); the other patterns
    /// store them ascending.
    std::vector<std::vector<int>> interaction_sets;
    /// Per attribute, 2^(1 + |interaction set|) contributions in [0,1].
    std::vector<std::vector<double>> tables;

    int n() const { return spec.n; }
};

inline constexpr int kDefaultEnumerationCap = 24;

/// Builds the landscape determined by the spec. Interaction partners are
/// sampled from substream (seed, "nk.sets", i) and contribution table
/// entries i.i.d. Uniform[0,1] from substream (seed, "nk.table", i), in
/// ascending pattern-index order, so regeneration is bit-identical.
Landscape generate(const LandscapeSpec& spec);

/// Assembles a landscape from explicit parts (validated); used by growth and
/// by the table-dump parser.
Landscape from_parts(LandscapeSpec spec,
                     std::vector<std::vector<int>> interaction_sets,
                     std::vector<std::vector<double>> tables);

/// Contribution C_i of one attribute under configuration d.
double contribution(const Landscape& l, const Configuration& d, int attribute);

/// V(d): arithmetic mean of the N contributions.
double fitness(const Landscape& l, const Configuration& d);

struct OptimumResult {
    Configuration config;
    double value = 0.0;
};

/// Exhaustive scan of all 2^n configurations; ties resolve to the
/// lexicographically smallest bit vector. Refuses n above the cap.
OptimumResult global_optimum(const Landscape& l,
                             int enumeration_cap = kDefaultEnumerationCap);

struct CensusResult {
    /// Strict local optima in lexicographic order.
    std::vector<Configuration> optima;

    int count() const { return static_cast<int>(optima.size()); }
};

/// A configuration is a local optimum iff it is strictly fitter than all n
/// one-bit-flip neighbors.
CensusResult local_optima_census(const Landscape& l,
                                 int enumeration_cap = kDefaultEnumerationCap);

/// All configurations at Hamming distance exactly `radius`, ordered by the
/// lexicographic sequence of flipped index sets.
std::vector<Configuration> hamming_neighbors(const Configuration& c, int radius);

/// Versioned human-readable table dump; contributions at 17 significant
/// digits so independent oracles can re-read them exactly.
std::string dump_tables(const Landscape& l);
Landscape parse_tables(std::string_view text);

}  // namespace ace::nk
