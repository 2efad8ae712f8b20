#pragma once

// Stepwise, boundedly rational search over configurations. A strategy
// discovers a limited candidate set near the current configuration (local
// flips, long jumps, or a probabilistic mix) and a chooser adopts a
// candidate only when its perceived value strictly beats the perceived
// status quo; ties and declines keep the status quo.

#include <functional>
#include <span>
#include <vector>

#include "ace/landscape.hpp"
#include "ace/rng.hpp"

namespace ace::search {

using nk::Configuration;

enum class StrategyKind { SteepestAscent, FirstImprovement, LongJump, Ambidextrous };

struct SearchStrategy {
    StrategyKind kind = StrategyKind::SteepestAscent;
    int discovery_budget = 1;
    int local_radius = 1;
    /// Minimum Hamming distance qualifying as a long jump; 0 selects the
    /// default max(2, floor(n/2)) of the searched index set.
    int jump_radius_min = 0;
    double p_explore = 0.0;  // ambidextrous only
};

void validate(const SearchStrategy& s);

/// Perceived value = true value + Gaussian noise, drawn fresh per
/// evaluation. sigma == 0 evaluates exactly and consumes no draws.
struct NoisyEvaluator {
    std::function<double(const Configuration&)> value;
    double sigma = 0.0;

    double perceive(const Configuration& c, RandomStream& stream) const {
        const double v = value(c);
        return sigma > 0.0 ? v + stream.next_normal(0.0, sigma) : v;
    }
};

/// Discovers up to `discovery_budget` distinct candidates differing from
/// `current` only in `free_indices`. Distances are Hamming distances over
/// the free indices. Local candidates are uniform over distances 1..
/// local_radius; long jumps uniform over distances >= jump_radius_min;
/// ambidextrous picks the long-jump sampler per candidate with probability
/// p_explore. The budget is capped by the number of reachable
/// configurations, never an error.
std::vector<Configuration> discover(const SearchStrategy& strategy,
                                    const Configuration& current,
                                    std::span<const int> free_indices,
                                    RandomStream& stream);

/// Convenience overload over all indices of `current`.
std::vector<Configuration> discover(const SearchStrategy& strategy,
                                    const Configuration& current,
                                    RandomStream& stream);

struct ChoiceResult {
    Configuration config;
    bool moved = false;
    double perceived_current = 0.0;
};

/// Re-evaluates the status quo through the evaluator, then the candidates in
/// discovery order. SteepestAscent (also LongJump/Ambidextrous) adopts the
/// best strictly improving candidate; FirstImprovement adopts the first one
/// and evaluates no further. Equal perceived value keeps the status quo.
ChoiceResult choose(const Configuration& current,
                    const std::vector<Configuration>& candidates,
                    const NoisyEvaluator& evaluator, StrategyKind kind,
                    RandomStream& stream);

struct ClimbResult {
    Configuration config;
    int steps = 0;                   // steps until no further move
    std::vector<double> trajectory;  // true values, length steps+1
};

/// Iterates discover+choose until a step keeps the status quo or
/// `max_steps` is reached. Used by tests and the plain-search study.
ClimbResult climb(const nk::Landscape& landscape, const SearchStrategy& strategy,
                  const NoisyEvaluator& evaluator, Configuration start,
                  int max_steps, RandomStream& stream);

}  // namespace ace::search
