#pragma once

// A multi-unit firm searching one shared NK landscape. Each unit owns a
// contiguous block of attributes and discovers candidates only over its own
// bits; the coordination mode decides how unit choices combine into the next
// firm configuration:
//   decentralized      all units move simultaneously against the status quo
//   sequential-lateral units move in order, each seeing earlier announcements
//   hierarchical       headquarters implements at most the one proposal whose
//                      perceived firm fitness strictly beats the status quo

#include <vector>

#include "ace/landscape.hpp"
#include "ace/rng.hpp"
#include "ace/search.hpp"

namespace ace::org {

using nk::Configuration;
using nk::Landscape;
using search::SearchStrategy;

struct OrgUnit {
    int first = 0;
    int count = 0;
};

struct OrgDesign {
    std::vector<OrgUnit> units;  // contiguous ascending blocks partitioning 0..n-1
    bool headquarters = false;
    /// Weight on the own-block contribution mean vs. the mean over all other
    /// blocks in a unit's objective; 1 = pure own-block performance.
    double incentive_weight = 1.0;
};

/// Org with `sizes` contiguous unit blocks in order.
OrgDesign make_org(const std::vector<int>& sizes, bool headquarters,
                   double incentive_weight = 1.0);

void validate(const OrgDesign& org, int n);

enum class CoordinationMode { Decentralized, SequentialLateral, Hierarchical };

std::string_view to_string(CoordinationMode m);
CoordinationMode mode_from_string(std::string_view s);

enum class TaskComplexity { Decomposable, NonDecomposable };

/// Decomposable requires a block-diagonal landscape aligned with the unit
/// blocks; non-decomposable requires full interaction (k = n-1 everywhere).
void validate_complexity(const OrgDesign& org, const Landscape& landscape,
                         TaskComplexity complexity);

struct OrgParams {
    double sigma_eval = 0.0;    // evaluation noise of units and headquarters
    double comm_error = 0.0;    // per-bit flip probability on announcements
    bool hq_implement_all = false;  // variant: implement every approved proposal
};

/// w * mean(C_i over own block) + (1-w) * mean(C_i over the other blocks);
/// the second term is 0 for a single-unit org.
double unit_objective(const OrgDesign& org, int unit, const Landscape& landscape,
                      const Configuration& config);

struct UnitDecision {
    int unit = 0;
    bool moved = false;        // unit proposed a change to its block
    bool implemented = false;  // change is present in the composite
    Configuration proposal;    // full configuration the unit proposed
};

struct OrgStepResult {
    Configuration config;
    std::vector<UnitDecision> decisions;
};

OrgStepResult org_step(const OrgDesign& org, CoordinationMode mode,
                       const Landscape& landscape, const SearchStrategy& strategy,
                       const OrgParams& params, const Configuration& current,
                       RandomStream& stream);

struct OrgRow {
    int period = 0;
    double v = 0.0;
    Configuration config;
    std::vector<double> unit_objectives;  // true (noise-free) values
};

/// Fixed-increment simulation: row 0 is the initial state, then one row per
/// period after the org step.
std::vector<OrgRow> run_org(const OrgDesign& org, CoordinationMode mode,
                            const Landscape& landscape,
                            const SearchStrategy& strategy, const OrgParams& params,
                            int periods, const Configuration& initial,
                            RandomStream& stream);

/// Uniformly random initial configuration for an n-attribute landscape.
Configuration random_configuration(int n, RandomStream& stream);

}  // namespace ace::org
