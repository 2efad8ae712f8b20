#pragma once

// Mid- and long-term adaptation around the organization's short-term search:
// every L periods the headquarters reviews the coordination mode with a
// propensity update (reinforcement with forgetting and a positivity floor),
// and at scheduled growth events the task and the org gain a fresh unit.

#include <array>
#include <vector>

#include "ace/organization.hpp"

namespace ace::adapt {

using nk::Configuration;
using nk::Landscape;
using org::CoordinationMode;
using org::OrgDesign;
using org::TaskComplexity;

inline constexpr int kModeCount = 3;

struct Propensities {
    std::array<double, kModeCount> weights{1.0, 1.0, 1.0};
};

std::array<double, kModeCount> selection_probabilities(const Propensities& p);

struct LearningParams {
    int interval = 10;        // L: periods between mode reviews
    double gain = 1.0;        // lambda
    double forgetting = 0.0;  // phi in [0,1)
    double floor = 1e-3;      // epsilon > 0: weights never fall below this
};

void validate(const LearningParams& p);

struct ReviewResult {
    Propensities propensities;
    CoordinationMode next_mode;
};

/// Reward is the non-negative fitness improvement over the review window,
/// normalized by the window-start level: r = max(0, v_end - v_start) /
/// max(v_start, 1e-9). The used mode's weight gets (1-phi)*w + lambda*r,
/// every other weight decays to (1-phi)*w, all clamped to the floor; the
/// next mode is drawn proportionally to the updated weights (one draw).
ReviewResult review_mode(Propensities propensities, const LearningParams& params,
                         double v_start, double v_end, CoordinationMode used,
                         RandomStream& stream);

struct GrowthEvent {
    int period = 0;
    int n_add = 1;  // attributes added, assembled into one new unit
};

void validate_schedule(const std::vector<GrowthEvent>& schedule);

struct GrowthResult {
    OrgDesign org;
    Landscape landscape;
};

/// Extends the task by one unit of n_add attributes. Decomposable growth
/// keeps every existing contribution table bit-identical and draws only the
/// new block's tables from the stream; non-decomposable growth re-draws all
/// tables at k = n_new - 1 (attribute-ascending, pattern-ascending order).
GrowthResult grow(const OrgDesign& org, const Landscape& landscape,
                  TaskComplexity complexity, const GrowthEvent& event,
                  RandomStream& stream);

/// New attributes start as fresh random bits (or zeros when zero_init).
Configuration extend_configuration(const Configuration& config, int n_add,
                                   bool zero_init, RandomStream& stream);

struct GrowthStudySetup {
    OrgDesign org;
    Landscape landscape;
    TaskComplexity complexity = TaskComplexity::NonDecomposable;
    search::SearchStrategy strategy;
    org::OrgParams org_params;
    LearningParams learning;
    Propensities initial_propensities;
    std::vector<GrowthEvent> schedule;
    int horizon = 100;
    bool zero_init_new_bits = false;
};

struct GrowthRow {
    int period = 0;
    CoordinationMode mode = CoordinationMode::Decentralized;
    double v = 0.0;
    Configuration config;
    std::array<double, kModeCount> weights{};
    int n = 0;
    int units = 0;
};

/// Runs the three nested processes: per period an org step under the active
/// mode, a mode review every L periods (new mode effective next period, the
/// review window restarting), and scheduled growth (which also restarts the
/// review window, since the landscape changed under the incumbent mode).
/// The initial mode is drawn from the initial propensities; the initial
/// configuration is random. Row 0 is the initial state.
std::vector<GrowthRow> run_growth_study(const GrowthStudySetup& setup,
                                        RandomStream& stream);

}  // namespace ace::adapt
