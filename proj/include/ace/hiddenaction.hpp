#pragma once

// Agentized hidden-action contracting under the LEN specialization: linear
// wage w(x) = f + p*x, production x = a + theta with theta ~ Normal, an
// exponential-utility agent with certainty equivalent
//   CE = f + p*(a + mu) - (eta/2) p^2 sigma^2 - a^2/2,
// so the continuous optimum is p* = 1/(1 + eta sigma^2), a* = p*.
//
// Both parties see only a fraction of their own decision grid, expand it one
// cell per period (adjacent to the known region, or a uniform unknown cell
// with their exploration probability), and estimate the environment from a
// FIFO memory of inferred theta observations.

#include <cstdint>
#include <vector>

#include "ace/rng.hpp"

namespace ace::ha {

struct TurbulenceMeta {
    /// At a shift, mu is re-drawn Normal(theta_mean, mu_shift_sd) and sigma
    /// re-drawn theta_sd * Uniform[sigma_factor_min, sigma_factor_max]. The
    /// default factor range keeps E[sigma^2] within ~1.5% of the stable value.
    double mu_shift_sd = 0.2;
    double sigma_factor_min = 0.45;
    double sigma_factor_max = 1.45;
};

struct HiddenActionParams {
    int effort_levels = 101;   // M grid points on [0, effort_max]
    double effort_max = 1.0;
    int premium_levels = 101;  // P grid points on [0, 1]
    double theta_mean = 0.0;
    double theta_sd = 0.4;
    std::vector<int> turbulence_periods;  // ascending; empty = stable
    TurbulenceMeta meta;
    double risk_aversion = 1.0;  // eta >= 0
    double reservation = 0.0;    // certainty-equivalent floor U
    int memory = 10;             // FIFO capacity; 0 = unbounded
    double visible_fraction_principal = 0.2;
    double visible_fraction_agent = 0.2;
    double explore_prob_principal = 0.1;  // q: distant vs adjacent expansion
    double explore_prob_agent = 0.1;
};

void validate(const HiddenActionParams& params);

/// Schedule with a shift every `every` periods, inside [1, horizon].
std::vector<int> periodic_schedule(int every, int horizon);

double premium_value(const HiddenActionParams& params, int cell);
double effort_value(const HiddenActionParams& params, int cell);

/// Agent certainty equivalent under an environment estimate.
double agent_ce(double fixed, double premium, double effort, double eta,
                double mu, double var);

struct OracleResult {
    double premium = 0.0;   // grid optimum
    double fixed = 0.0;
    double effort = 0.0;    // agent grid best response at that premium
    double expected_net = 0.0;
    double closed_premium = 0.0;  // 1/(1 + eta sigma^2), for cross-checks
    double closed_effort = 0.0;
};

/// Exhaustive scan over the premium grid with the agent's grid best
/// response and a binding participation constraint; ties resolve to the
/// lower premium / lower effort.
OracleResult second_best_oracle(const HiddenActionParams& params);

struct PeriodRow {
    int t = 0;
    bool accepted = false;
    double premium = 0.0;
    double fixed = 0.0;
    double effort = 0.0;   // 0 in rejection periods
    double theta = 0.0;    // 0 in rejection periods (nothing produced)
    double outcome = 0.0;
    double principal_net = 0.0;
    double agent_ce_est = 0.0;  // agent's estimated CE of its decision
    int visible_premiums = 0;
    int visible_efforts = 0;
    int regime = 0;  // turbulence segment id
};

std::vector<PeriodRow> simulate(const HiddenActionParams& params, int horizon,
                                RandomStream& stream);

/// Stable fingerprint of the parameter set; classification refuses mixed
/// batches.
std::uint64_t params_fingerprint(const HiddenActionParams& params);

struct RunOutcome {
    std::uint64_t fingerprint = 0;
    double final_premium = 0.0;
};

struct ContractShares {
    double below = 0.0;
    double at = 0.0;
    double above = 0.0;
    int runs = 0;
};

/// Buckets final premiums against the grid-oracle optimum with a tolerance
/// of `tolerance_cells` grid cells.
ContractShares classify_emergent_contracts(const std::vector<RunOutcome>& runs,
                                           const HiddenActionParams& params,
                                           int tolerance_cells = 1);

}  // namespace ace::ha
