#include "ace/hiddenaction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <stdexcept>
#include <string>

namespace ace::ha {

namespace {

// Binding-constraint comparisons tolerate the rounding of U - x + x.
constexpr double kBindTol = 1e-9;

}  // namespace

void validate(const HiddenActionParams& params) {
    if (params.effort_levels < 2 || params.premium_levels < 2)
        throw std::invalid_argument("effort and premium grids need >= 2 levels");
    if (params.effort_max <= 0.0)
        throw std::invalid_argument("effort_max must be positive");
    if (params.theta_sd < 0.0) throw std::invalid_argument("theta_sd must be >= 0");
    if (params.risk_aversion < 0.0)
        throw std::invalid_argument("risk aversion must be >= 0");
    if (params.memory < 0) throw std::invalid_argument("memory must be >= 0");
    for (double v : {params.visible_fraction_principal, params.visible_fraction_agent})
        if (v <= 0.0 || v > 1.0)
            throw std::invalid_argument("visible fractions must lie in (0,1]");
    for (double q : {params.explore_prob_principal, params.explore_prob_agent})
        if (q < 0.0 || q > 1.0)
            throw std::invalid_argument("exploration probabilities must lie in [0,1]");
    int last = 0;
    for (int t : params.turbulence_periods) {
        if (t <= last)
            throw std::invalid_argument("turbulence periods must be strictly ascending");
        last = t;
    }
    if (params.meta.sigma_factor_min < 0.0 ||
        params.meta.sigma_factor_max < params.meta.sigma_factor_min)
        throw std::invalid_argument("invalid sigma factor range");
}

std::vector<int> periodic_schedule(int every, int horizon) {
    if (every < 1) throw std::invalid_argument("shift interval must be >= 1");
    std::vector<int> periods;
    for (int t = every; t <= horizon; t += every) periods.push_back(t);
    return periods;
}

double premium_value(const HiddenActionParams& params, int cell) {
    return static_cast<double>(cell) / (params.premium_levels - 1);
}

double effort_value(const HiddenActionParams& params, int cell) {
    return params.effort_max * cell / (params.effort_levels - 1);
}

double agent_ce(double fixed, double premium, double effort, double eta,
                double mu, double var) {
    return fixed + premium * (effort + mu) -
           0.5 * eta * premium * premium * var - 0.5 * effort * effort;
}

namespace {

/// Effort grid cell maximizing p*a - a^2/2 (the CE terms that depend on a);
/// ties resolve to the lower cell.
int best_effort_cell(const HiddenActionParams& params, double premium) {
    int best = 0;
    double best_v = premium * effort_value(params, 0) -
                    0.5 * effort_value(params, 0) * effort_value(params, 0);
    for (int j = 1; j < params.effort_levels; ++j) {
        const double a = effort_value(params, j);
        const double v = premium * a - 0.5 * a * a;
        if (v > best_v) {
            best_v = v;
            best = j;
        }
    }
    return best;
}

/// Fixed payment making the agent's estimated participation constraint bind
/// for response effort a: CE(f, p, a) = reservation.
double binding_fixed(const HiddenActionParams& params, double premium,
                     double effort, double mu, double var) {
    return params.reservation -
           (premium * (effort + mu) -
            0.5 * params.risk_aversion * premium * premium * var -
            0.5 * effort * effort);
}

double expected_net(double premium, double effort, double fixed, double mu) {
    return (1.0 - premium) * (effort + mu) - fixed;
}

}  // namespace

OracleResult second_best_oracle(const HiddenActionParams& params) {
    validate(params);
    const double mu = params.theta_mean;
    const double var = params.theta_sd * params.theta_sd;

    OracleResult result;
    bool have = false;
    for (int i = 0; i < params.premium_levels; ++i) {
        const double p = premium_value(params, i);
        const int aj = best_effort_cell(params, p);
        const double a = effort_value(params, aj);
        const double f = binding_fixed(params, p, a, mu, var);
        const double net = expected_net(p, a, f, mu);
        if (!have || net > result.expected_net) {
            have = true;
            result.premium = p;
            result.effort = a;
            result.fixed = f;
            result.expected_net = net;
        }
    }
    const double denom = 1.0 + params.risk_aversion * var;
    result.closed_premium = 1.0 / denom;
    result.closed_effort = result.closed_premium;
    return result;
}

namespace {

/// One party's view of its own decision grid plus its environment estimate.
struct Party {
    std::vector<std::uint8_t> visible;
    std::deque<double> memory;
    std::size_t capacity = 0;  // 0 = unbounded
    double est_mu = 0.0;
    double est_var = 0.0;
    double prior_mu = 0.0;
    double prior_var = 0.0;
    double explore_prob = 0.0;

    int visible_count() const {
        int c = 0;
        for (auto v : visible) c += v;
        return c;
    }

    void observe(double theta_hat) {
        memory.push_back(theta_hat);
        if (capacity > 0 && memory.size() > capacity) memory.pop_front();
        double sum = 0.0;
        for (double v : memory) sum += v;
        est_mu = sum / memory.size();
        if (memory.size() >= 2) {
            double ss = 0.0;
            for (double v : memory) ss += (v - est_mu) * (v - est_mu);
            est_var = ss / (memory.size() - 1);
        } else {
            est_var = prior_var;
        }
    }

    /// Reveals one more cell: with explore_prob a uniform unknown cell,
    /// otherwise a uniform unknown cell adjacent to the known region
    /// (falling back to uniform unknown if the frontier is empty).
    void expand(RandomStream& stream) {
        std::vector<int> unknown, frontier;
        const int n = static_cast<int>(visible.size());
        for (int i = 0; i < n; ++i) {
            if (visible[i]) continue;
            unknown.push_back(i);
            const bool adj = (i > 0 && visible[i - 1]) || (i + 1 < n && visible[i + 1]);
            if (adj) frontier.push_back(i);
        }
        if (unknown.empty()) return;
        const bool distant = stream.next_unit() < explore_prob;
        const auto& pool = (!distant && !frontier.empty()) ? frontier : unknown;
        visible[pool[stream.next_below(pool.size())]] = 1;
    }
};

Party make_party(int grid_size, double fraction, double q, double prior_mu,
                 double prior_var, int memory_capacity, RandomStream& stream) {
    Party p;
    p.visible.assign(grid_size, 0);
    p.capacity = memory_capacity;
    p.prior_mu = p.est_mu = prior_mu;
    p.prior_var = p.est_var = prior_var;
    p.explore_prob = q;
    int count = std::clamp(static_cast<int>(std::lround(fraction * grid_size)), 1,
                           grid_size);
    // Partial Fisher-Yates over the cell indices.
    std::vector<int> cells(grid_size);
    for (int i = 0; i < grid_size; ++i) cells[i] = i;
    for (int t = 0; t < count; ++t) {
        const auto pick = t + static_cast<int>(stream.next_below(cells.size() - t));
        std::swap(cells[t], cells[pick]);
        p.visible[cells[t]] = 1;
    }
    return p;
}

}  // namespace

std::vector<PeriodRow> simulate(const HiddenActionParams& params, int horizon,
                                RandomStream& stream) {
    validate(params);
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");

    const double eta = params.risk_aversion;
    double mu_true = params.theta_mean;
    double sd_true = params.theta_sd;
    int regime = 0;

    Party principal = make_party(params.premium_levels,
                                 params.visible_fraction_principal,
                                 params.explore_prob_principal, params.theta_mean,
                                 params.theta_sd * params.theta_sd, params.memory,
                                 stream);
    Party agent = make_party(params.effort_levels, params.visible_fraction_agent,
                             params.explore_prob_agent, params.theta_mean,
                             params.theta_sd * params.theta_sd, params.memory,
                             stream);

    auto next_turbulence = params.turbulence_periods.begin();

    std::vector<PeriodRow> rows;
    rows.reserve(horizon);
    for (int t = 1; t <= horizon; ++t) {
        if (next_turbulence != params.turbulence_periods.end() &&
            *next_turbulence == t) {
            mu_true = stream.next_normal(params.theta_mean, params.meta.mu_shift_sd);
            sd_true = params.theta_sd *
                      (params.meta.sigma_factor_min +
                       stream.next_unit() * (params.meta.sigma_factor_max -
                                             params.meta.sigma_factor_min));
            ++regime;
            ++next_turbulence;
        }

        // (1) Principal: reveal one more premium cell, then offer the visible
        // premium with the best estimated net outcome, believing the agent
        // best-responds on the full effort grid.
        principal.expand(stream);
        int offer_cell = -1;
        double offer_net = 0.0;
        for (int i = 0; i < params.premium_levels; ++i) {
            if (!principal.visible[i]) continue;
            const double p = premium_value(params, i);
            const double a =
                effort_value(params, best_effort_cell(params, p));
            const double f = binding_fixed(params, p, a, principal.est_mu,
                                           principal.est_var);
            const double net = expected_net(p, a, f, principal.est_mu);
            if (offer_cell < 0 || net > offer_net) {
                offer_cell = i;
                offer_net = net;
            }
        }
        const double premium = premium_value(params, offer_cell);
        const double belief_effort =
            effort_value(params, best_effort_cell(params, premium));
        const double fixed = binding_fixed(params, premium, belief_effort,
                                           principal.est_mu, principal.est_var);

        PeriodRow row;
        row.t = t;
        row.premium = premium;
        row.fixed = fixed;
        row.regime = regime;

        // (2) Agent: accept when the best visible effort's estimated CE
        // clears the reservation level, then reveal one more effort cell and
        // pick the visible CE maximizer.
        auto best_visible_ce = [&](int* cell) {
            double best = 0.0;
            int best_j = -1;
            for (int j = 0; j < params.effort_levels; ++j) {
                if (!agent.visible[j]) continue;
                const double ce = agent_ce(fixed, premium, effort_value(params, j),
                                           eta, agent.est_mu, agent.est_var);
                if (best_j < 0 || ce > best) {
                    best_j = j;
                    best = ce;
                }
            }
            if (cell) *cell = best_j;
            return best;
        };
        const double ce_check = best_visible_ce(nullptr);
        if (ce_check < params.reservation - kBindTol) {
            row.accepted = false;
            row.agent_ce_est = ce_check;
            row.visible_premiums = principal.visible_count();
            row.visible_efforts = agent.visible_count();
            rows.push_back(row);
            continue;  // reservation payoffs; nothing produced or observed
        }
        agent.expand(stream);
        int effort_cell = 0;
        row.agent_ce_est = best_visible_ce(&effort_cell);
        const double effort = effort_value(params, effort_cell);

        // (3) Production and payment.
        const double theta = stream.next_normal(mu_true, sd_true);
        const double outcome = effort + theta;
        const double wage = fixed + premium * outcome;

        row.accepted = true;
        row.effort = effort;
        row.theta = theta;
        row.outcome = outcome;
        row.principal_net = outcome - wage;

        // (4) Memory updates from inferred theta.
        agent.observe(outcome - effort);
        principal.observe(outcome - belief_effort);

        row.visible_premiums = principal.visible_count();
        row.visible_efforts = agent.visible_count();
        rows.push_back(row);
    }
    return rows;
}

std::uint64_t params_fingerprint(const HiddenActionParams& params) {
    std::string repr;
    char buf[64];
    auto add = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g;", v);
        repr += buf;
    };
    add(params.effort_levels);
    add(params.effort_max);
    add(params.premium_levels);
    add(params.theta_mean);
    add(params.theta_sd);
    add(params.risk_aversion);
    add(params.reservation);
    add(params.memory);
    add(params.visible_fraction_principal);
    add(params.visible_fraction_agent);
    add(params.explore_prob_principal);
    add(params.explore_prob_agent);
    add(params.meta.mu_shift_sd);
    add(params.meta.sigma_factor_min);
    add(params.meta.sigma_factor_max);
    for (int t : params.turbulence_periods) add(t);
    return fnv1a64(repr);
}

ContractShares classify_emergent_contracts(const std::vector<RunOutcome>& runs,
                                           const HiddenActionParams& params,
                                           int tolerance_cells) {
    if (runs.empty())
        throw std::invalid_argument("classification needs at least one run");
    const std::uint64_t expect = params_fingerprint(params);
    for (const RunOutcome& r : runs)
        if (r.fingerprint != expect)
            throw std::invalid_argument(
                "classification requires identical parameters across runs");

    const OracleResult oracle = second_best_oracle(params);
    const double tol =
        tolerance_cells / static_cast<double>(params.premium_levels - 1) +
        kBindTol;

    ContractShares shares;
    shares.runs = static_cast<int>(runs.size());
    for (const RunOutcome& r : runs) {
        const double d = r.final_premium - oracle.premium;
        if (std::abs(d) <= tol)
            shares.at += 1.0;
        else if (d < 0)
            shares.below += 1.0;
        else
            shares.above += 1.0;
    }
    shares.below /= shares.runs;
    shares.at /= shares.runs;
    shares.above /= shares.runs;
    return shares;
}

}  // namespace ace::ha
