#include "ace/organization.hpp"

#include <numeric>
#include <stdexcept>

namespace ace::org {

OrgDesign make_org(const std::vector<int>& sizes, bool headquarters,
                   double incentive_weight) {
    OrgDesign org;
    org.headquarters = headquarters;
    org.incentive_weight = incentive_weight;
    int first = 0;
    for (int s : sizes) {
        org.units.push_back({first, s});
        first += s;
    }
    validate(org, first);
    return org;
}

void validate(const OrgDesign& org, int n) {
    if (org.units.empty()) throw std::invalid_argument("org needs at least one unit");
    int expect = 0;
    for (const OrgUnit& u : org.units) {
        if (u.count < 1) throw std::invalid_argument("every unit must own >= 1 attribute");
        if (u.first != expect)
            throw std::invalid_argument("unit blocks must be contiguous and ascending");
        expect += u.count;
    }
    if (expect != n)
        throw std::invalid_argument("unit blocks cover " + std::to_string(expect) +
                                    " attributes, landscape has " + std::to_string(n));
    if (org.incentive_weight < 0.0 || org.incentive_weight > 1.0)
        throw std::invalid_argument("incentive weight must lie in [0,1]");
}

std::string_view to_string(CoordinationMode m) {
    switch (m) {
        case CoordinationMode::Decentralized: return "decentralized";
        case CoordinationMode::SequentialLateral: return "sequential";
        case CoordinationMode::Hierarchical: return "hierarchical";
    }
    throw std::logic_error("unreachable mode");
}

CoordinationMode mode_from_string(std::string_view s) {
    if (s == "decentralized") return CoordinationMode::Decentralized;
    if (s == "sequential") return CoordinationMode::SequentialLateral;
    if (s == "hierarchical") return CoordinationMode::Hierarchical;
    throw std::invalid_argument("unknown coordination mode '" + std::string(s) +
                                "' (expected decentralized|sequential|hierarchical)");
}

void validate_complexity(const OrgDesign& org, const Landscape& landscape,
                         TaskComplexity complexity) {
    validate(org, landscape.n());
    if (complexity == TaskComplexity::Decomposable) {
        if (landscape.spec.pattern != nk::InteractionPattern::BlockDiagonal)
            throw std::invalid_argument(
                "decomposable task requires a block-diagonal landscape");
        if (landscape.spec.block_sizes.size() != org.units.size())
            throw std::invalid_argument(
                "decomposable task: landscape blocks must match unit blocks");
        for (std::size_t i = 0; i < org.units.size(); ++i)
            if (landscape.spec.block_sizes[i] != org.units[i].count)
                throw std::invalid_argument(
                    "decomposable task: landscape blocks must match unit blocks");
    } else {
        for (const auto& set : landscape.interaction_sets)
            if (static_cast<int>(set.size()) != landscape.n() - 1)
                throw std::invalid_argument(
                    "non-decomposable task requires k = n-1 interactions");
    }
}

double unit_objective(const OrgDesign& org, int unit, const Landscape& landscape,
                      const Configuration& config) {
    const OrgUnit& u = org.units[unit];
    double own = 0.0;
    for (int i = u.first; i < u.first + u.count; ++i)
        own += contribution(landscape, config, i);
    own /= u.count;

    const int rest = landscape.n() - u.count;
    double residual = 0.0;
    if (rest > 0) {
        for (int i = 0; i < landscape.n(); ++i)
            if (i < u.first || i >= u.first + u.count)
                residual += contribution(landscape, config, i);
        residual /= rest;
    }
    const double w = org.incentive_weight;
    return w * own + (1.0 - w) * residual;
}

namespace {

std::vector<int> unit_indices(const OrgUnit& u) {
    std::vector<int> idx(u.count);
    std::iota(idx.begin(), idx.end(), u.first);
    return idx;
}

/// The block bits of `proposal`, possibly corrupted in transit: with
/// probability comm_error each announced bit arrives flipped. One uniform
/// draw per bit whenever corruption is enabled.
void announce_block(const OrgUnit& u, const Configuration& proposal,
                    Configuration& into, double comm_error, RandomStream& stream) {
    for (int i = u.first; i < u.first + u.count; ++i) {
        std::uint8_t bit = proposal.bits[i];
        if (comm_error > 0.0 && stream.next_unit() < comm_error) bit ^= 1u;
        into.bits[i] = bit;
    }
}

search::NoisyEvaluator unit_evaluator(const OrgDesign& org, int unit,
                                      const Landscape& landscape, double sigma) {
    return {[&org, unit, &landscape](const Configuration& c) {
                return unit_objective(org, unit, landscape, c);
            },
            sigma};
}

}  // namespace

OrgStepResult org_step(const OrgDesign& org, CoordinationMode mode,
                       const Landscape& landscape, const SearchStrategy& strategy,
                       const OrgParams& params, const Configuration& current,
                       RandomStream& stream) {
    validate(org, landscape.n());
    if (mode == CoordinationMode::Hierarchical && !org.headquarters)
        throw std::invalid_argument("hierarchical mode requires headquarters");
    if (current.size() != landscape.n())
        throw std::invalid_argument("configuration does not match landscape");

    OrgStepResult result;
    result.config = current;

    const int n_units = static_cast<int>(org.units.size());

    switch (mode) {
        case CoordinationMode::Decentralized: {
            // Everyone plans against the status quo, then all moves land at once.
            for (int u = 0; u < n_units; ++u) {
                const auto idx = unit_indices(org.units[u]);
                const auto cands = discover(strategy, current, idx, stream);
                const auto ev = unit_evaluator(org, u, landscape, params.sigma_eval);
                auto choice = choose(current, cands, ev, strategy.kind, stream);
                UnitDecision d{u, choice.moved, choice.moved, choice.config};
                if (choice.moved)
                    for (int i : idx) result.config.bits[i] = choice.config.bits[i];
                result.decisions.push_back(std::move(d));
            }
            break;
        }
        case CoordinationMode::SequentialLateral: {
            // Working view holds earlier units' announcements; implemented
            // moves are the true choices even if an announcement got garbled.
            Configuration announced = current;
            for (int u = 0; u < n_units; ++u) {
                const auto idx = unit_indices(org.units[u]);
                const auto cands = discover(strategy, announced, idx, stream);
                const auto ev = unit_evaluator(org, u, landscape, params.sigma_eval);
                auto choice = choose(announced, cands, ev, strategy.kind, stream);
                UnitDecision d{u, choice.moved, choice.moved, choice.config};
                if (choice.moved) {
                    for (int i : idx) result.config.bits[i] = choice.config.bits[i];
                    announce_block(org.units[u], choice.config, announced,
                                   params.comm_error, stream);
                }
                result.decisions.push_back(std::move(d));
            }
            break;
        }
        case CoordinationMode::Hierarchical: {
            std::vector<Configuration> received(n_units);
            for (int u = 0; u < n_units; ++u) {
                const auto idx = unit_indices(org.units[u]);
                const auto cands = discover(strategy, current, idx, stream);
                const auto ev = unit_evaluator(org, u, landscape, params.sigma_eval);
                auto choice = choose(current, cands, ev, strategy.kind, stream);
                received[u] = current;
                if (choice.moved)
                    announce_block(org.units[u], choice.config, received[u],
                                   params.comm_error, stream);
                result.decisions.push_back(
                    {u, choice.moved, false, std::move(choice.config)});
            }
            const search::NoisyEvaluator hq{
                [&landscape](const Configuration& c) { return fitness(landscape, c); },
                params.sigma_eval};
            const double perceived_sq = hq.perceive(current, stream);
            if (params.hq_implement_all) {
                for (int u = 0; u < n_units; ++u) {
                    if (!result.decisions[u].moved) continue;
                    if (hq.perceive(received[u], stream) > perceived_sq) {
                        result.decisions[u].implemented = true;
                        const OrgUnit& unit = org.units[u];
                        for (int i = unit.first; i < unit.first + unit.count; ++i)
                            result.config.bits[i] = received[u].bits[i];
                    }
                }
            } else {
                int best = -1;
                double best_v = perceived_sq;
                for (int u = 0; u < n_units; ++u) {
                    if (!result.decisions[u].moved) continue;
                    const double v = hq.perceive(received[u], stream);
                    if (v > best_v) {
                        best_v = v;
                        best = u;
                    }
                }
                if (best >= 0) {
                    result.decisions[best].implemented = true;
                    const OrgUnit& unit = org.units[best];
                    for (int i = unit.first; i < unit.first + unit.count; ++i)
                        result.config.bits[i] = received[best].bits[i];
                }
            }
            break;
        }
    }
    return result;
}

std::vector<OrgRow> run_org(const OrgDesign& org, CoordinationMode mode,
                            const Landscape& landscape,
                            const SearchStrategy& strategy, const OrgParams& params,
                            int periods, const Configuration& initial,
                            RandomStream& stream) {
    if (periods < 1) throw std::invalid_argument("periods must be >= 1");
    std::vector<OrgRow> rows;
    rows.reserve(periods + 1);

    auto record = [&](int period, const Configuration& c) {
        OrgRow row;
        row.period = period;
        row.v = fitness(landscape, c);
        row.config = c;
        for (std::size_t u = 0; u < org.units.size(); ++u)
            row.unit_objectives.push_back(
                unit_objective(org, static_cast<int>(u), landscape, c));
        rows.push_back(std::move(row));
    };

    Configuration config = initial;
    record(0, config);
    for (int t = 1; t <= periods; ++t) {
        config = org_step(org, mode, landscape, strategy, params, config, stream).config;
        record(t, config);
    }
    return rows;
}

Configuration random_configuration(int n, RandomStream& stream) {
    Configuration c;
    c.bits.resize(n);
    for (auto& b : c.bits) b = static_cast<std::uint8_t>(stream.next_below(2));
    return c;
}

}  // namespace ace::org
