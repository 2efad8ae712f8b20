#include "ace/automaton.hpp"

#include <sstream>
#include <stdexcept>

namespace ace::ca {

Grid make_grid(Topology topology, int rows, int cols, int alphabet,
               Boundary boundary) {
    if ((topology == Topology::Line || topology == Topology::Ring) && rows != 1)
        throw std::invalid_argument("1-D topologies require rows == 1");
    if (rows <= 0 || cols <= 0)
        throw std::invalid_argument("grid dimensions must be positive");
    if (alphabet < 2) throw std::invalid_argument("alphabet needs >= 2 states");
    if (boundary.value < 0 || boundary.value >= alphabet)
        throw std::invalid_argument("boundary value outside alphabet");
    Grid g;
    g.topology = topology;
    g.rows = rows;
    g.cols = cols;
    g.alphabet = alphabet;
    g.boundary = boundary;
    g.states.assign(static_cast<std::size_t>(rows) * cols, 0);
    return g;
}

namespace {

bool wraps(const Grid& g) {
    return g.topology == Topology::Ring || g.topology == Topology::Torus ||
           g.boundary.wrap;
}

int state_at(const Grid& g, int r, int c) {
    if (wraps(g)) {
        r = ((r % g.rows) + g.rows) % g.rows;
        c = ((c % g.cols) + g.cols) % g.cols;
    } else if (r < 0 || r >= g.rows || c < 0 || c >= g.cols) {
        return g.boundary.value;
    }
    return g.states[static_cast<std::size_t>(r) * g.cols + c];
}

void gather(const Grid& g, const Rule& rule, int r, int c, NeighborAggregate& agg) {
    agg.sum = 0;
    agg.counts.assign(rule.alphabet, 0);
    auto take = [&](int rr, int cc) {
        const int s = state_at(g, rr, cc);
        agg.sum += s;
        ++agg.counts[s];
    };
    const int rad = rule.radius;
    switch (rule.neighborhood) {
        case NeighborhoodKind::LeftRight:
            for (int d = 1; d <= rad; ++d) {
                take(r, c - d);
                take(r, c + d);
            }
            break;
        case NeighborhoodKind::VonNeumann:
            for (int dr = -rad; dr <= rad; ++dr)
                for (int dc = -rad; dc <= rad; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    if (std::abs(dr) + std::abs(dc) > rad) continue;
                    take(r + dr, c + dc);
                }
            break;
        case NeighborhoodKind::Moore:
            for (int dr = -rad; dr <= rad; ++dr)
                for (int dc = -rad; dc <= rad; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    take(r + dr, c + dc);
                }
            break;
    }
}

}  // namespace

Grid step(const Grid& grid, const Rule& rule, RandomStream& stream) {
    if (rule.alphabet != grid.alphabet)
        throw std::invalid_argument("rule alphabet " + std::to_string(rule.alphabet) +
                                    " does not match grid alphabet " +
                                    std::to_string(grid.alphabet));
    if (rule.radius < 1) throw std::invalid_argument("rule radius must be >= 1");
    if (rule.neighborhood == NeighborhoodKind::LeftRight && grid.rows != 1)
        throw std::invalid_argument("left-right neighborhood requires a 1-D grid");
    for (int s : grid.states)
        if (s < 0 || s >= grid.alphabet)
            throw std::invalid_argument("grid state outside alphabet");

    // One draw per cell, in index order, before any update.
    std::vector<double> draws;
    if (rule.stochastic) {
        draws.resize(grid.states.size());
        for (auto& d : draws) d = stream.next_unit();
    }

    Grid next = grid;
    NeighborAggregate agg;
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            const std::size_t i = static_cast<std::size_t>(r) * grid.cols + c;
            gather(grid, rule, r, c, agg);
            const int s = rule.next_state(grid.states[i],
                                          agg,
                                          rule.stochastic ? draws[i] : 0.0);
            if (s < 0 || s >= grid.alphabet)
                throw std::invalid_argument("rule produced state outside alphabet");
            next.states[i] = s;
        }
    }
    return next;
}

Trajectory run(const Grid& grid, const Rule& rule, int steps, RandomStream& stream) {
    if (steps < 0) throw std::invalid_argument("steps must be >= 0");
    Trajectory t;
    t.grids.reserve(steps + 1);
    t.grids.push_back(grid);
    for (int s = 0; s < steps; ++s)
        t.grids.push_back(step(t.grids.back(), rule, stream));
    for (const Grid& g : t.grids) {
        std::vector<long long> counts(g.alphabet, 0);
        for (int st : g.states) ++counts[st];
        t.counts.push_back(std::move(counts));
    }
    return t;
}

DiffusionSetup diffusion_preset(DiffusionVariant variant, double p,
                                std::vector<int> early_adopters, int threshold,
                                NeighborhoodKind neighborhood, int radius) {
    if (variant == DiffusionVariant::Stochastic && (p < 0.0 || p > 1.0))
        throw std::invalid_argument("adoption probability must lie in [0,1]");
    if (threshold < 1) throw std::invalid_argument("threshold must be >= 1");
    DiffusionSetup setup;
    setup.early_adopters = std::move(early_adopters);
    Rule& rule = setup.rule;
    rule.alphabet = 2;
    rule.neighborhood = neighborhood;
    rule.radius = radius;
    rule.stochastic = variant == DiffusionVariant::Stochastic;
    if (variant == DiffusionVariant::Deterministic) {
        rule.next_state = [threshold](int own, const NeighborAggregate& agg, double) {
            if (own == 1) return 1;
            return agg.sum >= threshold ? 1 : 0;
        };
    } else {
        rule.next_state = [threshold, p](int own, const NeighborAggregate& agg,
                                         double draw) {
            if (own == 1) return 1;
            return (agg.sum >= threshold && draw < p) ? 1 : 0;
        };
    }
    return setup;
}

Rule sum_threshold_rule(int threshold) {
    Rule rule;
    rule.alphabet = 2;
    rule.neighborhood = NeighborhoodKind::LeftRight;
    rule.radius = 1;
    rule.next_state = [threshold](int, const NeighborAggregate& agg, double) {
        return agg.sum >= threshold ? 1 : 0;
    };
    return rule;
}

void set_cells(Grid& grid, const std::vector<int>& cells, int state) {
    if (state < 0 || state >= grid.alphabet)
        throw std::invalid_argument("state outside alphabet");
    for (int c : cells) {
        if (c < 0 || c >= grid.cell_count())
            throw std::invalid_argument("cell index " + std::to_string(c) +
                                        " outside grid of " +
                                        std::to_string(grid.cell_count()) + " cells");
        grid.states[c] = state;
    }
}

std::string grid_csv(const Grid& grid) {
    std::ostringstream os;
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            if (c) os << ",";
            os << grid.states[static_cast<std::size_t>(r) * grid.cols + c];
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace ace::ca
