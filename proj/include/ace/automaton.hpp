#pragma once

// Cellular automata over 1-D and 2-D grids with synchronous updating: every
// next state is computed from the time-t grid before any write. Stochastic
// rules consume exactly one uniform draw per cell per step, pre-assigned in
// cell-index order, so results never depend on traversal order.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ace/rng.hpp"

namespace ace::ca {

enum class Topology { Line, Ring, Rect, Torus };

struct Boundary {
    bool wrap = false;  // wrap edges on line/rect (ring/torus always wrap)
    int value = 0;      // state read beyond a fixed edge
};

struct Grid {
    Topology topology = Topology::Line;
    int rows = 1;
    int cols = 0;
    int alphabet = 2;  // states are 0..alphabet-1
    Boundary boundary;
    std::vector<int> states;  // row-major

    int cell_count() const { return rows * cols; }
};

/// Zero-initialized grid; validates dimensions and alphabet.
Grid make_grid(Topology topology, int rows, int cols, int alphabet = 2,
               Boundary boundary = {});

enum class NeighborhoodKind { LeftRight, VonNeumann, Moore };

struct NeighborAggregate {
    int sum = 0;                    // sum of neighbor states
    std::vector<int> counts;        // count per state, alphabet-sized
};

struct Rule {
    int alphabet = 2;
    NeighborhoodKind neighborhood = NeighborhoodKind::LeftRight;
    int radius = 1;
    bool stochastic = false;
    /// Total next-state mapping. `draw` is the cell's uniform [0,1) draw and
    /// is only meaningful when the rule is stochastic.
    std::function<int(int own, const NeighborAggregate&, double draw)> next_state;
};

/// One synchronous step. The stream is consumed only by stochastic rules.
Grid step(const Grid& grid, const Rule& rule, RandomStream& stream);

struct Trajectory {
    std::vector<Grid> grids;                      // steps+1 entries
    std::vector<std::vector<long long>> counts;   // per step, per state
};

Trajectory run(const Grid& grid, const Rule& rule, int steps, RandomStream& stream);

enum class DiffusionVariant { Deterministic, Stochastic };

struct DiffusionSetup {
    Rule rule;
    std::vector<int> early_adopters;  // cell indices, row-major
};

/// Innovation-diffusion rule on the {0 = non-adopter, 1 = adopter} alphabet.
/// Adopters are absorbing; a non-adopter with at least `threshold` adopting
/// neighbors adopts (deterministic) or adopts with probability p.
DiffusionSetup diffusion_preset(DiffusionVariant variant, double p,
                                std::vector<int> early_adopters, int threshold,
                                NeighborhoodKind neighborhood = NeighborhoodKind::VonNeumann,
                                int radius = 1);

/// 1-D left-right rule: a cell becomes 1 iff the sum of its neighbors
/// reaches the threshold, else 0 (own state does not enter).
Rule sum_threshold_rule(int threshold);

void set_cells(Grid& grid, const std::vector<int>& cells, int state);

/// Dense integer CSV, one line per grid row.
std::string grid_csv(const Grid& grid);

}  // namespace ace::ca
