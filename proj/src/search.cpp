#include "ace/search.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace ace::search {

void validate(const SearchStrategy& s) {
    if (s.discovery_budget < 1)
        throw std::invalid_argument("discovery_budget must be >= 1");
    if (s.local_radius < 1)
        throw std::invalid_argument("local_radius must be >= 1");
    if (s.jump_radius_min != 0 && s.jump_radius_min < 2)
        throw std::invalid_argument("jump_radius_min must be >= 2 (or 0 for default)");
    if (s.p_explore < 0.0 || s.p_explore > 1.0)
        throw std::invalid_argument("p_explore must lie in [0,1]");
}

namespace {

constexpr int kMaxFreeIndices = 63;

std::uint64_t binom(int n, int r) {
    if (r < 0 || r > n) return 0;
    r = std::min(r, n - r);
    std::uint64_t c = 1;
    for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
    return c;
}

// Flip-index combinations at Hamming distances [lo, hi] over n free bits.
struct DistancePool {
    int n = 0;
    int lo = 1;
    int hi = 0;

    std::uint64_t size() const {
        std::uint64_t total = 0;
        for (int r = lo; r <= hi; ++r) total += binom(n, r);
        return total;
    }

    /// Canonical index -> flip mask, ordered by ascending distance then
    /// lexicographic flip combination.
    std::uint64_t mask_at(std::uint64_t m) const {
        int r = lo;
        while (m >= binom(n, r)) {
            m -= binom(n, r);
            ++r;
        }
        std::uint64_t mask = 0;
        int a = 0;
        for (int need = r; need > 0;) {
            const std::uint64_t c = binom(n - 1 - a, need - 1);
            if (m < c) {
                mask |= std::uint64_t{1} << a;
                ++a;
                --need;
            } else {
                m -= c;
                ++a;
            }
        }
        return mask;
    }

    std::uint64_t sample_mask(RandomStream& stream) const {
        return mask_at(stream.next_below(size()));
    }
};

Configuration apply_mask(const Configuration& current,
                         std::span<const int> free_indices, std::uint64_t mask) {
    Configuration c = current;
    for (std::size_t j = 0; j < free_indices.size(); ++j)
        if (mask & (std::uint64_t{1} << j)) c.bits[free_indices[j]] ^= 1u;
    return c;
}

int effective_jump_min(const SearchStrategy& s, int n) {
    return s.jump_radius_min == 0 ? std::max(2, n / 2) : s.jump_radius_min;
}

}  // namespace

std::vector<Configuration> discover(const SearchStrategy& strategy,
                                    const Configuration& current,
                                    std::span<const int> free_indices,
                                    RandomStream& stream) {
    validate(strategy);
    const int n = static_cast<int>(free_indices.size());
    if (n == 0) return {};
    if (n > kMaxFreeIndices)
        throw std::invalid_argument("discover supports at most 63 free indices");
    for (int i : free_indices)
        if (i < 0 || i >= current.size())
            throw std::invalid_argument("free index outside configuration");

    const DistancePool local{n, 1, std::min(strategy.local_radius, n)};
    const int jump_lo = effective_jump_min(strategy, n);
    const DistancePool jump{n, jump_lo, n};
    const bool jump_possible = jump_lo <= n;

    const DistancePool* primary = &local;
    const DistancePool* secondary = nullptr;
    switch (strategy.kind) {
        case StrategyKind::SteepestAscent:
        case StrategyKind::FirstImprovement:
            break;
        case StrategyKind::LongJump:
            if (!jump_possible) return {};
            primary = &jump;
            break;
        case StrategyKind::Ambidextrous:
            secondary = jump_possible ? &jump : nullptr;
            break;
    }

    const bool ambi = strategy.kind == StrategyKind::Ambidextrous && secondary;
    std::uint64_t reachable = 0;
    for (int r = 1; r <= n; ++r) {
        const bool in_local = r <= local.hi;
        const bool in_jump = jump_possible && r >= jump.lo;
        const bool in_pool = ambi ? (in_local || in_jump)
                                  : (primary == &local ? in_local : in_jump);
        if (in_pool) reachable += binom(n, r);
    }

    std::unordered_set<std::uint64_t> seen;
    std::vector<std::uint64_t> masks;

    if (static_cast<std::uint64_t>(strategy.discovery_budget) >= reachable) {
        // Budget covers everything reachable: enumerate the pool(s), then
        // shuffle so discovery order stays randomized.
        auto enumerate = [&](const DistancePool& p) {
            for (std::uint64_t m = 0; m < p.size(); ++m) {
                const std::uint64_t mask = p.mask_at(m);
                if (seen.insert(mask).second) masks.push_back(mask);
            }
        };
        enumerate(*primary);
        if (ambi) enumerate(*secondary);
        for (std::size_t i = masks.size(); i > 1; --i)
            std::swap(masks[i - 1], masks[stream.next_below(i)]);
    } else {
        constexpr int kAttempts = 64;
        auto try_sample = [&](const DistancePool& p) {
            for (int a = 0; a < kAttempts; ++a) {
                const std::uint64_t mask = p.sample_mask(stream);
                if (seen.insert(mask).second) {
                    masks.push_back(mask);
                    return true;
                }
            }
            return false;
        };
        auto scan_canonical = [&](const DistancePool& p) {
            for (std::uint64_t m = 0; m < p.size(); ++m) {
                const std::uint64_t mask = p.mask_at(m);
                if (seen.insert(mask).second) {
                    masks.push_back(mask);
                    return true;
                }
            }
            return false;
        };
        for (int slot = 0; slot < strategy.discovery_budget; ++slot) {
            const DistancePool* pool = primary;
            if (strategy.kind == StrategyKind::Ambidextrous) {
                const bool explore = stream.next_unit() < strategy.p_explore;
                pool = explore && secondary ? secondary : &local;
            }
            const DistancePool* other =
                ambi ? (pool == &local ? secondary : &local) : nullptr;
            bool placed = try_sample(*pool);
            if (!placed && other) placed = try_sample(*other);
            // Heavily collided: fall back to the first unseen mask in
            // canonical order so the call stays total.
            if (!placed) placed = scan_canonical(*pool);
            if (!placed && other) placed = scan_canonical(*other);
            if (!placed) break;  // pool exhausted
        }
    }
    if (masks.size() > static_cast<std::size_t>(strategy.discovery_budget))
        masks.resize(strategy.discovery_budget);

    std::vector<Configuration> out;
    out.reserve(masks.size());
    for (std::uint64_t mask : masks)
        out.push_back(apply_mask(current, free_indices, mask));
    return out;
}

std::vector<Configuration> discover(const SearchStrategy& strategy,
                                    const Configuration& current,
                                    RandomStream& stream) {
    std::vector<int> all(current.size());
    std::iota(all.begin(), all.end(), 0);
    return discover(strategy, current, all, stream);
}

ChoiceResult choose(const Configuration& current,
                    const std::vector<Configuration>& candidates,
                    const NoisyEvaluator& evaluator, StrategyKind kind,
                    RandomStream& stream) {
    ChoiceResult result;
    result.config = current;
    result.perceived_current = evaluator.perceive(current, stream);

    if (kind == StrategyKind::FirstImprovement) {
        for (const Configuration& c : candidates) {
            if (evaluator.perceive(c, stream) > result.perceived_current) {
                result.config = c;
                result.moved = true;
                return result;
            }
        }
        return result;
    }

    double best = result.perceived_current;
    const Configuration* pick = nullptr;
    for (const Configuration& c : candidates) {
        const double v = evaluator.perceive(c, stream);
        if (v > best) {
            best = v;
            pick = &c;
        }
    }
    if (pick) {
        result.config = *pick;
        result.moved = true;
    }
    return result;
}

ClimbResult climb(const nk::Landscape& landscape, const SearchStrategy& strategy,
                  const NoisyEvaluator& evaluator, Configuration start,
                  int max_steps, RandomStream& stream) {
    ClimbResult r;
    r.config = std::move(start);
    r.trajectory.push_back(nk::fitness(landscape, r.config));
    for (int s = 0; s < max_steps; ++s) {
        const auto candidates = discover(strategy, r.config, stream);
        auto choice = choose(r.config, candidates, evaluator, strategy.kind, stream);
        if (!choice.moved) break;
        r.config = std::move(choice.config);
        ++r.steps;
        r.trajectory.push_back(nk::fitness(landscape, r.config));
    }
    return r;
}

}  // namespace ace::search
