// Acceptance suite: one check per release criterion, each printed as a
// single PASS/FAIL line with its elapsed time and the measured numbers.
// The binary exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ace/adaptation.hpp"
#include "ace/automaton.hpp"
#include "ace/harness.hpp"
#include "ace/hiddenaction.hpp"
#include "ace/landscape.hpp"
#include "ace/organization.hpp"
#include "ace/search.hpp"

using namespace ace;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

struct Criterion {
    int id;
    const char* title;
    double limit_seconds;
    Clock::time_point start = Clock::now();
    bool ok = true;
    std::string detail;

    Criterion(int id_, const char* title_, double limit) : id(id_), title(title_),
                                                           limit_seconds(limit) {}

    void require(bool cond, const std::string& why) {
        if (!cond) {
            ok = false;
            note(why);
        }
    }

    void note(const std::string& text) {
        if (!detail.empty()) detail += "; ";
        detail += text;
    }

    void finish() {
        const double secs =
            std::chrono::duration<double>(Clock::now() - start).count();
        if (secs >= limit_seconds)
            require(false, "runtime " + std::to_string(secs) + "s exceeds " +
                               std::to_string(limit_seconds) + "s");
        std::printf("%s  criterion %d: %s (%.2fs%s%s)\n", ok ? "PASS" : "FAIL", id,
                    title, secs, detail.empty() ? "" : "; ",
                    detail.c_str());
        if (!ok) ++failures;
    }
};

search::SearchStrategy one_flip(int budget) {
    search::SearchStrategy s;
    s.kind = search::StrategyKind::SteepestAscent;
    s.discovery_budget = budget;
    s.local_radius = 1;
    return s;
}

search::NoisyEvaluator exact(const nk::Landscape& l) {
    return {[&l](const nk::Configuration& c) { return nk::fitness(l, c); }, 0.0};
}

// --------------------------------------------------------------------------

void criterion_1_single_peaked() {
    Criterion c(1, "K=0 landscapes are single-peaked for all N <= 10", 10.0);
    for (int n = 1; n <= 10 && c.ok; ++n) {
        for (std::uint64_t seed = 0; seed < 100 && c.ok; ++seed) {
            auto l = nk::generate(
                {n, 0, nk::InteractionPattern::AdjacentCyclic, {}, seed});
            auto census = nk::local_optima_census(l);
            c.require(census.count() == 1,
                      "n=" + std::to_string(n) + " seed=" + std::to_string(seed) +
                          " found " + std::to_string(census.count()) + " optima");
            if (c.ok)
                c.require(census.optima[0] == nk::global_optimum(l).config,
                          "local optimum differs from the global optimum");
        }
    }
    c.finish();
}

void criterion_2_ruggedness() {
    Criterion c(2, "mean census at N=10, K=9 matches 2^10/11 within 5%", 30.0);
    const int seeds = 300;
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < seeds; ++seed)
        total += nk::local_optima_census(
                     nk::generate(
                         {10, 9, nk::InteractionPattern::AdjacentCyclic, {}, seed}))
                     .count();
    const double mean = total / seeds;
    const double expected = 1024.0 / 11.0;
    c.note("mean=" + std::to_string(mean) + " expected=" + std::to_string(expected));
    c.require(std::abs(mean - expected) <= 0.05 * expected,
              "outside the 5% band");
    c.finish();
}

void criterion_3_hill_climbing() {
    Criterion c(3, "hill climbs are monotone, halt on census optima, and solve "
                   "K=0 in <= N steps",
                30.0);
    // K=0: from all 2^N starts the climber reaches the global optimum in <= N.
    for (int n = 2; n <= 10 && c.ok; n += 2) {
        for (std::uint64_t seed = 0; seed < 3 && c.ok; ++seed) {
            auto l = nk::generate(
                {n, 0, nk::InteractionPattern::AdjacentCyclic, {}, 100 + seed});
            const auto opt = nk::global_optimum(l);
            RandomStream stream = substream(1, "acc3.k0", n * 100 + seed);
            for (int u = 0; u < (1 << n) && c.ok; ++u) {
                auto r = search::climb(l, one_flip(n), exact(l),
                                       nk::config_from_index(u, n), n + 1, stream);
                c.require(r.config == opt.config && r.steps <= n,
                          "n=" + std::to_string(n) + " start " + std::to_string(u) +
                              " missed the optimum or overran");
            }
        }
    }
    // Rugged: trajectories strictly climb and halt exactly on census optima.
    for (std::uint64_t seed = 0; seed < 5 && c.ok; ++seed) {
        auto l = nk::generate(
            {8, 4, nk::InteractionPattern::RandomWithoutReplacement, {}, seed});
        std::set<std::string> optima;
        for (const auto& o : nk::local_optima_census(l).optima)
            optima.insert(o.to_string());
        RandomStream stream = substream(1, "acc3.rugged", seed);
        for (int u = 0; u < (1 << 8) && c.ok; ++u) {
            auto r = search::climb(l, one_flip(8), exact(l),
                                   nk::config_from_index(u, 8), 1000, stream);
            for (std::size_t t = 1; t < r.trajectory.size(); ++t)
                c.require(r.trajectory[t] > r.trajectory[t - 1],
                          "non-increasing move accepted");
            c.require(optima.count(r.config.to_string()) == 1,
                      "halted off the census set");
        }
    }
    c.finish();
}

void criterion_4_automaton() {
    Criterion c(4, "the 1-D example rule and ring diffusion reproduce the "
                   "hand-derived dynamics",
                1.0);
    RandomStream s(0);
    ca::Grid g = ca::make_grid(ca::Topology::Line, 1, 5);
    g.states = {0, 1, 1, 1, 0};
    auto next = ca::step(g, ca::sum_threshold_rule(2), s);
    c.require(next.states == std::vector<int>{0, 0, 1, 0, 0},
              "1-D example rule mismatch");

    ca::Grid ring = ca::make_grid(ca::Topology::Ring, 1, 11);
    auto setup = ca::diffusion_preset(ca::DiffusionVariant::Deterministic, 1.0,
                                      {0}, 1, ca::NeighborhoodKind::LeftRight);
    ca::set_cells(ring, setup.early_adopters, 1);
    auto traj = ca::run(ring, setup.rule, 5, s);
    c.require(traj.counts[4][1] < 11, "ring adopted too early");
    c.require(traj.counts[5][1] == 11, "ring not fully adopted at t=5");
    c.finish();
}

void criterion_5_organization() {
    Criterion c(5, "decomposable decentralized search finds the optimum; "
                   "hierarchical never loses fitness",
                30.0);
    // Decomposable, w=1, sigma=0, full-block discovery, every start (N=6).
    for (const auto& blocks : {std::vector<int>{3, 3}, std::vector<int>{2, 2, 2}}) {
        for (std::uint64_t seed = 0; seed < 5 && c.ok; ++seed) {
            nk::LandscapeSpec spec{6, 0, nk::InteractionPattern::BlockDiagonal,
                                   blocks, seed};
            auto l = nk::generate(spec);
            auto design = org::make_org(blocks, false, 1.0);
            const auto opt = nk::global_optimum(l);
            search::SearchStrategy strategy;
            strategy.kind = search::StrategyKind::SteepestAscent;
            strategy.local_radius = blocks[0];
            strategy.discovery_budget = 1 << blocks[0];
            org::OrgParams params;
            for (int u = 0; u < (1 << 6) && c.ok; ++u) {
                RandomStream stream = substream(2, "acc5", seed * 64 + u);
                auto r = org::org_step(design, org::CoordinationMode::Decentralized,
                                       l, strategy, params,
                                       nk::config_from_index(u, 6), stream);
                c.require(r.config == opt.config,
                          "start " + std::to_string(u) + " seed " +
                              std::to_string(seed) + " missed the optimum");
            }
        }
    }
    // Hierarchical veto at sigma=0 on a rugged task.
    for (std::uint64_t seed = 0; seed < 10 && c.ok; ++seed) {
        auto l = nk::generate(
            {9, 8, nk::InteractionPattern::AdjacentCyclic, {}, 200 + seed});
        auto design = org::make_org({3, 3, 3}, true, 1.0);
        org::OrgParams params;
        RandomStream stream = substream(3, "acc5.h", seed);
        auto config = org::random_configuration(9, stream);
        double v = nk::fitness(l, config);
        for (int t = 0; t < 50; ++t) {
            config = org::org_step(design, org::CoordinationMode::Hierarchical, l,
                                   one_flip(3), params, config, stream)
                         .config;
            const double v2 = nk::fitness(l, config);
            c.require(v2 >= v, "hierarchical step lowered fitness");
            v = v2;
        }
    }
    c.finish();
}

adapt::GrowthStudySetup growth_setup(search::StrategyKind kind,
                                     std::uint64_t landscape_seed) {
    adapt::GrowthStudySetup setup;
    setup.org = org::make_org({2, 2, 2}, true, 1.0);
    nk::LandscapeSpec spec{6, 5, nk::InteractionPattern::AdjacentCyclic, {},
                           landscape_seed};
    setup.landscape = nk::generate(spec);
    setup.complexity = org::TaskComplexity::NonDecomposable;
    setup.strategy.kind = kind;
    setup.strategy.discovery_budget = 2;
    setup.strategy.local_radius = 1;
    setup.org_params.sigma_eval = 0.02;
    setup.learning.interval = 10;
    setup.learning.gain = 1.0;
    setup.learning.forgetting = 0.1;
    setup.learning.floor = 0.05;
    setup.schedule = {{50, 2}, {100, 2}, {150, 2}};
    setup.horizon = 200;
    return setup;
}

void criterion_6_growth_direction() {
    Criterion c(6, "hierarchy dominates terminal coordination under growth, "
                   "more so under exploration",
                600.0);
    const int runs = 1000;
    std::array<int, 3> explorative{0, 0, 0};
    std::array<int, 3> exploitative{0, 0, 0};
    for (int r = 0; r < runs; ++r) {
        const std::uint64_t lseed = derive_seed(600, "acc6.landscape", r);
        {
            auto setup = growth_setup(search::StrategyKind::LongJump, lseed);
            RandomStream stream = substream(601, "acc6.run", r);
            auto rows = adapt::run_growth_study(setup, stream);
            ++explorative[static_cast<int>(rows.back().mode)];
        }
        {
            auto setup = growth_setup(search::StrategyKind::SteepestAscent, lseed);
            RandomStream stream = substream(601, "acc6.run", r);
            auto rows = adapt::run_growth_study(setup, stream);
            ++exploitative[static_cast<int>(rows.back().mode)];
        }
    }
    const int h = static_cast<int>(org::CoordinationMode::Hierarchical);
    c.note("explorative terminal modes dec/seq/hier = " +
           std::to_string(explorative[0]) + "/" + std::to_string(explorative[1]) +
           "/" + std::to_string(explorative[2]) + ", exploitative = " +
           std::to_string(exploitative[0]) + "/" + std::to_string(exploitative[1]) +
           "/" + std::to_string(exploitative[2]));
    c.require(explorative[h] > explorative[0] && explorative[h] > explorative[1],
              "hierarchical is not the modal terminal mode under exploration");
    const double p1 = explorative[h] / double(runs);
    const double p2 = exploitative[h] / double(runs);
    const double pooled = (explorative[h] + exploitative[h]) / double(2 * runs);
    const double se = std::sqrt(2.0 * pooled * (1.0 - pooled) / runs);
    c.require(p1 - p2 > 1.645 * se,
              "explorative hierarchy share does not exceed exploitative at 95%");
    c.finish();
}

void criterion_7_hidden_action_oracle() {
    Criterion c(7, "grid oracle matches the closed form and full information "
                   "hits it from period 1",
                10.0);
    for (double eta : {0.0, 0.5, 1.0, 2.0}) {
        for (double var : {0.0, 0.5, 1.0, 2.0}) {
            ha::HiddenActionParams p;
            p.risk_aversion = eta;
            p.theta_sd = std::sqrt(var);
            auto o = ha::second_best_oracle(p);
            const double cell_p = 1.0 / (p.premium_levels - 1);
            const double cell_a = p.effort_max / (p.effort_levels - 1);
            c.require(std::abs(o.premium - o.closed_premium) <= cell_p + 1e-12,
                      "premium off closed form at eta=" + std::to_string(eta) +
                          " var=" + std::to_string(var));
            c.require(std::abs(o.effort - o.closed_effort) <= cell_a + 1e-12,
                      "effort off closed form at eta=" + std::to_string(eta) +
                          " var=" + std::to_string(var));
        }
    }
    ha::HiddenActionParams p;
    p.risk_aversion = 1.0;
    p.theta_sd = 0.0;
    p.visible_fraction_principal = 1.0;
    p.visible_fraction_agent = 1.0;
    p.memory = 0;
    auto o = ha::second_best_oracle(p);
    RandomStream stream(7);
    for (const auto& row : ha::simulate(p, 10, stream)) {
        c.require(row.accepted, "full-information offer rejected");
        c.require(row.premium == o.premium && row.effort == o.effort,
                  "full-information play missed the oracle");
    }
    c.finish();
}

void criterion_8_emergent_contracts() {
    Criterion c(8, "emergent contracts are less efficient on average; "
                   "turbulence pushes premiums above p*",
                300.0);
    ha::HiddenActionParams stable;
    stable.theta_sd = 0.4;
    stable.risk_aversion = 1.0;
    stable.memory = 10;
    stable.visible_fraction_principal = 0.2;
    stable.visible_fraction_agent = 0.2;
    stable.explore_prob_principal = 0.1;
    stable.explore_prob_agent = 0.1;
    const int horizon = 100;
    ha::HiddenActionParams turbulent = stable;
    turbulent.turbulence_periods = ha::periodic_schedule(10, horizon);

    const auto oracle = ha::second_best_oracle(stable);
    const int runs = 1000;

    double mean_net = 0.0;
    std::vector<ha::RunOutcome> stable_runs, turbulent_runs;
    for (int r = 0; r < runs; ++r) {
        RandomStream s1 = substream(800, "acc8.run", r);
        auto rows = ha::simulate(stable, horizon, s1);
        double net = 0.0;
        for (const auto& row : rows) net += row.principal_net;
        mean_net += net / horizon;
        stable_runs.push_back(
            {ha::params_fingerprint(stable), rows.back().premium});

        RandomStream s2 = substream(800, "acc8.run", r);
        auto trows = ha::simulate(turbulent, horizon, s2);
        turbulent_runs.push_back(
            {ha::params_fingerprint(turbulent), trows.back().premium});
    }
    mean_net /= runs;
    c.note("mean emergent net=" + std::to_string(mean_net) + " oracle=" +
           std::to_string(oracle.expected_net));
    c.require(mean_net <= oracle.expected_net,
              "emergent contracts outperform the oracle on average");

    auto s_shares = ha::classify_emergent_contracts(stable_runs, stable, 1);
    auto t_shares = ha::classify_emergent_contracts(turbulent_runs, turbulent, 1);
    c.note("above-p* share stable=" + std::to_string(s_shares.above) +
           " turbulent=" + std::to_string(t_shares.above));
    c.require(t_shares.above >= s_shares.above,
              "turbulence does not weakly raise the above-p* share");
    c.finish();
}

void criterion_9_reproducibility() {
    Criterion c(9, "byte-identical reruns and replication-id stability", 60.0);
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "ace_acceptance9";
    fs::remove_all(dir);

    auto make_config = [&](int replications, const std::string& sub) {
        nlohmann::json j{
            {"study", "growth-study"},
            {"seed", 4242},
            {"replications", replications},
            {"out_dir", (dir / sub).string()},
            {"growth_study",
             {{"n0", 6},
              {"units", {2, 2, 2}},
              {"complexity", "non-decomposable"},
              {"strategy", {{"kind", "long-jump"}, {"budget", 2}}},
              {"sigma_eval", 0.02},
              {"learning", {{"interval", 10}, {"floor", 0.05}}},
              {"growth", {{{"period", 20}, {"n_add", 2}}}},
              {"horizon", 40}}}};
        return harness::parse_config(j);
    };

    auto read = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };

    auto r1 = harness::run_experiment(make_config(3, "a"));
    const std::string runs_first = read(dir / "a" / "runs.csv");
    const std::string summary_first = read(dir / "a" / "summary.csv");
    harness::run_experiment(make_config(3, "a"));
    c.require(read(dir / "a" / "runs.csv") == runs_first,
              "rerun changed runs.csv bytes");
    c.require(read(dir / "a" / "summary.csv") == summary_first,
              "rerun changed summary.csv bytes");

    auto r2 = harness::run_experiment(make_config(6, "b"));
    // Rows of replications 0..2 must be a verbatim prefix-subset.
    std::istringstream small(r1.runs_csv), large(r2.runs_csv);
    std::string sline, lline;
    std::getline(small, sline);
    std::getline(large, lline);
    bool prefix_ok = sline == lline;  // header
    while (prefix_ok && std::getline(small, sline)) {
        if (!std::getline(large, lline) || lline != sline) prefix_ok = false;
    }
    c.require(prefix_ok, "rows of existing replication ids changed with R");
    fs::remove_all(dir);
    c.finish();
}

}  // namespace

int main() {
    criterion_1_single_peaked();
    criterion_2_ruggedness();
    criterion_3_hill_climbing();
    criterion_4_automaton();
    criterion_5_organization();
    criterion_6_growth_direction();
    criterion_7_hidden_action_oracle();
    criterion_8_emergent_contracts();
    criterion_9_reproducibility();
    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
