#include "ace/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ace::harness {

using nlohmann::json;

std::string_view to_string(Study s) {
    switch (s) {
        case Study::NkAnalysis: return "nk-analysis";
        case Study::Automaton: return "automaton";
        case Study::OrgSearch: return "org-search";
        case Study::GrowthStudy: return "growth-study";
        case Study::HiddenAction: return "hidden-action";
    }
    throw std::logic_error("unreachable study");
}

Study study_from_string(std::string_view s) {
    if (s == "nk-analysis") return Study::NkAnalysis;
    if (s == "automaton") return Study::Automaton;
    if (s == "org-search") return Study::OrgSearch;
    if (s == "growth-study") return Study::GrowthStudy;
    if (s == "hidden-action") return Study::HiddenAction;
    throw ConfigError("unknown study '" + std::string(s) +
                      "' (expected nk-analysis|automaton|org-search|growth-study|"
                      "hidden-action)");
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config field '" + path + "': " + what);
}

const json& expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    return j;
}

/// Unknown keys are hard errors: typos must not silently fall back to
/// defaults.
void check_keys(const json& j, const std::string& path,
                std::initializer_list<std::string_view> allowed) {
    expect_object(j, path);
    for (const auto& [key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            fail(path.empty() ? key : path + "." + key, "unknown key");
    }
}

std::string join(const std::string& path, const char* key) {
    return path.empty() ? key : path + "." + key;
}

bool has(const json& j, const char* key) { return j.contains(key); }

std::uint64_t get_u64(const json& j, const std::string& path, const char* key,
                      std::uint64_t fallback) {
    if (!has(j, key)) return fallback;
    const json& v = j.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0)
        return static_cast<std::uint64_t>(v.get<long long>());
    fail(join(path, key), "expected unsigned integer");
}

long long get_int(const json& j, const std::string& path, const char* key,
                  long long fallback, bool required = false) {
    if (!has(j, key)) {
        if (required) fail(join(path, key), "required field missing");
        return fallback;
    }
    const json& v = j.at(key);
    if (!v.is_number_integer()) fail(join(path, key), "expected integer");
    return v.get<long long>();
}

double get_double(const json& j, const std::string& path, const char* key,
                  double fallback, bool required = false) {
    if (!has(j, key)) {
        if (required) fail(join(path, key), "required field missing");
        return fallback;
    }
    const json& v = j.at(key);
    if (!v.is_number()) fail(join(path, key), "expected number");
    return v.get<double>();
}

bool get_bool(const json& j, const std::string& path, const char* key,
              bool fallback) {
    if (!has(j, key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_boolean()) fail(join(path, key), "expected boolean");
    return v.get<bool>();
}

std::string get_string(const json& j, const std::string& path, const char* key,
                       const std::string& fallback, bool required = false) {
    if (!has(j, key)) {
        if (required) fail(join(path, key), "required field missing");
        return fallback;
    }
    const json& v = j.at(key);
    if (!v.is_string()) fail(join(path, key), "expected string");
    return v.get<std::string>();
}

std::vector<int> get_int_array(const json& j, const std::string& path,
                               const char* key, bool required = false) {
    std::vector<int> out;
    if (!has(j, key)) {
        if (required) fail(join(path, key), "required field missing");
        return out;
    }
    const json& v = j.at(key);
    if (!v.is_array()) fail(join(path, key), "expected array of integers");
    for (const json& e : v) {
        if (!e.is_number_integer()) fail(join(path, key), "expected array of integers");
        out.push_back(e.get<int>());
    }
    return out;
}

nk::LandscapeSpec parse_landscape(const json& j, const std::string& path) {
    check_keys(j, path, {"n", "k", "pattern", "blocks"});
    nk::LandscapeSpec spec;
    spec.n = static_cast<int>(get_int(j, path, "n", 0, true));
    spec.k = static_cast<int>(get_int(j, path, "k", 0));
    spec.pattern = nk::pattern_from_string(
        get_string(j, path, "pattern", "adjacent-cyclic"));
    spec.block_sizes = get_int_array(j, path, "blocks");
    return spec;
}

json landscape_json(const nk::LandscapeSpec& spec) {
    json j;
    j["n"] = spec.n;
    j["k"] = spec.k;
    j["pattern"] = std::string(nk::to_string(spec.pattern));
    j["blocks"] = spec.block_sizes;
    return j;
}

search::StrategyKind strategy_kind_from_string(std::string_view s,
                                               const std::string& path) {
    if (s == "steepest-ascent") return search::StrategyKind::SteepestAscent;
    if (s == "first-improvement") return search::StrategyKind::FirstImprovement;
    if (s == "long-jump") return search::StrategyKind::LongJump;
    if (s == "ambidextrous") return search::StrategyKind::Ambidextrous;
    fail(path, "unknown strategy kind '" + std::string(s) + "'");
}

std::string_view strategy_kind_string(search::StrategyKind k) {
    switch (k) {
        case search::StrategyKind::SteepestAscent: return "steepest-ascent";
        case search::StrategyKind::FirstImprovement: return "first-improvement";
        case search::StrategyKind::LongJump: return "long-jump";
        case search::StrategyKind::Ambidextrous: return "ambidextrous";
    }
    throw std::logic_error("unreachable strategy kind");
}

search::SearchStrategy parse_strategy(const json& j, const std::string& path) {
    check_keys(j, path,
               {"kind", "budget", "local_radius", "jump_radius_min", "p_explore"});
    search::SearchStrategy s;
    s.kind = strategy_kind_from_string(get_string(j, path, "kind", "", true),
                                       join(path, "kind"));
    s.discovery_budget = static_cast<int>(get_int(j, path, "budget", 1));
    s.local_radius = static_cast<int>(get_int(j, path, "local_radius", 1));
    s.jump_radius_min = static_cast<int>(get_int(j, path, "jump_radius_min", 0));
    s.p_explore = get_double(j, path, "p_explore", 0.0);
    search::validate(s);
    return s;
}

json strategy_json(const search::SearchStrategy& s) {
    json j;
    j["kind"] = std::string(strategy_kind_string(s.kind));
    j["budget"] = s.discovery_budget;
    j["local_radius"] = s.local_radius;
    j["jump_radius_min"] = s.jump_radius_min;
    j["p_explore"] = s.p_explore;
    return j;
}

ca::Topology topology_from_string(std::string_view s, const std::string& path) {
    if (s == "line") return ca::Topology::Line;
    if (s == "ring") return ca::Topology::Ring;
    if (s == "rect") return ca::Topology::Rect;
    if (s == "torus") return ca::Topology::Torus;
    fail(path, "unknown topology '" + std::string(s) + "'");
}

std::string_view topology_string(ca::Topology t) {
    switch (t) {
        case ca::Topology::Line: return "line";
        case ca::Topology::Ring: return "ring";
        case ca::Topology::Rect: return "rect";
        case ca::Topology::Torus: return "torus";
    }
    throw std::logic_error("unreachable topology");
}

ca::NeighborhoodKind neighborhood_from_string(std::string_view s,
                                              const std::string& path) {
    if (s == "left-right") return ca::NeighborhoodKind::LeftRight;
    if (s == "von-neumann") return ca::NeighborhoodKind::VonNeumann;
    if (s == "moore") return ca::NeighborhoodKind::Moore;
    fail(path, "unknown neighborhood '" + std::string(s) + "'");
}

std::string_view neighborhood_string(ca::NeighborhoodKind k) {
    switch (k) {
        case ca::NeighborhoodKind::LeftRight: return "left-right";
        case ca::NeighborhoodKind::VonNeumann: return "von-neumann";
        case ca::NeighborhoodKind::Moore: return "moore";
    }
    throw std::logic_error("unreachable neighborhood");
}

NkAnalysisConfig parse_nk_analysis(const json& j, const std::string& path) {
    check_keys(j, path, {"landscape", "census", "enumeration_cap"});
    NkAnalysisConfig c;
    if (!has(j, "landscape")) fail(join(path, "landscape"), "required field missing");
    c.landscape = parse_landscape(j.at("landscape"), join(path, "landscape"));
    c.census = get_bool(j, path, "census", true);
    c.enumeration_cap = static_cast<int>(
        get_int(j, path, "enumeration_cap", nk::kDefaultEnumerationCap));
    if (c.landscape.n > c.enumeration_cap)
        fail(join(path, "landscape"),
             "n exceeds the enumeration cap; raise enumeration_cap explicitly");
    return c;
}

AutomatonConfig parse_automaton(const json& j, const std::string& path) {
    check_keys(j, path,
               {"topology", "rows", "cols", "alphabet", "boundary_wrap",
                "boundary_value", "rule", "early_adopters", "steps"});
    AutomatonConfig c;
    c.topology = topology_from_string(get_string(j, path, "topology", "", true),
                                      join(path, "topology"));
    c.rows = static_cast<int>(get_int(j, path, "rows", 1));
    c.cols = static_cast<int>(get_int(j, path, "cols", 0, true));
    c.alphabet = static_cast<int>(get_int(j, path, "alphabet", 2));
    c.boundary.wrap = get_bool(j, path, "boundary_wrap", false);
    c.boundary.value = static_cast<int>(get_int(j, path, "boundary_value", 0));
    c.steps = static_cast<int>(get_int(j, path, "steps", 0, true));
    c.early_adopters = get_int_array(j, path, "early_adopters");
    if (!has(j, "rule")) fail(join(path, "rule"), "required field missing");
    const json& r = j.at("rule");
    const std::string rpath = join(path, "rule");
    check_keys(r, rpath,
               {"kind", "variant", "p", "threshold", "neighborhood", "radius"});
    c.rule_kind = get_string(r, rpath, "kind", "", true);
    if (c.rule_kind != "diffusion" && c.rule_kind != "sum-threshold")
        fail(join(rpath, "kind"), "expected diffusion|sum-threshold");
    const std::string variant = get_string(r, rpath, "variant", "deterministic");
    if (variant == "deterministic")
        c.variant = ca::DiffusionVariant::Deterministic;
    else if (variant == "stochastic")
        c.variant = ca::DiffusionVariant::Stochastic;
    else
        fail(join(rpath, "variant"), "expected deterministic|stochastic");
    c.adoption_p = get_double(r, rpath, "p", 1.0);
    c.threshold = static_cast<int>(get_int(r, rpath, "threshold", 1));
    c.neighborhood = neighborhood_from_string(
        get_string(r, rpath, "neighborhood", "left-right"),
        join(rpath, "neighborhood"));
    c.radius = static_cast<int>(get_int(r, rpath, "radius", 1));
    return c;
}

org::CoordinationMode mode_from_config(const json& j, const std::string& path,
                                       const char* key) {
    return org::mode_from_string(get_string(j, path, key, "", true));
}

OrgSearchConfig parse_org_search(const json& j, const std::string& path) {
    check_keys(j, path,
               {"landscape", "units", "headquarters", "incentive_weight", "mode",
                "strategy", "sigma_eval", "comm_error", "hq_implement_all",
                "periods"});
    OrgSearchConfig c;
    if (!has(j, "landscape")) fail(join(path, "landscape"), "required field missing");
    c.landscape = parse_landscape(j.at("landscape"), join(path, "landscape"));
    c.units = get_int_array(j, path, "units", true);
    c.headquarters = get_bool(j, path, "headquarters", false);
    c.incentive_weight = get_double(j, path, "incentive_weight", 1.0);
    c.mode = mode_from_config(j, path, "mode");
    if (!has(j, "strategy")) fail(join(path, "strategy"), "required field missing");
    c.strategy = parse_strategy(j.at("strategy"), join(path, "strategy"));
    c.params.sigma_eval = get_double(j, path, "sigma_eval", 0.0);
    c.params.comm_error = get_double(j, path, "comm_error", 0.0);
    c.params.hq_implement_all = get_bool(j, path, "hq_implement_all", false);
    c.periods = static_cast<int>(get_int(j, path, "periods", 1, true));
    // Fail fast on inconsistent org/landscape shapes.
    org::validate(org::make_org(c.units, c.headquarters, c.incentive_weight),
                  c.landscape.n);
    if (c.mode == org::CoordinationMode::Hierarchical && !c.headquarters)
        fail(join(path, "mode"), "hierarchical mode requires headquarters");
    return c;
}

GrowthStudyConfig parse_growth_study(const json& j, const std::string& path) {
    check_keys(j, path,
               {"n0", "units", "complexity", "incentive_weight", "strategy",
                "sigma_eval", "comm_error", "hq_implement_all", "learning",
                "growth", "horizon", "zero_init_new_bits"});
    GrowthStudyConfig c;
    c.n0 = static_cast<int>(get_int(j, path, "n0", 0, true));
    c.units = get_int_array(j, path, "units", true);
    const std::string complexity = get_string(j, path, "complexity", "", true);
    if (complexity == "decomposable")
        c.complexity = org::TaskComplexity::Decomposable;
    else if (complexity == "non-decomposable")
        c.complexity = org::TaskComplexity::NonDecomposable;
    else
        fail(join(path, "complexity"), "expected decomposable|non-decomposable");
    c.incentive_weight = get_double(j, path, "incentive_weight", 1.0);
    if (!has(j, "strategy")) fail(join(path, "strategy"), "required field missing");
    c.strategy = parse_strategy(j.at("strategy"), join(path, "strategy"));
    c.params.sigma_eval = get_double(j, path, "sigma_eval", 0.0);
    c.params.comm_error = get_double(j, path, "comm_error", 0.0);
    c.params.hq_implement_all = get_bool(j, path, "hq_implement_all", false);
    if (has(j, "learning")) {
        const json& l = j.at("learning");
        const std::string lpath = join(path, "learning");
        check_keys(l, lpath,
                   {"interval", "gain", "forgetting", "floor", "initial_weights"});
        c.learning.interval = static_cast<int>(get_int(l, lpath, "interval", 10));
        c.learning.gain = get_double(l, lpath, "gain", 1.0);
        c.learning.forgetting = get_double(l, lpath, "forgetting", 0.0);
        c.learning.floor = get_double(l, lpath, "floor", 1e-3);
        if (has(l, "initial_weights")) {
            const json& w = l.at("initial_weights");
            if (!w.is_array() || w.size() != adapt::kModeCount)
                fail(join(lpath, "initial_weights"), "expected 3 numbers");
            for (int i = 0; i < adapt::kModeCount; ++i) {
                if (!w[i].is_number())
                    fail(join(lpath, "initial_weights"), "expected 3 numbers");
                c.initial_propensities.weights[i] = w[i].get<double>();
            }
        }
        adapt::validate(c.learning);
    }
    for (const json& e : j.value("growth", json::array())) {
        const std::string gpath = join(path, "growth");
        check_keys(e, gpath, {"period", "n_add"});
        adapt::GrowthEvent ev;
        ev.period = static_cast<int>(get_int(e, gpath, "period", 0, true));
        ev.n_add = static_cast<int>(get_int(e, gpath, "n_add", 1));
        c.schedule.push_back(ev);
    }
    adapt::validate_schedule(c.schedule);
    c.horizon = static_cast<int>(get_int(j, path, "horizon", 100, true));
    c.zero_init_new_bits = get_bool(j, path, "zero_init_new_bits", false);
    org::validate(org::make_org(c.units, true, c.incentive_weight), c.n0);
    return c;
}

HiddenActionConfig parse_hidden_action(const json& j, const std::string& path) {
    check_keys(j, path,
               {"effort_levels", "effort_max", "premium_levels", "theta_mean",
                "theta_sd", "risk_aversion", "reservation", "memory",
                "visible_fraction_principal", "visible_fraction_agent",
                "explore_prob_principal", "explore_prob_agent", "horizon",
                "turbulence", "meta", "classify_tolerance_cells"});
    HiddenActionConfig c;
    ha::HiddenActionParams& p = c.params;
    p.effort_levels = static_cast<int>(get_int(j, path, "effort_levels", 101));
    p.effort_max = get_double(j, path, "effort_max", 1.0);
    p.premium_levels = static_cast<int>(get_int(j, path, "premium_levels", 101));
    p.theta_mean = get_double(j, path, "theta_mean", 0.0);
    p.theta_sd = get_double(j, path, "theta_sd", 0.4);
    p.risk_aversion = get_double(j, path, "risk_aversion", 1.0);
    p.reservation = get_double(j, path, "reservation", 0.0);
    p.memory = static_cast<int>(get_int(j, path, "memory", 10));
    p.visible_fraction_principal =
        get_double(j, path, "visible_fraction_principal", 0.2);
    p.visible_fraction_agent = get_double(j, path, "visible_fraction_agent", 0.2);
    p.explore_prob_principal = get_double(j, path, "explore_prob_principal", 0.1);
    p.explore_prob_agent = get_double(j, path, "explore_prob_agent", 0.1);
    c.horizon = static_cast<int>(get_int(j, path, "horizon", 100, true));
    if (has(j, "turbulence")) {
        const json& t = j.at("turbulence");
        const std::string tpath = join(path, "turbulence");
        check_keys(t, tpath, {"every", "periods"});
        if (has(t, "every") && has(t, "periods"))
            fail(tpath, "give either 'every' or 'periods', not both");
        if (has(t, "every"))
            p.turbulence_periods = ha::periodic_schedule(
                static_cast<int>(get_int(t, tpath, "every", 0, true)), c.horizon);
        else
            p.turbulence_periods = get_int_array(t, tpath, "periods", true);
    }
    if (has(j, "meta")) {
        const json& m = j.at("meta");
        const std::string mpath = join(path, "meta");
        check_keys(m, mpath, {"mu_shift_sd", "sigma_factor_min", "sigma_factor_max"});
        p.meta.mu_shift_sd = get_double(m, mpath, "mu_shift_sd", p.meta.mu_shift_sd);
        p.meta.sigma_factor_min =
            get_double(m, mpath, "sigma_factor_min", p.meta.sigma_factor_min);
        p.meta.sigma_factor_max =
            get_double(m, mpath, "sigma_factor_max", p.meta.sigma_factor_max);
    }
    c.classify_tolerance_cells =
        static_cast<int>(get_int(j, path, "classify_tolerance_cells", 1));
    ha::validate(p);
    return c;
}

const char* block_key(Study s) {
    switch (s) {
        case Study::NkAnalysis: return "nk_analysis";
        case Study::Automaton: return "automaton";
        case Study::OrgSearch: return "org_search";
        case Study::GrowthStudy: return "growth_study";
        case Study::HiddenAction: return "hidden_action";
    }
    throw std::logic_error("unreachable study");
}

}  // namespace

ExperimentConfig parse_config(const json& j) try {
    check_keys(j, "",
               {"study", "seed", "replications", "out_dir", "emit", "nk_analysis",
                "automaton", "org_search", "growth_study", "hidden_action"});
    ExperimentConfig c;
    c.study = study_from_string(get_string(j, "", "study", "", true));
    c.seed = get_u64(j, "", "seed", 0);
    c.replications = static_cast<int>(get_int(j, "", "replications", 1));
    if (c.replications < 1) fail("replications", "must be >= 1");
    c.out_dir = get_string(j, "", "out_dir", "out");
    if (has(j, "emit")) {
        const json& e = j.at("emit");
        check_keys(e, "emit", {"runs", "summary", "landscape", "grids"});
        c.emit.runs = get_bool(e, "emit", "runs", true);
        c.emit.summary = get_bool(e, "emit", "summary", true);
        c.emit.landscape = get_bool(e, "emit", "landscape", false);
        c.emit.grids = get_bool(e, "emit", "grids", false);
    }

    const char* key = block_key(c.study);
    if (!has(j, key))
        throw ConfigError("config is missing the '" + std::string(key) +
                          "' block required by study " +
                          std::string(to_string(c.study)));
    for (const char* other :
         {"nk_analysis", "automaton", "org_search", "growth_study", "hidden_action"})
        if (std::string_view(other) != key && has(j, other))
            throw ConfigError("config block '" + std::string(other) +
                              "' does not belong to study " +
                              std::string(to_string(c.study)));

    switch (c.study) {
        case Study::NkAnalysis:
            c.nk_analysis = parse_nk_analysis(j.at(key), key);
            break;
        case Study::Automaton:
            c.automaton = parse_automaton(j.at(key), key);
            break;
        case Study::OrgSearch:
            c.org_search = parse_org_search(j.at(key), key);
            break;
        case Study::GrowthStudy:
            c.growth_study = parse_growth_study(j.at(key), key);
            break;
        case Study::HiddenAction:
            c.hidden_action = parse_hidden_action(j.at(key), key);
            break;
    }
    c.canonical = serialize_config(c);
    return c;
} catch (const std::invalid_argument& e) {
    // Module validation failures surface as config errors.
    throw ConfigError(e.what());
}

ExperimentConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open config file " + file.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + file.string() + ": " + e.what());
    }
    return parse_config(j);
}

json serialize_config(const ExperimentConfig& c) {
    json j;
    j["study"] = std::string(to_string(c.study));
    j["seed"] = c.seed;
    j["replications"] = c.replications;
    j["out_dir"] = c.out_dir;
    j["emit"] = {{"runs", c.emit.runs},
                 {"summary", c.emit.summary},
                 {"landscape", c.emit.landscape},
                 {"grids", c.emit.grids}};
    switch (c.study) {
        case Study::NkAnalysis: {
            const NkAnalysisConfig& s = c.nk_analysis;
            j["nk_analysis"] = {{"landscape", landscape_json(s.landscape)},
                                {"census", s.census},
                                {"enumeration_cap", s.enumeration_cap}};
            break;
        }
        case Study::Automaton: {
            const AutomatonConfig& s = c.automaton;
            j["automaton"] = {
                {"topology", std::string(topology_string(s.topology))},
                {"rows", s.rows},
                {"cols", s.cols},
                {"alphabet", s.alphabet},
                {"boundary_wrap", s.boundary.wrap},
                {"boundary_value", s.boundary.value},
                {"rule",
                 {{"kind", s.rule_kind},
                  {"variant", s.variant == ca::DiffusionVariant::Deterministic
                                  ? "deterministic"
                                  : "stochastic"},
                  {"p", s.adoption_p},
                  {"threshold", s.threshold},
                  {"neighborhood", std::string(neighborhood_string(s.neighborhood))},
                  {"radius", s.radius}}},
                {"early_adopters", s.early_adopters},
                {"steps", s.steps}};
            break;
        }
        case Study::OrgSearch: {
            const OrgSearchConfig& s = c.org_search;
            j["org_search"] = {{"landscape", landscape_json(s.landscape)},
                               {"units", s.units},
                               {"headquarters", s.headquarters},
                               {"incentive_weight", s.incentive_weight},
                               {"mode", std::string(org::to_string(s.mode))},
                               {"strategy", strategy_json(s.strategy)},
                               {"sigma_eval", s.params.sigma_eval},
                               {"comm_error", s.params.comm_error},
                               {"hq_implement_all", s.params.hq_implement_all},
                               {"periods", s.periods}};
            break;
        }
        case Study::GrowthStudy: {
            const GrowthStudyConfig& s = c.growth_study;
            json growth = json::array();
            for (const auto& e : s.schedule)
                growth.push_back({{"period", e.period}, {"n_add", e.n_add}});
            j["growth_study"] = {
                {"n0", s.n0},
                {"units", s.units},
                {"complexity", s.complexity == org::TaskComplexity::Decomposable
                                   ? "decomposable"
                                   : "non-decomposable"},
                {"incentive_weight", s.incentive_weight},
                {"strategy", strategy_json(s.strategy)},
                {"sigma_eval", s.params.sigma_eval},
                {"comm_error", s.params.comm_error},
                {"hq_implement_all", s.params.hq_implement_all},
                {"learning",
                 {{"interval", s.learning.interval},
                  {"gain", s.learning.gain},
                  {"forgetting", s.learning.forgetting},
                  {"floor", s.learning.floor},
                  {"initial_weights", s.initial_propensities.weights}}},
                {"growth", growth},
                {"horizon", s.horizon},
                {"zero_init_new_bits", s.zero_init_new_bits}};
            break;
        }
        case Study::HiddenAction: {
            const HiddenActionConfig& s = c.hidden_action;
            const ha::HiddenActionParams& p = s.params;
            j["hidden_action"] = {
                {"effort_levels", p.effort_levels},
                {"effort_max", p.effort_max},
                {"premium_levels", p.premium_levels},
                {"theta_mean", p.theta_mean},
                {"theta_sd", p.theta_sd},
                {"risk_aversion", p.risk_aversion},
                {"reservation", p.reservation},
                {"memory", p.memory},
                {"visible_fraction_principal", p.visible_fraction_principal},
                {"visible_fraction_agent", p.visible_fraction_agent},
                {"explore_prob_principal", p.explore_prob_principal},
                {"explore_prob_agent", p.explore_prob_agent},
                {"horizon", s.horizon},
                {"turbulence", {{"periods", p.turbulence_periods}}},
                {"meta",
                 {{"mu_shift_sd", p.meta.mu_shift_sd},
                  {"sigma_factor_min", p.meta.sigma_factor_min},
                  {"sigma_factor_max", p.meta.sigma_factor_max}}},
                {"classify_tolerance_cells", s.classify_tolerance_cells}};
            break;
        }
    }
    return j;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
    return fnv1a64(config.canonical.dump());
}

// ---------------------------------------------------------------------------
// Study runners
// ---------------------------------------------------------------------------

namespace {

struct AuxFile {
    std::string name;
    std::string content;
};

struct StudyOutput {
    std::string runs_csv;
    std::vector<AuxFile> aux;
};

std::string run_label(Study s) { return std::string(to_string(s)) + ".run"; }

StudyOutput run_nk_analysis(const ExperimentConfig& config) {
    const NkAnalysisConfig& s = config.nk_analysis;
    csv::Writer w({"run_id", "n", "k", "pattern", "seed", "global_v", "global_bits",
                   "local_optima"});
    StudyOutput out;
    for (int r = 0; r < config.replications; ++r) {
        nk::LandscapeSpec spec = s.landscape;
        spec.seed = derive_seed(config.seed, "nk-analysis.landscape", r);
        const nk::Landscape landscape = nk::generate(spec);
        const auto opt = nk::global_optimum(landscape, s.enumeration_cap);
        long long census = -1;
        if (s.census)
            census = nk::local_optima_census(landscape, s.enumeration_cap).count();
        w.begin_row();
        w.add(static_cast<long long>(r));
        w.add(spec.n);
        w.add(spec.k);
        w.add(nk::to_string(spec.pattern));
        w.add(spec.seed);
        w.add(opt.value);
        w.add(opt.config.to_string());
        w.add(census);
        if (r == 0 && config.emit.landscape)
            out.aux.push_back({"landscape.txt", nk::dump_tables(landscape)});
    }
    out.runs_csv = w.str();
    return out;
}

StudyOutput run_automaton(const ExperimentConfig& config) {
    const AutomatonConfig& s = config.automaton;
    ca::Grid initial = ca::make_grid(s.topology, s.rows, s.cols, s.alphabet,
                                     s.boundary);
    ca::Rule rule;
    if (s.rule_kind == "diffusion") {
        auto setup = ca::diffusion_preset(s.variant, s.adoption_p, s.early_adopters,
                                          s.threshold, s.neighborhood, s.radius);
        rule = std::move(setup.rule);
        ca::set_cells(initial, setup.early_adopters, 1);
    } else {
        rule = ca::sum_threshold_rule(s.threshold);
        ca::set_cells(initial, s.early_adopters, 1);
    }

    csv::Writer w({"run_id", "step", "state", "count"});
    StudyOutput out;
    for (int r = 0; r < config.replications; ++r) {
        RandomStream stream = substream(config.seed, run_label(Study::Automaton), r);
        const ca::Trajectory traj = ca::run(initial, rule, s.steps, stream);
        for (std::size_t step = 0; step < traj.counts.size(); ++step)
            for (int state = 0; state < s.alphabet; ++state) {
                w.begin_row();
                w.add(static_cast<long long>(r));
                w.add(static_cast<long long>(step));
                w.add(state);
                w.add(traj.counts[step][state]);
            }
        if (r == 0 && config.emit.grids) {
            char name[32];
            for (std::size_t step = 0; step < traj.grids.size(); ++step) {
                std::snprintf(name, sizeof name, "grid_%03zu.csv", step);
                out.aux.push_back({name, ca::grid_csv(traj.grids[step])});
            }
        }
    }
    out.runs_csv = w.str();
    return out;
}

StudyOutput run_org_search(const ExperimentConfig& config) {
    const OrgSearchConfig& s = config.org_search;
    const org::OrgDesign design =
        org::make_org(s.units, s.headquarters, s.incentive_weight);

    std::vector<std::string> header{"run_id", "period", "mode", "v", "bits"};
    for (std::size_t u = 0; u < s.units.size(); ++u)
        header.push_back("obj_u" + std::to_string(u));
    csv::Writer w(header);
    StudyOutput out;
    for (int r = 0; r < config.replications; ++r) {
        nk::LandscapeSpec spec = s.landscape;
        spec.seed = derive_seed(config.seed, "org-search.landscape", r);
        const nk::Landscape landscape = nk::generate(spec);
        RandomStream stream = substream(config.seed, run_label(Study::OrgSearch), r);
        const auto initial = org::random_configuration(landscape.n(), stream);
        const auto rows = org::run_org(design, s.mode, landscape, s.strategy,
                                       s.params, s.periods, initial, stream);
        for (const auto& row : rows) {
            w.begin_row();
            w.add(static_cast<long long>(r));
            w.add(row.period);
            w.add(org::to_string(s.mode));
            w.add(row.v);
            w.add(row.config.to_string());
            for (double obj : row.unit_objectives) w.add(obj);
        }
        if (r == 0 && config.emit.landscape)
            out.aux.push_back({"landscape.txt", nk::dump_tables(landscape)});
    }
    out.runs_csv = w.str();
    return out;
}

StudyOutput run_growth_study(const ExperimentConfig& config) {
    const GrowthStudyConfig& s = config.growth_study;

    csv::Writer w({"run_id", "period", "active_mode", "v", "bits",
                   "weight_decentralized", "weight_sequential", "weight_hierarchical",
                   "n_current", "units_current"});
    StudyOutput out;
    for (int r = 0; r < config.replications; ++r) {
        adapt::GrowthStudySetup setup;
        setup.org = org::make_org(s.units, true, s.incentive_weight);
        nk::LandscapeSpec spec;
        spec.n = s.n0;
        spec.seed = derive_seed(config.seed, "growth-study.landscape", r);
        if (s.complexity == org::TaskComplexity::Decomposable) {
            spec.pattern = nk::InteractionPattern::BlockDiagonal;
            spec.block_sizes = s.units;
        } else {
            spec.pattern = nk::InteractionPattern::AdjacentCyclic;
            spec.k = s.n0 - 1;
        }
        setup.landscape = nk::generate(spec);
        setup.complexity = s.complexity;
        setup.strategy = s.strategy;
        setup.org_params = s.params;
        setup.learning = s.learning;
        setup.initial_propensities = s.initial_propensities;
        setup.schedule = s.schedule;
        setup.horizon = s.horizon;
        setup.zero_init_new_bits = s.zero_init_new_bits;

        RandomStream stream = substream(config.seed, run_label(Study::GrowthStudy), r);
        const auto rows = adapt::run_growth_study(setup, stream);
        for (const auto& row : rows) {
            w.begin_row();
            w.add(static_cast<long long>(r));
            w.add(row.period);
            w.add(org::to_string(row.mode));
            w.add(row.v);
            w.add(row.config.to_string());
            for (double weight : row.weights) w.add(weight);
            w.add(row.n);
            w.add(row.units);
        }
        if (r == 0 && config.emit.landscape)
            out.aux.push_back({"landscape.txt", nk::dump_tables(setup.landscape)});
    }
    out.runs_csv = w.str();
    return out;
}

StudyOutput run_hidden_action(const ExperimentConfig& config) {
    const HiddenActionConfig& s = config.hidden_action;
    csv::Writer w({"run_id", "t", "accepted", "p", "f", "a", "theta", "x",
                   "principal_net", "agent_ce", "visible_p_count", "visible_a_count",
                   "regime_id"});
    StudyOutput out;
    for (int r = 0; r < config.replications; ++r) {
        RandomStream stream =
            substream(config.seed, run_label(Study::HiddenAction), r);
        const auto rows = ha::simulate(s.params, s.horizon, stream);
        for (const auto& row : rows) {
            w.begin_row();
            w.add(static_cast<long long>(r));
            w.add(row.t);
            w.add(static_cast<long long>(row.accepted ? 1 : 0));
            w.add(row.premium);
            w.add(row.fixed);
            w.add(row.effort);
            w.add(row.theta);
            w.add(row.outcome);
            w.add(row.principal_net);
            w.add(row.agent_ce_est);
            w.add(row.visible_premiums);
            w.add(row.visible_efforts);
            w.add(row.regime);
        }
    }
    out.runs_csv = w.str();
    return out;
}

StudyOutput run_study(const ExperimentConfig& config) {
    switch (config.study) {
        case Study::NkAnalysis: return run_nk_analysis(config);
        case Study::Automaton: return run_automaton(config);
        case Study::OrgSearch: return run_org_search(config);
        case Study::GrowthStudy: return run_growth_study(config);
        case Study::HiddenAction: return run_hidden_action(config);
    }
    throw std::logic_error("unreachable study");
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

double parse_double(const std::string& s, const char* column) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str())
        throw ConfigError("summary aggregation: column '" + std::string(column) +
                          "' holds non-numeric value '" + s + "'");
    return v;
}

long long require_run_id(const csv::Table& t, const std::vector<std::string>& row) {
    const int c = t.column("run_id");
    if (c < 0) throw ConfigError("per-period file is missing the run_id column");
    return std::stoll(row[c]);
}

int require_column(const csv::Table& t, const char* name) {
    const int c = t.column(name);
    if (c < 0)
        throw ConfigError("per-period file is missing the '" + std::string(name) +
                          "' column");
    return c;
}

}  // namespace

SummaryBundle aggregate(Study study, const std::vector<csv::Table>& run_tables) {
    // metric extraction keyed by replication id; last-period rows are found
    // by the max period/step value, so input row order never matters.
    std::map<long long, std::vector<double>> metrics;

    SummaryBundle bundle;
    switch (study) {
        case Study::NkAnalysis: {
            bundle.metric_names = {"global_v", "local_optima"};
            for (const auto& t : run_tables) {
                const int cv = require_column(t, "global_v");
                const int cc = require_column(t, "local_optima");
                for (const auto& row : t.rows)
                    metrics[require_run_id(t, row)] = {
                        parse_double(row[cv], "global_v"),
                        parse_double(row[cc], "local_optima")};
            }
            break;
        }
        case Study::Automaton: {
            // Terminal count per state.
            std::map<long long, std::map<long long, std::map<int, double>>> by_step;
            int alphabet = 0;
            for (const auto& t : run_tables) {
                const int cs = require_column(t, "step");
                const int cstate = require_column(t, "state");
                const int cc = require_column(t, "count");
                for (const auto& row : t.rows) {
                    const long long id = require_run_id(t, row);
                    const long long step = std::stoll(row[cs]);
                    const int state = static_cast<int>(std::stoll(row[cstate]));
                    by_step[id][step][state] = parse_double(row[cc], "count");
                    alphabet = std::max(alphabet, state + 1);
                }
            }
            for (int a = 0; a < alphabet; ++a)
                bundle.metric_names.push_back("final_state_" + std::to_string(a));
            for (const auto& [id, steps] : by_step) {
                const auto& last = steps.rbegin()->second;
                std::vector<double> m(alphabet, 0.0);
                for (const auto& [state, count] : last) m[state] = count;
                metrics[id] = std::move(m);
            }
            break;
        }
        case Study::OrgSearch:
        case Study::GrowthStudy: {
            const bool growth = study == Study::GrowthStudy;
            bundle.metric_names = {"final_v"};
            if (growth)
                for (const char* m :
                     {"mode_decentralized", "mode_sequential", "mode_hierarchical"})
                    bundle.metric_names.push_back(m);
            std::map<long long, std::pair<long long, std::vector<double>>> last;
            for (const auto& t : run_tables) {
                const int cp = require_column(t, "period");
                const int cv = require_column(t, "v");
                const int cm = growth ? require_column(t, "active_mode") : -1;
                for (const auto& row : t.rows) {
                    const long long id = require_run_id(t, row);
                    const long long period = std::stoll(row[cp]);
                    auto it = last.find(id);
                    if (it != last.end() && it->second.first >= period) continue;
                    std::vector<double> m{parse_double(row[cv], "v")};
                    if (growth) {
                        const auto mode = org::mode_from_string(row[cm]);
                        for (int k = 0; k < adapt::kModeCount; ++k)
                            m.push_back(static_cast<int>(mode) == k ? 1.0 : 0.0);
                    }
                    last[id] = {period, std::move(m)};
                }
            }
            for (auto& [id, pm] : last) metrics[id] = std::move(pm.second);
            break;
        }
        case Study::HiddenAction: {
            bundle.metric_names = {"final_premium", "avg_principal_net",
                                   "accepted_share"};
            struct Acc {
                long long last_t = -1;
                double final_premium = 0.0;
                double net_sum = 0.0;
                double accepted = 0.0;
                long long periods = 0;
            };
            std::map<long long, Acc> acc;
            for (const auto& t : run_tables) {
                const int ct = require_column(t, "t");
                const int cp = require_column(t, "p");
                const int cn = require_column(t, "principal_net");
                const int ca_ = require_column(t, "accepted");
                for (const auto& row : t.rows) {
                    const long long id = require_run_id(t, row);
                    Acc& a = acc[id];
                    const long long tt = std::stoll(row[ct]);
                    a.net_sum += parse_double(row[cn], "principal_net");
                    a.accepted += parse_double(row[ca_], "accepted");
                    ++a.periods;
                    if (tt > a.last_t) {
                        a.last_t = tt;
                        a.final_premium = parse_double(row[cp], "p");
                    }
                }
            }
            for (const auto& [id, a] : acc)
                metrics[id] = {a.final_premium, a.net_sum / a.periods,
                               a.accepted / a.periods};
            break;
        }
    }

    const std::size_t m = bundle.metric_names.size();
    bundle.mean.assign(m, 0.0);
    bundle.sd.assign(m, 0.0);
    bundle.ci95_half.assign(m, 0.0);
    for (const auto& [id, values] : metrics)
        bundle.replication_rows.emplace_back(id, values);

    const std::size_t n = bundle.replication_rows.size();
    if (n == 0) throw ConfigError("aggregation found no replication rows");
    for (std::size_t k = 0; k < m; ++k) {
        double sum = 0.0;
        for (const auto& [id, v] : bundle.replication_rows) sum += v[k];
        bundle.mean[k] = sum / n;
        if (n >= 2) {
            double ss = 0.0;
            for (const auto& [id, v] : bundle.replication_rows)
                ss += (v[k] - bundle.mean[k]) * (v[k] - bundle.mean[k]);
            bundle.sd[k] = std::sqrt(ss / (n - 1));
        }
        // Normal-approximation 95% half-width.
        bundle.ci95_half[k] = 1.959963984540054 * bundle.sd[k] / std::sqrt(n);
    }
    return bundle;
}

namespace {

std::string summary_csv_text(const ExperimentConfig& config,
                             const SummaryBundle& bundle) {
    std::vector<std::string> header{"kind", "run_id"};
    for (const auto& m : bundle.metric_names) header.push_back(m);
    header.push_back("config_hash");
    header.push_back("engine_version");
    csv::Writer w(header);

    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(config_hash(config)));

    auto tail = [&] {
        w.add(std::string_view(hash));
        w.add(kEngineVersion);
    };
    for (const auto& [id, values] : bundle.replication_rows) {
        w.begin_row();
        w.add("replication");
        w.add(id);
        for (double v : values) w.add(v);
        tail();
    }
    auto stat_row = [&](const char* kind, const std::vector<double>& values) {
        w.begin_row();
        w.add(kind);
        w.add("");
        for (double v : values) w.add(v);
        tail();
    };
    stat_row("mean", bundle.mean);
    stat_row("sd", bundle.sd);
    stat_row("ci95_half", bundle.ci95_half);
    return w.str();
}

void write_file(const std::filesystem::path& path, const std::string& content,
                std::vector<std::filesystem::path>& written) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw IoError("failed writing " + path.string());
    written.push_back(path);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    StudyOutput output = run_study(config);

    ExperimentResult result;
    result.runs_csv = std::move(output.runs_csv);
    // Summary is always recomputed from the emitted per-period bytes, so the
    // two files can never drift apart.
    const SummaryBundle bundle =
        aggregate(config.study, {csv::parse(result.runs_csv)});
    result.summary_csv = summary_csv_text(config, bundle);

    const std::filesystem::path dir(config.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string());

    if (config.emit.runs) write_file(dir / "runs.csv", result.runs_csv,
                                     result.files_written);
    if (config.emit.summary)
        write_file(dir / "summary.csv", result.summary_csv, result.files_written);
    for (const AuxFile& aux : output.aux)
        write_file(dir / aux.name, aux.content, result.files_written);
    return result;
}

SweepResult sweep(const ExperimentConfig& base, const std::string& axis,
                  const std::vector<json>& values) {
    if (values.empty()) throw ConfigError("sweep needs a non-empty values list");

    // Resolve the axis path on the canonical config.
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= axis.size()) {
        const std::size_t dot = axis.find('.', pos);
        if (dot == std::string::npos) {
            parts.push_back(axis.substr(pos));
            break;
        }
        parts.push_back(axis.substr(pos, dot - pos));
        pos = dot + 1;
    }
    if (parts.empty() || parts.front().empty())
        throw ConfigError("sweep axis must be a dot-separated field path");

    {
        const json* cursor = &base.canonical;
        for (const auto& p : parts) {
            if (!cursor->is_object() || !cursor->contains(p))
                throw ConfigError("sweep axis '" + axis + "' not found in config");
            cursor = &cursor->at(p);
        }
        if (cursor->is_object() || cursor->is_array())
            throw ConfigError("sweep axis '" + axis +
                              "' must resolve to a scalar field");
    }

    SweepResult result;
    std::vector<SummaryBundle> bundles;
    std::vector<std::string> value_labels;
    for (const json& value : values) {
        json patched = base.canonical;
        json* cursor = &patched;
        for (std::size_t i = 0; i + 1 < parts.size(); ++i)
            cursor = &cursor->at(parts[i]);
        cursor->at(parts.back()) = value;

        std::string label = value.is_string() ? value.get<std::string>()
                                              : value.dump();
        for (char& ch : label)
            if (ch == '/' || ch == '\\') ch = '_';
        value_labels.push_back(label);

        patched["out_dir"] =
            (std::filesystem::path(base.out_dir) / (axis + "=" + label)).string();
        ExperimentConfig config = parse_config(patched);
        ExperimentResult er = run_experiment(config);
        bundles.push_back(aggregate(config.study, {csv::parse(er.runs_csv)}));
        result.experiments.push_back(std::move(er));
    }

    std::vector<std::string> header{"axis", "value"};
    for (const auto& m : bundles.front().metric_names) {
        header.push_back("mean_" + m);
        header.push_back("sd_" + m);
    }
    csv::Writer w(header);
    for (std::size_t i = 0; i < bundles.size(); ++i) {
        w.begin_row();
        w.add(axis);
        w.add(value_labels[i]);
        for (std::size_t k = 0; k < bundles[i].metric_names.size(); ++k) {
            w.add(bundles[i].mean[k]);
            w.add(bundles[i].sd[k]);
        }
    }
    result.combined_csv = w.str();
    result.combined_path = std::filesystem::path(base.out_dir) / "combined.csv";
    std::error_code ec;
    std::filesystem::create_directories(base.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + base.out_dir);
    std::vector<std::filesystem::path> written;
    write_file(result.combined_path, result.combined_csv, written);
    return result;
}

}  // namespace ace::harness
