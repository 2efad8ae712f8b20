#pragma once

// Declarative experiment harness. A JSON config names one study and its
// parameter block; the runner executes R replications on isolated
// substreams derived from (master seed, study label, replication index),
// emits per-period rows to runs.csv and per-replication terminal metrics
// plus mean/sd/CI aggregates to summary.csv, and is byte-deterministic:
// the same config and seed always produce identical files, and raising R
// never changes the rows of existing replication ids.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "ace/adaptation.hpp"
#include "ace/automaton.hpp"
#include "ace/csvio.hpp"
#include "ace/hiddenaction.hpp"
#include "ace/landscape.hpp"
#include "ace/organization.hpp"

namespace ace::harness {

inline constexpr const char* kEngineVersion = "1.0.0";
inline constexpr const char* kOutDirEnvVar = "ACE_OUT";

/// Invalid configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Filesystem failure (CLI exit code 3).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Study { NkAnalysis, Automaton, OrgSearch, GrowthStudy, HiddenAction };

std::string_view to_string(Study s);
Study study_from_string(std::string_view s);

struct EmitFlags {
    bool runs = true;
    bool summary = true;
    bool landscape = false;  // replication 0 table dump
    bool grids = false;      // replication 0 per-step snapshots (automaton)
};

struct NkAnalysisConfig {
    nk::LandscapeSpec landscape;  // seed field ignored; seeds are derived
    bool census = true;
    int enumeration_cap = nk::kDefaultEnumerationCap;
};

struct AutomatonConfig {
    ca::Topology topology = ca::Topology::Ring;
    int rows = 1;
    int cols = 0;
    int alphabet = 2;
    ca::Boundary boundary;
    // rule
    std::string rule_kind = "diffusion";  // diffusion | sum-threshold
    ca::DiffusionVariant variant = ca::DiffusionVariant::Deterministic;
    double adoption_p = 1.0;
    int threshold = 1;
    ca::NeighborhoodKind neighborhood = ca::NeighborhoodKind::LeftRight;
    int radius = 1;
    std::vector<int> early_adopters;
    int steps = 0;
};

struct OrgSearchConfig {
    nk::LandscapeSpec landscape;
    std::vector<int> units;
    bool headquarters = false;
    double incentive_weight = 1.0;
    org::CoordinationMode mode = org::CoordinationMode::Decentralized;
    search::SearchStrategy strategy;
    org::OrgParams params;
    int periods = 1;
};

struct GrowthStudyConfig {
    int n0 = 0;
    std::vector<int> units;
    org::TaskComplexity complexity = org::TaskComplexity::NonDecomposable;
    double incentive_weight = 1.0;
    search::SearchStrategy strategy;
    org::OrgParams params;
    adapt::LearningParams learning;
    adapt::Propensities initial_propensities;
    std::vector<adapt::GrowthEvent> schedule;
    int horizon = 100;
    bool zero_init_new_bits = false;
};

struct HiddenActionConfig {
    ha::HiddenActionParams params;
    int horizon = 100;
    int classify_tolerance_cells = 1;
};

struct ExperimentConfig {
    Study study = Study::NkAnalysis;
    std::uint64_t seed = 0;
    int replications = 1;
    std::string out_dir = "out";
    EmitFlags emit;

    NkAnalysisConfig nk_analysis;
    AutomatonConfig automaton;
    OrgSearchConfig org_search;
    GrowthStudyConfig growth_study;
    HiddenActionConfig hidden_action;

    /// Canonical JSON of the config (sorted keys); hashing this gives the
    /// config_hash column.
    nlohmann::json canonical;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& file);

/// Serializes back to JSON equal to the parsed canonical form, so
/// parse(serialize(parse(x))) == parse(x).
nlohmann::json serialize_config(const ExperimentConfig& config);

std::uint64_t config_hash(const ExperimentConfig& config);

struct ExperimentResult {
    std::string runs_csv;
    std::string summary_csv;
    std::vector<std::filesystem::path> files_written;
};

/// Runs all replications and (per emit flags) writes runs.csv, summary.csv
/// and auxiliary dumps under out_dir.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Per-replication terminal metrics recomputed from per-period tables, plus
/// batch aggregates. Order of the input tables never matters: rows are
/// keyed and sorted by replication id.
struct SummaryBundle {
    std::vector<std::string> metric_names;
    std::vector<std::pair<long long, std::vector<double>>> replication_rows;
    std::vector<double> mean, sd, ci95_half;
};

SummaryBundle aggregate(Study study, const std::vector<csv::Table>& run_tables);

struct SweepResult {
    std::vector<ExperimentResult> experiments;
    std::string combined_csv;
    std::filesystem::path combined_path;
};

/// Runs one experiment per axis value (axis is a dot-separated path to a
/// scalar config field) in its own subdirectory and writes a combined
/// comparison table keyed by the axis value.
SweepResult sweep(const ExperimentConfig& base, const std::string& axis,
                  const std::vector<nlohmann::json>& values);

}  // namespace ace::harness
