// Command-line front end for the experiment harness. One subcommand per
// study plus `sweep`; every run is fully described by a JSON config, with
// seed/replications/output overridable from the command line.
//
// Exit codes: 0 success, 2 invalid config, 3 I/O failure.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "ace/harness.hpp"

namespace {

using ace::harness::ExperimentConfig;
using ace::harness::Study;

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> replications;
    std::optional<std::string> out_dir;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "experiment config (JSON)")
        ->required();
    cmd->add_option("--seed", opts.seed, "override the master seed");
    cmd->add_option("--replications", opts.replications,
                    "override the replication count");
    cmd->add_option("--out", opts.out_dir, "override the output directory");
    cmd->add_flag("--quiet", opts.quiet, "suppress progress output");
}

ExperimentConfig load(const CommonOpts& opts, std::optional<Study> expected) {
    ExperimentConfig config = ace::harness::load_config(opts.config_path);
    if (expected && config.study != *expected)
        throw ace::harness::ConfigError(
            "config declares study '" + std::string(to_string(config.study)) +
            "' but this subcommand runs '" + std::string(to_string(*expected)) +
            "'");
    if (opts.seed) config.seed = *opts.seed;
    if (opts.replications) {
        if (*opts.replications < 1)
            throw ace::harness::ConfigError("replications must be >= 1");
        config.replications = *opts.replications;
    }
    if (opts.out_dir) {
        config.out_dir = *opts.out_dir;
    } else if (const char* env = std::getenv(ace::harness::kOutDirEnvVar)) {
        config.out_dir = env;
    }
    // Overrides feed back into the canonical form (and the config hash).
    config.canonical = serialize_config(config);
    return config;
}

void report(const ace::harness::ExperimentResult& result, bool quiet) {
    if (quiet) return;
    for (const auto& path : result.files_written)
        std::cout << "wrote " << path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"agent-based computational economics engine"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* desc;
        Study study;
    };
    const Sub subs[] = {
        {"nk", "NK landscape generation and exhaustive analysis", Study::NkAnalysis},
        {"ca", "cellular automaton runs", Study::Automaton},
        {"org", "multi-unit organization search", Study::OrgSearch},
        {"grow", "growth study with coordination-mode learning", Study::GrowthStudy},
        {"ha", "agentized hidden-action contracting", Study::HiddenAction},
    };

    CommonOpts opts[6];
    for (std::size_t i = 0; i < 5; ++i)
        add_common(app.add_subcommand(subs[i].name, subs[i].desc), opts[i]);

    CommonOpts& sweep_opts = opts[5];
    std::string axis;
    std::vector<std::string> value_tokens;
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "run one experiment per axis value");
    add_common(sweep_cmd, sweep_opts);
    sweep_cmd->add_option("--axis", axis, "dot path of the swept scalar field")
        ->required();
    sweep_cmd
        ->add_option("--values", value_tokens,
                     "comma-separated list of values for the axis")
        ->required()
        ->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        for (std::size_t i = 0; i < 5; ++i) {
            if (app.get_subcommand(subs[i].name)->parsed()) {
                const ExperimentConfig config = load(opts[i], subs[i].study);
                report(ace::harness::run_experiment(config), opts[i].quiet);
                return 0;
            }
        }
        // sweep
        const ExperimentConfig base = load(sweep_opts, std::nullopt);
        std::vector<nlohmann::json> values;
        for (const std::string& tok : value_tokens) {
            try {
                values.push_back(nlohmann::json::parse(tok));
            } catch (const nlohmann::json::parse_error&) {
                values.push_back(tok);  // bare string value
            }
        }
        const auto result = ace::harness::sweep(base, axis, values);
        if (!sweep_opts.quiet) {
            for (const auto& er : result.experiments)
                for (const auto& path : er.files_written)
                    std::cout << "wrote " << path.string() << "\n";
            std::cout << "wrote " << result.combined_path.string() << "\n";
        }
        return 0;
    } catch (const ace::harness::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ace::harness::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
