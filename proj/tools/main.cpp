#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commcred/commands.hpp"
#include "commcred/config.hpp"
#include "commcred/util.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Run configuration file (TOML-style)");
    cmd->add_option("--seed", args.seed, "Override the configured seed")
        ->each([&args](const std::string&) { args.seed_set = true; });
    cmd->add_option("--out", args.out_dir, "Override the configured output directory");
}

commcred::RunConfig resolve_config(const CommonArgs& args) {
    commcred::RunConfig cfg;
    if (!args.config_path.empty()) {
        cfg = commcred::RunConfig::from_file(args.config_path);
    }
    if (args.seed_set) cfg.seed = args.seed;
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    return cfg;
}

int dispatch(const std::string& name, int (*fn)(const commcred::RunConfig&),
             const CommonArgs& args, const std::vector<std::string>& measures = {}) {
    try {
        commcred::RunConfig cfg = resolve_config(args);
        if (!measures.empty()) cfg.measures = measures;
        return commcred::run_protected(name, fn, cfg);
    } catch (const commcred::UsageError& e) {
        std::cerr << name << ": " << e.what() << "\n";
        return commcred::kExitUsage;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Community detection and link-credibility profiling for follower networks"};
    app.require_subcommand(1);

    CommonArgs synth_args, detect_args, categorize_args, score_args, characterize_args;
    std::string synth_spec;
    std::vector<std::string> measures;

    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic dataset with truth.json");
    synth->add_option("--spec", synth_spec, "Synthetic dataset spec file");
    add_common(synth, synth_args);

    CLI::App* detect = app.add_subcommand("detect", "Build the follower graph and detect "
                                                    "size-constrained communities");
    add_common(detect, detect_args);

    CLI::App* categorize =
        app.add_subcommand("categorize", "Categorize tweets by the links they carry");
    add_common(categorize, categorize_args);

    CLI::App* score = app.add_subcommand("score", "Train criterion classifiers and score pages");
    add_common(score, score_args);

    CLI::App* characterize =
        app.add_subcommand("characterize", "Compute community measures and viz documents");
    characterize->add_option("--measure", measures,
                             "Measure to visualize (repeatable; default: all)");
    add_common(characterize, characterize_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : commcred::kExitUsage;
    }

    if (synth->parsed()) {
        commcred::SynthCliConfig cfg;
        cfg.spec_file = synth_spec;
        if (!synth_args.config_path.empty() && synth_spec.empty()) {
            cfg.spec_file = synth_args.config_path;
        }
        cfg.seed = synth_args.seed;
        cfg.seed_overridden = synth_args.seed_set;
        if (!synth_args.out_dir.empty()) cfg.out_dir = synth_args.out_dir;
        try {
            return commcred::cmd_synth(cfg);
        } catch (const commcred::UsageError& e) {
            std::cerr << "synth: " << e.what() << "\n";
            return commcred::kExitUsage;
        } catch (const std::exception& e) {
            std::cerr << "synth: " << e.what() << "\n";
            return commcred::kExitInvariant;
        }
    }
    if (detect->parsed()) return dispatch("detect", commcred::cmd_detect, detect_args);
    if (categorize->parsed()) {
        return dispatch("categorize", commcred::cmd_categorize, categorize_args);
    }
    if (score->parsed()) return dispatch("score", commcred::cmd_score, score_args);
    if (characterize->parsed()) {
        return dispatch("characterize", commcred::cmd_characterize, characterize_args, measures);
    }
    return commcred::kExitUsage;
}
