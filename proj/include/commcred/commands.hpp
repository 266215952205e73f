#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "commcred/config.hpp"

namespace commcred {

// Exit codes shared by the CLI and the in-process runners:
// 0 success, 2 usage/input error, 3 invariant violation.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInvariant = 3;

struct SynthCliConfig {
    std::filesystem::path spec_file;
    std::filesystem::path out_dir = "synth_out";
    std::uint64_t seed = 0;
    bool seed_overridden = false;
};

// synth: write a complete synthetic dataset (ingest formats + truth.json).
int cmd_synth(const SynthCliConfig& cfg);

// detect: followers -> graph -> size-constrained communities.
// Writes partition.csv, refine_log.jsonl, manifest.json; prints a
// community size histogram.
int cmd_detect(const RunConfig& cfg);

// categorize: standalone tweet categorization; writes categories.csv.
int cmd_categorize(const RunConfig& cfg);

// score: filter pages, train and cross-validate the 14 criterion
// classifiers, score every eligible page. Writes scores.csv, model.json,
// manifest.json.
int cmd_score(const RunConfig& cfg);

// characterize: join partition + categories + scores into the 14
// community measures with percentiles/deviations; writes measures.csv,
// report.json, and viz documents per requested measure.
int cmd_characterize(const RunConfig& cfg);

// Shared runner used by main(): maps exceptions to exit codes and prints
// the error to stderr.
int run_protected(const std::string& what, int (*fn)(const RunConfig&), const RunConfig& cfg);

}  // namespace commcred
