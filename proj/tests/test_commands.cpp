#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "commcred/commands.hpp"
#include "commcred/config.hpp"
#include "commcred/util.hpp"

using namespace commcred;

namespace {

namespace fs = std::filesystem;

struct PipelineDir {
    fs::path root;

    PipelineDir() {
        root = fs::temp_directory_path() / "commcred_cmd_test";
        fs::remove_all(root);
        fs::create_directories(root);
    }
    ~PipelineDir() { fs::remove_all(root); }

    fs::path synth_dataset(std::uint64_t seed) const {
        fs::path data = root / "data";
        atomic_write_file(root / "synth.toml", R"([graph]
n = 24
k = 3
p_in = 0.8
p_out = 0.0

[corpus]
tweets_per_user = 8
category_mix = [0.125, 0.5, 0.125, 0.25]
credibility_mix = [0.25, 0.25, 0.5]
quota = true
)");
        SynthCliConfig cfg;
        cfg.spec_file = root / "synth.toml";
        cfg.out_dir = data;
        cfg.seed = seed;
        cfg.seed_overridden = true;
        REQUIRE(cmd_synth(cfg) == kExitOk);
        return data;
    }

    RunConfig run_config(const fs::path& data, const fs::path& out) const {
        std::string toml = R"([inputs]
tweets = "data/tweets.jsonl"
followers = "data/followers.csv"
pages = "data/pages.jsonl"
labels = "data/labels.csv"
resolver_fixtures = "data/resolver_fixtures.jsonl"
domains = "data/domains.toml"
partition = ")" + (out / "partition.csv").string() +
                           R"("
scores = ")" + (out / "scores.csv").string() + R"("

[output]
dir = ")" + out.string() + R"("

[run]
seed = 5

[detect]
max_size = 100
min_size = 1

[score]
rf_trees = 20
svm_epochs = 150
)";
        atomic_write_file(root / "run.toml", toml);
        (void)data;
        return RunConfig::from_file(root / "run.toml");
    }
};

std::string slurp(const fs::path& p) { return read_file(p); }

}  // namespace

TEST_CASE("full pipeline end to end on a synthetic dataset") {
    PipelineDir dir;
    fs::path data = dir.synth_dataset(11);
    fs::path out = dir.root / "out";
    RunConfig cfg = dir.run_config(data, out);

    CHECK(cmd_detect(cfg) == kExitOk);
    CHECK(fs::exists(out / "partition.csv"));
    CHECK(fs::exists(out / "refine_log.jsonl"));
    CHECK(fs::exists(out / "manifest.json"));

    CHECK(cmd_categorize(cfg) == kExitOk);
    CHECK(fs::exists(out / "categories.csv"));

    CHECK(cmd_score(cfg) == kExitOk);
    CHECK(fs::exists(out / "scores.csv"));
    CHECK(fs::exists(out / "model.json"));

    CHECK(cmd_characterize(cfg) == kExitOk);
    CHECK(fs::exists(out / "measures.csv"));
    CHECK(fs::exists(out / "report.json"));
    for (const char* m : {"videos_pct", "low_cred_pct", "internal_density"}) {
        CHECK(fs::exists(out / "viz" / (std::string(m) + ".json")));
        CHECK(fs::exists(out / "viz" / (std::string(m) + ".dot")));
    }

    // partition covers exactly the 24 users
    std::string partition = slurp(out / "partition.csv");
    CHECK(std::count(partition.begin(), partition.end(), '\n') == 25);

    // manifest carries digests and counters
    auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
    CHECK(manifest["command"] == "characterize");
    CHECK(manifest["inputs"].size() >= 4);
    CHECK(manifest["counters"]["communities"].get<int>() >= 1);
}

TEST_CASE("reruns are byte-identical") {
    PipelineDir dir;
    fs::path data = dir.synth_dataset(29);

    auto run_all = [&](const fs::path& out) {
        RunConfig cfg = dir.run_config(data, out);
        REQUIRE(cmd_detect(cfg) == kExitOk);
        REQUIRE(cmd_score(cfg) == kExitOk);
        REQUIRE(cmd_characterize(cfg) == kExitOk);
    };
    fs::path out1 = dir.root / "out1";
    fs::path out2 = dir.root / "out2";
    run_all(out1);
    run_all(out2);

    for (const char* f : {"partition.csv", "refine_log.jsonl", "scores.csv", "measures.csv"}) {
        CHECK(slurp(out1 / f) == slurp(out2 / f));
    }
    CHECK(slurp(out1 / "viz" / "low_cred_pct.json") == slurp(out2 / "viz" / "low_cred_pct.json"));
    CHECK(slurp(out1 / "viz" / "low_cred_pct.dot") == slurp(out2 / "viz" / "low_cred_pct.dot"));
}

TEST_CASE("missing inputs exit with code 2") {
    PipelineDir dir;
    RunConfig cfg;
    cfg.followers = dir.root / "absent.csv";
    cfg.out_dir = dir.root / "out";
    CHECK(run_protected("detect", cmd_detect, cfg) == kExitUsage);

    cfg = RunConfig{};
    cfg.out_dir = dir.root / "out";
    CHECK(run_protected("score", cmd_score, cfg) == kExitUsage);
    CHECK(run_protected("characterize", cmd_characterize, cfg) == kExitUsage);
}

TEST_CASE("empty followers file exits with 'no edges'") {
    PipelineDir dir;
    atomic_write_file(dir.root / "followers.csv", "from_user,to_user\n");
    RunConfig cfg;
    cfg.followers = dir.root / "followers.csv";
    cfg.out_dir = dir.root / "out";
    try {
        cmd_detect(cfg);
        FAIL("expected UsageError");
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("no edges") != std::string::npos);
    }
}

TEST_CASE("too few labels exit with code 2") {
    PipelineDir dir;
    atomic_write_file(dir.root / "pages.jsonl",
                      R"({"url":"http://a.test/","content":"words","lang":"en","available":true}
)");
    atomic_write_file(dir.root / "labels.csv",
                      "url,c1,c2,c3,c4,c5,c6,c7\nhttp://a.test/,1,0,0,0,0,0,0\n");
    RunConfig cfg;
    cfg.pages = dir.root / "pages.jsonl";
    cfg.labels = dir.root / "labels.csv";
    cfg.out_dir = dir.root / "out";
    CHECK(run_protected("score", cmd_score, cfg) == kExitUsage);
}

TEST_CASE("unknown measure name exits with code 2") {
    PipelineDir dir;
    fs::path data = dir.synth_dataset(3);
    fs::path out = dir.root / "out";
    RunConfig cfg = dir.run_config(data, out);
    REQUIRE(cmd_detect(cfg) == kExitOk);
    REQUIRE(cmd_score(cfg) == kExitOk);
    cfg.measures = {"not_a_measure"};
    CHECK(run_protected("characterize", cmd_characterize, cfg) == kExitUsage);
}

TEST_CASE("short pages are filtered out of scores.csv") {
    PipelineDir dir;
    fs::path data = dir.synth_dataset(7);
    // append one short page; it must not appear in scores.csv
    std::ofstream pages((data / "pages.jsonl").string(), std::ios::app);
    pages << R"({"url":"http://short.test/","content":"tiny page","lang":"en","available":true})"
          << "\n";
    pages.close();

    fs::path out = dir.root / "out";
    RunConfig cfg = dir.run_config(data, out);
    REQUIRE(cmd_score(cfg) == kExitOk);
    std::string scores = slurp(out / "scores.csv");
    CHECK(scores.find("http://short.test/") == std::string::npos);
}
