#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace commcred {

// Minimal TOML-style document: [section] headers, key = value lines,
// '#' comments. Values: quoted strings, integers, floats, booleans, and
// flat arrays of those. Keys are addressed as "section.key" ("key" at
// top level). No nested tables or multi-line values.
class TomlTable {
public:
    using Scalar = std::variant<std::string, std::int64_t, double, bool>;
    using Value = std::variant<Scalar, std::vector<Scalar>>;

    static TomlTable parse(std::string_view text, const std::string& origin = "<string>");
    static TomlTable parse_file(const std::filesystem::path& path);

    bool has(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::string require_string(const std::string& key) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<std::string> get_string_array(const std::string& key) const;
    std::vector<double> get_double_array(const std::string& key) const;

    // All keys in insertion order (for canonical hashing).
    std::vector<std::string> keys() const { return order_; }
    const Value* find(const std::string& key) const;

private:
    std::map<std::string, Value> values_;
    std::vector<std::string> order_;
    std::string origin_;
};

struct RefinementConfig;  // community.hpp

// One resolved pipeline run: input paths, stage parameters, output
// directory, global seed. Relative paths in the file resolve against
// the config file's directory.
struct RunConfig {
    std::filesystem::path tweets;
    std::filesystem::path followers;
    std::filesystem::path pages;
    std::filesystem::path labels;
    std::filesystem::path resolver_fixtures;
    std::filesystem::path domains;
    std::filesystem::path partition;  // detect output / characterize input
    std::filesystem::path scores;     // score output / characterize input

    std::filesystem::path out_dir = "out";
    std::uint64_t seed = 0;

    // detect
    std::size_t max_size = 10000;
    std::size_t min_size = 100;
    int max_rounds = 20;
    bool dump_graph = false;

    // score
    double svm_lambda = 0.01;
    int svm_epochs = 200;
    double svm_learning_rate = 1.0;
    int rf_trees = 100;
    int rf_max_depth = 0;  // 0 = unbounded
    int rf_min_leaf = 1;
    int cv_folds = 10;

    // characterize
    std::vector<std::string> measures;  // empty = all
    double viz_edge_floor = 0.0;

    static RunConfig from_file(const std::filesystem::path& path);
    static RunConfig from_table(const TomlTable& t, const std::filesystem::path& base_dir);

    // Canonical digest of the effective configuration.
    std::string config_hash() const;
};

}  // namespace commcred
