#include "commcred/config.hpp"

#include <cctype>
#include <charconv>

#include "commcred/util.hpp"

namespace commcred {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Strip a trailing comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view s) {
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '"') in_string = !in_string;
        else if (c == '#' && !in_string) return s.substr(0, i);
    }
    return s;
}

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& what) {
    throw UsageError(origin + ":" + std::to_string(line) + ": " + what);
}

TomlTable::Scalar parse_scalar(std::string_view token, const std::string& origin,
                               std::size_t line) {
    token = trim(token);
    if (token.empty()) fail(origin, line, "empty value");
    if (token.front() == '"') {
        if (token.size() < 2 || token.back() != '"') fail(origin, line, "unterminated string");
        std::string out;
        for (std::size_t i = 1; i + 1 < token.size(); ++i) {
            char c = token[i];
            if (c == '\\' && i + 2 < token.size()) {
                char n = token[++i];
                switch (n) {
                    case 'n': out.push_back('\n'); break;
                    case 't': out.push_back('\t'); break;
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    default: out.push_back(n); break;
                }
            } else {
                out.push_back(c);
            }
        }
        return out;
    }
    if (token == "true") return true;
    if (token == "false") return false;
    std::string t(token);
    bool looks_float = t.find_first_of(".eE") != std::string::npos &&
                       t.find_first_not_of("+-0123456789.eE") == std::string::npos;
    if (!looks_float) {
        std::int64_t iv = 0;
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), iv);
        if (ec == std::errc() && p == t.data() + t.size()) return iv;
    }
    double dv = 0.0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), dv);
    if (ec == std::errc() && p == t.data() + t.size()) return dv;
    fail(origin, line, "cannot parse value: " + t);
}

}  // namespace

TomlTable TomlTable::parse(std::string_view text, const std::string& origin) {
    TomlTable table;
    table.origin_ = origin;
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(origin, line_no, "unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section.empty()) fail(origin, line_no, "empty section name");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(origin, line_no, "expected key = value");
        std::string key(trim(line.substr(0, eq)));
        if (key.empty()) fail(origin, line_no, "empty key");
        if (!section.empty()) key = section + "." + key;
        std::string_view rhs = trim(line.substr(eq + 1));
        if (rhs.empty()) fail(origin, line_no, "missing value for " + key);

        Value value;
        if (rhs.front() == '[') {
            if (rhs.back() != ']') fail(origin, line_no, "unterminated array (single line only)");
            std::vector<Scalar> items;
            std::string_view body = rhs.substr(1, rhs.size() - 2);
            std::string cur;
            bool in_string = false;
            for (char c : body) {
                if (c == '"') in_string = !in_string;
                if (c == ',' && !in_string) {
                    if (!trim(cur).empty()) items.push_back(parse_scalar(cur, origin, line_no));
                    cur.clear();
                } else {
                    cur.push_back(c);
                }
            }
            if (!trim(cur).empty()) items.push_back(parse_scalar(cur, origin, line_no));
            value = std::move(items);
        } else {
            value = parse_scalar(rhs, origin, line_no);
        }
        if (table.values_.emplace(key, std::move(value)).second) {
            table.order_.push_back(key);
        } else {
            fail(origin, line_no, "duplicate key: " + key);
        }
    }
    return table;
}

TomlTable TomlTable::parse_file(const std::filesystem::path& path) {
    return parse(read_file(path), path.string());
}

bool TomlTable::has(const std::string& key) const { return values_.count(key) > 0; }

const TomlTable::Value* TomlTable::find(const std::string& key) const {
    auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
}

namespace {

[[noreturn]] void type_error(const std::string& origin, const std::string& key,
                             const char* expected) {
    throw UsageError(origin + ": key " + key + " is not a " + expected);
}

}  // namespace

std::string TomlTable::get_string(const std::string& key, const std::string& fallback) const {
    const Value* v = find(key);
    if (!v) return fallback;
    const Scalar* s = std::get_if<Scalar>(v);
    if (!s || !std::holds_alternative<std::string>(*s)) type_error(origin_, key, "string");
    return std::get<std::string>(*s);
}

std::string TomlTable::require_string(const std::string& key) const {
    if (!has(key)) throw UsageError(origin_ + ": missing required key " + key);
    return get_string(key, "");
}

std::int64_t TomlTable::get_int(const std::string& key, std::int64_t fallback) const {
    const Value* v = find(key);
    if (!v) return fallback;
    const Scalar* s = std::get_if<Scalar>(v);
    if (!s || !std::holds_alternative<std::int64_t>(*s)) type_error(origin_, key, "integer");
    return std::get<std::int64_t>(*s);
}

double TomlTable::get_double(const std::string& key, double fallback) const {
    const Value* v = find(key);
    if (!v) return fallback;
    const Scalar* s = std::get_if<Scalar>(v);
    if (!s) type_error(origin_, key, "number");
    if (std::holds_alternative<double>(*s)) return std::get<double>(*s);
    if (std::holds_alternative<std::int64_t>(*s))
        return static_cast<double>(std::get<std::int64_t>(*s));
    type_error(origin_, key, "number");
}

bool TomlTable::get_bool(const std::string& key, bool fallback) const {
    const Value* v = find(key);
    if (!v) return fallback;
    const Scalar* s = std::get_if<Scalar>(v);
    if (!s || !std::holds_alternative<bool>(*s)) type_error(origin_, key, "boolean");
    return std::get<bool>(*s);
}

std::vector<std::string> TomlTable::get_string_array(const std::string& key) const {
    const Value* v = find(key);
    if (!v) return {};
    const auto* arr = std::get_if<std::vector<Scalar>>(v);
    if (!arr) type_error(origin_, key, "array");
    std::vector<std::string> out;
    for (const auto& s : *arr) {
        if (!std::holds_alternative<std::string>(s)) type_error(origin_, key, "string array");
        out.push_back(std::get<std::string>(s));
    }
    return out;
}

std::vector<double> TomlTable::get_double_array(const std::string& key) const {
    const Value* v = find(key);
    if (!v) return {};
    const auto* arr = std::get_if<std::vector<Scalar>>(v);
    if (!arr) type_error(origin_, key, "array");
    std::vector<double> out;
    for (const auto& s : *arr) {
        if (std::holds_alternative<double>(s)) out.push_back(std::get<double>(s));
        else if (std::holds_alternative<std::int64_t>(s))
            out.push_back(static_cast<double>(std::get<std::int64_t>(s)));
        else
            type_error(origin_, key, "number array");
    }
    return out;
}

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    if (p.empty()) return {};
    std::filesystem::path path(p);
    if (path.is_absolute()) return path;
    return base / path;
}

}  // namespace

RunConfig RunConfig::from_table(const TomlTable& t, const std::filesystem::path& base_dir) {
    RunConfig c;
    c.tweets = resolve(base_dir, t.get_string("inputs.tweets", ""));
    c.followers = resolve(base_dir, t.get_string("inputs.followers", ""));
    c.pages = resolve(base_dir, t.get_string("inputs.pages", ""));
    c.labels = resolve(base_dir, t.get_string("inputs.labels", ""));
    c.resolver_fixtures = resolve(base_dir, t.get_string("inputs.resolver_fixtures", ""));
    c.domains = resolve(base_dir, t.get_string("inputs.domains", ""));
    c.partition = resolve(base_dir, t.get_string("inputs.partition", ""));
    c.scores = resolve(base_dir, t.get_string("inputs.scores", ""));

    c.out_dir = resolve(base_dir, t.get_string("output.dir", "out"));
    c.seed = static_cast<std::uint64_t>(t.get_int("run.seed", 0));

    c.max_size = static_cast<std::size_t>(t.get_int("detect.max_size", 10000));
    c.min_size = static_cast<std::size_t>(t.get_int("detect.min_size", 100));
    c.max_rounds = static_cast<int>(t.get_int("detect.max_rounds", 20));
    c.dump_graph = t.get_bool("detect.dump_graph", false);

    c.svm_lambda = t.get_double("score.svm_lambda", 0.01);
    c.svm_epochs = static_cast<int>(t.get_int("score.svm_epochs", 200));
    c.svm_learning_rate = t.get_double("score.svm_learning_rate", 1.0);
    c.rf_trees = static_cast<int>(t.get_int("score.rf_trees", 100));
    c.rf_max_depth = static_cast<int>(t.get_int("score.rf_max_depth", 0));
    c.rf_min_leaf = static_cast<int>(t.get_int("score.rf_min_leaf", 1));
    c.cv_folds = static_cast<int>(t.get_int("score.folds", 10));

    c.measures = t.get_string_array("characterize.measures");
    c.viz_edge_floor = t.get_double("characterize.viz_edge_floor", 0.0);

    if (c.max_size < 2) throw UsageError("detect.max_size must be > 1");
    if (c.min_size < 1) throw UsageError("detect.min_size must be >= 1");
    if (c.min_size > c.max_size) throw UsageError("detect.min_size must be <= detect.max_size");
    if (c.max_rounds < 1) throw UsageError("detect.max_rounds must be >= 1");
    if (c.cv_folds < 2) throw UsageError("score.folds must be >= 2");
    return c;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    TomlTable t = TomlTable::parse_file(path);
    return from_table(t, path.parent_path());
}

std::string RunConfig::config_hash() const {
    std::string canon;
    auto add = [&](const std::string& k, const std::string& v) {
        canon += k;
        canon += '=';
        canon += v;
        canon += '\n';
    };
    add("tweets", tweets.string());
    add("followers", followers.string());
    add("pages", pages.string());
    add("labels", labels.string());
    add("resolver_fixtures", resolver_fixtures.string());
    add("domains", domains.string());
    add("partition", partition.string());
    add("scores", scores.string());
    add("out_dir", out_dir.string());
    add("seed", std::to_string(seed));
    add("max_size", std::to_string(max_size));
    add("min_size", std::to_string(min_size));
    add("max_rounds", std::to_string(max_rounds));
    add("dump_graph", dump_graph ? "true" : "false");
    add("svm_lambda", format_double(svm_lambda));
    add("svm_epochs", std::to_string(svm_epochs));
    add("svm_learning_rate", format_double(svm_learning_rate));
    add("rf_trees", std::to_string(rf_trees));
    add("rf_max_depth", std::to_string(rf_max_depth));
    add("rf_min_leaf", std::to_string(rf_min_leaf));
    add("cv_folds", std::to_string(cv_folds));
    for (const auto& m : measures) add("measure", m);
    add("viz_edge_floor", format_double(viz_edge_floor));
    return hex64(fnv1a64(canon));
}

}  // namespace commcred
