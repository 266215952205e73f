#include "commcred/ingest.hpp"

#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "commcred/util.hpp"

namespace commcred {

namespace {

using nlohmann::json;

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read file: " + path.string());
    return in;
}

// tweet_id / user_id may arrive as JSON strings or integers.
bool read_id(const json& j, const char* key, std::string& out) {
    auto it = j.find(key);
    if (it == j.end()) return false;
    if (it->is_string()) {
        out = it->get<std::string>();
        return !out.empty();
    }
    if (it->is_number_integer()) {
        out = std::to_string(it->get<long long>());
        return true;
    }
    return false;
}

}  // namespace

TweetLoadResult load_tweets(const std::filesystem::path& path) {
    std::ifstream in = open_or_throw(path);
    TweetLoadResult result;
    std::unordered_map<std::string, std::size_t> seen;  // tweet_id -> index
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++result.counters.lines;

        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            ++result.counters.malformed;
            continue;
        }

        Tweet t;
        if (!read_id(j, "tweet_id", t.tweet_id) || !read_id(j, "user_id", t.user_id)) {
            ++result.counters.malformed;
            continue;
        }
        if (auto it = j.find("text"); it != j.end()) {
            if (!it->is_string()) {
                ++result.counters.malformed;
                continue;
            }
            t.text = it->get<std::string>();
        }
        bool bad = false;
        if (auto it = j.find("urls"); it != j.end()) {
            if (!it->is_array()) {
                bad = true;
            } else {
                for (const auto& u : *it) {
                    if (!u.is_string()) {
                        bad = true;
                        break;
                    }
                    std::string s = u.get<std::string>();
                    if (!s.empty()) t.urls.push_back(std::move(s));
                }
            }
        }
        if (auto it = j.find("like_count"); it != j.end()) {
            if (!it->is_number_integer() || it->get<long long>() < 0) bad = true;
            else t.like_count = it->get<long long>();
        }
        if (auto it = j.find("is_retweet"); it != j.end()) {
            if (!it->is_boolean()) bad = true;
            else t.is_retweet = it->get<bool>();
        }
        if (bad) {
            ++result.counters.malformed;
            continue;
        }
        if (auto it = j.find("lang"); it == j.end() || !it->is_string()) {
            ++result.counters.non_english;
            continue;
        } else {
            t.lang = it->get<std::string>();
        }
        if (t.lang != "en") {
            ++result.counters.non_english;
            continue;
        }

        auto [pos, inserted] = seen.emplace(t.tweet_id, result.tweets.size());
        if (inserted) {
            result.tweets.push_back(std::move(t));
        } else {
            // Last record wins; keep the first occurrence's position.
            result.tweets[pos->second] = std::move(t);
            ++result.counters.duplicates;
        }
    }
    result.counters.loaded = result.tweets.size();
    return result;
}

FollowerLoadResult load_followers(const std::filesystem::path& path) {
    std::ifstream in = open_or_throw(path);
    FollowerLoadResult result;
    std::unordered_set<std::string> seen;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        ++result.counters.rows;
        auto fields = parse_csv_record(line);
        if (!fields || fields->size() != 2 || (*fields)[0].empty() || (*fields)[1].empty()) {
            ++result.counters.malformed;
            continue;
        }
        const std::string& from = (*fields)[0];
        const std::string& to = (*fields)[1];
        if (from == to) {
            ++result.counters.self_follows;
            continue;
        }
        std::string key = from + '\n' + to;
        if (!seen.insert(std::move(key)).second) {
            ++result.counters.duplicates;
            continue;
        }
        result.edges.push_back({from, to});
    }
    result.counters.loaded = result.edges.size();
    return result;
}

PageLoadResult load_pages(const std::filesystem::path& path) {
    std::ifstream in = open_or_throw(path);
    PageLoadResult result;
    std::unordered_map<std::string, std::size_t> seen;  // url -> index
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++result.counters.lines;

        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            ++result.counters.malformed;
            continue;
        }
        WebPage p;
        auto url_it = j.find("url");
        if (url_it == j.end() || !url_it->is_string() || url_it->get<std::string>().empty()) {
            ++result.counters.malformed;
            continue;
        }
        p.url = url_it->get<std::string>();
        if (auto it = j.find("available"); it != j.end() && it->is_boolean()) {
            p.available = it->get<bool>();
        }
        if (auto it = j.find("lang"); it != j.end() && it->is_string()) {
            p.lang = it->get<std::string>();
        }
        if (p.available) {
            if (auto it = j.find("content"); it != j.end() && it->is_string()) {
                p.content = strip_html(it->get<std::string>());
            }
        }
        p.word_count = whitespace_token_count(p.content);

        auto [pos, inserted] = seen.emplace(p.url, result.pages.size());
        if (inserted) {
            result.pages.push_back(std::move(p));
        } else {
            result.pages[pos->second] = std::move(p);
            ++result.counters.duplicates;
        }
    }
    result.counters.loaded = result.pages.size();
    return result;
}

std::vector<LabeledPage> load_labeled_pages(const std::filesystem::path& path) {
    std::ifstream in = open_or_throw(path);
    std::vector<LabeledPage> labels;
    std::string line;
    bool header = true;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        ++row;
        auto fields = parse_csv_record(line);
        if (!fields || fields->size() != 8) {
            throw UsageError("labels row " + std::to_string(row) + ": expected 8 fields, got " +
                             std::to_string(fields ? fields->size() : 0));
        }
        LabeledPage lp;
        lp.url = (*fields)[0];
        if (lp.url.empty()) {
            throw UsageError("labels row " + std::to_string(row) + ": empty url");
        }
        for (int c = 0; c < 7; ++c) {
            const std::string& cell = (*fields)[static_cast<std::size_t>(c + 1)];
            if (cell == "0") lp.criteria[static_cast<std::size_t>(c)] = 0;
            else if (cell == "1") lp.criteria[static_cast<std::size_t>(c)] = 1;
            else
                throw UsageError("labels row " + std::to_string(row) + ", column c" +
                                 std::to_string(c + 1) + ": value \"" + cell +
                                 "\" is not 0 or 1");
        }
        labels.push_back(std::move(lp));
    }
    return labels;
}

}  // namespace commcred
