#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace commcred {

struct Tweet {
    std::string tweet_id;
    std::string user_id;
    std::string text;
    std::vector<std::string> urls;
    long long like_count = 0;
    bool is_retweet = false;
    std::string lang;
};

struct FollowerEdge {
    std::string from_user;
    std::string to_user;
};

struct WebPage {
    std::string url;
    std::string content;  // tag-stripped plain text; empty when unavailable
    std::size_t word_count = 0;
    std::string lang;
    bool available = true;
};

struct LabeledPage {
    std::string url;
    std::array<int, 7> criteria{};  // each 0 or 1
};

struct TweetLoadCounters {
    std::size_t lines = 0;
    std::size_t loaded = 0;
    std::size_t non_english = 0;  // includes records with no lang tag
    std::size_t malformed = 0;
    std::size_t duplicates = 0;  // repeated tweet_id, last record wins
};

struct TweetLoadResult {
    std::vector<Tweet> tweets;
    TweetLoadCounters counters;
};

struct FollowerLoadCounters {
    std::size_t rows = 0;
    std::size_t loaded = 0;
    std::size_t self_follows = 0;
    std::size_t duplicates = 0;
    std::size_t malformed = 0;
};

struct FollowerLoadResult {
    std::vector<FollowerEdge> edges;
    FollowerLoadCounters counters;
};

struct PageLoadCounters {
    std::size_t lines = 0;
    std::size_t loaded = 0;
    std::size_t malformed = 0;
    std::size_t duplicates = 0;  // repeated url, last record wins
};

struct PageLoadResult {
    std::vector<WebPage> pages;
    PageLoadCounters counters;
};

// tweets.jsonl: one object per line with keys tweet_id, user_id, text,
// urls, like_count, is_retweet, lang. Keeps records with lang == "en";
// other languages and records without a lang tag are counted, not loaded.
// Malformed lines are skipped with a counter, never fatal.
TweetLoadResult load_tweets(const std::filesystem::path& path);

// followers.csv with header from_user,to_user. Deduplicates (from,to)
// pairs, drops self-follows, keeps first-occurrence order.
FollowerLoadResult load_followers(const std::filesystem::path& path);

// pages.jsonl with keys url, content, lang, available. Content is
// tag-stripped at load; word_count is the whitespace token count of the
// stripped text. Unavailable pages get empty content.
PageLoadResult load_pages(const std::filesystem::path& path);

// labels.csv with header url,c1..c7. Any cell other than 0/1 is a fatal
// validation error naming the row and column.
std::vector<LabeledPage> load_labeled_pages(const std::filesystem::path& path);

}  // namespace commcred
