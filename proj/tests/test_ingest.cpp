#include <doctest.h>

#include <filesystem>

#include "commcred/ingest.hpp"
#include "commcred/util.hpp"

using namespace commcred;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() / "commcred_ingest_test";
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }

    std::filesystem::path file(const char* name, std::string_view content) const {
        auto p = path / name;
        atomic_write_file(p, content);
        return p;
    }
};

}  // namespace

TEST_CASE("load_tweets keeps English, counts the rest") {
    TempDir tmp;
    auto p = tmp.file("tweets.jsonl", R"({"tweet_id":"1","user_id":"a","text":"hi","urls":["http://x.test/1","http://x.test/2"],"like_count":3,"is_retweet":false,"lang":"en"}
{"tweet_id":"2","user_id":"b","text":"bonjour","urls":[],"like_count":0,"is_retweet":false,"lang":"fr"}
not json at all
{"tweet_id":"3","user_id":"c","text":"no urls key","like_count":1,"is_retweet":true,"lang":"en"}
{"tweet_id":"4","user_id":"d","text":"no lang"}
)");
    auto r = load_tweets(p);
    REQUIRE(r.tweets.size() == 2);
    CHECK(r.tweets[0].tweet_id == "1");
    CHECK(r.tweets[0].urls.size() == 2);
    CHECK(r.tweets[0].like_count == 3);
    CHECK(r.tweets[1].tweet_id == "3");
    CHECK(r.tweets[1].urls.empty());  // absent field defaults to empty
    CHECK(r.tweets[1].is_retweet);

    CHECK(r.counters.lines == 5);
    CHECK(r.counters.non_english == 2);  // fr + missing lang
    CHECK(r.counters.malformed == 1);
    CHECK(r.counters.duplicates == 0);
    // the counters plus the output account for every input line
    CHECK(r.counters.loaded + r.counters.non_english + r.counters.malformed +
              r.counters.duplicates ==
          r.counters.lines);
}

TEST_CASE("load_tweets: malformed field values are skipped, not fatal") {
    TempDir tmp;
    auto p = tmp.file("tweets.jsonl", R"({"tweet_id":"1","user_id":"a","lang":"en","like_count":-2}
{"tweet_id":"2","user_id":"a","lang":"en","urls":"notalist"}
{"user_id":"a","lang":"en"}
{"tweet_id":"5","user_id":"a","lang":"en","urls":["", "http://x.test/ok"]}
)");
    auto r = load_tweets(p);
    REQUIRE(r.tweets.size() == 1);
    CHECK(r.tweets[0].tweet_id == "5");
    CHECK(r.tweets[0].urls == std::vector<std::string>{"http://x.test/ok"});  // empties dropped
    CHECK(r.counters.malformed == 3);
}

TEST_CASE("load_tweets: duplicate ids, last record wins") {
    TempDir tmp;
    auto p = tmp.file("tweets.jsonl", R"({"tweet_id":"1","user_id":"a","text":"first","lang":"en"}
{"tweet_id":"1","user_id":"a","text":"second","lang":"en"}
)");
    auto r = load_tweets(p);
    REQUIRE(r.tweets.size() == 1);
    CHECK(r.tweets[0].text == "second");
    CHECK(r.counters.duplicates == 1);
}

TEST_CASE("load_tweets is idempotent") {
    TempDir tmp;
    auto p = tmp.file("tweets.jsonl",
                      R"({"tweet_id":"1","user_id":"a","text":"x","lang":"en","like_count":2}
{"tweet_id":"2","user_id":"b","text":"y","lang":"en"}
)");
    auto a = load_tweets(p);
    auto b = load_tweets(p);
    REQUIRE(a.tweets.size() == b.tweets.size());
    for (std::size_t i = 0; i < a.tweets.size(); ++i) {
        CHECK(a.tweets[i].tweet_id == b.tweets[i].tweet_id);
        CHECK(a.tweets[i].text == b.tweets[i].text);
        CHECK(a.tweets[i].like_count == b.tweets[i].like_count);
    }
}

TEST_CASE("load_tweets missing file is fatal") {
    CHECK_THROWS_AS(load_tweets("/nonexistent/tweets.jsonl"), UsageError);
}

TEST_CASE("load_followers dedups and drops self-follows") {
    TempDir tmp;
    auto p = tmp.file("followers.csv", "from_user,to_user\na,b\na,b\nb,a\na,a\nbroken\n");
    auto r = load_followers(p);
    REQUIRE(r.edges.size() == 2);
    CHECK(r.edges[0].from_user == "a");
    CHECK(r.edges[0].to_user == "b");
    CHECK(r.edges[1].from_user == "b");
    CHECK(r.edges[1].to_user == "a");
    CHECK(r.counters.self_follows == 1);
    CHECK(r.counters.duplicates == 1);
    CHECK(r.counters.malformed == 1);
}

TEST_CASE("load_followers header-only file yields no edges") {
    TempDir tmp;
    auto p = tmp.file("followers.csv", "from_user,to_user\n");
    auto r = load_followers(p);
    CHECK(r.edges.empty());
    CHECK(r.counters.rows == 0);
}

TEST_CASE("load_pages strips tags and counts words; unavailable pages have no content") {
    TempDir tmp;
    auto p = tmp.file("pages.jsonl",
                      R"({"url":"http://a.test/","content":"<p>one two</p> three","lang":"en","available":true}
{"url":"http://b.test/","content":"should vanish","lang":"en","available":false}
{"url":"http://c.test/"}
)");
    auto r = load_pages(p);
    REQUIRE(r.pages.size() == 3);
    CHECK(r.pages[0].word_count == 3);
    CHECK(r.pages[0].content.find('<') == std::string::npos);
    CHECK(r.pages[1].content.empty());
    CHECK(r.pages[1].word_count == 0);
    CHECK(!r.pages[1].available);
    CHECK(r.pages[2].available);  // defaults: available, empty content
    CHECK(r.pages[2].word_count == 0);
}

TEST_CASE("load_labeled_pages: valid rows, criteria sums") {
    TempDir tmp;
    auto p = tmp.file("labels.csv",
                      "url,c1,c2,c3,c4,c5,c6,c7\n"
                      "http://a.test/,1,1,1,1,0,0,0\n"
                      "http://b.test/,0,0,0,0,0,0,0\n");
    auto labels = load_labeled_pages(p);
    REQUIRE(labels.size() == 2);
    int sum = 0;
    for (int c : labels[0].criteria) sum += c;
    CHECK(sum == 4);
    sum = 0;
    for (int c : labels[1].criteria) sum += c;
    CHECK(sum == 0);
    for (const auto& l : labels) CHECK(l.criteria.size() == 7);
}

TEST_CASE("load_labeled_pages rejects non-binary cells naming row and column") {
    TempDir tmp;
    auto p = tmp.file("labels.csv",
                      "url,c1,c2,c3,c4,c5,c6,c7\n"
                      "http://a.test/,1,0,2,0,0,0,0\n");
    try {
        load_labeled_pages(p);
        FAIL("expected UsageError");
    } catch (const UsageError& e) {
        std::string msg = e.what();
        CHECK(msg.find("row 1") != std::string::npos);
        CHECK(msg.find("c3") != std::string::npos);
    }
}

TEST_CASE("load_labeled_pages rejects wrong column count") {
    TempDir tmp;
    auto p = tmp.file("labels.csv", "url,c1,c2,c3,c4,c5,c6,c7\nhttp://a.test/,1,0\n");
    CHECK_THROWS_AS(load_labeled_pages(p), UsageError);
}
