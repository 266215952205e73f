#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "commcred/measures.hpp"
#include "commcred/util.hpp"

using namespace commcred;

namespace {

AnnotatedTweet at(NodeId user, LinkCategory cat, long long likes,
                  std::vector<Bucket> buckets = {}) {
    AnnotatedTweet t;
    t.user = user;
    t.category = cat;
    t.like_count = likes;
    t.scored_buckets = std::move(buckets);
    return t;
}

FollowerGraph triangle() {
    return FollowerGraph::from_edges(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
}

}  // namespace

TEST_CASE("all-no-url community: no_urls 100, link measures missing") {
    auto g = triangle();
    std::vector<AnnotatedTweet> tweets = {at(0, LinkCategory::NoUrl, 2),
                                          at(1, LinkCategory::NoUrl, 4)};
    std::vector<const AnnotatedTweet*> ptrs{&tweets[0], &tweets[1]};
    MeasureVector m = compute_measures(g, {0, 1, 2}, ptrs, {1, 5, 9});
    CHECK(*m[Measure::NoUrlsPct] == doctest::Approx(100.0));
    CHECK(!m[Measure::VideosPct].has_value());
    CHECK(!m[Measure::PubArticlesPct].has_value());
    CHECK(!m[Measure::LowCredPct].has_value());
    CHECK(*m[Measure::NoUrlsAvgLikes] == doctest::Approx(3.0));
    CHECK(*m[Measure::CommAvgLikes] == doctest::Approx(3.0));
    CHECK(*m[Measure::MedianFollowers] == doctest::Approx(5.0));
    CHECK(*m[Measure::UsersAvgTweets] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("8 scored links with 2 low give low_cred_pct 25") {
    auto g = triangle();
    std::vector<AnnotatedTweet> tweets;
    for (int i = 0; i < 8; ++i) {
        tweets.push_back(at(0, LinkCategory::WebPage, 1,
                            {i < 2 ? Bucket::Low : Bucket::Medium}));
    }
    std::vector<const AnnotatedTweet*> ptrs;
    for (auto& t : tweets) ptrs.push_back(&t);
    MeasureVector m = compute_measures(g, {0, 1, 2}, ptrs, {0, 0, 0});
    CHECK(*m[Measure::LowCredPct] == doctest::Approx(25.0));
    CHECK(*m[Measure::HighCredPct] == doctest::Approx(0.0));
}

TEST_CASE("unit triangle has internal density 1") {
    auto g = triangle();
    MeasureVector m = compute_measures(g, {0, 1, 2}, {}, {0, 0, 0});
    CHECK(*m[Measure::InternalDensity] == doctest::Approx(1.0));
}

TEST_CASE("single-member community has internal density 0") {
    auto g = triangle();
    MeasureVector m = compute_measures(g, {0}, {}, {0, 0, 0});
    CHECK(*m[Measure::InternalDensity] == doctest::Approx(0.0));
    // no tweets: tweet measures missing, but member measures present
    CHECK(!m[Measure::CommAvgLikes].has_value());
    CHECK(!m[Measure::NoUrlsPct].has_value());
    CHECK(*m[Measure::UsersAvgTweets] == doctest::Approx(0.0));
}

TEST_CASE("pair weights above 1 are clamped in the density") {
    auto g = FollowerGraph::from_edges(2, {{0, 1, 2.0}});
    MeasureStats stats;
    MeasureVector m = compute_measures(g, {0, 1}, {}, {0, 0}, &stats);
    CHECK(*m[Measure::InternalDensity] == doctest::Approx(1.0));
    CHECK(stats.density_weight_clamps == 1);
}

TEST_CASE("link category percentages partition the link-bearing tweets") {
    auto g = triangle();
    std::vector<AnnotatedTweet> tweets = {
        at(0, LinkCategory::PubMedDirect, 1), at(0, LinkCategory::WebPage, 1, {Bucket::High}),
        at(1, LinkCategory::SocialMedia, 1),  at(1, LinkCategory::SocialMedia, 1),
        at(2, LinkCategory::NoUrl, 1),
    };
    std::vector<const AnnotatedTweet*> ptrs;
    for (auto& t : tweets) ptrs.push_back(&t);
    MeasureVector m = compute_measures(g, {0, 1, 2}, ptrs, {0, 0, 0});
    double cat2_share = 100.0 - *m[Measure::VideosPct] - *m[Measure::PubArticlesPct];
    CHECK(*m[Measure::VideosPct] == doctest::Approx(50.0));
    CHECK(*m[Measure::PubArticlesPct] == doctest::Approx(25.0));
    CHECK(cat2_share == doctest::Approx(25.0));
    CHECK(*m[Measure::NoUrlsPct] == doctest::Approx(20.0));
}

TEST_CASE("rank percentiles: definition cases") {
    auto p = rank_percentiles({1.0, 2.0, 3.0, 4.0});
    REQUIRE(p.size() == 4);
    CHECK(*p[0] == doctest::Approx(0.0));
    CHECK(*p[1] == doctest::Approx(1.0 / 3.0));
    CHECK(*p[2] == doctest::Approx(2.0 / 3.0));
    CHECK(*p[3] == doctest::Approx(1.0));
}

TEST_CASE("rank percentiles: ties share the mean rank") {
    auto p = rank_percentiles({5.0, 5.0, 9.0});
    CHECK(*p[0] == doctest::Approx(0.25));
    CHECK(*p[1] == doctest::Approx(0.25));
    CHECK(*p[2] == doctest::Approx(1.0));
}

TEST_CASE("rank percentiles: single present value sits at 0.5, missing stays missing") {
    auto p = rank_percentiles({std::nullopt, 3.0, std::nullopt});
    CHECK(!p[0].has_value());
    CHECK(*p[1] == doctest::Approx(0.5));
    CHECK(!p[2].has_value());

    auto none = rank_percentiles({std::nullopt, std::nullopt});
    CHECK(!none[0].has_value());
    CHECK(!none[1].has_value());
}

TEST_CASE("rank percentiles are order-preserving with deviations in range") {
    Rng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::optional<double>> values(20);
        for (auto& v : values) {
            if (bounded_rand(rng, 5) == 0) continue;  // some missing
            v = static_cast<double>(bounded_rand(rng, 8));  // small support forces ties
        }
        auto p = rank_percentiles(values);
        for (std::size_t i = 0; i < values.size(); ++i) {
            CHECK(values[i].has_value() == p[i].has_value());
            if (!p[i]) continue;
            CHECK(*p[i] >= 0.0);
            CHECK(*p[i] <= 1.0);
            double dev = *p[i] - 0.5;
            CHECK(dev >= -0.5);
            CHECK(dev <= 0.5);
            for (std::size_t j = 0; j < values.size(); ++j) {
                if (!p[j]) continue;
                if (*values[i] < *values[j]) CHECK(*p[i] < *p[j]);
                if (*values[i] == *values[j]) CHECK(*p[i] == *p[j]);
            }
        }
    }
}

TEST_CASE("mean deviation over an untied measure is zero") {
    auto p = rank_percentiles({3.0, 1.0, 4.0, 2.0, 5.0});
    double sum = 0.0;
    for (const auto& v : p) sum += *v - 0.5;
    CHECK(sum == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("profile_communities joins measures with percentiles") {
    auto g = FollowerGraph::from_edges(
        6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}, {2, 3, 0.5}});
    Partition p;
    p.comm = {0, 0, 0, 1, 1, 1};
    p.count = 2;
    std::vector<AnnotatedTweet> tweets = {
        at(0, LinkCategory::NoUrl, 10),
        at(3, LinkCategory::NoUrl, 2),
        at(4, LinkCategory::WebPage, 6, {Bucket::Low}),
    };
    auto profiles = profile_communities(g, p, tweets, {0, 1, 2, 3, 2, 1});
    REQUIRE(profiles.size() == 2);
    CHECK(profiles[0].user_count == 3);
    CHECK(*profiles[0].measures[Measure::NoUrlsPct] == doctest::Approx(100.0));
    CHECK(*profiles[1].measures[Measure::NoUrlsPct] == doctest::Approx(50.0));
    // two communities: percentiles 0 and 1 on an untied measure
    CHECK(*profiles[0].percentiles[static_cast<std::size_t>(Measure::NoUrlsPct)] ==
          doctest::Approx(1.0));
    CHECK(*profiles[1].percentiles[static_cast<std::size_t>(Measure::NoUrlsPct)] ==
          doctest::Approx(0.0));
    CHECK(*profiles[0].deviations[static_cast<std::size_t>(Measure::NoUrlsPct)] ==
          doctest::Approx(0.5));
    // low_cred present only for community 1 -> its percentile is 0.5
    CHECK(!profiles[0].percentiles[static_cast<std::size_t>(Measure::LowCredPct)].has_value());
    CHECK(*profiles[1].percentiles[static_cast<std::size_t>(Measure::LowCredPct)] ==
          doctest::Approx(0.5));
}

TEST_CASE("scaling all likes leaves every percentile bit-identical") {
    auto g = FollowerGraph::from_edges(4, {{0, 1, 1}, {2, 3, 1}});
    Partition p;
    p.comm = {0, 0, 1, 1};
    p.count = 2;
    Rng rng(44);
    std::vector<AnnotatedTweet> tweets;
    for (int i = 0; i < 40; ++i) {
        tweets.push_back(at(static_cast<NodeId>(bounded_rand(rng, 4)), LinkCategory::NoUrl,
                            static_cast<long long>(bounded_rand(rng, 1000))));
    }
    auto base = profile_communities(g, p, tweets, {0, 0, 0, 0});
    for (auto& t : tweets) t.like_count *= 10;
    auto scaled = profile_communities(g, p, tweets, {0, 0, 0, 0});
    for (std::size_t c = 0; c < base.size(); ++c) {
        for (std::size_t mi = 0; mi < kMeasureCount; ++mi) {
            CHECK(base[c].percentiles[mi].has_value() == scaled[c].percentiles[mi].has_value());
            if (base[c].percentiles[mi]) {
                CHECK(*base[c].percentiles[mi] == *scaled[c].percentiles[mi]);
            }
        }
        // avg likes themselves scale by exactly 10
        if (base[c].measures[Measure::CommAvgLikes]) {
            CHECK(*scaled[c].measures[Measure::CommAvgLikes] ==
                  doctest::Approx(10.0 * *base[c].measures[Measure::CommAvgLikes])
                      .epsilon(1e-12));
        }
    }
}

TEST_CASE("measures_csv: shape, missing cells, determinism") {
    auto g = triangle();
    Partition p;
    p.comm = {0, 0, 1};
    p.count = 2;
    std::vector<AnnotatedTweet> tweets = {at(0, LinkCategory::NoUrl, 1)};
    auto profiles = profile_communities(g, p, tweets, {0, 0, 0});
    std::string csv = measures_csv(profiles);

    // header + one row per community
    std::size_t rows = std::count(csv.begin(), csv.end(), '\n');
    CHECK(rows == 3);
    CHECK(csv.rfind("community_id,user_count,videos_pct,", 0) == 0);
    // 2 id columns + 42 value columns
    std::size_t commas = std::count(csv.begin(), csv.begin() + static_cast<std::ptrdiff_t>(
                                                                   csv.find('\n')), ',');
    CHECK(commas == 43);
    CHECK(measures_csv(profiles) == csv);  // byte-identical rerun
}

TEST_CASE("percentile colors: endpoints, midpoint, missing") {
    CHECK(percentile_color(0.0) == "#ff0000");
    CHECK(percentile_color(1.0) == "#00ff00");
    CHECK(percentile_color(0.5) == "#808000");
    CHECK(percentile_color(std::nullopt) == "#ffffff");
}

TEST_CASE("emit_viz documents") {
    auto g = FollowerGraph::from_edges(
        6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}, {2, 3, 0.25}});
    Partition p;
    p.comm = {0, 0, 0, 1, 1, 1};
    p.count = 2;
    std::vector<AnnotatedTweet> tweets = {at(0, LinkCategory::NoUrl, 1),
                                          at(3, LinkCategory::WebPage, 1, {Bucket::Low})};
    auto profiles = profile_communities(g, p, tweets, {0, 0, 0, 0, 0, 0});
    auto adj = community_adjacency(g, p);
    REQUIRE(adj.size() == 1);
    CHECK(adj.begin()->second == doctest::Approx(0.25));

    VizDocuments docs = emit_viz(profiles, adj, "no_urls_pct", 0.0);
    CHECK(docs.json.find("\"measure\": \"no_urls_pct\"") != std::string::npos);
    CHECK(docs.json.find("#ff0000") != std::string::npos);  // percentile 0 -> red
    CHECK(docs.json.find("#00ff00") != std::string::npos);  // percentile 1 -> green
    CHECK(docs.dot.find("c0 -- c1") != std::string::npos);

    // an edge floor above the inter-community weight drops the edge
    VizDocuments floored = emit_viz(profiles, adj, "no_urls_pct", 0.5);
    CHECK(floored.dot.find("c0 -- c1") == std::string::npos);

    // missing measure for every community -> white nodes
    VizDocuments white = emit_viz(profiles, adj, "videos_pct", 0.0);
    CHECK(white.json.find("#ffffff") != std::string::npos);

    CHECK_THROWS_WITH_AS(emit_viz(profiles, adj, "nope", 0.0),
                         doctest::Contains("valid measures"), UsageError);
}

TEST_CASE("zero inter-community weight yields no edge") {
    auto g = FollowerGraph::from_edges(4, {{0, 1, 1}, {2, 3, 1}});
    Partition p;
    p.comm = {0, 0, 1, 1};
    p.count = 2;
    auto adj = community_adjacency(g, p);
    CHECK(adj.empty());
    auto profiles = profile_communities(g, p, {}, {0, 0, 0, 0});
    VizDocuments docs = emit_viz(profiles, adj, "internal_density", 0.0);
    CHECK(docs.json.find("\"links\": []") != std::string::npos);
}

TEST_CASE("measure name lookup") {
    CHECK(measure_from_name("low_cred_pct").has_value());
    CHECK(*measure_from_name("users_avg_tweets") == Measure::UsersAvgTweets);
    CHECK(!measure_from_name("bogus").has_value());
    CHECK(measure_names().size() == kMeasureCount);
}
