#include "commcred/measures.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "commcred/util.hpp"

namespace commcred {

const std::array<std::string, kMeasureCount>& measure_names() {
    static const std::array<std::string, kMeasureCount> names = {
        "videos_pct",          "videos_avg_likes",   "low_cred_pct",
        "low_cred_avg_likes",  "high_cred_pct",      "high_cred_avg_likes",
        "pub_articles_pct",    "pub_articles_avg_likes",
        "no_urls_pct",         "no_urls_avg_likes",  "internal_density",
        "comm_avg_likes",      "median_followers",   "users_avg_tweets",
    };
    return names;
}

std::optional<Measure> measure_from_name(const std::string& name) {
    const auto& names = measure_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return static_cast<Measure>(i);
    }
    return std::nullopt;
}

namespace {

std::optional<double> mean_or_missing(double sum, std::size_t count) {
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
}

std::optional<double> pct_or_missing(std::size_t part, std::size_t whole) {
    if (whole == 0) return std::nullopt;
    return 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

}  // namespace

MeasureVector compute_measures(const FollowerGraph& g, const std::vector<NodeId>& members,
                               const std::vector<const AnnotatedTweet*>& tweets,
                               const std::vector<std::size_t>& follower_counts,
                               MeasureStats* stats) {
    MeasureVector m;

    std::size_t n_tweets = tweets.size();
    std::size_t cat_counts[5] = {0, 0, 0, 0, 0};
    long long likes_total = 0;
    long long likes_by_cat[5] = {0, 0, 0, 0, 0};
    std::size_t scored_links = 0, low_links = 0, high_links = 0;
    std::size_t low_tweets = 0, high_tweets = 0;
    long long low_tweet_likes = 0, high_tweet_likes = 0;

    for (const AnnotatedTweet* t : tweets) {
        int cat = static_cast<int>(t->category);
        ++cat_counts[cat];
        likes_total += t->like_count;
        likes_by_cat[cat] += t->like_count;

        bool any_low = false, any_high = false;
        for (Bucket b : t->scored_buckets) {
            ++scored_links;
            if (b == Bucket::Low) {
                ++low_links;
                any_low = true;
            } else if (b == Bucket::High) {
                ++high_links;
                any_high = true;
            }
        }
        if (any_low) {
            ++low_tweets;
            low_tweet_likes += t->like_count;
        }
        if (any_high) {
            ++high_tweets;
            high_tweet_likes += t->like_count;
        }
    }

    std::size_t link_bearing = cat_counts[1] + cat_counts[2] + cat_counts[3];

    m[Measure::VideosPct] = pct_or_missing(cat_counts[3], link_bearing);
    m[Measure::PubArticlesPct] = pct_or_missing(cat_counts[1], link_bearing);
    m[Measure::NoUrlsPct] = pct_or_missing(cat_counts[4], n_tweets);
    m[Measure::LowCredPct] = pct_or_missing(low_links, scored_links);
    m[Measure::HighCredPct] = pct_or_missing(high_links, scored_links);

    m[Measure::VideosAvgLikes] =
        mean_or_missing(static_cast<double>(likes_by_cat[3]), cat_counts[3]);
    m[Measure::PubArticlesAvgLikes] =
        mean_or_missing(static_cast<double>(likes_by_cat[1]), cat_counts[1]);
    m[Measure::NoUrlsAvgLikes] =
        mean_or_missing(static_cast<double>(likes_by_cat[4]), cat_counts[4]);
    m[Measure::LowCredAvgLikes] =
        mean_or_missing(static_cast<double>(low_tweet_likes), low_tweets);
    m[Measure::HighCredAvgLikes] =
        mean_or_missing(static_cast<double>(high_tweet_likes), high_tweets);
    m[Measure::CommAvgLikes] = mean_or_missing(static_cast<double>(likes_total), n_tweets);

    if (!members.empty()) {
        std::vector<double> followers(members.size());
        for (std::size_t i = 0; i < members.size(); ++i) {
            followers[i] = static_cast<double>(follower_counts[members[i]]);
        }
        m[Measure::MedianFollowers] = median(std::move(followers));
        m[Measure::UsersAvgTweets] =
            static_cast<double>(n_tweets) / static_cast<double>(members.size());
    }

    // Weighted internal weight against the unweighted complete-graph
    // denominator; pair weights above 1 are clamped so the value stays
    // in [0,1].
    if (members.size() <= 1) {
        m[Measure::InternalDensity] = 0.0;
    } else {
        std::vector<bool> in_community(g.node_count(), false);
        for (NodeId u : members) in_community[u] = true;
        double w_in = 0.0;
        for (NodeId u : members) {
            auto nbrs = g.neighbors(u);
            auto ws = g.neighbor_weights(u);
            for (std::size_t k = 0; k < nbrs.size(); ++k) {
                if (u < nbrs[k] && in_community[nbrs[k]]) {
                    double w = ws[k];
                    if (w > 1.0) {
                        w = 1.0;
                        if (stats) ++stats->density_weight_clamps;
                    }
                    w_in += w;
                }
            }
        }
        double n = static_cast<double>(members.size());
        m[Measure::InternalDensity] = 2.0 * w_in / (n * (n - 1.0));
    }
    return m;
}

std::vector<std::optional<double>> rank_percentiles(
    const std::vector<std::optional<double>>& values) {
    std::vector<std::optional<double>> out(values.size());
    std::vector<std::pair<double, std::size_t>> present;  // (value, index)
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i]) present.emplace_back(*values[i], i);
    }
    if (present.empty()) return out;
    std::size_t k = present.size();
    if (k == 1) {
        out[present[0].second] = 0.5;
        return out;
    }
    std::sort(present.begin(), present.end());

    std::size_t i = 0;
    while (i < k) {
        std::size_t j = i;
        while (j + 1 < k && present[j + 1].first == present[i].first) ++j;
        // ranks are 1-based; the tie group i..j shares the mean rank
        double mean_rank = 0.5 * static_cast<double>((i + 1) + (j + 1));
        double pct = (mean_rank - 1.0) / static_cast<double>(k - 1);
        for (std::size_t t = i; t <= j; ++t) out[present[t].second] = pct;
        i = j + 1;
    }
    return out;
}

std::vector<CommunityProfile> profile_communities(const FollowerGraph& g, const Partition& p,
                                                  const std::vector<AnnotatedTweet>& tweets,
                                                  const std::vector<std::size_t>& follower_counts,
                                                  MeasureStats* stats) {
    if (p.comm.size() != g.node_count()) {
        throw InvariantError("partition does not cover the graph");
    }
    if (follower_counts.size() != g.node_count()) {
        throw InvariantError("follower counts do not cover the graph");
    }
    auto groups = p.groups();
    std::vector<std::vector<const AnnotatedTweet*>> by_comm(p.count);
    for (const auto& t : tweets) {
        if (t.user >= p.comm.size()) throw InvariantError("tweet user outside the graph");
        by_comm[p.comm[t.user]].push_back(&t);
    }

    std::vector<CommunityProfile> profiles(p.count);
    for (std::uint32_t c = 0; c < p.count; ++c) {
        profiles[c].community_id = c;
        profiles[c].user_count = groups[c].size();
        profiles[c].measures =
            compute_measures(g, groups[c], by_comm[c], follower_counts, stats);
    }

    for (std::size_t mi = 0; mi < kMeasureCount; ++mi) {
        std::vector<std::optional<double>> column(profiles.size());
        for (std::size_t c = 0; c < profiles.size(); ++c) {
            column[c] = profiles[c].measures.values[mi];
        }
        auto pct = rank_percentiles(column);
        for (std::size_t c = 0; c < profiles.size(); ++c) {
            profiles[c].percentiles[mi] = pct[c];
            if (pct[c]) profiles[c].deviations[mi] = *pct[c] - 0.5;
        }
    }
    return profiles;
}

std::string measures_csv(const std::vector<CommunityProfile>& profiles) {
    const auto& names = measure_names();
    std::string out = "community_id,user_count";
    for (const auto& n : names) out += "," + n;
    for (const auto& n : names) out += "," + n + "_percentile";
    for (const auto& n : names) out += "," + n + "_deviation";
    out += '\n';

    auto cell = [](const std::optional<double>& v) {
        return v ? format_double(*v) : std::string();
    };
    std::vector<const CommunityProfile*> sorted;
    for (const auto& p : profiles) sorted.push_back(&p);
    std::sort(sorted.begin(), sorted.end(), [](const CommunityProfile* a,
                                               const CommunityProfile* b) {
        return a->community_id < b->community_id;
    });
    for (const CommunityProfile* p : sorted) {
        out += std::to_string(p->community_id);
        out += ',' + std::to_string(p->user_count);
        for (std::size_t i = 0; i < kMeasureCount; ++i) out += ',' + cell(p->measures.values[i]);
        for (std::size_t i = 0; i < kMeasureCount; ++i) out += ',' + cell(p->percentiles[i]);
        for (std::size_t i = 0; i < kMeasureCount; ++i) out += ',' + cell(p->deviations[i]);
        out += '\n';
    }
    return out;
}

std::map<std::pair<std::uint32_t, std::uint32_t>, double> community_adjacency(
    const FollowerGraph& g, const Partition& p) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> adj;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        auto nbrs = g.neighbors(u);
        auto ws = g.neighbor_weights(u);
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
            if (u >= nbrs[k]) continue;
            std::uint32_t cu = p.comm[u], cv = p.comm[nbrs[k]];
            if (cu == cv) continue;
            adj[{std::min(cu, cv), std::max(cu, cv)}] += ws[k];
        }
    }
    return adj;
}

std::string percentile_color(const std::optional<double>& percentile) {
    if (!percentile) return "#ffffff";
    double p = std::clamp(*percentile, 0.0, 1.0);
    int r = static_cast<int>(std::lround(255.0 * (1.0 - p)));
    int gch = static_cast<int>(std::lround(255.0 * p));
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x00", r, gch);
    return buf;
}

VizDocuments emit_viz(const std::vector<CommunityProfile>& profiles,
                      const std::map<std::pair<std::uint32_t, std::uint32_t>, double>& adjacency,
                      const std::string& measure, double edge_floor) {
    auto m = measure_from_name(measure);
    if (!m) {
        std::string valid;
        for (const auto& n : measure_names()) {
            if (!valid.empty()) valid += ", ";
            valid += n;
        }
        throw UsageError("unknown measure \"" + measure + "\"; valid measures: " + valid);
    }
    std::size_t mi = static_cast<std::size_t>(*m);

    std::vector<const CommunityProfile*> sorted;
    for (const auto& p : profiles) sorted.push_back(&p);
    std::sort(sorted.begin(), sorted.end(), [](const CommunityProfile* a,
                                               const CommunityProfile* b) {
        return a->community_id < b->community_id;
    });

    std::size_t max_users = 1;
    for (const auto* p : sorted) max_users = std::max(max_users, p->user_count);

    nlohmann::ordered_json doc;
    doc["measure"] = measure;
    doc["nodes"] = nlohmann::ordered_json::array();
    for (const auto* p : sorted) {
        nlohmann::ordered_json node;
        node["id"] = p->community_id;
        node["user_count"] = p->user_count;
        node["size"] = p->user_count;  // size follows user count
        if (p->percentiles[mi]) node["percentile"] = *p->percentiles[mi];
        else node["percentile"] = nullptr;
        if (p->deviations[mi]) node["deviation"] = *p->deviations[mi];
        else node["deviation"] = nullptr;
        node["color"] = percentile_color(p->percentiles[mi]);
        doc["nodes"].push_back(node);
    }
    doc["links"] = nlohmann::ordered_json::array();
    for (const auto& [pair, w] : adjacency) {
        if (w <= edge_floor) continue;
        doc["links"].push_back(
            {{"source", pair.first}, {"target", pair.second}, {"weight", w}});
    }

    std::string dot = "graph \"" + measure + "\" {\n";
    dot += "  node [shape=circle style=filled fixedsize=true];\n";
    for (const auto* p : sorted) {
        double rel = static_cast<double>(p->user_count) / static_cast<double>(max_users);
        double width = 0.2 + 1.8 * std::sqrt(rel);  // area tracks user count
        dot += "  c" + std::to_string(p->community_id) + " [label=\"c" +
               std::to_string(p->community_id) + "\\n" + std::to_string(p->user_count) +
               "\" fillcolor=\"" + percentile_color(p->percentiles[mi]) +
               "\" width=" + format_double(width) + "];\n";
    }
    for (const auto& [pair, w] : adjacency) {
        if (w <= edge_floor) continue;
        dot += "  c" + std::to_string(pair.first) + " -- c" + std::to_string(pair.second) +
               " [weight=" + format_double(w) + "];\n";
    }
    dot += "}\n";

    VizDocuments out;
    out.json = doc.dump(2) + "\n";
    out.dot = std::move(dot);
    return out;
}

}  // namespace commcred
