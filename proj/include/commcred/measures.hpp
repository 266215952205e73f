#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "commcred/community.hpp"
#include "commcred/credibility.hpp"
#include "commcred/graph.hpp"
#include "commcred/links.hpp"

namespace commcred {

inline constexpr std::size_t kMeasureCount = 14;

enum class Measure : std::size_t {
    VideosPct = 0,
    VideosAvgLikes,
    LowCredPct,
    LowCredAvgLikes,
    HighCredPct,
    HighCredAvgLikes,
    PubArticlesPct,
    PubArticlesAvgLikes,
    NoUrlsPct,
    NoUrlsAvgLikes,
    InternalDensity,
    CommAvgLikes,
    MedianFollowers,
    UsersAvgTweets,
};

const std::array<std::string, kMeasureCount>& measure_names();
std::optional<Measure> measure_from_name(const std::string& name);

// The 14 per-community measures. Empty denominators are encoded as
// missing, never as 0; internal_density is always present (0 for a
// single member).
struct MeasureVector {
    std::array<std::optional<double>, kMeasureCount> values{};

    std::optional<double>& operator[](Measure m) { return values[static_cast<std::size_t>(m)]; }
    const std::optional<double>& operator[](Measure m) const {
        return values[static_cast<std::size_t>(m)];
    }
};

struct CommunityProfile {
    std::uint32_t community_id = 0;
    std::size_t user_count = 0;
    MeasureVector measures;
    std::array<std::optional<double>, kMeasureCount> percentiles{};
    std::array<std::optional<double>, kMeasureCount> deviations{};
};

// One tweet after categorization and score joining.
struct AnnotatedTweet {
    NodeId user = 0;
    LinkCategory category = LinkCategory::NoUrl;
    long long like_count = 0;
    // Buckets of this tweet's scored category-2 link occurrences.
    std::vector<Bucket> scored_buckets;
};

struct MeasureStats {
    std::size_t density_weight_clamps = 0;  // pair weights clamped to 1
};

// Members and their annotated tweets -> one MeasureVector.
// follower_counts[node] is the directed in-degree of each member.
MeasureVector compute_measures(const FollowerGraph& g, const std::vector<NodeId>& members,
                               const std::vector<const AnnotatedTweet*>& tweets,
                               const std::vector<std::size_t>& follower_counts,
                               MeasureStats* stats = nullptr);

// Ascending mean-rank percentiles: (rank-1)/(k-1) over the k present
// values; ties share the mean of their ranks; a single present value
// sits at 0.5. Missing stays missing.
std::vector<std::optional<double>> rank_percentiles(
    const std::vector<std::optional<double>>& values);

// Full profile pass: measures for every community, then percentiles and
// deviations (percentile - 0.5) across communities. follower_counts is
// the directed-graph in-degree per node.
std::vector<CommunityProfile> profile_communities(const FollowerGraph& g, const Partition& p,
                                                  const std::vector<AnnotatedTweet>& tweets,
                                                  const std::vector<std::size_t>& follower_counts,
                                                  MeasureStats* stats = nullptr);

// measures.csv content: community_id,user_count,<measures>,
// <measure>_percentile...,<measure>_deviation...; missing cells empty.
std::string measures_csv(const std::vector<CommunityProfile>& profiles);

// Inter-community total edge weights, keyed (low id, high id).
std::map<std::pair<std::uint32_t, std::uint32_t>, double> community_adjacency(
    const FollowerGraph& g, const Partition& p);

// Linear red -> green over a percentile; missing -> white.
std::string percentile_color(const std::optional<double>& percentile);

struct VizDocuments {
    std::string json;
    std::string dot;
};

// Node-link documents for one measure: node size follows user_count,
// node color the measure's percentile, edges the inter-community weight
// above edge_floor. Throws for unknown measure names, listing valid ones.
VizDocuments emit_viz(const std::vector<CommunityProfile>& profiles,
                      const std::map<std::pair<std::uint32_t, std::uint32_t>, double>& adjacency,
                      const std::string& measure, double edge_floor = 0.0);

}  // namespace commcred
