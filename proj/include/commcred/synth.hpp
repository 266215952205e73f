#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "commcred/community.hpp"
#include "commcred/graph.hpp"
#include "commcred/ingest.hpp"
#include "commcred/links.hpp"

namespace commcred {

// Directed planted-partition graph: every ordered pair gets an edge with
// probability p_in inside a block and p_out across blocks.
struct PlantedPartitionSpec {
    std::size_t n = 100;
    std::size_t k = 4;
    double p_in = 0.3;
    double p_out = 0.01;
    // Optional explicit block sizes (must sum to n); otherwise blocks are
    // as equal as possible, remainder spread over the first blocks.
    std::vector<std::size_t> block_sizes;
    std::uint64_t seed = 0;

    void validate() const;  // throws UsageError
    std::vector<std::size_t> resolved_block_sizes() const;
};

struct SynthGraph {
    std::vector<FollowerEdge> edges;
    std::vector<std::string> users;  // u000... in node order
    Partition truth;                 // node order matches `users`
};

SynthGraph gen_graph(const PlantedPartitionSpec& spec);

// Corpus generator: per community, tweets with a planted category mix;
// category-2 tweets point at generated pages whose text plants the
// keyword phrases of the criteria they satisfy, with a planted
// low/medium/high mix. In quota mode the mixes are met exactly (largest
// remainder); otherwise they are sampled.
struct SynthCorpusSpec {
    std::size_t tweets_per_user = 5;
    std::array<double, 4> category_mix = {0.2, 0.3, 0.2, 0.3};  // cat1..cat4
    std::array<double, 3> credibility_mix = {0.3, 0.3, 0.4};    // low, medium, high
    // Per-community overrides, keyed by community id.
    std::vector<std::pair<std::uint32_t, std::array<double, 4>>> category_mix_overrides;
    std::vector<std::pair<std::uint32_t, std::array<double, 3>>> credibility_mix_overrides;
    bool quota = true;
    // Every shorten_every-th category-2 tweet carries a shortened URL
    // that only the resolver fixture can expand; 0 disables shortening.
    std::size_t shorten_every = 3;
    std::size_t extra_non_english = 0;  // extra skipped-at-ingest tweets
    long long max_likes = 100;
    std::uint64_t seed = 0;

    void validate() const;
};

struct CommunityTruth {
    std::uint32_t community_id = 0;
    std::size_t users = 0;
    std::size_t tweets = 0;
    std::array<std::size_t, 4> category_counts{};  // cat1..cat4
    std::array<std::size_t, 3> bucket_counts{};    // low, medium, high (cat2 pages)
};

struct SynthCorpus {
    std::vector<Tweet> tweets;  // includes non-English extras at the end
    std::vector<WebPage> pages;
    std::vector<LabeledPage> labels;
    std::vector<ResolverRecord> fixtures;
    std::vector<CommunityTruth> truth;
};

SynthCorpus gen_corpus(const SynthCorpusSpec& spec, const SynthGraph& graph);

// The keyword phrases planted for each criterion; disjoint from the
// filler vocabulary so the classification task is separable.
const std::array<std::vector<std::string>, 7>& criterion_keywords();

// Largest-remainder integer allocation of `total` over `weights`.
std::vector<std::size_t> quota_allocate(std::size_t total, const std::vector<double>& weights);

struct SynthFiles {
    std::filesystem::path tweets;
    std::filesystem::path followers;
    std::filesystem::path pages;
    std::filesystem::path labels;
    std::filesystem::path resolver_fixtures;
    std::filesystem::path domains;
    std::filesystem::path truth;
};

// Writes tweets.jsonl, followers.csv, pages.jsonl, labels.csv,
// resolver_fixtures.jsonl, domains.toml and truth.json into out_dir.
SynthFiles write_synth_dataset(const SynthGraph& graph, const SynthCorpus& corpus,
                               const std::filesystem::path& out_dir);

}  // namespace commcred
