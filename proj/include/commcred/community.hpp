#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "commcred/graph.hpp"

namespace commcred {

// Total assignment node -> community, ids contiguous from 0.
struct Partition {
    std::vector<std::uint32_t> comm;
    std::uint32_t count = 0;

    static Partition singletons(std::size_t n);

    std::size_t node_count() const { return comm.size(); }

    // Relabel communities by first occurrence in node order; makes
    // equal groupings compare equal element-wise.
    void renumber();

    std::vector<std::size_t> sizes() const;
    std::vector<std::vector<NodeId>> groups() const;
    std::size_t max_community_size() const;

    // Same grouping of nodes, ignoring label choice.
    bool same_blocks(const Partition& other) const;
};

// Newman weighted modularity at resolution 1. A community's internal
// weight counts each internal edge once and each self-loop once; a
// self-loop counts twice in its node's degree. Throws InvariantError
// when total weight is zero.
double modularity(const FollowerGraph& g, const Partition& p);

struct LouvainOptions {
    std::uint64_t seed = 0;
    // Greedy local moves can wedge on small graphs; the algorithm runs
    // this many independently-seeded passes of the full two-phase scheme
    // and keeps the best-modularity result. All derived from `seed`.
    int restarts = 8;
    // Called after every local-move pass with the modularity at that
    // point; within one restart and level, passes never decrease it.
    std::function<void(int restart, int level, int pass, double q)> on_pass;
};

// Greedy two-phase modularity maximization: seeded-shuffle local moves
// until no strictly positive gain, then community aggregation, repeated
// while moves happen. Deterministic for a fixed seed.
Partition louvain(const FollowerGraph& g, std::uint64_t seed);
Partition louvain(const FollowerGraph& g, const LouvainOptions& opts);

struct RefinementConfig {
    std::size_t max_size = 10000;
    std::size_t min_size = 100;
    int max_rounds = 20;
    std::uint64_t seed = 0;
};

// Replaces every community larger than max_size with the Louvain
// partition of its induced subgraph, repeatedly, until none exceeds the
// cap. When Louvain cannot split an oversized community (single block),
// members are ordered by within-community weighted degree and cut into
// balanced contiguous chunks.
Partition split_large(const FollowerGraph& g, const Partition& p, const RefinementConfig& cfg);

// Merges each community smaller than min_size into the neighbour
// community sharing the greatest total inter-community edge weight,
// skipping merges that would push the result past max_size. Smallest
// communities are processed first; ties break to the lowest community
// id. Isolated small communities stay as they are.
Partition merge_small(const FollowerGraph& g, const Partition& p, const RefinementConfig& cfg);

struct RefineRound {
    int round = 0;               // 0 is the initial Louvain run
    double q = 0.0;
    std::size_t communities = 0;
    std::size_t largest = 0;
    std::size_t splits = 0;      // oversized communities split this round
    std::size_t merges = 0;      // merges applied this round
    bool changed = false;
};

struct RefineResult {
    Partition partition;
    std::vector<RefineRound> rounds;
    bool fixpoint = false;
    int rounds_used = 0;
};

// Louvain, then alternating split_large / merge_small until the
// assignment stops changing or max_rounds is hit (a warning, not an
// error). The returned partition never has a community above max_size.
RefineResult refine(const FollowerGraph& g, const RefinementConfig& cfg);

// Normalized mutual information with arithmetic-mean normalization.
// 1 for identical groupings, 0 for independent ones. Throws on
// mismatched node counts.
double nmi(const Partition& a, const Partition& b);

}  // namespace commcred
