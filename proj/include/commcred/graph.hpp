#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "commcred/ingest.hpp"

namespace commcred {

using NodeId = std::uint32_t;

// Dense index <-> original string id mapping.
class NodeIndex {
public:
    NodeId intern(const std::string& name);
    std::optional<NodeId> find(const std::string& name) const;
    const std::string& name(NodeId id) const { return names_[id]; }
    std::size_t size() const { return names_.size(); }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, NodeId> ids_;
};

// Follower graph with out-weights normalized per user: a user's k
// outgoing follow edges each carry weight 1/k.
struct DirectedGraph {
    NodeIndex index;
    std::vector<std::vector<std::pair<NodeId, double>>> out_edges;

    std::size_t node_count() const { return out_edges.size(); }
    // Number of users with at least one followee; equals the total
    // directed weight since each such user contributes exactly 1.
    std::size_t follower_count() const;
    // Number of distinct followers per node (directed in-degree).
    std::vector<std::size_t> in_degrees() const;
};

// Edges must be deduplicated with no self-follows (load_followers
// guarantees both). extra_nodes become nodes even when they appear in
// no edge (tweet-only users end up as singleton communities).
DirectedGraph build_directed(const std::vector<FollowerEdge>& edges,
                             const std::vector<std::string>& extra_nodes = {});

struct WeightedEdge {
    NodeId u;
    NodeId v;
    double w;
};

// Weighted undirected graph stored as CSR adjacency. Built from the
// directed graph by dropping direction and summing the two directed
// weights per pair. Self-loops are permitted (community aggregation
// uses them); a self-loop's weight counts once in total_weight and
// twice in the node's strength.
class FollowerGraph {
public:
    static FollowerGraph from_directed(const DirectedGraph& g);
    // Direct construction for tests and aggregation. Edges may be in any
    // order/direction; duplicates of the same unordered pair are summed.
    static FollowerGraph from_edges(std::size_t n, const std::vector<WeightedEdge>& edges,
                                    NodeIndex index = {});

    std::size_t node_count() const { return offsets_.size() - 1; }
    double total_weight() const { return total_weight_; }
    double strength(NodeId u) const { return strength_[u]; }
    double self_loop(NodeId u) const { return self_loop_[u]; }

    // Neighbors exclude the node itself; self-loop weight is separate.
    std::span<const NodeId> neighbors(NodeId u) const {
        return {nbr_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
    }
    std::span<const double> neighbor_weights(NodeId u) const {
        return {w_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
    }

    // Weight of the unordered pair {u,v}; 0 when absent. Symmetric.
    double weight(NodeId u, NodeId v) const;

    // Canonical u < v edge list plus (u,u) self-loops, sorted.
    std::vector<WeightedEdge> edges() const;

    std::size_t edge_count() const { return nbr_.size() / 2 + self_loop_count_; }

    const NodeIndex& index() const { return index_; }
    NodeIndex& index() { return index_; }

private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> nbr_;
    std::vector<double> w_;
    std::vector<double> self_loop_;
    std::vector<double> strength_;
    double total_weight_ = 0.0;
    std::size_t self_loop_count_ = 0;
    NodeIndex index_;
};

FollowerGraph symmetrize(const DirectedGraph& g);

// graph.csv dump: header u,v,w with original ids, canonical order.
std::string graph_dump_csv(const FollowerGraph& g);

}  // namespace commcred
