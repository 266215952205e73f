#include "commcred/graph.hpp"

#include <algorithm>
#include <map>

#include "commcred/util.hpp"

namespace commcred {

NodeId NodeIndex::intern(const std::string& name) {
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    NodeId id = static_cast<NodeId>(names_.size());
    names_.push_back(name);
    ids_.emplace(name, id);
    return id;
}

std::optional<NodeId> NodeIndex::find(const std::string& name) const {
    auto it = ids_.find(name);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

std::size_t DirectedGraph::follower_count() const {
    std::size_t n = 0;
    for (const auto& out : out_edges) {
        if (!out.empty()) ++n;
    }
    return n;
}

std::vector<std::size_t> DirectedGraph::in_degrees() const {
    std::vector<std::size_t> deg(node_count(), 0);
    for (const auto& out : out_edges) {
        for (const auto& [to, w] : out) ++deg[to];
    }
    return deg;
}

DirectedGraph build_directed(const std::vector<FollowerEdge>& edges,
                             const std::vector<std::string>& extra_nodes) {
    DirectedGraph g;
    std::vector<std::pair<NodeId, NodeId>> pairs;
    pairs.reserve(edges.size());
    for (const auto& e : edges) {
        NodeId from = g.index.intern(e.from_user);
        NodeId to = g.index.intern(e.to_user);
        if (from == to) continue;  // loaders drop these already
        pairs.emplace_back(from, to);
    }
    for (const auto& name : extra_nodes) g.index.intern(name);

    g.out_edges.resize(g.index.size());
    std::vector<std::size_t> out_degree(g.index.size(), 0);
    for (const auto& [from, to] : pairs) ++out_degree[from];
    for (const auto& [from, to] : pairs) {
        g.out_edges[from].emplace_back(to, 1.0 / static_cast<double>(out_degree[from]));
    }
    // Canonical adjacency order regardless of input order.
    for (auto& out : g.out_edges) {
        std::sort(out.begin(), out.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    }
    return g;
}

FollowerGraph FollowerGraph::from_edges(std::size_t n, const std::vector<WeightedEdge>& edges,
                                        NodeIndex index) {
    // Merge duplicates of the same unordered pair.
    std::map<std::pair<NodeId, NodeId>, double> merged;
    for (const auto& e : edges) {
        if (e.u >= n || e.v >= n) throw InvariantError("edge endpoint out of range");
        if (e.w <= 0.0) throw InvariantError("edge weight must be positive");
        NodeId a = std::min(e.u, e.v);
        NodeId b = std::max(e.u, e.v);
        merged[{a, b}] += e.w;
    }

    FollowerGraph g;
    g.index_ = std::move(index);
    g.offsets_.assign(n + 1, 0);
    g.self_loop_.assign(n, 0.0);
    g.strength_.assign(n, 0.0);

    std::vector<std::size_t> degree(n, 0);
    for (const auto& [pair, w] : merged) {
        if (pair.first == pair.second) continue;
        ++degree[pair.first];
        ++degree[pair.second];
    }
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + degree[i];
    g.nbr_.resize(g.offsets_[n]);
    g.w_.resize(g.offsets_[n]);

    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& [pair, w] : merged) {
        auto [u, v] = pair;
        if (u == v) {
            g.self_loop_[u] += w;
            g.strength_[u] += 2.0 * w;
            g.total_weight_ += w;
            ++g.self_loop_count_;
            continue;
        }
        g.nbr_[cursor[u]] = v;
        g.w_[cursor[u]++] = w;
        g.nbr_[cursor[v]] = u;
        g.w_[cursor[v]++] = w;
        g.strength_[u] += w;
        g.strength_[v] += w;
        g.total_weight_ += w;
    }
    // std::map iteration gives each row's neighbors in ascending order for
    // the first endpoint but not the second; sort rows for canonical form.
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t lo = g.offsets_[i], hi = g.offsets_[i + 1];
        std::vector<std::pair<NodeId, double>> row;
        row.reserve(hi - lo);
        for (std::size_t k = lo; k < hi; ++k) row.emplace_back(g.nbr_[k], g.w_[k]);
        std::sort(row.begin(), row.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t k = lo; k < hi; ++k) {
            g.nbr_[k] = row[k - lo].first;
            g.w_[k] = row[k - lo].second;
        }
    }
    return g;
}

FollowerGraph FollowerGraph::from_directed(const DirectedGraph& g) {
    std::vector<WeightedEdge> edges;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        for (const auto& [v, w] : g.out_edges[u]) {
            edges.push_back({u, v, w});
        }
    }
    NodeIndex index = g.index;
    return from_edges(g.node_count(), edges, std::move(index));
}

FollowerGraph symmetrize(const DirectedGraph& g) { return FollowerGraph::from_directed(g); }

double FollowerGraph::weight(NodeId u, NodeId v) const {
    if (u == v) return self_loop_[u];
    // Scan the shorter adjacency row.
    NodeId a = u, b = v;
    if (offsets_[a + 1] - offsets_[a] > offsets_[b + 1] - offsets_[b]) std::swap(a, b);
    for (std::size_t k = offsets_[a]; k < offsets_[a + 1]; ++k) {
        if (nbr_[k] == b) return w_[k];
    }
    return 0.0;
}

std::vector<WeightedEdge> FollowerGraph::edges() const {
    std::vector<WeightedEdge> out;
    for (NodeId u = 0; u < node_count(); ++u) {
        if (self_loop_[u] > 0.0) out.push_back({u, u, self_loop_[u]});
        for (std::size_t k = offsets_[u]; k < offsets_[u + 1]; ++k) {
            if (u < nbr_[k]) out.push_back({u, nbr_[k], w_[k]});
        }
    }
    std::sort(out.begin(), out.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
        return std::tie(a.u, a.v) < std::tie(b.u, b.v);
    });
    return out;
}

std::string graph_dump_csv(const FollowerGraph& g) {
    std::string out = "u,v,w\n";
    for (const auto& e : g.edges()) {
        out += csv_field(g.index().name(e.u));
        out += ',';
        out += csv_field(g.index().name(e.v));
        out += ',';
        out += format_double(e.w);
        out += '\n';
    }
    return out;
}

}  // namespace commcred
