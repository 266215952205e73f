#include "commcred/community.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

#include "commcred/util.hpp"

namespace commcred {

Partition Partition::singletons(std::size_t n) {
    Partition p;
    p.comm.resize(n);
    std::iota(p.comm.begin(), p.comm.end(), 0u);
    p.count = static_cast<std::uint32_t>(n);
    return p;
}

void Partition::renumber() {
    constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> relabel(count, kUnset);
    std::uint32_t next = 0;
    for (auto& c : comm) {
        if (relabel[c] == kUnset) relabel[c] = next++;
        c = relabel[c];
    }
    count = next;
}

std::vector<std::size_t> Partition::sizes() const {
    std::vector<std::size_t> s(count, 0);
    for (auto c : comm) ++s[c];
    return s;
}

std::vector<std::vector<NodeId>> Partition::groups() const {
    std::vector<std::vector<NodeId>> g(count);
    for (NodeId i = 0; i < comm.size(); ++i) g[comm[i]].push_back(i);
    return g;
}

std::size_t Partition::max_community_size() const {
    std::size_t best = 0;
    for (auto s : sizes()) best = std::max(best, s);
    return best;
}

bool Partition::same_blocks(const Partition& other) const {
    if (comm.size() != other.comm.size()) return false;
    Partition a = *this;
    Partition b = other;
    a.renumber();
    b.renumber();
    return a.comm == b.comm;
}

double modularity(const FollowerGraph& g, const Partition& p) {
    if (p.comm.size() != g.node_count()) throw InvariantError("partition does not cover graph");
    double m = g.total_weight();
    if (m <= 0.0) throw InvariantError("modularity undefined for zero total weight");
    double two_m = 2.0 * m;

    std::vector<double> in2(p.count, 0.0);   // sum over ordered internal pairs
    std::vector<double> tot(p.count, 0.0);   // sum of strengths
    for (NodeId u = 0; u < g.node_count(); ++u) {
        tot[p.comm[u]] += g.strength(u);
        in2[p.comm[u]] += 2.0 * g.self_loop(u);
        auto nbrs = g.neighbors(u);
        auto ws = g.neighbor_weights(u);
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
            if (p.comm[nbrs[k]] == p.comm[u]) in2[p.comm[u]] += ws[k];
        }
    }
    double q = 0.0;
    for (std::uint32_t c = 0; c < p.count; ++c) {
        double frac = tot[c] / two_m;
        q += in2[c] / two_m - frac * frac;
    }
    return q;
}

namespace {

// Working graph for the aggregation levels.
struct WorkGraph {
    std::size_t n = 0;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;  // no self entries
    std::vector<double> self_loop;
    std::vector<double> strength;  // includes 2 * self_loop
    double m = 0.0;                // total weight, self-loops counted once
};

WorkGraph work_from(const FollowerGraph& g) {
    WorkGraph wg;
    wg.n = g.node_count();
    wg.adj.resize(wg.n);
    wg.self_loop.resize(wg.n);
    wg.strength.resize(wg.n);
    for (NodeId u = 0; u < wg.n; ++u) {
        wg.self_loop[u] = g.self_loop(u);
        wg.strength[u] = g.strength(u);
        auto nbrs = g.neighbors(u);
        auto ws = g.neighbor_weights(u);
        wg.adj[u].reserve(nbrs.size());
        for (std::size_t k = 0; k < nbrs.size(); ++k) wg.adj[u].emplace_back(nbrs[k], ws[k]);
    }
    wg.m = g.total_weight();
    return wg;
}

double work_modularity(const WorkGraph& wg, const std::vector<std::uint32_t>& comm,
                       std::size_t comm_bound) {
    double two_m = 2.0 * wg.m;
    std::vector<double> in2(comm_bound, 0.0);
    std::vector<double> tot(comm_bound, 0.0);
    for (std::uint32_t u = 0; u < wg.n; ++u) {
        tot[comm[u]] += wg.strength[u];
        in2[comm[u]] += 2.0 * wg.self_loop[u];
        for (const auto& [v, w] : wg.adj[u]) {
            if (comm[v] == comm[u]) in2[comm[u]] += w;
        }
    }
    double q = 0.0;
    for (std::size_t c = 0; c < comm_bound; ++c) {
        if (tot[c] == 0.0 && in2[c] == 0.0) continue;
        double frac = tot[c] / two_m;
        q += in2[c] / two_m - frac * frac;
    }
    return q;
}

// One level of seeded local moves. comm is modified in place (labels in
// [0, n)); returns whether any move happened.
bool local_moves(const WorkGraph& wg, std::vector<std::uint32_t>& comm, Rng& rng, int restart,
                 int level, const std::function<void(int, int, int, double)>& on_pass) {
    const double two_m = 2.0 * wg.m;
    std::vector<double> comm_tot(wg.n, 0.0);
    for (std::uint32_t u = 0; u < wg.n; ++u) comm_tot[comm[u]] += wg.strength[u];

    std::vector<std::uint32_t> order(wg.n);
    std::iota(order.begin(), order.end(), 0u);

    std::vector<double> w_to(wg.n, 0.0);  // scratch: weight from u to each community
    std::vector<std::uint32_t> touched;

    bool any_move = false;
    int pass = 0;
    for (;;) {
        deterministic_shuffle(order, rng);
        std::size_t moves = 0;
        for (std::uint32_t u : order) {
            std::uint32_t c_old = comm[u];

            touched.clear();
            w_to[c_old] = 0.0;
            touched.push_back(c_old);
            for (const auto& [v, w] : wg.adj[u]) {
                std::uint32_t c = comm[v];
                if (w_to[c] == 0.0 && c != c_old &&
                    std::find(touched.begin(), touched.end(), c) == touched.end()) {
                    touched.push_back(c);
                }
                w_to[c] += w;
            }

            comm_tot[c_old] -= wg.strength[u];
            const double k_u = wg.strength[u];
            double stay_score = w_to[c_old] - comm_tot[c_old] * k_u / two_m;
            double best_score = stay_score;
            std::uint32_t best_c = c_old;
            for (std::uint32_t c : touched) {
                if (c == c_old) continue;
                double score = w_to[c] - comm_tot[c] * k_u / two_m;
                if (score > best_score + 1e-12) {
                    best_score = score;
                    best_c = c;
                } else if (best_c != c_old && std::abs(score - best_score) <= 1e-12 &&
                           c < best_c) {
                    best_c = c;
                }
            }
            comm[u] = best_c;
            comm_tot[best_c] += k_u;
            if (best_c != c_old) ++moves;
            for (std::uint32_t c : touched) w_to[c] = 0.0;
        }
        ++pass;
        if (on_pass) on_pass(restart, level, pass, work_modularity(wg, comm, wg.n));
        if (moves == 0) break;
        any_move = true;
    }
    return any_move;
}

// Contract communities to supernodes. relabel maps old community label to
// new dense node id.
WorkGraph aggregate(const WorkGraph& wg, const std::vector<std::uint32_t>& comm,
                    std::vector<std::uint32_t>& relabel) {
    constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
    relabel.assign(wg.n, kUnset);
    std::uint32_t next = 0;
    for (std::uint32_t u = 0; u < wg.n; ++u) {
        if (relabel[comm[u]] == kUnset) relabel[comm[u]] = next++;
    }

    WorkGraph out;
    out.n = next;
    out.adj.resize(next);
    out.self_loop.assign(next, 0.0);
    out.strength.assign(next, 0.0);
    out.m = wg.m;

    std::vector<std::map<std::uint32_t, double>> acc(next);
    for (std::uint32_t u = 0; u < wg.n; ++u) {
        std::uint32_t cu = relabel[comm[u]];
        out.self_loop[cu] += wg.self_loop[u];
        for (const auto& [v, w] : wg.adj[u]) {
            std::uint32_t cv = relabel[comm[v]];
            if (cu == cv) {
                if (u < v) out.self_loop[cu] += w;  // internal edge, count once
            } else {
                acc[cu][cv] += w;
            }
        }
    }
    for (std::uint32_t c = 0; c < next; ++c) {
        out.strength[c] = 2.0 * out.self_loop[c];
        for (const auto& [v, w] : acc[c]) {
            out.adj[c].emplace_back(v, w);
            out.strength[c] += w;
        }
    }
    return out;
}

}  // namespace

Partition louvain(const FollowerGraph& g, std::uint64_t seed) {
    LouvainOptions opts;
    opts.seed = seed;
    return louvain(g, opts);
}

namespace {

Partition louvain_once(const FollowerGraph& g, const WorkGraph& base, std::uint64_t seed,
                       int restart,
                       const std::function<void(int, int, int, double)>& on_pass) {
    Rng rng(seed);
    WorkGraph wg = base;

    // node -> community of the original graph, refined level by level
    std::vector<std::uint32_t> assignment(g.node_count());
    std::iota(assignment.begin(), assignment.end(), 0u);

    int level = 0;
    for (;;) {
        std::vector<std::uint32_t> comm(wg.n);
        std::iota(comm.begin(), comm.end(), 0u);
        bool moved = local_moves(wg, comm, rng, restart, level, on_pass);
        if (!moved) break;

        std::vector<std::uint32_t> relabel;
        WorkGraph next = aggregate(wg, comm, relabel);
        for (auto& a : assignment) a = relabel[comm[a]];
        if (next.n == wg.n) break;
        wg = std::move(next);
        ++level;
    }

    Partition p;
    p.comm = std::move(assignment);
    p.count = static_cast<std::uint32_t>(wg.n);
    p.renumber();
    return p;
}

}  // namespace

Partition louvain(const FollowerGraph& g, const LouvainOptions& opts) {
    if (g.node_count() == 0) throw InvariantError("louvain requires a non-empty graph");
    if (opts.restarts < 1) throw UsageError("louvain needs at least one restart");
    if (g.total_weight() <= 0.0) {
        // No edges: every node stays a singleton.
        return Partition::singletons(g.node_count());
    }

    WorkGraph base = work_from(g);
    Partition best;
    double best_q = 0.0;
    for (int r = 0; r < opts.restarts; ++r) {
        Partition p =
            louvain_once(g, base, derive_seed(opts.seed, static_cast<std::uint64_t>(r)), r,
                         opts.on_pass);
        double q = modularity(g, p);
        if (r == 0 || q > best_q) {
            best_q = q;
            best = std::move(p);
        }
    }
    return best;
}

namespace {

struct Subgraph {
    std::vector<NodeId> members;  // local index -> global node
    FollowerGraph graph;
};

Subgraph induced_subgraph(const FollowerGraph& g, const std::vector<NodeId>& members) {
    Subgraph sub;
    sub.members = members;
    std::unordered_map<NodeId, NodeId> local;
    local.reserve(members.size());
    for (NodeId i = 0; i < members.size(); ++i) local.emplace(members[i], i);

    std::vector<WeightedEdge> edges;
    for (NodeId i = 0; i < members.size(); ++i) {
        NodeId u = members[i];
        auto nbrs = g.neighbors(u);
        auto ws = g.neighbor_weights(u);
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
            auto it = local.find(nbrs[k]);
            if (it != local.end() && u < nbrs[k]) {
                edges.push_back({i, it->second, ws[k]});
            }
        }
    }
    sub.graph = FollowerGraph::from_edges(members.size(), edges);
    return sub;
}

// Seed that depends on the community content, not its label.
std::uint64_t community_seed(std::uint64_t base, const std::vector<NodeId>& members) {
    std::uint64_t h = fnv1a64_init();
    for (NodeId m : members) {
        std::uint64_t v = m;
        h = fnv1a64_step(h, std::string_view(reinterpret_cast<const char*>(&v), sizeof(v)));
    }
    return derive_seed(base, h);
}

}  // namespace

Partition split_large(const FollowerGraph& g, const Partition& p, const RefinementConfig& cfg) {
    Partition result = p;
    result.renumber();

    for (;;) {
        auto groups = result.groups();
        std::vector<std::uint32_t> oversized;
        for (std::uint32_t c = 0; c < result.count; ++c) {
            if (groups[c].size() > cfg.max_size) oversized.push_back(c);
        }
        if (oversized.empty()) break;

        std::uint32_t next_id = result.count;
        for (std::uint32_t c : oversized) {
            const auto& members = groups[c];
            Subgraph sub = induced_subgraph(g, members);
            Partition sub_p = louvain(sub.graph, community_seed(cfg.seed, members));

            if (sub_p.count > 1) {
                for (NodeId i = 0; i < members.size(); ++i) {
                    std::uint32_t b = sub_p.comm[i];
                    result.comm[members[i]] = (b == 0) ? c : next_id + b - 1;
                }
                next_id += sub_p.count - 1;
            } else {
                // Louvain kept it whole; order members by within-community
                // weighted degree and cut into balanced contiguous chunks.
                std::vector<std::pair<double, NodeId>> ranked(members.size());
                for (NodeId i = 0; i < members.size(); ++i) {
                    ranked[i] = {sub.graph.strength(i), members[i]};
                }
                std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
                    if (a.first != b.first) return a.first > b.first;
                    return a.second < b.second;
                });
                std::size_t n = members.size();
                std::size_t chunks = (n + cfg.max_size - 1) / cfg.max_size;
                std::size_t base = n / chunks;
                std::size_t extra = n % chunks;  // first `extra` chunks get one more
                std::size_t idx = 0;
                for (std::size_t chunk = 0; chunk < chunks; ++chunk) {
                    std::size_t len = base + (chunk < extra ? 1 : 0);
                    std::uint32_t id = (chunk == 0) ? c : next_id++;
                    for (std::size_t k = 0; k < len; ++k) {
                        result.comm[ranked[idx++].second] = id;
                    }
                }
            }
        }
        result.count = next_id;
        result.renumber();
    }
    return result;
}

Partition merge_small(const FollowerGraph& g, const Partition& p, const RefinementConfig& cfg) {
    Partition result = p;
    result.renumber();

    std::vector<std::size_t> size = result.sizes();
    std::vector<bool> alive(result.count, true);

    // Community-level adjacency: inter-community weights.
    std::vector<std::map<std::uint32_t, double>> nbr_w(result.count);
    for (NodeId u = 0; u < g.node_count(); ++u) {
        std::uint32_t cu = result.comm[u];
        auto nbrs = g.neighbors(u);
        auto ws = g.neighbor_weights(u);
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
            std::uint32_t cv = result.comm[nbrs[k]];
            if (cu != cv && u < nbrs[k]) {
                nbr_w[cu][cv] += ws[k];
                nbr_w[cv][cu] += ws[k];
            }
        }
    }

    auto merge_into = [&](std::uint32_t c, std::uint32_t target) {
        for (NodeId u = 0; u < result.comm.size(); ++u) {
            if (result.comm[u] == c) result.comm[u] = target;
        }
        size[target] += size[c];
        size[c] = 0;
        alive[c] = false;
        for (const auto& [other, w] : nbr_w[c]) {
            nbr_w[other].erase(c);
            if (other == target) continue;
            nbr_w[target][other] += w;
            nbr_w[other][target] += w;
        }
        nbr_w[c].clear();
    };

    for (;;) {
        // Small communities, smallest first, ties by lowest id.
        std::vector<std::uint32_t> candidates;
        for (std::uint32_t c = 0; c < result.count; ++c) {
            if (alive[c] && size[c] < cfg.min_size) candidates.push_back(c);
        }
        std::sort(candidates.begin(), candidates.end(), [&](std::uint32_t a, std::uint32_t b) {
            if (size[a] != size[b]) return size[a] < size[b];
            return a < b;
        });

        bool merged = false;
        for (std::uint32_t c : candidates) {
            if (!alive[c] || size[c] >= cfg.min_size) continue;
            if (nbr_w[c].empty()) continue;  // isolated small community stays
            // Greatest-weight neighbour, ties to lowest id (map iterates
            // ids ascending, so strict > keeps the lowest).
            std::uint32_t target = 0;
            double best = -1.0;
            for (const auto& [other, w] : nbr_w[c]) {
                if (w > best) {
                    best = w;
                    target = other;
                }
            }
            if (size[c] + size[target] > cfg.max_size) continue;  // cap blocks this merge
            merge_into(c, target);
            merged = true;
            break;  // re-rank candidates after each merge
        }
        if (!merged) break;
    }
    result.renumber();
    return result;
}

RefineResult refine(const FollowerGraph& g, const RefinementConfig& cfg) {
    if (g.node_count() == 0) throw InvariantError("refine requires a non-empty graph");
    if (cfg.min_size > cfg.max_size) throw UsageError("min_size must be <= max_size");

    RefineResult res;
    res.partition = louvain(g, cfg.seed);

    auto log_round = [&](int round, const Partition& p, std::size_t splits, std::size_t merges,
                         bool changed) {
        RefineRound r;
        r.round = round;
        r.q = g.total_weight() > 0.0 ? modularity(g, p) : 0.0;
        r.communities = p.count;
        r.largest = p.max_community_size();
        r.splits = splits;
        r.merges = merges;
        r.changed = changed;
        res.rounds.push_back(r);
    };
    log_round(0, res.partition, 0, 0, true);

    for (int round = 1; round <= cfg.max_rounds; ++round) {
        Partition before = res.partition;

        std::size_t oversized = 0;
        for (auto s : before.sizes()) {
            if (s > cfg.max_size) ++oversized;
        }
        Partition split = split_large(g, before, cfg);
        Partition merged = merge_small(g, split, cfg);
        std::size_t merges =
            split.count >= merged.count ? split.count - merged.count : 0;

        bool changed = !merged.same_blocks(before);
        res.partition = std::move(merged);
        res.rounds_used = round;
        log_round(round, res.partition, oversized, merges, changed);
        if (!changed) {
            res.fixpoint = true;
            break;
        }
    }
    return res;
}

double nmi(const Partition& a, const Partition& b) {
    if (a.comm.size() != b.comm.size()) throw InvariantError("nmi requires the same node set");
    std::size_t n = a.comm.size();
    if (n == 0) throw InvariantError("nmi undefined for empty partitions");

    std::vector<double> pa(a.count, 0.0), pb(b.count, 0.0);
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> joint;
    for (std::size_t i = 0; i < n; ++i) {
        pa[a.comm[i]] += 1.0;
        pb[b.comm[i]] += 1.0;
        joint[{a.comm[i], b.comm[i]}] += 1.0;
    }
    double dn = static_cast<double>(n);
    double ha = 0.0, hb = 0.0, mi = 0.0;
    for (double c : pa) {
        if (c > 0) ha -= (c / dn) * std::log(c / dn);
    }
    for (double c : pb) {
        if (c > 0) hb -= (c / dn) * std::log(c / dn);
    }
    for (const auto& [cell, c] : joint) {
        double pxy = c / dn;
        double px = pa[cell.first] / dn;
        double py = pb[cell.second] / dn;
        mi += pxy * std::log(pxy / (px * py));
    }
    if (ha == 0.0 && hb == 0.0) return 1.0;  // both single-block: identical groupings
    double denom = 0.5 * (ha + hb);
    double value = mi / denom;
    return std::clamp(value, 0.0, 1.0);
}

}  // namespace commcred
