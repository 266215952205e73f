#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "commcred/commands.hpp"
#include "commcred/community.hpp"
#include "commcred/credibility.hpp"
#include "commcred/graph.hpp"
#include "commcred/links.hpp"
#include "commcred/measures.hpp"
#include "commcred/synth.hpp"
#include "commcred/util.hpp"

namespace py = pybind11;
using namespace commcred;

namespace {

// Build a FollowerGraph from (u, v, w) string edges; node ids are
// interned in first-appearance order.
FollowerGraph graph_from_triples(const std::vector<std::tuple<std::string, std::string, double>>& edges) {
    NodeIndex index;
    std::vector<WeightedEdge> converted;
    for (const auto& [u, v, w] : edges) {
        converted.push_back({index.intern(u), index.intern(v), w});
    }
    std::size_t n = index.size();
    return FollowerGraph::from_edges(n, converted, std::move(index));
}

std::map<std::string, std::uint32_t> partition_to_map(const FollowerGraph& g, const Partition& p) {
    std::map<std::string, std::uint32_t> out;
    for (NodeId u = 0; u < g.node_count(); ++u) out[g.index().name(u)] = p.comm[u];
    return out;
}

Partition partition_from_map(const FollowerGraph& g,
                             const std::map<std::string, std::uint32_t>& m) {
    Partition p;
    p.comm.resize(g.node_count());
    std::uint32_t max_c = 0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        auto it = m.find(g.index().name(u));
        if (it == m.end()) throw UsageError("assignment does not cover node " + g.index().name(u));
        p.comm[u] = it->second;
        max_c = std::max(max_c, it->second);
    }
    p.count = max_c + 1;
    p.renumber();
    return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Community detection and link-credibility profiling core";

    // ---- community detection -------------------------------------------
    m.def(
        "louvain",
        [](const std::vector<std::tuple<std::string, std::string, double>>& edges,
           std::uint64_t seed) {
            FollowerGraph g = graph_from_triples(edges);
            return partition_to_map(g, louvain(g, seed));
        },
        py::arg("edges"), py::arg("seed") = 0,
        "Louvain communities of a weighted undirected edge list "
        "[(u, v, weight), ...]; returns {node: community_id}.");

    m.def(
        "modularity",
        [](const std::vector<std::tuple<std::string, std::string, double>>& edges,
           const std::map<std::string, std::uint32_t>& assignment) {
            FollowerGraph g = graph_from_triples(edges);
            return modularity(g, partition_from_map(g, assignment));
        },
        py::arg("edges"), py::arg("assignment"));

    m.def(
        "detect_communities",
        [](const std::vector<std::pair<std::string, std::string>>& follows,
           std::size_t max_size, std::size_t min_size, int max_rounds, std::uint64_t seed) {
            std::vector<FollowerEdge> edges;
            for (const auto& [from, to] : follows) edges.push_back({from, to});
            DirectedGraph d = build_directed(edges);
            FollowerGraph g = symmetrize(d);
            RefinementConfig cfg{max_size, min_size, max_rounds, seed};
            RefineResult r = refine(g, cfg);
            return py::make_tuple(partition_to_map(g, r.partition), r.fixpoint, r.rounds_used);
        },
        py::arg("follows"), py::arg("max_size") = 10000, py::arg("min_size") = 1,
        py::arg("max_rounds") = 20, py::arg("seed") = 0,
        "Full detection over directed follow pairs [(follower, followee), ...]: "
        "out-weight normalization, symmetrization, Louvain plus the "
        "split/merge size refinement. Returns (assignment, fixpoint, rounds).");

    m.def(
        "nmi",
        [](const std::map<std::string, std::uint32_t>& a,
           const std::map<std::string, std::uint32_t>& b) {
            if (a.size() != b.size()) throw UsageError("nmi requires the same node set");
            Partition pa, pb;
            std::uint32_t ma = 0, mb = 0;
            for (const auto& [node, c] : a) {
                auto it = b.find(node);
                if (it == b.end()) throw UsageError("nmi requires the same node set");
                pa.comm.push_back(c);
                pb.comm.push_back(it->second);
                ma = std::max(ma, c);
                mb = std::max(mb, it->second);
            }
            pa.count = ma + 1;
            pb.count = mb + 1;
            pa.renumber();
            pb.renumber();
            return nmi(pa, pb);
        },
        py::arg("a"), py::arg("b"));

    // ---- links -----------------------------------------------------------
    m.def(
        "categorize_urls",
        [](const std::vector<std::string>& urls) {
            Tweet t;
            t.urls = urls;
            FixtureResolver resolver;
            return static_cast<int>(categorize_tweet(t, resolver, DomainRules::defaults()));
        },
        py::arg("urls"),
        "Link category (1..4) of a tweet carrying these URLs, with the "
        "default domain rules and no resolver fixtures.");

    // ---- credibility ------------------------------------------------------
    m.def("bucket", [](int score) { return std::string(bucket_name(bucket(score))); },
          py::arg("score"), "low/medium/high bucket of a 0..7 criteria score.");

    m.def(
        "tfidf_idf",
        [](const std::vector<std::string>& corpus) {
            TfIdfModel model = fit_tfidf(corpus);
            std::map<std::string, double> out;
            for (const auto& [term, idx] : model.vocabulary) out[term] = model.idf[idx];
            return out;
        },
        py::arg("corpus"), "Smoothed idf per vocabulary term.");

    py::class_<CredibilityModelSet>(m, "CredibilityModels")
        .def(
            "score",
            [](const CredibilityModelSet& models, const std::string& text) {
                CredibilityScore s = score_text(text, models);
                std::vector<int> criteria(s.per_criterion.begin(), s.per_criterion.end());
                return py::make_tuple(s.score, std::string(bucket_name(s.bucket)), criteria);
            },
            py::arg("text"), "Returns (score, bucket, per-criterion predictions).")
        .def_property_readonly("svm_cv_accuracy",
                               [](const CredibilityModelSet& m_) {
                                   return std::vector<double>(m_.svm_cv_accuracy.begin(),
                                                              m_.svm_cv_accuracy.end());
                               })
        .def_property_readonly("rf_cv_accuracy", [](const CredibilityModelSet& m_) {
            return std::vector<double>(m_.rf_cv_accuracy.begin(), m_.rf_cv_accuracy.end());
        });

    m.def(
        "train_credibility_models",
        [](const std::vector<std::string>& texts, const std::vector<std::vector<int>>& labels,
           int folds, std::uint64_t seed) {
            if (texts.size() != labels.size()) {
                throw UsageError("texts and labels must have the same length");
            }
            std::vector<LabeledPage> labeled(labels.size());
            for (std::size_t i = 0; i < labels.size(); ++i) {
                if (labels[i].size() != kCriteria) {
                    throw UsageError("each label row needs exactly 7 entries");
                }
                labeled[i].url = "doc" + std::to_string(i);
                std::copy(labels[i].begin(), labels[i].end(), labeled[i].criteria.begin());
            }
            CvConfig cfg;
            cfg.folds = folds;
            cfg.seed = seed;
            return train_model_set(labeled, texts, cfg);
        },
        py::arg("texts"), py::arg("labels"), py::arg("folds") = 10, py::arg("seed") = 0);

    // ---- measures -----------------------------------------------------------
    m.def(
        "rank_percentiles",
        [](const std::vector<std::optional<double>>& values) { return rank_percentiles(values); },
        py::arg("values"),
        "Mean-rank percentiles in [0,1]; None entries stay None.");

    m.def("measure_names", []() {
        return std::vector<std::string>(measure_names().begin(), measure_names().end());
    });

    // ---- pipeline commands -----------------------------------------------------
    m.def(
        "run",
        [](const std::string& command, const std::filesystem::path& config,
           std::optional<std::uint64_t> seed, std::optional<std::filesystem::path> out_dir,
           const std::vector<std::string>& measures) {
            if (command == "synth") {
                SynthCliConfig cfg;
                cfg.spec_file = config;
                if (seed) {
                    cfg.seed = *seed;
                    cfg.seed_overridden = true;
                }
                if (out_dir) cfg.out_dir = *out_dir;
                return cmd_synth(cfg);
            }
            RunConfig cfg = RunConfig::from_file(config);
            if (seed) cfg.seed = *seed;
            if (out_dir) cfg.out_dir = *out_dir;
            if (!measures.empty()) cfg.measures = measures;
            if (command == "detect") return cmd_detect(cfg);
            if (command == "categorize") return cmd_categorize(cfg);
            if (command == "score") return cmd_score(cfg);
            if (command == "characterize") return cmd_characterize(cfg);
            throw UsageError("unknown command: " + command);
        },
        py::arg("command"), py::arg("config"), py::arg("seed") = std::nullopt,
        py::arg("out_dir") = std::nullopt, py::arg("measures") = std::vector<std::string>{},
        "Run one pipeline stage (synth/detect/categorize/score/characterize) "
        "from a config file; returns the process exit code.");

    py::register_exception<UsageError>(m, "UsageError");
    py::register_exception<InvariantError>(m, "InvariantError");

#ifdef VERSION_INFO
#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)
    m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
