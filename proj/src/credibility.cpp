#include "commcred/credibility.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <json.hpp>

#include "commcred/util.hpp"

namespace commcred {

TfIdfModel fit_tfidf(const std::vector<std::string>& corpus) {
    if (corpus.empty()) throw UsageError("tf-idf requires a non-empty corpus");

    std::map<std::string, std::size_t> df;  // ordered: vocabulary indices are stable
    for (const auto& text : corpus) {
        auto tokens = tokenize(text);
        std::sort(tokens.begin(), tokens.end());
        tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
        for (auto& t : tokens) ++df[t];
    }
    if (df.empty()) throw UsageError("tf-idf corpus has no tokens");

    TfIdfModel model;
    model.doc_count = corpus.size();
    model.idf.reserve(df.size());
    double n = static_cast<double>(corpus.size());
    std::uint32_t index = 0;
    for (const auto& [term, count] : df) {
        model.vocabulary.emplace(term, index++);
        model.idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
    }
    return model;
}

SparseVec tfidf_transform(const TfIdfModel& model, const std::string& text) {
    std::map<std::uint32_t, double> tf;
    for (const auto& token : tokenize(text)) {
        auto it = model.vocabulary.find(token);
        if (it != model.vocabulary.end()) tf[it->second] += 1.0;
    }
    SparseVec vec;
    vec.reserve(tf.size());
    double norm_sq = 0.0;
    for (const auto& [feature, count] : tf) {
        double v = count * model.idf[feature];
        vec.emplace_back(feature, v);
        norm_sq += v * v;
    }
    if (norm_sq > 0.0) {
        double inv = 1.0 / std::sqrt(norm_sq);
        for (auto& [feature, v] : vec) v *= inv;
    }
    return vec;
}

double sparse_get(const SparseVec& v, std::uint32_t feature) {
    auto it = std::lower_bound(v.begin(), v.end(), feature,
                               [](const auto& a, std::uint32_t f) { return a.first < f; });
    if (it != v.end() && it->first == feature) return it->second;
    return 0.0;
}

// ---- SVM -------------------------------------------------------------------

double LinearModel::decision(const SparseVec& x) const {
    double sum = bias;
    for (const auto& [feature, v] : x) {
        if (feature < weights.size()) sum += weights[feature] * v;
    }
    return sum;
}

LinearModel train_svm(const std::vector<SparseVec>& rows, const std::vector<int>& labels,
                      std::size_t dim, const SvmConfig& cfg) {
    if (rows.size() != labels.size()) throw InvariantError("svm: rows/labels size mismatch");
    std::size_t pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    if (pos == 0 || pos == labels.size()) throw UsageError("degenerate labels");

    LinearModel m;
    m.weights.assign(dim, 0.0);
    const double n = static_cast<double>(rows.size());

    std::vector<double> grad(dim);
    for (int t = 1; t <= cfg.epochs; ++t) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_bias = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            double y = labels[i] == 1 ? 1.0 : -1.0;
            if (y * m.decision(rows[i]) < 1.0) {
                for (const auto& [feature, v] : rows[i]) grad[feature] -= y * v;
                grad_bias -= y;
            }
        }
        double eta = cfg.learning_rate /
                     (1.0 + cfg.lambda * cfg.learning_rate * static_cast<double>(t));
        for (std::size_t f = 0; f < dim; ++f) {
            m.weights[f] -= eta * (cfg.lambda * m.weights[f] + grad[f] / n);
        }
        m.bias -= eta * grad_bias / n;  // bias is not regularized
    }
    return m;
}

// ---- random forest ------------------------------------------------------------

int DecisionTree::predict(const SparseVec& x) const {
    std::int32_t node = 0;
    for (;;) {
        const TreeNode& nd = nodes[static_cast<std::size_t>(node)];
        if (nd.feature < 0) return nd.label;
        node = sparse_get(x, static_cast<std::uint32_t>(nd.feature)) < nd.threshold ? nd.left
                                                                                    : nd.right;
    }
}

int Forest::predict(const SparseVec& x) const {
    int votes = 0;
    for (const auto& t : trees) votes += t.predict(x);
    return 2 * votes > static_cast<int>(trees.size()) ? 1 : 0;
}

namespace {

struct TreeBuilder {
    const std::vector<SparseVec>& rows;
    const std::vector<int>& labels;
    std::size_t dim;
    const RfConfig& cfg;
    Rng& rng;
    std::size_t mtry;
    DecisionTree tree;
    std::vector<std::uint32_t> feature_pool;  // partial Fisher-Yates scratch

    double value(std::size_t row, std::uint32_t feature) const {
        return sparse_get(rows[row], feature);
    }

    std::int32_t build(std::vector<std::size_t>& members, int depth) {
        std::size_t ones = 0;
        for (std::size_t r : members) ones += static_cast<std::size_t>(labels[r]);
        std::int8_t majority = 2 * ones > members.size() ? 1 : 0;

        bool pure = ones == 0 || ones == members.size();
        bool depth_capped = cfg.max_depth > 0 && depth >= cfg.max_depth;
        if (pure || depth_capped ||
            members.size() < 2 * static_cast<std::size_t>(cfg.min_leaf)) {
            return make_leaf(majority);
        }

        // Sample mtry distinct candidate features.
        for (std::size_t k = 0; k < mtry; ++k) {
            std::size_t j = k + static_cast<std::size_t>(
                                    bounded_rand(rng, static_cast<std::uint64_t>(dim - k)));
            std::swap(feature_pool[k], feature_pool[j]);
        }

        double best_gini = std::numeric_limits<double>::infinity();
        std::uint32_t best_feature = 0;
        double best_threshold = 0.0;
        bool found = false;

        std::vector<std::pair<double, std::size_t>> sorted;  // (value, row)
        for (std::size_t k = 0; k < mtry; ++k) {
            std::uint32_t f = feature_pool[k];
            sorted.clear();
            for (std::size_t r : members) sorted.emplace_back(value(r, f), r);
            std::sort(sorted.begin(), sorted.end());

            std::size_t left_n = 0, left_ones = 0;
            std::size_t total = members.size();
            for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
                ++left_n;
                left_ones += static_cast<std::size_t>(labels[sorted[i].second]);
                if (sorted[i].first == sorted[i + 1].first) continue;
                std::size_t right_n = total - left_n;
                if (left_n < static_cast<std::size_t>(cfg.min_leaf) ||
                    right_n < static_cast<std::size_t>(cfg.min_leaf)) {
                    continue;
                }
                double lp = static_cast<double>(left_ones) / static_cast<double>(left_n);
                std::size_t right_ones = ones - left_ones;
                double rp = static_cast<double>(right_ones) / static_cast<double>(right_n);
                double gini = static_cast<double>(left_n) * 2.0 * lp * (1.0 - lp) +
                              static_cast<double>(right_n) * 2.0 * rp * (1.0 - rp);
                if (gini < best_gini - 1e-12) {
                    best_gini = gini;
                    best_feature = f;
                    best_threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
                    found = true;
                }
            }
        }
        if (!found) return make_leaf(majority);

        std::vector<std::size_t> left, right;
        for (std::size_t r : members) {
            (value(r, best_feature) < best_threshold ? left : right).push_back(r);
        }
        if (left.empty() || right.empty()) return make_leaf(majority);

        std::int32_t id = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.push_back({static_cast<std::int32_t>(best_feature), best_threshold, -1, -1, 0});
        members.clear();
        members.shrink_to_fit();
        std::int32_t l = build(left, depth + 1);
        std::int32_t r = build(right, depth + 1);
        tree.nodes[static_cast<std::size_t>(id)].left = l;
        tree.nodes[static_cast<std::size_t>(id)].right = r;
        return id;
    }

    std::int32_t make_leaf(std::int8_t label) {
        std::int32_t id = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.push_back({-1, 0.0, -1, -1, label});
        return id;
    }
};

DecisionTree build_tree(const std::vector<SparseVec>& rows, const std::vector<int>& labels,
                        std::size_t dim, const RfConfig& cfg, Rng& rng) {
    std::vector<std::size_t> bootstrap(rows.size());
    for (auto& b : bootstrap) {
        b = static_cast<std::size_t>(bounded_rand(rng, static_cast<std::uint64_t>(rows.size())));
    }

    TreeBuilder builder{rows, labels, dim, cfg, rng,
                        std::max<std::size_t>(
                            1, static_cast<std::size_t>(std::sqrt(static_cast<double>(dim)))),
                        {}, {}};
    builder.feature_pool.resize(dim);
    std::iota(builder.feature_pool.begin(), builder.feature_pool.end(), 0u);

    // Root goes in as a placeholder so nodes[0] is always the root.
    std::int32_t root = builder.build(bootstrap, 0);
    if (root != 0) throw InvariantError("tree root must be node 0");
    return std::move(builder.tree);
}

}  // namespace

Forest train_rf(const std::vector<SparseVec>& rows, const std::vector<int>& labels,
                std::size_t dim, const RfConfig& cfg) {
    if (rows.size() != labels.size()) throw InvariantError("rf: rows/labels size mismatch");
    std::size_t pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    if (pos == 0 || pos == labels.size()) throw UsageError("degenerate labels");
    if (dim == 0) throw UsageError("rf requires at least one feature");

    Forest forest;
    forest.trees.reserve(static_cast<std::size_t>(cfg.n_trees));
    for (int t = 0; t < cfg.n_trees; ++t) {
        Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(t)));
        forest.trees.push_back(build_tree(rows, labels, dim, cfg, rng));
    }
    return forest;
}

// ---- cross-validation ------------------------------------------------------

std::vector<std::vector<std::size_t>> make_folds(std::size_t n, int k, std::uint64_t seed) {
    if (k < 2) throw UsageError("cross-validation needs at least 2 folds");
    if (n < static_cast<std::size_t>(k)) {
        throw UsageError("cross-validation needs at least " + std::to_string(k) +
                         " labeled pages, got " + std::to_string(n));
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    deterministic_shuffle(order, rng);

    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
    std::size_t base = n / static_cast<std::size_t>(k);
    std::size_t extra = n % static_cast<std::size_t>(k);
    std::size_t pos = 0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        std::size_t len = base + (f < extra ? 1 : 0);
        folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                        order.begin() + static_cast<std::ptrdiff_t>(pos + len));
        pos += len;
    }
    return folds;
}

namespace {

// Constant fallback when a training fold has a single class.
struct FoldModels {
    bool svm_constant = false;
    bool rf_constant = false;
    int constant_label = 0;
    LinearModel svm;
    Forest rf;
};

std::uint64_t digest_doubles(std::uint64_t state, const double* data, std::size_t n) {
    return fnv1a64_step(state,
                        std::string_view(reinterpret_cast<const char*>(data), n * sizeof(double)));
}

}  // namespace

std::uint64_t model_digest(const LinearModel& m) {
    std::uint64_t h = fnv1a64_init();
    h = digest_doubles(h, m.weights.data(), m.weights.size());
    h = digest_doubles(h, &m.bias, 1);
    return h;
}

std::uint64_t model_digest(const Forest& f) {
    std::uint64_t h = fnv1a64_init();
    for (const auto& tree : f.trees) {
        for (const auto& nd : tree.nodes) {
            h = fnv1a64_step(h, std::string_view(reinterpret_cast<const char*>(&nd.feature),
                                                 sizeof(nd.feature)));
            h = digest_doubles(h, &nd.threshold, 1);
            h = fnv1a64_step(
                h, std::string_view(reinterpret_cast<const char*>(&nd.label), sizeof(nd.label)));
        }
    }
    return h;
}

CvReport cross_validate(const std::vector<LabeledPage>& labeled,
                        const std::vector<std::string>& texts, const CvConfig& cfg) {
    if (labeled.size() != texts.size()) {
        throw InvariantError("cross_validate: labels/texts size mismatch");
    }
    CvReport report;
    report.folds = make_folds(labeled.size(), cfg.folds, cfg.seed);
    for (int c = 0; c < kCriteria; ++c) {
        for (int a = 0; a < 2; ++a) {
            report.fold_accuracy[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)]
                .resize(report.folds.size(), 0.0);
            report.fold_model_digest[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)]
                .resize(report.folds.size(), 0);
        }
    }

    std::vector<bool> in_test(labeled.size());
    for (std::size_t f = 0; f < report.folds.size(); ++f) {
        std::fill(in_test.begin(), in_test.end(), false);
        for (std::size_t i : report.folds[f]) in_test[i] = true;

        std::vector<std::size_t> train_idx;
        train_idx.reserve(labeled.size() - report.folds[f].size());
        for (std::size_t i = 0; i < labeled.size(); ++i) {
            if (!in_test[i]) train_idx.push_back(i);
        }

        // TF-IDF fit on the training fold only.
        std::vector<std::string> train_texts;
        train_texts.reserve(train_idx.size());
        for (std::size_t i : train_idx) train_texts.push_back(texts[i]);
        TfIdfModel tfidf = fit_tfidf(train_texts);

        std::vector<SparseVec> train_rows(train_idx.size());
        for (std::size_t i = 0; i < train_idx.size(); ++i) {
            train_rows[i] = tfidf_transform(tfidf, texts[train_idx[i]]);
        }
        std::vector<SparseVec> test_rows(report.folds[f].size());
        for (std::size_t i = 0; i < report.folds[f].size(); ++i) {
            test_rows[i] = tfidf_transform(tfidf, texts[report.folds[f][i]]);
        }

        for (int c = 0; c < kCriteria; ++c) {
            std::vector<int> y(train_idx.size());
            for (std::size_t i = 0; i < train_idx.size(); ++i) {
                y[i] = labeled[train_idx[i]].criteria[static_cast<std::size_t>(c)];
            }
            std::size_t ones = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));

            FoldModels models;
            if (ones == 0 || ones == y.size()) {
                models.svm_constant = models.rf_constant = true;
                models.constant_label = ones == 0 ? 0 : 1;
            } else {
                models.svm = train_svm(train_rows, y, tfidf.dim(), cfg.svm);
                RfConfig rf_cfg = cfg.rf;
                rf_cfg.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(c) * 131 + f);
                models.rf = train_rf(train_rows, y, tfidf.dim(), rf_cfg);
            }

            for (int a = 0; a < 2; ++a) {
                std::size_t correct = 0;
                for (std::size_t i = 0; i < test_rows.size(); ++i) {
                    int pred;
                    if (a == 0) {
                        pred = models.svm_constant ? models.constant_label
                                                   : models.svm.predict(test_rows[i]);
                    } else {
                        pred = models.rf_constant ? models.constant_label
                                                  : models.rf.predict(test_rows[i]);
                    }
                    int truth =
                        labeled[report.folds[f][i]].criteria[static_cast<std::size_t>(c)];
                    if (pred == truth) ++correct;
                }
                double acc = test_rows.empty()
                                 ? 1.0
                                 : static_cast<double>(correct) /
                                       static_cast<double>(test_rows.size());
                report.fold_accuracy[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)][f] =
                    acc;
                std::uint64_t digest;
                if (a == 0) {
                    digest = models.svm_constant
                                 ? splitmix64(static_cast<std::uint64_t>(models.constant_label))
                                 : model_digest(models.svm);
                } else {
                    digest = models.rf_constant
                                 ? splitmix64(static_cast<std::uint64_t>(models.constant_label))
                                 : model_digest(models.rf);
                }
                report
                    .fold_model_digest[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)]
                                      [f] = digest;
            }
        }
    }

    for (int c = 0; c < kCriteria; ++c) {
        for (int a = 0; a < 2; ++a) {
            const auto& accs =
                report.fold_accuracy[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)];
            double mean = std::accumulate(accs.begin(), accs.end(), 0.0) /
                          static_cast<double>(accs.size());
            if (a == 0) report.svm_accuracy[static_cast<std::size_t>(c)] = mean;
            else report.rf_accuracy[static_cast<std::size_t>(c)] = mean;
        }
    }
    return report;
}

// ---- model set & scoring -----------------------------------------------------

Bucket bucket(int score) {
    if (score < 0 || score > 7) {
        throw UsageError("credibility score out of range 0..7: " + std::to_string(score));
    }
    if (score <= 2) return Bucket::Low;
    if (score <= 4) return Bucket::Medium;
    return Bucket::High;
}

const char* bucket_name(Bucket b) {
    switch (b) {
        case Bucket::Low: return "low";
        case Bucket::Medium: return "medium";
        case Bucket::High: return "high";
    }
    throw InvariantError("unknown bucket");
}

CredibilityScore score_from_predictions(const std::array<int, kCriteria>& per_criterion) {
    CredibilityScore s;
    s.per_criterion = per_criterion;
    s.score = std::accumulate(per_criterion.begin(), per_criterion.end(), 0);
    s.bucket = bucket(s.score);
    return s;
}

CredibilityModelSet train_model_set(const std::vector<LabeledPage>& labeled,
                                    const std::vector<std::string>& texts, const CvConfig& cfg) {
    CvReport cv = cross_validate(labeled, texts, cfg);

    CredibilityModelSet set;
    set.svm_cv_accuracy = cv.svm_accuracy;
    set.rf_cv_accuracy = cv.rf_accuracy;

    std::vector<std::string> all_texts = texts;
    set.tfidf = fit_tfidf(all_texts);
    std::vector<SparseVec> rows(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i) {
        rows[i] = tfidf_transform(set.tfidf, texts[i]);
    }

    for (int c = 0; c < kCriteria; ++c) {
        std::size_t cz = static_cast<std::size_t>(c);
        std::vector<int> y(labeled.size());
        for (std::size_t i = 0; i < labeled.size(); ++i) y[i] = labeled[i].criteria[cz];
        set.svm_models[cz] = train_svm(rows, y, set.tfidf.dim(), cfg.svm);
        RfConfig rf_cfg = cfg.rf;
        rf_cfg.seed = derive_seed(cfg.seed, 7919 + static_cast<std::uint64_t>(c));
        set.rf_models[cz] = train_rf(rows, y, set.tfidf.dim(), rf_cfg);
        set.selection[cz] =
            cv.rf_accuracy[cz] > cv.svm_accuracy[cz] ? Algo::Rf : Algo::Svm;
    }
    return set;
}

CredibilityScore score_text(const std::string& text, const CredibilityModelSet& models) {
    if (models.tfidf.dim() == 0) throw UsageError("credibility models are not trained");
    SparseVec x = tfidf_transform(models.tfidf, text);
    std::array<int, kCriteria> preds{};
    for (int c = 0; c < kCriteria; ++c) {
        std::size_t cz = static_cast<std::size_t>(c);
        preds[cz] = models.selection[cz] == Algo::Svm ? models.svm_models[cz].predict(x)
                                                      : models.rf_models[cz].predict(x);
    }
    return score_from_predictions(preds);
}

CredibilityScore score_page(const WebPage& page, const CredibilityModelSet& models) {
    return score_text(page.content, models);
}

// ---- persistence ---------------------------------------------------------------

namespace {

using nlohmann::json;

json tree_to_json(const DecisionTree& t) {
    json nodes = json::array();
    for (const auto& nd : t.nodes) {
        nodes.push_back({nd.feature, nd.threshold, nd.left, nd.right, nd.label});
    }
    return nodes;
}

DecisionTree tree_from_json(const json& j) {
    DecisionTree t;
    for (const auto& nd : j) {
        t.nodes.push_back({nd.at(0).get<std::int32_t>(), nd.at(1).get<double>(),
                           nd.at(2).get<std::int32_t>(), nd.at(3).get<std::int32_t>(),
                           nd.at(4).get<std::int8_t>()});
    }
    return t;
}

constexpr int kModelFormatVersion = 1;

}  // namespace

void save_model_set(const CredibilityModelSet& models, const std::filesystem::path& path) {
    json j;
    j["format"] = "commcred-models";
    j["version"] = kModelFormatVersion;
    j["doc_count"] = models.tfidf.doc_count;

    // Vocabulary in index order so the file is stable.
    std::vector<std::string> terms(models.tfidf.dim());
    for (const auto& [term, idx] : models.tfidf.vocabulary) terms[idx] = term;
    j["vocabulary"] = terms;
    j["idf"] = models.tfidf.idf;

    for (int c = 0; c < kCriteria; ++c) {
        std::size_t cz = static_cast<std::size_t>(c);
        json entry;
        entry["svm"] = {{"weights", models.svm_models[cz].weights},
                        {"bias", models.svm_models[cz].bias}};
        json trees = json::array();
        for (const auto& t : models.rf_models[cz].trees) trees.push_back(tree_to_json(t));
        entry["rf"] = trees;
        entry["svm_cv_accuracy"] = models.svm_cv_accuracy[cz];
        entry["rf_cv_accuracy"] = models.rf_cv_accuracy[cz];
        entry["selected"] = models.selection[cz] == Algo::Svm ? "svm" : "rf";
        j["criteria"].push_back(entry);
    }
    atomic_write_file(path, j.dump(2) + "\n");
}

CredibilityModelSet load_model_set(const std::filesystem::path& path) {
    json j = json::parse(read_file(path), nullptr, false);
    if (j.is_discarded() || j.value("format", "") != "commcred-models") {
        throw UsageError("not a model file: " + path.string());
    }
    if (j.value("version", 0) != kModelFormatVersion) {
        throw UsageError("unsupported model format version in " + path.string());
    }
    CredibilityModelSet set;
    set.tfidf.doc_count = j.at("doc_count").get<std::size_t>();
    auto terms = j.at("vocabulary").get<std::vector<std::string>>();
    set.tfidf.idf = j.at("idf").get<std::vector<double>>();
    for (std::uint32_t i = 0; i < terms.size(); ++i) set.tfidf.vocabulary.emplace(terms[i], i);

    const auto& criteria = j.at("criteria");
    if (criteria.size() != kCriteria) throw UsageError("model file must have 7 criteria");
    for (int c = 0; c < kCriteria; ++c) {
        std::size_t cz = static_cast<std::size_t>(c);
        const auto& entry = criteria[cz];
        set.svm_models[cz].weights = entry.at("svm").at("weights").get<std::vector<double>>();
        set.svm_models[cz].bias = entry.at("svm").at("bias").get<double>();
        for (const auto& t : entry.at("rf")) set.rf_models[cz].trees.push_back(tree_from_json(t));
        set.svm_cv_accuracy[cz] = entry.at("svm_cv_accuracy").get<double>();
        set.rf_cv_accuracy[cz] = entry.at("rf_cv_accuracy").get<double>();
        set.selection[cz] = entry.at("selected").get<std::string>() == "rf" ? Algo::Rf : Algo::Svm;
    }
    return set;
}

}  // namespace commcred
