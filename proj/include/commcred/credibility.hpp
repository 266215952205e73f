#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "commcred/ingest.hpp"

namespace commcred {

inline constexpr int kCriteria = 7;

// ---- TF-IDF --------------------------------------------------------------

struct TfIdfModel {
    std::unordered_map<std::string, std::uint32_t> vocabulary;  // term -> dense index
    std::vector<double> idf;                                    // smoothed, always > 0
    std::size_t doc_count = 0;

    std::size_t dim() const { return idf.size(); }
};

// Sparse vector sorted by feature index.
using SparseVec = std::vector<std::pair<std::uint32_t, double>>;

// Vocabulary over all unique tokens; idf(t) = ln((1+N)/(1+df(t))) + 1.
// Throws when no document yields a token.
TfIdfModel fit_tfidf(const std::vector<std::string>& corpus);

// L2-normalized tf*idf vector; unseen terms are dropped; a document with
// no known terms maps to the zero vector.
SparseVec tfidf_transform(const TfIdfModel& model, const std::string& text);

double sparse_get(const SparseVec& v, std::uint32_t feature);

// ---- linear SVM ------------------------------------------------------------

struct SvmConfig {
    double lambda = 0.01;       // L2 penalty
    int epochs = 200;
    double learning_rate = 1.0; // eta_t = lr / (1 + lambda * lr * t)
};

struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;

    double decision(const SparseVec& x) const;
    int predict(const SparseVec& x) const { return decision(x) > 0.0 ? 1 : 0; }
};

// Full-batch subgradient descent on averaged hinge loss + L2 penalty.
// Deterministic; duplicating every row leaves the trajectory unchanged.
// Throws on single-class labels ("degenerate labels").
LinearModel train_svm(const std::vector<SparseVec>& rows, const std::vector<int>& labels,
                      std::size_t dim, const SvmConfig& cfg);

// ---- random forest ---------------------------------------------------------

struct RfConfig {
    int n_trees = 100;
    int max_depth = 0;  // 0 = unbounded
    int min_leaf = 1;
    std::uint64_t seed = 0;
};

struct TreeNode {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;     // go left when value < threshold
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int8_t label = 0;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    int predict(const SparseVec& x) const;
};

struct Forest {
    std::vector<DecisionTree> trees;
    // Majority vote; exact ties go to class 0.
    int predict(const SparseVec& x) const;
};

// CART with Gini impurity, sqrt(dim) feature candidates per split, and
// bootstrap rows drawn from the seeded generator. Same seed, same forest.
// Throws on single-class labels.
Forest train_rf(const std::vector<SparseVec>& rows, const std::vector<int>& labels,
                std::size_t dim, const RfConfig& cfg);

// ---- cross-validation --------------------------------------------------------

struct CvConfig {
    int folds = 10;
    std::uint64_t seed = 0;
    SvmConfig svm;
    RfConfig rf;
};

// Seeded shuffle, then contiguous slices; sizes differ by at most one.
std::vector<std::vector<std::size_t>> make_folds(std::size_t n, int k, std::uint64_t seed);

enum class Algo : int { Svm = 0, Rf = 1 };

struct CvReport {
    std::array<double, kCriteria> svm_accuracy{};
    std::array<double, kCriteria> rf_accuracy{};
    // [criterion][algo][fold]
    std::array<std::array<std::vector<double>, 2>, kCriteria> fold_accuracy{};
    // Fingerprint of the model trained for each fold (leakage checks):
    // it must not depend on the held-out fold's labels.
    std::array<std::array<std::vector<std::uint64_t>, 2>, kCriteria> fold_model_digest{};
    std::vector<std::vector<std::size_t>> folds;
};

// 10-fold CV over 7 criteria x {SVM, RF}. TF-IDF is refit on each
// training fold; the held-out fold never touches training. Requires at
// least `folds` labeled pages. Single-class training folds fall back to
// a constant predictor for that fold.
CvReport cross_validate(const std::vector<LabeledPage>& labeled,
                        const std::vector<std::string>& texts, const CvConfig& cfg);

// ---- model set & scoring ----------------------------------------------------

enum class Bucket : int { Low = 0, Medium = 1, High = 2 };

// low 0-2, medium 3-4, high 5-7; anything else is an error.
Bucket bucket(int score);
const char* bucket_name(Bucket b);

struct CredibilityScore {
    int score = 0;
    Bucket bucket = Bucket::Low;
    std::array<int, kCriteria> per_criterion{};
};

CredibilityScore score_from_predictions(const std::array<int, kCriteria>& per_criterion);

struct CredibilityModelSet {
    TfIdfModel tfidf;
    std::array<LinearModel, kCriteria> svm_models;
    std::array<Forest, kCriteria> rf_models;
    std::array<double, kCriteria> svm_cv_accuracy{};
    std::array<double, kCriteria> rf_cv_accuracy{};
    // Per criterion, the algorithm with the higher CV accuracy wins;
    // ties go to the SVM.
    std::array<Algo, kCriteria> selection{};
};

// CV for accuracies, selection per criterion, then final models fit on
// the full labeled set.
CredibilityModelSet train_model_set(const std::vector<LabeledPage>& labeled,
                                    const std::vector<std::string>& texts, const CvConfig& cfg);

CredibilityScore score_text(const std::string& text, const CredibilityModelSet& models);
CredibilityScore score_page(const WebPage& page, const CredibilityModelSet& models);

std::uint64_t model_digest(const LinearModel& m);
std::uint64_t model_digest(const Forest& f);

// Versioned JSON persistence of the full model set.
void save_model_set(const CredibilityModelSet& models, const std::filesystem::path& path);
CredibilityModelSet load_model_set(const std::filesystem::path& path);

}  // namespace commcred
