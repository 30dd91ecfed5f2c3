#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cctree/features.hpp"

namespace cctree {

enum class ClassifierKind { logistic, knn, tree };

inline constexpr std::array<ClassifierKind, 3> kAllClassifiers = {
    ClassifierKind::logistic, ClassifierKind::knn, ClassifierKind::tree};

std::string classifier_name(ClassifierKind kind);          // "logistic" etc.
std::string classifier_display_name(ClassifierKind kind);  // "Logistic Regression" etc.

// Union of the per-classifier hyperparameters; each kind reads its own.
struct HyperParams {
  double lr = 0.1;     // logistic: gradient step size
  double l2 = 1e-3;    // logistic: ridge penalty
  int iters = 200;     // logistic: full-batch steps
  int k = 5;           // knn
  int max_depth = 8;   // tree
  int min_leaf = 1;    // tree

  std::string describe(ClassifierKind kind) const;
};

std::vector<HyperParams> default_grid(ClassifierKind kind);

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class TooFewSamples : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct F1Result {
  double value = 0.0;
  bool degenerate = false;  // all three counts were zero
};

// 2PR/(P+R); 0 when there are no true positives but errors exist; 0 with the
// degenerate flag when tp=fp=fn=0.
F1Result f1_score(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn);

// Expected F1 of a guesser that predicts positive with probability
// `guess_rate` on a dataset with `positive_rate` positives: precision is the
// base rate, recall is the guess rate. Equal rates return the rate itself so
// the canonical 0.2/0.2 case lands on 0.2 exactly.
double baseline_f1(double positive_rate, double guess_rate);

// Per-class shuffle dealt round-robin: each fold's class counts are within
// one sample of proportional. Returns (train, test) index pairs. Throws
// TooFewSamples when k < 2, a class is missing, or k exceeds the minority
// class size.
std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>
stratified_folds(const std::vector<bool>& labels, std::size_t k, std::uint64_t seed);

// Appends minority samples drawn with replacement until the classes balance
// exactly. Input order is preserved as a prefix.
std::vector<std::size_t> upsample_indices(const std::vector<std::size_t>& indices,
                                          const std::vector<bool>& labels,
                                          std::uint64_t seed);

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual bool predict(const std::vector<double>& x) const = 0;
  virtual std::string summary() const = 0;
};

// Trains one model. Rows of x must share one width; predict inputs must
// match it (DimensionMismatch otherwise).
std::unique_ptr<Classifier> train_classifier(ClassifierKind kind, const HyperParams& params,
                                             const std::vector<std::vector<double>>& x,
                                             const std::vector<bool>& y);

struct EvalConfig {
  std::size_t folds = 10;
  bool upsample_to_balance = true;
  std::uint64_t seed = 1;
  double positive_rate_for_baseline = 0.2;
  // Empty grids fall back to default_grid(kind).
  std::map<ClassifierKind, std::vector<HyperParams>> grid;
};

struct FoldScore {
  double precision = 0.0;  // fractions; the report renders percents
  double recall = 0.0;
  double f1 = 0.0;
  std::string chosen_params;
};

struct CellResult {
  ReprMode mode = ReprMode::metrics;
  ClassifierKind classifier = ClassifierKind::logistic;
  std::vector<FoldScore> folds;
  double precision_percent = 0.0;
  double recall_percent = 0.0;
  double f1_percent = 0.0;
};

struct EvalReport {
  std::size_t folds = 0;
  std::uint64_t seed = 0;
  double positive_rate_for_baseline = 0.2;
  double baseline_f1_percent = 0.0;
  std::vector<ReprMode> modes;
  std::vector<CellResult> cells;  // mode-major, classifier order fixed

  double mode_average_f1(ReprMode mode) const;
};

// The full protocol: stratified k-fold splits shared across representations
// and classifiers; per fold, grid selection on an inner stratified 80/20
// split (only its training portion is upsampled), then the chosen
// hyperparameters retrain on the upsampled full training fold and score the
// untouched test fold.
EvalReport run_experiment(const std::vector<ChangeRecord>& records,
                          const std::vector<ReprMode>& modes, const EvalConfig& config,
                          const EmbeddingModel* model, RankMode rank_mode);

// Same protocol over precomputed per-mode feature matrices.
EvalReport run_experiment_on_features(
    const std::vector<std::pair<ReprMode, std::vector<std::vector<double>>>>& features,
    const std::vector<bool>& labels, const EvalConfig& config);

nlohmann::json report_to_json(const EvalReport& report);
std::string report_to_markdown(const EvalReport& report);

}  // namespace cctree
