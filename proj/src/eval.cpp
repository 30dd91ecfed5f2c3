#include "cctree/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "cctree/hash.hpp"
#include "cctree/rng.hpp"

namespace cctree {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::string format_2dp(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string format_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void check_matrix(const std::vector<std::vector<double>>& x, const std::vector<bool>& y) {
  if (x.empty() || x.size() != y.size())
    throw DimensionMismatch("training set is empty or labels do not match rows");
  std::size_t width = x.front().size();
  for (const auto& row : x)
    if (row.size() != width) throw DimensionMismatch("training rows have unequal widths");
}

// Column standardization shared by the logistic and knn models; constant
// columns keep unit scale.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  void fit(const std::vector<std::vector<double>>& x) {
    std::size_t n = x.size(), d = x.front().size();
    mean.assign(d, 0.0);
    scale.assign(d, 1.0);
    for (const auto& row : x)
      for (std::size_t j = 0; j < d; ++j) mean[j] += row[j];
    for (std::size_t j = 0; j < d; ++j) mean[j] /= static_cast<double>(n);
    std::vector<double> var(d, 0.0);
    for (const auto& row : x)
      for (std::size_t j = 0; j < d; ++j) {
        double c = row[j] - mean[j];
        var[j] += c * c;
      }
    for (std::size_t j = 0; j < d; ++j) {
      double s = std::sqrt(var[j] / static_cast<double>(n));
      scale[j] = s > 1e-12 ? s : 1.0;
    }
  }

  std::vector<double> apply(const std::vector<double>& row) const {
    if (row.size() != mean.size())
      throw DimensionMismatch("predict input width does not match the training width");
    std::vector<double> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) out[j] = (row[j] - mean[j]) / scale[j];
    return out;
  }
};

class LogisticClassifier final : public Classifier {
 public:
  LogisticClassifier(const HyperParams& params, const std::vector<std::vector<double>>& x,
                     const std::vector<bool>& y)
      : params_(params) {
    std_.fit(x);
    std::size_t n = x.size(), d = x.front().size();
    std::vector<std::vector<double>> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = std_.apply(x[i]);

    weights_.assign(d, 0.0);
    bias_ = 0.0;
    std::vector<double> grad(d);
    for (int it = 0; it < params.iters; ++it) {
      std::fill(grad.begin(), grad.end(), 0.0);
      double grad_b = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double f = bias_;
        for (std::size_t j = 0; j < d; ++j) f += weights_[j] * z[i][j];
        double err = sigmoid(f) - (y[i] ? 1.0 : 0.0);
        for (std::size_t j = 0; j < d; ++j) grad[j] += err * z[i][j];
        grad_b += err;
      }
      for (std::size_t j = 0; j < d; ++j) {
        grad[j] = grad[j] / static_cast<double>(n) + params.l2 * weights_[j];
        weights_[j] -= params.lr * grad[j];
      }
      bias_ -= params.lr * (grad_b / static_cast<double>(n));
    }
  }

  bool predict(const std::vector<double>& x) const override {
    std::vector<double> z = std_.apply(x);
    double f = bias_;
    for (std::size_t j = 0; j < z.size(); ++j) f += weights_[j] * z[j];
    return f >= 0.0;
  }

  std::string summary() const override {
    return "logistic lr=" + format_param(params_.lr) + " l2=" + format_param(params_.l2) +
           " iters=" + std::to_string(params_.iters);
  }

 private:
  HyperParams params_;
  Standardizer std_;
  std::vector<double> weights_;
  double bias_ = 0.0;
};

class KnnClassifier final : public Classifier {
 public:
  KnnClassifier(const HyperParams& params, const std::vector<std::vector<double>>& x,
                const std::vector<bool>& y)
      : k_(params.k), labels_(y) {
    std_.fit(x);
    rows_.reserve(x.size());
    for (const auto& row : x) rows_.push_back(std_.apply(row));
    if (k_ < 1) k_ = 1;
    if (static_cast<std::size_t>(k_) > rows_.size()) k_ = static_cast<int>(rows_.size());
  }

  bool predict(const std::vector<double>& x) const override {
    std::vector<double> z = std_.apply(x);
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      double d2 = 0.0;
      for (std::size_t j = 0; j < z.size(); ++j) {
        double c = z[j] - rows_[i][j];
        d2 += c * c;
      }
      dist.emplace_back(d2, i);
    }
    std::sort(dist.begin(), dist.end());
    int votes = 0;
    for (int i = 0; i < k_; ++i)
      if (labels_[dist[static_cast<std::size_t>(i)].second]) ++votes;
    return 2 * votes > k_;
  }

  std::string summary() const override { return "knn k=" + std::to_string(k_); }

 private:
  int k_;
  Standardizer std_;
  std::vector<std::vector<double>> rows_;
  std::vector<bool> labels_;
};

class TreeClassifier final : public Classifier {
 public:
  TreeClassifier(const HyperParams& params, const std::vector<std::vector<double>>& x,
                 const std::vector<bool>& y)
      : params_(params) {
    std::vector<std::size_t> all(x.size());
    std::iota(all.begin(), all.end(), 0);
    root_ = build(x, y, all, 0);
  }

  bool predict(const std::vector<double>& x) const override {
    std::size_t at = root_;
    while (!nodes_[at].leaf) {
      if (nodes_[at].feature >= x.size())
        throw DimensionMismatch("predict input width does not match the training width");
      at = x[nodes_[at].feature] <= nodes_[at].threshold ? nodes_[at].left : nodes_[at].right;
    }
    return nodes_[at].label;
  }

  std::string summary() const override {
    return "tree depth=" + std::to_string(params_.max_depth) +
           " min_leaf=" + std::to_string(params_.min_leaf) +
           " nodes=" + std::to_string(nodes_.size());
  }

 private:
  struct Node {
    bool leaf = true;
    bool label = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
  };

  static double gini(std::size_t pos, std::size_t total) {
    if (total == 0) return 0.0;
    double p = static_cast<double>(pos) / static_cast<double>(total);
    return 1.0 - p * p - (1.0 - p) * (1.0 - p);
  }

  std::size_t make_leaf(std::size_t pos, std::size_t total) {
    Node node;
    node.leaf = true;
    node.label = 2 * pos > total;  // tie predicts negative
    nodes_.push_back(node);
    return nodes_.size() - 1;
  }

  std::size_t build(const std::vector<std::vector<double>>& x, const std::vector<bool>& y,
                    const std::vector<std::size_t>& idx, int depth) {
    std::size_t pos = 0;
    for (std::size_t i : idx)
      if (y[i]) ++pos;
    bool pure = pos == 0 || pos == idx.size();
    if (pure || depth >= params_.max_depth ||
        idx.size() < 2 * static_cast<std::size_t>(params_.min_leaf))
      return make_leaf(pos, idx.size());

    const std::size_t d = x[idx.front()].size();
    double best_impurity = std::numeric_limits<double>::infinity();
    std::size_t best_feature = 0;
    double best_threshold = 0.0;

    std::vector<std::size_t> order(idx);
    for (std::size_t j = 0; j < d; ++j) {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (x[a][j] != x[b][j]) return x[a][j] < x[b][j];
        return a < b;
      });
      std::size_t left_pos = 0;
      for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        if (y[order[i]]) ++left_pos;
        std::size_t left_n = i + 1;
        if (x[order[i]][j] == x[order[i + 1]][j]) continue;
        std::size_t right_n = order.size() - left_n;
        if (left_n < static_cast<std::size_t>(params_.min_leaf) ||
            right_n < static_cast<std::size_t>(params_.min_leaf))
          continue;
        double impurity =
            (static_cast<double>(left_n) * gini(left_pos, left_n) +
             static_cast<double>(right_n) * gini(pos - left_pos, right_n)) /
            static_cast<double>(order.size());
        if (impurity < best_impurity) {
          best_impurity = impurity;
          best_feature = j;
          best_threshold = (x[order[i]][j] + x[order[i + 1]][j]) / 2.0;
        }
      }
    }
    if (!std::isfinite(best_impurity)) return make_leaf(pos, idx.size());

    std::vector<std::size_t> left_idx, right_idx;
    for (std::size_t i : idx)
      (x[i][best_feature] <= best_threshold ? left_idx : right_idx).push_back(i);
    std::size_t left = build(x, y, left_idx, depth + 1);
    std::size_t right = build(x, y, right_idx, depth + 1);

    Node node;
    node.leaf = false;
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = left;
    node.right = right;
    nodes_.push_back(node);
    return nodes_.size() - 1;
  }

  HyperParams params_;
  std::vector<Node> nodes_;
  std::size_t root_ = 0;
};

struct Counts {
  std::uint64_t tp = 0, fp = 0, fn = 0;
};

FoldScore score_from_counts(const Counts& c) {
  FoldScore s;
  s.precision = (c.tp + c.fp) ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
  s.recall = (c.tp + c.fn) ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
  s.f1 = f1_score(c.tp, c.fp, c.fn).value;
  return s;
}

Counts evaluate_on(const Classifier& clf, const std::vector<std::vector<double>>& x,
                   const std::vector<bool>& y, const std::vector<std::size_t>& idx) {
  Counts c;
  for (std::size_t i : idx) {
    bool predicted = clf.predict(x[i]);
    if (predicted && y[i]) ++c.tp;
    if (predicted && !y[i]) ++c.fp;
    if (!predicted && y[i]) ++c.fn;
  }
  return c;
}

std::vector<std::vector<double>> gather(const std::vector<std::vector<double>>& x,
                                        const std::vector<std::size_t>& idx) {
  std::vector<std::vector<double>> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(x[i]);
  return out;
}

std::vector<bool> gather_labels(const std::vector<bool>& y, const std::vector<std::size_t>& idx) {
  std::vector<bool> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(y[i]);
  return out;
}

// Stratified 80/20 split of a training fold for hyperparameter selection.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> inner_split(
    const std::vector<std::size_t>& train, const std::vector<bool>& labels,
    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> pos, neg;
  for (std::size_t i : train) (labels[i] ? pos : neg).push_back(i);
  shuffle_vec(pos, rng);
  shuffle_vec(neg, rng);

  auto cut = [](std::size_t n) {
    std::size_t t = (n * 4) / 5;
    if (t == 0 && n > 0) t = 1;
    if (t == n && n > 1) t = n - 1;
    return t;
  };
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> out;
  std::size_t pc = cut(pos.size()), nc = cut(neg.size());
  out.first.insert(out.first.end(), pos.begin(), pos.begin() + static_cast<long>(pc));
  out.first.insert(out.first.end(), neg.begin(), neg.begin() + static_cast<long>(nc));
  out.second.insert(out.second.end(), pos.begin() + static_cast<long>(pc), pos.end());
  out.second.insert(out.second.end(), neg.begin() + static_cast<long>(nc), neg.end());
  return out;
}

std::string mode_display_name(ReprMode mode) {
  switch (mode) {
    case ReprMode::metrics: return "Metrics based";
    case ReprMode::simple: return "Simple code change";
    case ReprMode::change_tree: return "Code Change Tree";
  }
  return "?";
}

}  // namespace

std::string classifier_name(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::logistic: return "logistic";
    case ClassifierKind::knn: return "knn";
    case ClassifierKind::tree: return "tree";
  }
  return "?";
}

std::string classifier_display_name(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::logistic: return "Logistic Regression";
    case ClassifierKind::knn: return "K-Nearest Neighbors";
    case ClassifierKind::tree: return "Decision Tree";
  }
  return "?";
}

std::string HyperParams::describe(ClassifierKind kind) const {
  switch (kind) {
    case ClassifierKind::logistic:
      return "lr=" + format_param(lr) + " l2=" + format_param(l2);
    case ClassifierKind::knn:
      return "k=" + std::to_string(k);
    case ClassifierKind::tree:
      return "depth=" + std::to_string(max_depth) + " min_leaf=" + std::to_string(min_leaf);
  }
  return "?";
}

std::vector<HyperParams> default_grid(ClassifierKind kind) {
  std::vector<HyperParams> grid;
  switch (kind) {
    case ClassifierKind::logistic:
      for (double lr : {0.01, 0.1, 0.5})
        for (double l2 : {1e-4, 1e-3, 1e-2}) {
          HyperParams p;
          p.lr = lr;
          p.l2 = l2;
          grid.push_back(p);
        }
      break;
    case ClassifierKind::knn:
      for (int k : {1, 3, 5, 7, 11}) {
        HyperParams p;
        p.k = k;
        grid.push_back(p);
      }
      break;
    case ClassifierKind::tree:
      for (int depth : {3, 5, 8, 12})
        for (int leaf : {1, 5, 10}) {
          HyperParams p;
          p.max_depth = depth;
          p.min_leaf = leaf;
          grid.push_back(p);
        }
      break;
  }
  return grid;
}

F1Result f1_score(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) {
  if (tp == 0 && fp == 0 && fn == 0) return {0.0, true};
  if (tp == 0) return {0.0, false};
  double p = static_cast<double>(tp) / static_cast<double>(tp + fp);
  double r = static_cast<double>(tp) / static_cast<double>(tp + fn);
  return {2.0 * p * r / (p + r), false};
}

double baseline_f1(double positive_rate, double guess_rate) {
  if (positive_rate == guess_rate) return positive_rate;
  if (positive_rate + guess_rate == 0.0) return 0.0;
  return 2.0 * positive_rate * guess_rate / (positive_rate + guess_rate);
}

std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>
stratified_folds(const std::vector<bool>& labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw TooFewSamples("stratified_folds: need at least 2 folds");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] ? pos : neg).push_back(i);
  std::size_t minority = std::min(pos.size(), neg.size());
  if (minority < k)
    throw TooFewSamples("stratified_folds: minority class has " + std::to_string(minority) +
                        " samples, fewer than " + std::to_string(k) + " folds");

  std::mt19937_64 rng(seed);
  shuffle_vec(pos, rng);
  shuffle_vec(neg, rng);

  std::vector<std::vector<std::size_t>> test_folds(k);
  for (std::size_t i = 0; i < pos.size(); ++i) test_folds[i % k].push_back(pos[i]);
  for (std::size_t i = 0; i < neg.size(); ++i) test_folds[i % k].push_back(neg[i]);

  std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> out(k);
  for (std::size_t f = 0; f < k; ++f) {
    std::sort(test_folds[f].begin(), test_folds[f].end());
    out[f].second = test_folds[f];
    for (std::size_t g = 0; g < k; ++g)
      if (g != f)
        out[f].first.insert(out[f].first.end(), test_folds[g].begin(), test_folds[g].end());
    std::sort(out[f].first.begin(), out[f].first.end());
  }
  return out;
}

std::vector<std::size_t> upsample_indices(const std::vector<std::size_t>& indices,
                                          const std::vector<bool>& labels,
                                          std::uint64_t seed) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t i : indices) (labels[i] ? pos : neg).push_back(i);
  std::vector<std::size_t> out = indices;
  if (pos.empty() || neg.empty() || pos.size() == neg.size()) return out;

  const std::vector<std::size_t>& minority = pos.size() < neg.size() ? pos : neg;
  std::size_t deficit = (pos.size() < neg.size() ? neg.size() : pos.size()) - minority.size();
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < deficit; ++i) out.push_back(pick(minority, rng));
  return out;
}

std::unique_ptr<Classifier> train_classifier(ClassifierKind kind, const HyperParams& params,
                                             const std::vector<std::vector<double>>& x,
                                             const std::vector<bool>& y) {
  check_matrix(x, y);
  switch (kind) {
    case ClassifierKind::logistic:
      return std::make_unique<LogisticClassifier>(params, x, y);
    case ClassifierKind::knn:
      return std::make_unique<KnnClassifier>(params, x, y);
    case ClassifierKind::tree:
      return std::make_unique<TreeClassifier>(params, x, y);
  }
  throw std::invalid_argument("unknown classifier kind");
}

double EvalReport::mode_average_f1(ReprMode mode) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const CellResult& cell : cells)
    if (cell.mode == mode) {
      sum += cell.f1_percent;
      ++n;
    }
  return n ? sum / static_cast<double>(n) : 0.0;
}

EvalReport run_experiment_on_features(
    const std::vector<std::pair<ReprMode, std::vector<std::vector<double>>>>& features,
    const std::vector<bool>& labels, const EvalConfig& config) {
  if (config.folds < 2) throw TooFewSamples("run_experiment: folds must be at least 2");

  EvalReport report;
  report.folds = config.folds;
  report.seed = config.seed;
  report.positive_rate_for_baseline = config.positive_rate_for_baseline;
  report.baseline_f1_percent =
      baseline_f1(config.positive_rate_for_baseline, config.positive_rate_for_baseline) * 100.0;

  auto splits = stratified_folds(labels, config.folds, derive_seed(config.seed, "folds"));

  for (const auto& [mode, x] : features) {
    report.modes.push_back(mode);
    for (ClassifierKind kind : kAllClassifiers) {
      const std::vector<HyperParams>* grid = nullptr;
      auto grid_it = config.grid.find(kind);
      std::vector<HyperParams> fallback;
      if (grid_it != config.grid.end() && !grid_it->second.empty()) {
        grid = &grid_it->second;
      } else {
        fallback = default_grid(kind);
        grid = &fallback;
      }

      CellResult cell;
      cell.mode = mode;
      cell.classifier = kind;

      for (std::size_t f = 0; f < splits.size(); ++f) {
        const auto& [train_idx, test_idx] = splits[f];

        auto [inner_train, inner_val] =
            inner_split(train_idx, labels, derive_seed(config.seed, "inner", f));
        std::vector<std::size_t> inner_train_up =
            config.upsample_to_balance
                ? upsample_indices(inner_train, labels,
                                   derive_seed(config.seed, "upsample-inner", f))
                : inner_train;

        const HyperParams* best = &grid->front();
        double best_f1 = -1.0;
        bool val_usable = !inner_val.empty() && !inner_train_up.empty();
        if (val_usable) {
          auto inner_x = gather(x, inner_train_up);
          auto inner_y = gather_labels(labels, inner_train_up);
          for (const HyperParams& candidate : *grid) {
            auto clf = train_classifier(kind, candidate, inner_x, inner_y);
            Counts c = evaluate_on(*clf, x, labels, inner_val);
            double v = f1_score(c.tp, c.fp, c.fn).value;
            if (v > best_f1) {
              best_f1 = v;
              best = &candidate;
            }
          }
        }

        std::vector<std::size_t> train_up =
            config.upsample_to_balance
                ? upsample_indices(train_idx, labels, derive_seed(config.seed, "upsample", f))
                : train_idx;
        auto final_clf =
            train_classifier(kind, *best, gather(x, train_up), gather_labels(labels, train_up));
        Counts c = evaluate_on(*final_clf, x, labels, test_idx);
        FoldScore score = score_from_counts(c);
        score.chosen_params = best->describe(kind);
        cell.folds.push_back(std::move(score));
      }

      double p = 0, r = 0, f1 = 0;
      for (const FoldScore& s : cell.folds) {
        p += s.precision;
        r += s.recall;
        f1 += s.f1;
      }
      double n = static_cast<double>(cell.folds.size());
      cell.precision_percent = 100.0 * p / n;
      cell.recall_percent = 100.0 * r / n;
      cell.f1_percent = 100.0 * f1 / n;
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

EvalReport run_experiment(const std::vector<ChangeRecord>& records,
                          const std::vector<ReprMode>& modes, const EvalConfig& config,
                          const EmbeddingModel* model, RankMode rank_mode) {
  std::vector<bool> labels;
  labels.reserve(records.size());
  for (const ChangeRecord& rec : records) labels.push_back(rec.label);

  std::vector<std::pair<ReprMode, std::vector<std::vector<double>>>> features;
  features.reserve(modes.size());
  for (ReprMode mode : modes) {
    std::vector<std::vector<double>> x;
    x.reserve(records.size());
    for (const ChangeRecord& rec : records)
      x.push_back(represent(rec, mode, model, rank_mode).values);
    features.emplace_back(mode, std::move(x));
  }
  return run_experiment_on_features(features, labels, config);
}

nlohmann::json report_to_json(const EvalReport& report) {
  nlohmann::json doc;
  doc["config"] = {{"folds", report.folds},
                   {"seed", report.seed},
                   {"positive_rate_for_baseline", report.positive_rate_for_baseline}};
  doc["baseline"] = {{"name", "Random Guesser"},
                     {"f1_percent", report.baseline_f1_percent}};

  nlohmann::json cells = nlohmann::json::array();
  for (const CellResult& cell : report.cells) {
    nlohmann::json folds = nlohmann::json::array();
    for (std::size_t f = 0; f < cell.folds.size(); ++f) {
      const FoldScore& s = cell.folds[f];
      folds.push_back({{"fold", f},
                       {"precision", s.precision},
                       {"recall", s.recall},
                       {"f1", s.f1},
                       {"chosen_params", s.chosen_params}});
    }
    cells.push_back({{"representation", repr_mode_name(cell.mode)},
                     {"classifier", classifier_name(cell.classifier)},
                     {"precision_percent", cell.precision_percent},
                     {"recall_percent", cell.recall_percent},
                     {"f1_percent", cell.f1_percent},
                     {"folds", std::move(folds)}});
  }
  doc["results"] = std::move(cells);

  nlohmann::json averages;
  for (ReprMode mode : report.modes)
    averages[repr_mode_name(mode)] = report.mode_average_f1(mode);
  doc["average_f1_percent"] = std::move(averages);
  return doc;
}

std::string report_to_markdown(const EvalReport& report) {
  std::string out = "| Representation |";
  for (ClassifierKind kind : kAllClassifiers) out += " " + classifier_display_name(kind) + " |";
  out += " Average |\n|---|";
  for (std::size_t i = 0; i < kAllClassifiers.size() + 1; ++i) out += "---|";
  out += "\n";

  for (ReprMode mode : report.modes) {
    out += "| " + mode_display_name(mode) + " |";
    for (ClassifierKind kind : kAllClassifiers) {
      for (const CellResult& cell : report.cells)
        if (cell.mode == mode && cell.classifier == kind) {
          out += " " + format_2dp(cell.f1_percent) + " |";
          break;
        }
    }
    out += " " + format_2dp(report.mode_average_f1(mode)) + " |\n";
  }

  out += "| Random Guesser |";
  for (std::size_t i = 0; i < kAllClassifiers.size() + 1; ++i)
    out += " " + format_2dp(report.baseline_f1_percent) + " |";
  out += "\n";
  return out;
}

}  // namespace cctree
