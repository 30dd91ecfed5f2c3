#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"

#include "cctree/eval.hpp"
#include "cctree/rng.hpp"

using namespace cctree;

namespace {

// Two gaussian-ish blobs a fixed distance apart, 20% positive.
std::pair<std::vector<std::vector<double>>, std::vector<bool>> blobs(std::size_t n,
                                                                     double separation,
                                                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> x;
  std::vector<bool> y;
  for (std::size_t i = 0; i < n; ++i) {
    bool pos = i % 5 == 0;
    double center = pos ? separation : 0.0;
    x.push_back({center + rand01(rng) - 0.5, center + rand01(rng) - 0.5});
    y.push_back(pos);
  }
  return {x, y};
}

}  // namespace

TEST_CASE("f1_score counts") {
  F1Result perfect = f1_score(5, 0, 0);
  CHECK(perfect.value == 1.0);
  CHECK(!perfect.degenerate);

  F1Result nothing = f1_score(0, 0, 0);
  CHECK(nothing.value == 0.0);
  CHECK(nothing.degenerate);

  F1Result misses = f1_score(0, 3, 2);
  CHECK(misses.value == 0.0);
  CHECK(!misses.degenerate);

  CHECK(f1_score(2, 1, 1).value == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("baseline_f1 lands exactly on the rate when guess matches base") {
  CHECK(baseline_f1(0.2, 0.2) == 0.2);
  CHECK(baseline_f1(0.35, 0.35) == 0.35);
  CHECK(baseline_f1(0.5, 0.25) == doctest::Approx(2 * 0.5 * 0.25 / 0.75));
}

TEST_CASE("stratified_folds partitions with near-proportional class counts") {
  std::vector<bool> labels(20, false);
  for (std::size_t i = 0; i < 6; ++i) labels[i] = true;

  auto folds = stratified_folds(labels, 5, 42);
  REQUIRE(folds.size() == 5);

  std::set<std::size_t> seen;
  for (const auto& [train, test] : folds) {
    CHECK(train.size() + test.size() == labels.size());
    std::set<std::size_t> train_set(train.begin(), train.end());
    for (std::size_t i : test) {
      CHECK(train_set.count(i) == 0);
      CHECK(seen.insert(i).second);  // each index tested exactly once
    }
    std::size_t pos = 0;
    for (std::size_t i : test)
      if (labels[i]) ++pos;
    CHECK(pos >= 1);
    CHECK(pos <= 2);  // 6 positives over 5 folds
  }
  CHECK(seen.size() == labels.size());

  CHECK(stratified_folds(labels, 5, 42) == folds);  // same seed, same split
  CHECK(stratified_folds(labels, 5, 43) != folds);

  CHECK_THROWS_AS(stratified_folds(labels, 1, 1), TooFewSamples);
  CHECK_THROWS_AS(stratified_folds(labels, 7, 1), TooFewSamples);  // only 6 positives
  CHECK_THROWS_AS(stratified_folds(std::vector<bool>(8, false), 2, 1), TooFewSamples);
}

TEST_CASE("upsample_indices balances classes with replacement") {
  std::vector<bool> labels = {true, true, true, false, false, false, false, false, false, false};
  std::vector<std::size_t> indices(10);
  for (std::size_t i = 0; i < 10; ++i) indices[i] = i;

  auto up = upsample_indices(indices, labels, 7);
  REQUIRE(up.size() == 14);
  CHECK(std::equal(indices.begin(), indices.end(), up.begin()));
  std::size_t pos = 0;
  for (std::size_t i : up)
    if (labels[i]) ++pos;
  CHECK(pos == 7);
  for (std::size_t j = 10; j < up.size(); ++j) CHECK(labels[up[j]]);

  CHECK(upsample_indices(indices, labels, 7) == up);

  std::vector<std::size_t> balanced = {0, 1, 3, 4};
  CHECK(upsample_indices(balanced, labels, 7) == balanced);
  std::vector<std::size_t> single_class = {3, 4, 5};
  CHECK(upsample_indices(single_class, labels, 7) == single_class);
}

TEST_CASE("classifiers separate an obvious one-dimensional split") {
  std::vector<std::vector<double>> x = {{-2}, {-1.5}, {-1}, {1}, {1.5}, {2}};
  std::vector<bool> y = {false, false, false, true, true, true};

  for (ClassifierKind kind : kAllClassifiers) {
    auto clf = train_classifier(kind, HyperParams{}, x, y);
    CHECK(!clf->summary().empty());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(clf->predict(x[i]) == y[i]);
    CHECK(clf->predict({-3.0}) == false);
    CHECK(clf->predict({3.0}) == true);
    CHECK_THROWS_AS(clf->predict(std::vector<double>{}), DimensionMismatch);
  }
}

TEST_CASE("decision trees need depth to express xor") {
  std::vector<std::vector<double>> x = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  std::vector<bool> y = {false, true, true, false};

  HyperParams shallow;
  shallow.max_depth = 1;
  auto stump = train_classifier(ClassifierKind::tree, shallow, x, y);
  std::size_t stump_correct = 0;
  for (std::size_t i = 0; i < 4; ++i)
    if (stump->predict(x[i]) == y[i]) ++stump_correct;
  CHECK(stump_correct < 4);

  HyperParams deep;
  deep.max_depth = 2;
  auto tree = train_classifier(ClassifierKind::tree, deep, x, y);
  for (std::size_t i = 0; i < 4; ++i) CHECK(tree->predict(x[i]) == y[i]);
}

TEST_CASE("knn with k=1 memorizes the training set") {
  auto [x, y] = blobs(30, 1.0, 3);
  HyperParams params;
  params.k = 1;
  auto clf = train_classifier(ClassifierKind::knn, params, x, y);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(clf->predict(x[i]) == y[i]);
}

TEST_CASE("the experiment scores well-separated features far above baseline") {
  auto [x, y] = blobs(60, 6.0, 11);
  EvalConfig config;
  config.folds = 3;
  config.seed = 11;

  EvalReport report = run_experiment_on_features({{ReprMode::metrics, x}}, y, config);
  CHECK(report.folds == 3);
  CHECK(report.seed == 11);
  CHECK(report.baseline_f1_percent == 20.0);
  REQUIRE(report.cells.size() == kAllClassifiers.size());
  for (const CellResult& cell : report.cells) {
    REQUIRE(cell.folds.size() == 3);
    CHECK(cell.f1_percent > 90.0);
    for (const FoldScore& s : cell.folds) CHECK(!s.chosen_params.empty());
  }
  double avg = report.mode_average_f1(ReprMode::metrics);
  double expected = 0;
  for (const CellResult& cell : report.cells) expected += cell.f1_percent;
  CHECK(avg == doctest::Approx(expected / 3.0));
}

TEST_CASE("grid ties resolve to the first candidate") {
  auto [x, y] = blobs(50, 10.0, 5);  // separable for every hyperparameter choice
  EvalConfig config;
  config.folds = 2;
  config.seed = 5;
  EvalReport report = run_experiment_on_features({{ReprMode::metrics, x}}, y, config);
  for (const CellResult& cell : report.cells) {
    const std::string expected = default_grid(cell.classifier).front().describe(cell.classifier);
    for (const FoldScore& s : cell.folds) CHECK(s.chosen_params == expected);
  }
}

TEST_CASE("experiments are reproducible bit for bit") {
  auto [x, y] = blobs(40, 2.0, 8);
  EvalConfig config;
  config.folds = 4;
  config.seed = 21;
  EvalReport a = run_experiment_on_features({{ReprMode::simple, x}}, y, config);
  EvalReport b = run_experiment_on_features({{ReprMode::simple, x}}, y, config);
  CHECK(report_to_json(a).dump() == report_to_json(b).dump());

  config.seed = 22;
  EvalReport c = run_experiment_on_features({{ReprMode::simple, x}}, y, config);
  CHECK(report_to_json(a).dump() != report_to_json(c).dump());
}

TEST_CASE("experiment input validation") {
  auto [x, y] = blobs(30, 2.0, 2);
  EvalConfig config;
  config.folds = 10;  // only 6 positives in 30 samples
  CHECK_THROWS_AS(run_experiment_on_features({{ReprMode::metrics, x}}, y, config),
                  TooFewSamples);

  config.folds = 1;
  CHECK_THROWS_AS(run_experiment_on_features({{ReprMode::metrics, x}}, y, config),
                  TooFewSamples);
}

TEST_CASE("report serialization carries the table structure") {
  auto [x, y] = blobs(40, 5.0, 13);
  EvalConfig config;
  config.folds = 2;
  config.seed = 13;
  EvalReport report =
      run_experiment_on_features({{ReprMode::metrics, x}, {ReprMode::change_tree, x}}, y, config);

  nlohmann::json doc = report_to_json(report);
  CHECK(doc["config"]["folds"] == 2);
  CHECK(doc["baseline"]["name"] == "Random Guesser");
  CHECK(doc["baseline"]["f1_percent"] == 20.0);
  REQUIRE(doc["results"].size() == 6);
  CHECK(doc["results"][0]["representation"] == "metrics");
  CHECK(doc["results"][0]["folds"].size() == 2);
  CHECK(doc["average_f1_percent"].contains("metrics"));
  CHECK(doc["average_f1_percent"].contains("change_tree"));

  std::string md = report_to_markdown(report);
  CHECK(md.find("| Representation |") == 0);
  CHECK(md.find("Metrics based") != std::string::npos);
  CHECK(md.find("Code Change Tree") != std::string::npos);
  CHECK(md.find("Random Guesser") != std::string::npos);
  CHECK(md.find("20.00") != std::string::npos);
}
