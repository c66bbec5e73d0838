#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "helpers/synthetic.hpp"
#include "moelr/compare.hpp"
#include "moelr/evaluation.hpp"
#include "moelr/reference.hpp"

using namespace moelr;

namespace {

// O(n^2) pair counting with half credit for ties.
double brute_force_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  double concordant = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j]) concordant += 1.0;
      else if (scores[i] == scores[j]) concordant += 0.5;
    }
  }
  return concordant / static_cast<double>(pairs);
}

Event sig_event(const std::string& activity, std::int64_t ts) {
  return Event{activity, ts, {}};
}

// Log whose label is readable from every event's activity.
EventLog separable_log(std::size_t cases) {
  EventLog log;
  for (std::size_t c = 0; c < cases; ++c) {
    const int label = c % 2 == 0 ? 1 : 0;
    Trace t;
    t.case_id = "t" + std::to_string(c);
    t.label = label;
    for (int e = 0; e < 3; ++e)
      t.events.push_back(
          sig_event(label ? "good" : "bad", 1000 + static_cast<std::int64_t>(c) * 100 + e));
    log.traces.push_back(std::move(t));
  }
  return log;
}

}  // namespace

TEST_CASE("auc hand example: pos {0.9, 0.8} vs neg {0.7, 0.85}") {
  const std::vector<double> scores = {0.9, 0.8, 0.7, 0.85};
  const std::vector<int> labels = {1, 1, 0, 0};
  CHECK(auc(scores, labels) == Catch::Approx(0.75).margin(1e-15));
  CHECK(auc(scores, labels) == brute_force_auc(scores, labels));
}

TEST_CASE("perfect separation scores 1, constant scores 0.5") {
  CHECK(auc({0.9, 0.8, 0.2, 0.1}, {1, 1, 0, 0}) == 1.0);
  CHECK(auc({0.5, 0.5, 0.5, 0.5}, {1, 0, 1, 0}) == 0.5);
  CHECK(auc({0.1, 0.2, 0.8, 0.9}, {1, 1, 0, 0}) == 0.0);
}

TEST_CASE("single-class label sets are an error") {
  CHECK_THROWS_AS(auc({0.5, 0.6}, {1, 1}), UndefinedAucError);
  CHECK_THROWS_AS(auc({0.5, 0.6}, {0, 0}), UndefinedAucError);
  CHECK_THROWS_AS(auc({}, {}), UndefinedAucError);
  CHECK_THROWS_AS(auc({0.5}, {1, 0}), ShapeError);
  CHECK_THROWS_AS(auc({0.5, 0.5}, {1, 2}), LabelError);
}

TEST_CASE("rank AUC equals brute force on 200 random sets with heavy ties") {
  std::mt19937_64 rng(911);
  for (int iter = 0; iter < 200; ++iter) {
    const std::size_t n = 2 + rng() % 60;
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    bool pos = false, neg = false;
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = static_cast<double>(rng() % 5) / 4.0;  // grid forces ties
      labels[i] = static_cast<int>(rng() % 2);
      (labels[i] ? pos : neg) = true;
    }
    if (!pos || !neg) {
      labels[0] = 1;
      labels[n - 1] = 0;
      if (n == 2) labels[1] = 0;
    }
    CHECK(std::abs(auc(scores, labels) - brute_force_auc(scores, labels)) < 1e-12);
  }
}

TEST_CASE("auc is invariant under strictly increasing transforms") {
  std::mt19937_64 rng(913);
  std::vector<double> scores(40);
  std::vector<int> labels(40);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = static_cast<double>(rng() % 10) / 10.0;
    labels[i] = static_cast<int>(rng() % 2);
  }
  labels[0] = 1;
  labels[1] = 0;
  const double base = auc(scores, labels);
  auto transformed = scores;
  for (auto& s : transformed) s = std::exp(2.0 * s + 1.0);
  CHECK(auc(transformed, labels) == base);
  for (auto& s : transformed) s = s * s * s + s;  // still monotone on positives
  CHECK(auc(transformed, labels) == base);
}

TEST_CASE("evaluate scores prefixes of at least two events with hard routing") {
  const EventLog log = separable_log(8);
  // Dictionary fit on the same log's prefixes; no temporal features for brevity.
  FitOptions opts;
  opts.temporal = TemporalFeatureOptions{false, false, false, false, false};
  opts.standardize = false;
  const auto prefixes = extract_prefixes(log, 2);
  const auto dict = fit_feature_dictionary(prefixes, opts);

  MoeModel model = init_random(dict.d(), 2, 1);
  for (auto& r : model.gate_weights) r.assign(dict.d(), 0.0);
  for (auto& r : model.expert_weights) r.assign(dict.d(), 0.0);
  model.expert_weights[0][*dict.activity_feature("good")] = 5.0;
  model.expert_weights[0][*dict.activity_feature("bad")] = -5.0;
  model.feature_names = dict.feature_names();

  const auto report = evaluate(model, log, dict);
  CHECK(report.auc == 1.0);
  CHECK(report.n_instances == 16);  // 8 cases, prefixes of length 2 and 3
  CHECK(report.complexity == complexity(model));
  CHECK(report.per_expert_instance_counts[0] + report.per_expert_instance_counts[1] ==
        report.n_instances);
  CHECK(report.per_expert_instance_counts[0] == 16);  // uniform gate ties to expert 0
  CHECK(report.per_expert_active_features[0] ==
        std::vector<std::string>{"Activity_bad", "Activity_good"});
  CHECK(report.per_expert_active_features[1].empty());

  SECTION("an all-zero model scores 0.5 everywhere") {
    MoeModel zero = model;
    zero.expert_weights[0].assign(dict.d(), 0.0);
    const auto flat = evaluate(zero, log, dict);
    CHECK(flat.auc == 0.5);
  }
  SECTION("dimension mismatch is a shape error") {
    const MoeModel small = init_random(dict.d() + 1, 2, 1);
    CHECK_THROWS_AS(evaluate(small, log, dict), ShapeError);
  }
  SECTION("single-class test logs are rejected") {
    EventLog one_class;
    for (std::size_t c = 0; c < 3; ++c) {
      Trace t;
      t.case_id = "x" + std::to_string(c);
      t.label = 1;
      t.events = {sig_event("good", 1), sig_event("good", 2)};
      one_class.traces.push_back(std::move(t));
    }
    CHECK_THROWS_AS(evaluate(model, one_class, dict), UndefinedAucError);
  }
}

TEST_CASE("published FOX complexities span 18 to 15309") {
  CHECK(reference::kFoxModels.size() == 7);
  CHECK(reference::min_fox_complexity() == 18);
  CHECK(reference::max_fox_complexity() == 15309);
  CHECK(reference::min_fox_complexity_above(2) == 324);
  CHECK(reference::kAucTable.size() == 7);
}

TEST_CASE("comparison arms differ only in m and kTop") {
  testutil::RegimeLogOptions opts;
  opts.cases = 160;
  opts.seed = 5;
  const auto regime = testutil::make_regime_log(opts);
  const auto split = temporal_split(regime.log, SplitSpec{0.64, 0.16, 0.20});
  FitOptions fit;
  const auto train_prefixes =
      derive_temporal_features(extract_prefixes(split.train, 2), fit.temporal);
  const auto dict = fit_feature_dictionary(train_prefixes, fit);
  const auto train = encode_prefixes(train_prefixes, dict);
  const auto valid = encode_log(split.valid, dict, 2);

  TrainConfig cfg;
  cfg.m = 2;
  cfg.ktop = 4;
  cfg.lambda_r = 0.01;
  cfg.epochs_e2e = 8;
  cfg.epochs_gate = 4;
  cfg.seed = 11;
  const auto cmp = compare_with_baseline(train, valid, split.test, dict, cfg);
  CHECK(cmp.moe.m == 2);
  CHECK(cmp.moe.ktop == KTop{4});
  CHECK(cmp.baseline.m == 1);
  CHECK(cmp.baseline.ktop == kTopAll);
  CHECK(cmp.baseline.method == "1-LR");
  CHECK(cmp.relative_auc_improvement ==
        Catch::Approx((cmp.moe.report.auc - cmp.baseline.report.auc) /
                      cmp.baseline.report.auc));
  // Identical protocol on both arms.
  CHECK(cmp.moe.report.n_instances == cmp.baseline.report.n_instances);

  std::ostringstream csv;
  write_comparison_csv(csv, cmp, "regime_toy");
  CHECK(csv.str().find("1-LR") != std::string::npos);
  CHECK(csv.str().find("regime_toy") != std::string::npos);
}
