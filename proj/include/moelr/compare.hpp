#pragma once

#include <ostream>
#include <string>
#include <utility>

#include <json.hpp>

#include "moelr/csv.hpp"
#include "moelr/evaluation.hpp"
#include "moelr/training.hpp"

namespace moelr {

struct ComparisonArm {
  std::string method;
  std::size_t m = 0;
  KTop ktop;
  EvalReport report;
};

// Two-arm protocol: the configured mixture versus the single-regressor
// baseline (m = 1, kTop = ALL) on identical splits; the arms differ only in
// (m, kTop).
struct Comparison {
  ComparisonArm moe;
  ComparisonArm baseline;
  double relative_auc_improvement = 0.0;  // (moe - baseline) / baseline

  nlohmann::json to_json() const {
    auto arm = [](const ComparisonArm& a) {
      nlohmann::json doc = a.report.to_json();
      doc["method"] = a.method;
      doc["m"] = a.m;
      doc["ktop"] = ktop_to_string(a.ktop);
      return doc;
    };
    return {{"moe", arm(moe)},
            {"baseline", arm(baseline)},
            {"relative_auc_improvement", relative_auc_improvement}};
  }
};

inline Comparison compare_with_baseline(const Dataset& train, const Dataset& valid,
                                        const EventLog& test_log, const FeatureDictionary& dict,
                                        const TrainConfig& cfg, int min_prefix_len = 2) {
  TrainConfig baseline_cfg = cfg;
  baseline_cfg.m = 1;
  baseline_cfg.ktop = kTopAll;

  const auto names = dict.feature_names();
  Comparison out;
  const TrainResult moe = train_full(train, valid, cfg, names);
  out.moe = {"moe", cfg.m, cfg.ktop, evaluate(moe.model, test_log, dict, min_prefix_len)};
  const TrainResult lr = train_full(train, valid, baseline_cfg, names);
  out.baseline = {"1-LR", 1, kTopAll, evaluate(lr.model, test_log, dict, min_prefix_len)};
  out.relative_auc_improvement =
      (out.moe.report.auc - out.baseline.report.auc) / out.baseline.report.auc;
  return out;
}

// CSV layout: dataset x kTop x method rows.
inline void write_comparison_csv(std::ostream& os, const Comparison& cmp,
                                 const std::string& dataset_name) {
  os << "dataset,method,m,ktop,auc,complexity,n_instances,relative_auc_improvement\n";
  auto row = [&](const ComparisonArm& arm, const std::string& improvement) {
    write_csv_row(os, {dataset_name, arm.method, std::to_string(arm.m),
                       ktop_to_string(arm.ktop), format_double(arm.report.auc),
                       std::to_string(arm.report.complexity),
                       std::to_string(arm.report.n_instances), improvement});
  };
  row(cmp.moe, format_double(cmp.relative_auc_improvement));
  row(cmp.baseline, "");
}

}  // namespace moelr
