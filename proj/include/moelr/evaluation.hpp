#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "moelr/encoding.hpp"
#include "moelr/errors.hpp"
#include "moelr/event_log.hpp"
#include "moelr/model.hpp"

namespace moelr {

// Rank-based AUC (Mann-Whitney with average ranks for ties), O(n log n).
// Equals (concordant pairs + 0.5 * tied pairs) / (n_pos * n_neg).
inline double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size())
    throw ShapeError("auc: scores and labels differ in length");
  if (scores.empty()) throw UndefinedAucError("auc: empty input");
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1)
      throw LabelError("auc: label must be 0 or 1");
    n_pos += static_cast<std::size_t>(labels[i]);
  }
  const std::size_t n_neg = labels.size() - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw UndefinedAucError("auc: both classes must be present");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based average
    for (std::size_t k = i; k < j; ++k)
      if (labels[order[k]] == 1) pos_rank_sum += avg_rank;
    i = j;
  }
  const double u = pos_rank_sum -
                   0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

struct EvalReport {
  double auc = 0.0;
  std::size_t n_instances = 0;
  std::size_t complexity = 0;
  std::vector<std::size_t> per_expert_instance_counts;
  std::vector<std::vector<std::string>> per_expert_active_features;
  nlohmann::json config_echo;

  nlohmann::json to_json() const {
    nlohmann::json doc;
    doc["auc"] = auc;
    doc["n_instances"] = n_instances;
    doc["complexity"] = complexity;
    doc["per_expert_instance_counts"] = per_expert_instance_counts;
    doc["per_expert_active_features"] = per_expert_active_features;
    doc["config"] = config_echo;
    return doc;
  }

  std::string to_text() const {
    std::ostringstream os;
    os << "AUC:            " << format_double(auc) << '\n';
    os << "Instances:      " << n_instances << '\n';
    os << "Complexity:     " << complexity << " non-zero parameters\n";
    for (std::size_t i = 0; i < per_expert_instance_counts.size(); ++i) {
      os << "Expert " << i << ":       " << per_expert_instance_counts[i] << " routed, [";
      const auto& feats = per_expert_active_features[i];
      for (std::size_t j = 0; j < feats.size(); ++j) {
        if (j) os << ", ";
        os << feats[j];
      }
      os << "]\n";
    }
    return os.str();
  }
};

// Feature names carrying a non-zero weight in the given expert.
inline std::vector<std::string> active_features(const MoeModel& model, std::size_t expert) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < model.d; ++j)
    if (model.expert_weights[expert][j] != 0.0) out.push_back(model.feature_names[j]);
  return out;
}

// Test protocol: prefixes with at least min_prefix_len events (default 2),
// encoded with the train-fitted dictionary, scored with hard routing, AUC
// pooled over all prefixes.
inline EvalReport evaluate(const MoeModel& model, const EventLog& test_log,
                           const FeatureDictionary& dict, int min_prefix_len = 2,
                           std::optional<int> max_prefix_len = kUnboundedPrefixLength) {
  if (model.d != dict.d())
    throw ShapeError("model expects d = " + std::to_string(model.d) +
                     " but dictionary has d = " + std::to_string(dict.d()));
  const Dataset data = encode_log(test_log, dict, min_prefix_len, max_prefix_len);
  if (data.empty()) throw EmptyDataError("evaluate: no test prefixes");
  std::vector<double> scores;
  std::vector<int> labels;
  scores.reserve(data.size());
  labels.reserve(data.size());
  EvalReport report;
  report.per_expert_instance_counts.assign(model.m, 0);
  for (const auto& fv : data.rows) {
    const Prediction p = predict(model, fv.values);
    scores.push_back(p.probability);
    labels.push_back(fv.label);
    ++report.per_expert_instance_counts[static_cast<std::size_t>(p.selected_expert)];
  }
  report.auc = auc(scores, labels);
  report.n_instances = data.size();
  report.complexity = complexity(model);
  for (std::size_t i = 0; i < model.m; ++i)
    report.per_expert_active_features.push_back(active_features(model, i));
  report.config_echo = {{"m", model.m},
                        {"d", model.d},
                        {"min_prefix_len", min_prefix_len},
                        {"max_prefix_len", max_prefix_len ? nlohmann::json(*max_prefix_len)
                                                          : nlohmann::json(nullptr)},
                        {"standardize", dict.standardize}};
  return report;
}

}  // namespace moelr
