#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "moelr/csv.hpp"
#include "moelr/encoding.hpp"
#include "moelr/errors.hpp"
#include "moelr/model.hpp"

namespace moelr {

struct ExplanationEntry {
  std::string feature;
  double weight = 0.0;

  const char* sign() const { return weight > 0.0 ? "positive" : "negative"; }
};

// Non-zero weights of one sub-net, sorted by |weight| descending (ties by
// feature index). A positive weight pushes the class-1 probability up.
struct ExpertExplanation {
  int expert_index = 0;
  double bias = 0.0;
  std::vector<ExplanationEntry> entries;
};

namespace detail {

inline ExpertExplanation explain_row(const std::vector<double>& weights, double bias,
                                     const std::vector<std::string>& names, int index) {
  ExpertExplanation exp;
  exp.expert_index = index;
  exp.bias = bias;
  std::vector<std::size_t> order;
  for (std::size_t j = 0; j < weights.size(); ++j)
    if (weights[j] != 0.0) order.push_back(j);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double wa = std::abs(weights[a]);
    const double wb = std::abs(weights[b]);
    if (wa != wb) return wa > wb;
    return a < b;
  });
  for (std::size_t j : order) exp.entries.push_back({names[j], weights[j]});
  return exp;
}

}  // namespace detail

// One explanation per expert, read directly from the model parameters.
inline std::vector<ExpertExplanation> explain_experts(const MoeModel& model) {
  std::vector<ExpertExplanation> out;
  out.reserve(model.m);
  for (std::size_t i = 0; i < model.m; ++i)
    out.push_back(detail::explain_row(model.expert_weights[i], model.expert_bias[i],
                                      model.feature_names, static_cast<int>(i)));
  return out;
}

// Analogous readout of the gate rows (row i scores expert i's competency).
inline std::vector<ExpertExplanation> explain_gate(const MoeModel& model) {
  std::vector<ExpertExplanation> out;
  out.reserve(model.m);
  for (std::size_t i = 0; i < model.m; ++i)
    out.push_back(detail::explain_row(model.gate_weights[i], model.gate_bias[i],
                                      model.feature_names, static_cast<int>(i)));
  return out;
}

// Expert weights mapped back to raw feature space using the dictionary's
// standardization statistics: weight/stddev per feature, with the means
// folded into the bias. Constant features (stddev 0) carry weight 0.
inline std::vector<ExpertExplanation> explain_experts_destandardized(
    const MoeModel& model, const FeatureDictionary& dict) {
  if (model.d != dict.d())
    throw ShapeError("model and dictionary disagree on feature count");
  if (!dict.standardize) return explain_experts(model);
  std::vector<ExpertExplanation> out;
  out.reserve(model.m);
  for (std::size_t i = 0; i < model.m; ++i) {
    std::vector<double> raw(model.d, 0.0);
    double bias = model.expert_bias[i];
    for (std::size_t j = 0; j < model.d; ++j) {
      if (dict.stddev[j] == 0.0) continue;
      raw[j] = model.expert_weights[i][j] / dict.stddev[j];
      bias -= model.expert_weights[i][j] * dict.mean[j] / dict.stddev[j];
    }
    out.push_back(
        detail::explain_row(raw, bias, model.feature_names, static_cast<int>(i)));
  }
  return out;
}

struct FeatureUsageSummary {
  std::vector<std::string> union_features;       // across all experts
  std::vector<std::vector<double>> jaccard;      // m x m pairwise similarity
  std::vector<std::size_t> routed_counts;        // per expert, on the dataset
};

// Union of per-expert active features, pairwise Jaccard similarity of the
// expert feature sets (two empty sets count as identical), and per-expert
// routed-instance counts on the dataset.
inline FeatureUsageSummary feature_usage_summary(const MoeModel& model, const Dataset& data) {
  FeatureUsageSummary summary;
  std::vector<std::set<std::string>> sets(model.m);
  std::set<std::string> all;
  for (std::size_t i = 0; i < model.m; ++i) {
    for (std::size_t j = 0; j < model.d; ++j) {
      if (model.expert_weights[i][j] != 0.0) {
        sets[i].insert(model.feature_names[j]);
        all.insert(model.feature_names[j]);
      }
    }
  }
  summary.union_features.assign(all.begin(), all.end());
  summary.jaccard.assign(model.m, std::vector<double>(model.m, 0.0));
  for (std::size_t a = 0; a < model.m; ++a) {
    for (std::size_t b = 0; b < model.m; ++b) {
      std::vector<std::string> inter;
      std::set_intersection(sets[a].begin(), sets[a].end(), sets[b].begin(), sets[b].end(),
                            std::back_inserter(inter));
      const std::size_t uni = sets[a].size() + sets[b].size() - inter.size();
      summary.jaccard[a][b] =
          uni == 0 ? 1.0 : static_cast<double>(inter.size()) / static_cast<double>(uni);
    }
  }
  summary.routed_counts.assign(model.m, 0);
  for (const auto& fv : data.rows) {
    const Prediction p = predict(model, fv.values);
    ++summary.routed_counts[static_cast<std::size_t>(p.selected_expert)];
  }
  return summary;
}

inline nlohmann::json explanations_to_json(const std::vector<ExpertExplanation>& experts,
                                           const std::vector<ExpertExplanation>& gate) {
  auto dump = [](const std::vector<ExpertExplanation>& list) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : list) {
      nlohmann::json entries = nlohmann::json::array();
      for (const auto& entry : e.entries)
        entries.push_back(
            {{"feature", entry.feature}, {"weight", entry.weight}, {"sign", entry.sign()}});
      arr.push_back({{"expert", e.expert_index}, {"bias", e.bias}, {"entries", entries}});
    }
    return arr;
  };
  return {{"experts", dump(experts)}, {"gate", dump(gate)}};
}

inline std::string explanations_to_markdown(const std::vector<ExpertExplanation>& experts) {
  std::ostringstream os;
  for (const auto& e : experts) {
    os << "## Expert " << e.expert_index << " (bias " << format_double(e.bias) << ")\n\n";
    if (e.entries.empty()) {
      os << "(no active features)\n\n";
      continue;
    }
    os << "| feature | weight | influence |\n|---|---|---|\n";
    for (const auto& entry : e.entries)
      os << "| " << entry.feature << " | " << format_double(entry.weight) << " | "
         << entry.sign() << " |\n";
    os << '\n';
  }
  return os.str();
}

// (expert, feature, weight) triples, one row per active feature.
inline void write_explanations_csv(std::ostream& os,
                                   const std::vector<ExpertExplanation>& experts) {
  os << "expert,feature,weight\n";
  for (const auto& e : experts)
    for (const auto& entry : e.entries)
      write_csv_row(os, {std::to_string(e.expert_index), entry.feature,
                         format_double(entry.weight)});
}

}  // namespace moelr
