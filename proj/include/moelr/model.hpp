#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "moelr/errors.hpp"
#include "moelr/rng.hpp"

namespace moelr {

// Linear gate with softmax over m experts, each expert a logistic regressor.
// Immutable in use: training constructs updated copies.
struct MoeModel {
  std::size_t d = 0;
  std::size_t m = 0;
  std::vector<std::vector<double>> gate_weights;    // m rows of d
  std::vector<double> gate_bias;                    // m
  std::vector<std::vector<double>> expert_weights;  // m rows of d
  std::vector<double> expert_bias;                  // m
  std::vector<std::string> feature_names;           // d
};

struct Prediction {
  double probability = 0.0;
  int selected_expert = 0;
  std::vector<double> gate_distribution;
};

struct SoftForward {
  std::vector<double> gate;          // softmax distribution, sums to 1
  std::vector<double> expert_probs;  // all m expert outputs
};

namespace detail {

inline double dot(std::span<const double> w, std::span<const double> x) {
  double acc = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * x[j];
  return acc;
}

inline void check_input(const MoeModel& model, std::span<const double> x) {
  if (x.size() != model.d)
    throw ShapeError("input has " + std::to_string(x.size()) + " features, model expects " +
                     std::to_string(model.d));
}

inline std::size_t argmax_lowest(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

}  // namespace detail

// Overflow-safe logistic function.
inline double sigmoid(double logit) {
  if (logit >= 0.0) {
    return 1.0 / (1.0 + std::exp(-logit));
  }
  const double e = std::exp(logit);
  return e / (1.0 + e);
}

// Softmax with max subtraction.
inline std::vector<double> softmax(std::span<const double> logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - top);
    sum += out[i];
  }
  for (auto& v : out) v /= sum;
  return out;
}

// Weights i.i.d. uniform on [-1/sqrt(d), +1/sqrt(d)], biases zero.
// Draw order: gate rows first, then expert rows, row-major.
inline MoeModel init_random(std::size_t d, std::size_t m, std::uint64_t seed) {
  if (d < 1 || m < 1) throw ConfigError("model needs d >= 1 and m >= 1");
  MoeModel model;
  model.d = d;
  model.m = m;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  Rng rng(seed);
  model.gate_weights.assign(m, std::vector<double>(d));
  model.expert_weights.assign(m, std::vector<double>(d));
  model.gate_bias.assign(m, 0.0);
  model.expert_bias.assign(m, 0.0);
  for (auto& row : model.gate_weights)
    for (auto& w : row) w = rng.uniform(-scale, scale);
  for (auto& row : model.expert_weights)
    for (auto& w : row) w = rng.uniform(-scale, scale);
  model.feature_names.reserve(d);
  for (std::size_t j = 0; j < d; ++j) model.feature_names.push_back("f" + std::to_string(j));
  return model;
}

inline std::vector<double> gate_forward(const MoeModel& model, std::span<const double> x) {
  detail::check_input(model, x);
  std::vector<double> logits(model.m);
  for (std::size_t i = 0; i < model.m; ++i)
    logits[i] = detail::dot(model.gate_weights[i], x) + model.gate_bias[i];
  return softmax(logits);
}

inline double expert_forward(const MoeModel& model, std::size_t expert, std::span<const double> x) {
  if (expert >= model.m)
    throw ShapeError("expert index " + std::to_string(expert) + " out of range (m = " +
                     std::to_string(model.m) + ")");
  detail::check_input(model, x);
  return sigmoid(detail::dot(model.expert_weights[expert], x) + model.expert_bias[expert]);
}

// Full gate distribution plus all expert probabilities (training-time view).
inline SoftForward soft_forward(const MoeModel& model, std::span<const double> x) {
  SoftForward out;
  out.gate = gate_forward(model, x);
  out.expert_probs.resize(model.m);
  for (std::size_t i = 0; i < model.m; ++i) out.expert_probs[i] = expert_forward(model, i, x);
  return out;
}

// Hard routing: the argmax expert (lowest index on ties) makes the prediction.
inline Prediction predict(const MoeModel& model, std::span<const double> x) {
  Prediction p;
  p.gate_distribution = gate_forward(model, x);
  p.selected_expert = static_cast<int>(detail::argmax_lowest(p.gate_distribution));
  p.probability = expert_forward(model, static_cast<std::size_t>(p.selected_expert), x);
  return p;
}

// Count of parameters (weights and biases, gate and experts) that are not
// exactly zero.
inline std::size_t complexity(const MoeModel& model) {
  std::size_t count = 0;
  auto tally = [&count](const std::vector<double>& v) {
    for (double w : v)
      if (w != 0.0) ++count;
  };
  for (const auto& row : model.gate_weights) tally(row);
  tally(model.gate_bias);
  for (const auto& row : model.expert_weights) tally(row);
  tally(model.expert_bias);
  return count;
}

inline nlohmann::json model_to_json(const MoeModel& model) {
  nlohmann::json doc;
  doc["d"] = model.d;
  doc["m"] = model.m;
  doc["feature_names"] = model.feature_names;
  doc["gate"] = {{"weights", model.gate_weights}, {"bias", model.gate_bias}};
  nlohmann::json experts = nlohmann::json::array();
  for (std::size_t i = 0; i < model.m; ++i) {
    experts.push_back(
        {{"weights", model.expert_weights[i]}, {"bias", model.expert_bias[i]}});
  }
  doc["experts"] = std::move(experts);
  return doc;
}

inline MoeModel model_from_json(const nlohmann::json& doc) try {
  if (!doc.is_object() || !doc.contains("d") || !doc.contains("m") || !doc.contains("gate") ||
      !doc.contains("experts"))
    throw SerializationError("model document is malformed");
  MoeModel model;
  model.d = doc["d"].get<std::size_t>();
  model.m = doc["m"].get<std::size_t>();
  if (model.d < 1 || model.m < 1)
    throw SerializationError("model document has invalid dimensions");
  const auto& gate = doc["gate"];
  if (!gate.contains("weights") || !gate.contains("bias"))
    throw SerializationError("model document is missing gate parameters");
  model.gate_weights = gate["weights"].get<std::vector<std::vector<double>>>();
  model.gate_bias = gate["bias"].get<std::vector<double>>();
  if (model.gate_weights.size() != model.m || model.gate_bias.size() != model.m)
    throw SerializationError("gate row count does not match expert count");
  if (doc["experts"].size() != model.m)
    throw SerializationError("gate row count does not match expert count");
  for (const auto& e : doc["experts"]) {
    model.expert_weights.push_back(e.at("weights").get<std::vector<double>>());
    model.expert_bias.push_back(e.at("bias").get<double>());
  }
  for (const auto& row : model.gate_weights)
    if (row.size() != model.d)
      throw SerializationError("gate weight row width does not match d");
  for (const auto& row : model.expert_weights)
    if (row.size() != model.d)
      throw SerializationError("expert weight row width does not match d");
  auto all_finite = [](const std::vector<double>& v) {
    for (double w : v)
      if (!std::isfinite(w)) return false;
    return true;
  };
  for (const auto& row : model.gate_weights)
    if (!all_finite(row)) throw SerializationError("model parameters must be finite");
  for (const auto& row : model.expert_weights)
    if (!all_finite(row)) throw SerializationError("model parameters must be finite");
  if (!all_finite(model.gate_bias) || !all_finite(model.expert_bias))
    throw SerializationError("model parameters must be finite");
  if (doc.contains("feature_names")) {
    model.feature_names = doc["feature_names"].get<std::vector<std::string>>();
    if (model.feature_names.size() != model.d)
      throw SerializationError("feature name count does not match d");
  } else {
    for (std::size_t j = 0; j < model.d; ++j)
      model.feature_names.push_back("f" + std::to_string(j));
  }
  return model;
} catch (const nlohmann::json::exception& e) {
  throw SerializationError(std::string("model document is malformed: ") + e.what());
}

// Serialized form; doubles use shortest exact round-trip decimals.
inline std::string serialize_model(const MoeModel& model) {
  return model_to_json(model).dump(2) + "\n";
}

inline MoeModel deserialize_model(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw SerializationError("model document is not valid JSON");
  return model_from_json(doc);
}

}  // namespace moelr
