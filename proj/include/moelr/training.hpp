#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "moelr/encoding.hpp"
#include "moelr/errors.hpp"
#include "moelr/evaluation.hpp"
#include "moelr/model.hpp"
#include "moelr/rng.hpp"

namespace moelr {

// Maximum number of input features per sub-net; nullopt means no bound.
using KTop = std::optional<int>;
inline constexpr std::optional<int> kTopAll = std::nullopt;

inline KTop parse_ktop(const std::string& text) {
  if (text == "ALL" || text == "all") return kTopAll;
  int v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || v < 1)
    throw ConfigError("kTop must be a positive integer or 'ALL'");
  return v;
}

inline std::string ktop_to_string(KTop ktop) {
  return ktop ? std::to_string(*ktop) : std::string("ALL");
}

enum class ModelSelection { BestValidAuc, LastEpoch };

struct TrainConfig {
  std::size_t m = 6;
  KTop ktop = 8;
  double lambda_r = 0.1;
  int epochs_e2e = 100;
  int epochs_gate = 100;
  double lr_experts = 0.05;
  double lr_gate = 0.01;
  int batch_size = 32;
  std::uint64_t seed = 1;
  bool shuffle = true;
  ModelSelection selection = ModelSelection::BestValidAuc;

  void validate(std::size_t d) const {
    if (m < 1) throw ConfigError("m must be >= 1");
    if (ktop && *ktop < 1) throw ConfigError("kTop must be >= 1 or ALL");
    if (ktop && static_cast<std::size_t>(*ktop) > d)
      throw ConfigError("kTop (" + std::to_string(*ktop) + ") exceeds feature count d (" +
                        std::to_string(d) + ")");
    if (lambda_r < 0.0) throw ConfigError("lambda_r must be >= 0");
    if (epochs_e2e < 0 || epochs_gate < 0) throw ConfigError("epoch counts must be >= 0");
    if (lr_experts < 0.0 || lr_gate < 0.0) throw ConfigError("learning rates must be >= 0");
    if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  }
};

struct EpochStats {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double valid_auc = 0.0;  // NaN when undefined and selection allows it
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  int chosen_epoch = 0;
  double wall_time_ms = 0.0;
};

// Parameter-shaped gradient accumulator.
struct Gradients {
  std::vector<std::vector<double>> gate_weights;
  std::vector<double> gate_bias;
  std::vector<std::vector<double>> expert_weights;
  std::vector<double> expert_bias;

  explicit Gradients(const MoeModel& model)
      : gate_weights(model.m, std::vector<double>(model.d, 0.0)),
        gate_bias(model.m, 0.0),
        expert_weights(model.m, std::vector<double>(model.d, 0.0)),
        expert_bias(model.m, 0.0) {}
};

inline constexpr double kMixtureFloor = 1e-12;

namespace detail {

inline double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

inline double l1_norm(const MoeModel& model) {
  double acc = 0.0;
  for (const auto& row : model.gate_weights)
    for (double w : row) acc += std::abs(w);
  for (double b : model.gate_bias) acc += std::abs(b);
  for (const auto& row : model.expert_weights)
    for (double w : row) acc += std::abs(w);
  for (double b : model.expert_bias) acc += std::abs(b);
  return acc;
}

// Mixture negative log-likelihood over the batch plus L1 penalty:
//   L = -(1/B) sum_n log( max(sum_i g_i(x_n) * lik_i(y_n|x_n), 1e-12) )
//       + lambda_r * sum_theta |theta|
// with lik_i(y|x) = p_i^y (1-p_i)^(1-y). Gradients flow through posterior
// responsibilities h_i = g_i*lik_i / sum_j g_j*lik_j; a sample clamped at the
// floor contributes zero gradient (the clamped loss is flat there). The L1
// term contributes lambda_r * sign(theta) with sign(0) = 0.
inline double mixture_loss(const MoeModel& model, const std::vector<FeatureVector>& rows,
                           std::span<const std::size_t> idx, double lambda_r, Gradients* grad) {
  if (idx.empty()) throw EmptyDataError("loss requires a non-empty batch");
  const std::size_t m = model.m;
  const double inv_b = 1.0 / static_cast<double>(idx.size());
  double nll = 0.0;
  std::vector<double> lik(m);
  for (const std::size_t n : idx) {
    const FeatureVector& fv = rows[n];
    if (fv.label != 0 && fv.label != 1)
      throw LabelError("label must be 0 or 1, got " + std::to_string(fv.label));
    const SoftForward f = soft_forward(model, fv.values);
    double mix = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      lik[i] = fv.label == 1 ? f.expert_probs[i] : 1.0 - f.expert_probs[i];
      mix += f.gate[i] * lik[i];
    }
    const bool floored = mix < kMixtureFloor;
    nll -= std::log(floored ? kMixtureFloor : mix);
    if (grad == nullptr || floored) continue;
    for (std::size_t i = 0; i < m; ++i) {
      const double h = f.gate[i] * lik[i] / mix;
      const double gate_logit_grad = (f.gate[i] - h) * inv_b;
      const double expert_logit_grad =
          h * (f.expert_probs[i] - static_cast<double>(fv.label)) * inv_b;
      grad->gate_bias[i] += gate_logit_grad;
      grad->expert_bias[i] += expert_logit_grad;
      auto& gw = grad->gate_weights[i];
      auto& ew = grad->expert_weights[i];
      for (std::size_t j = 0; j < model.d; ++j) {
        gw[j] += gate_logit_grad * fv.values[j];
        ew[j] += expert_logit_grad * fv.values[j];
      }
    }
  }
  if (grad != nullptr && lambda_r != 0.0) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < model.d; ++j) {
        grad->gate_weights[i][j] += lambda_r * sign(model.gate_weights[i][j]);
        grad->expert_weights[i][j] += lambda_r * sign(model.expert_weights[i][j]);
      }
      grad->gate_bias[i] += lambda_r * sign(model.gate_bias[i]);
      grad->expert_bias[i] += lambda_r * sign(model.expert_bias[i]);
    }
  }
  return nll * inv_b + lambda_r * l1_norm(model);
}

inline void apply_update(MoeModel& model, const Gradients& grad, double lr_gate,
                         double lr_experts, bool freeze_experts) {
  for (std::size_t i = 0; i < model.m; ++i) {
    for (std::size_t j = 0; j < model.d; ++j)
      model.gate_weights[i][j] -= lr_gate * grad.gate_weights[i][j];
    model.gate_bias[i] -= lr_gate * grad.gate_bias[i];
    if (freeze_experts) continue;
    for (std::size_t j = 0; j < model.d; ++j)
      model.expert_weights[i][j] -= lr_experts * grad.expert_weights[i][j];
    model.expert_bias[i] -= lr_experts * grad.expert_bias[i];
  }
}

// Hard-routed validation AUC; nullopt when the set is empty or single-class.
inline std::optional<double> validation_auc(const MoeModel& model, const Dataset& valid) {
  if (valid.empty()) return std::nullopt;
  std::vector<double> scores;
  std::vector<int> labels;
  scores.reserve(valid.size());
  labels.reserve(valid.size());
  for (const auto& fv : valid.rows) {
    scores.push_back(predict(model, fv.values).probability);
    labels.push_back(fv.label);
  }
  try {
    return auc(scores, labels);
  } catch (const UndefinedAucError&) {
    return std::nullopt;
  }
}

// One SGD phase: mini-batches over a per-epoch shuffled index list, fresh
// engine seeded at cfg.seed, epoch loss reported as the mean of batch losses
// each evaluated on the pre-update parameters.
inline TrainReport sgd_phase(MoeModel& model, const Dataset& train, const Dataset& valid,
                             const TrainConfig& cfg, int epochs, bool freeze_experts,
                             const char* phase) {
  if (train.empty()) throw EmptyDataError(std::string(phase) + ": train set is empty");
  const auto start_time = std::chrono::steady_clock::now();
  Rng rng(cfg.seed);
  std::vector<std::size_t> indices(train.size());
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  TrainReport report;
  MoeModel best = model;
  double best_auc = -std::numeric_limits<double>::infinity();
  int best_epoch = 0;
  const std::size_t batch = static_cast<std::size_t>(cfg.batch_size);
  for (int epoch = 1; epoch <= epochs; ++epoch) {
    if (cfg.shuffle) rng.shuffle(indices);
    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t begin = 0; begin < indices.size(); begin += batch) {
      const std::size_t end = std::min(begin + batch, indices.size());
      Gradients grad(model);
      const double batch_loss = mixture_loss(
          model, train.rows, std::span(indices).subspan(begin, end - begin), cfg.lambda_r,
          &grad);
      if (!std::isfinite(batch_loss))
        throw DivergenceError(std::string(phase) + ": non-finite loss at epoch " +
                              std::to_string(epoch));
      loss_sum += batch_loss;
      ++batches;
      apply_update(model, grad, cfg.lr_gate, cfg.lr_experts, freeze_experts);
    }
    const auto vauc = validation_auc(model, valid);
    if (!vauc && cfg.selection == ModelSelection::BestValidAuc)
      throw UndefinedAucError(std::string(phase) +
                              ": validation AUC undefined (empty or single-class set)");
    const double vauc_value = vauc ? *vauc : std::numeric_limits<double>::quiet_NaN();
    report.epochs.push_back({epoch, loss_sum / static_cast<double>(batches), vauc_value});
    if (vauc && *vauc > best_auc) {
      best_auc = *vauc;
      best = model;
      best_epoch = epoch;
    }
  }
  if (cfg.selection == ModelSelection::BestValidAuc && best_epoch > 0) {
    model = best;
    report.chosen_epoch = best_epoch;
  } else {
    report.chosen_epoch = epochs;
  }
  report.wall_time_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start_time)
                            .count();
  return report;
}

}  // namespace detail

inline double loss(const MoeModel& model, const std::vector<FeatureVector>& batch,
                   double lambda_r) {
  std::vector<std::size_t> idx(batch.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return detail::mixture_loss(model, batch, idx, lambda_r, nullptr);
}

inline Gradients gradients(const MoeModel& model, const std::vector<FeatureVector>& batch,
                           double lambda_r) {
  std::vector<std::size_t> idx(batch.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Gradients grad(model);
  detail::mixture_loss(model, batch, idx, lambda_r, &grad);
  return grad;
}

// End-to-end mini-batch SGD with separate gate/expert learning rates.
// Returns the snapshot chosen by cfg.selection plus the per-epoch report.
inline std::pair<MoeModel, TrainReport> train_end_to_end(const MoeModel& model,
                                                         const Dataset& train,
                                                         const Dataset& valid,
                                                         const TrainConfig& cfg) {
  MoeModel out = model;
  TrainReport report =
      detail::sgd_phase(out, train, valid, cfg, cfg.epochs_e2e, false, "end_to_end");
  return {std::move(out), std::move(report)};
}

// Gate-only fine-tuning: expert weights and biases are bit-identical before
// and after.
inline std::pair<MoeModel, TrainReport> fine_tune_gate(const MoeModel& model,
                                                       const Dataset& train,
                                                       const Dataset& valid,
                                                       const TrainConfig& cfg) {
  MoeModel out = model;
  TrainReport report =
      detail::sgd_phase(out, train, valid, cfg, cfg.epochs_gate, true, "gate_finetune");
  return {std::move(out), std::move(report)};
}

// Magnitude-based structured pruning. Per sub-net, the block score of feature
// j is the L1 norm of the weights leaving input j (|w_j| for an expert,
// sum_i |gate_weights[i][j]| for the gate); only the kTop highest-scoring
// blocks keep their weights, ties broken toward the lower feature index.
// Biases are untouched. kTop = ALL is the identity.
inline MoeModel prune_feature_blocks(const MoeModel& model, KTop ktop) {
  if (!ktop) return model;
  const int k = *ktop;
  if (k < 1) throw ConfigError("kTop must be >= 1 or ALL");
  if (static_cast<std::size_t>(k) > model.d)
    throw ConfigError("kTop (" + std::to_string(k) + ") exceeds feature count d (" +
                      std::to_string(model.d) + ")");

  auto keep_mask = [&](const std::vector<double>& score) {
    std::vector<std::size_t> order(score.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (score[a] != score[b]) return score[a] > score[b];
      return a < b;
    });
    std::vector<char> keep(score.size(), 0);
    for (int i = 0; i < k; ++i) keep[order[static_cast<std::size_t>(i)]] = 1;
    return keep;
  };

  MoeModel out = model;
  std::vector<double> gate_score(model.d, 0.0);
  for (const auto& row : model.gate_weights)
    for (std::size_t j = 0; j < model.d; ++j) gate_score[j] += std::abs(row[j]);
  const auto gate_keep = keep_mask(gate_score);
  for (auto& row : out.gate_weights)
    for (std::size_t j = 0; j < model.d; ++j)
      if (!gate_keep[j]) row[j] = 0.0;

  for (std::size_t i = 0; i < model.m; ++i) {
    std::vector<double> score(model.d);
    for (std::size_t j = 0; j < model.d; ++j) score[j] = std::abs(model.expert_weights[i][j]);
    const auto keep = keep_mask(score);
    for (std::size_t j = 0; j < model.d; ++j)
      if (!keep[j]) out.expert_weights[i][j] = 0.0;
  }
  return out;
}

struct TrainResult {
  MoeModel model;
  TrainReport e2e;
  TrainReport gate;
};

// The full four-step algorithm: random init, end-to-end training, gate-only
// fine-tuning, feature-block pruning. No training happens after pruning.
inline TrainResult train_full(const Dataset& train, const Dataset& valid, const TrainConfig& cfg,
                              const std::vector<std::string>& feature_names = {}) {
  if (train.empty()) throw EmptyDataError("train_full: train set is empty");
  const std::size_t d = train.d();
  cfg.validate(d);
  MoeModel model = init_random(d, cfg.m, cfg.seed);
  if (!feature_names.empty()) {
    if (feature_names.size() != d)
      throw ShapeError("feature name count does not match dataset width");
    model.feature_names = feature_names;
  }
  auto [after_e2e, e2e_report] = train_end_to_end(model, train, valid, cfg);
  auto [after_gate, gate_report] = fine_tune_gate(after_e2e, train, valid, cfg);
  MoeModel pruned = prune_feature_blocks(after_gate, cfg.ktop);
  return TrainResult{std::move(pruned), std::move(e2e_report), std::move(gate_report)};
}

// CSV export: phase, epoch, loss, valid_auc.
inline void write_train_report_csv(std::ostream& os, const TrainReport& e2e,
                                   const TrainReport& gate) {
  os << "phase,epoch,loss,valid_auc\n";
  auto rows = [&os](const char* phase, const TrainReport& r) {
    for (const auto& s : r.epochs) {
      os << phase << ',' << s.epoch << ',' << format_double(s.train_loss) << ','
         << format_double(s.valid_auc) << '\n';
    }
  };
  rows("end_to_end", e2e);
  rows("gate_finetune", gate);
}

}  // namespace moelr
