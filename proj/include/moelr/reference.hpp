#pragma once

#include <algorithm>
#include <array>
#include <cstddef>

namespace moelr::reference {

// Published benchmark AUC scores used as comparison constants in reports.
// kTop columns refer to the 6-expert configuration.
struct AucRow {
  const char* dataset;
  double ktop2, ktop4, ktop6, ktop8, ktop_all;
  double one_lr;
  double fox;
  double glrm;
};

inline constexpr std::array<AucRow, 7> kAucTable{{
    {"bpic2011_1", 0.97, 0.95, 0.96, 0.98, 0.88, 0.94, 0.97, 0.92},
    {"bpic2011_2", 0.85, 0.84, 0.86, 0.97, 0.87, 0.94, 0.92, 0.97},
    {"bpic2011_3", 0.95, 0.98, 0.96, 0.98, 0.91, 0.97, 0.98, 0.98},
    {"bpic2011_4", 0.69, 0.81, 0.80, 0.81, 0.80, 0.68, 0.89, 0.81},
    {"sepsis_1", 0.49, 0.55, 0.56, 0.58, 0.49, 0.47, 0.58, 0.47},
    {"sepsis_2", 0.56, 0.56, 0.75, 0.73, 0.72, 0.74, 0.73, 0.73},
    {"sepsis_3", 0.56, 0.61, 0.72, 0.72, 0.69, 0.70, 0.68, 0.65},
}};

// FOX builds one fuzzy rule per combination of 3-way binned features; its
// model complexity is the rule count times the per-rule condition count
// (= the dataset's pre-filtered feature count).
struct FoxModel {
  const char* dataset;
  int features;
  int rules;
};

inline constexpr std::array<FoxModel, 7> kFoxModels{{
    {"bpic2011_1", 4, 81},
    {"bpic2011_2", 7, 2187},
    {"bpic2011_3", 6, 729},
    {"bpic2011_4", 2, 9},
    {"sepsis_1", 5, 243},
    {"sepsis_2", 4, 81},
    {"sepsis_3", 6, 729},
}};

inline constexpr int fox_complexity(const FoxModel& f) { return f.features * f.rules; }

inline constexpr int min_fox_complexity() {
  int best = fox_complexity(kFoxModels[0]);
  for (const auto& f : kFoxModels) best = std::min(best, fox_complexity(f));
  return best;
}

inline constexpr int max_fox_complexity() {
  int best = fox_complexity(kFoxModels[0]);
  for (const auto& f : kFoxModels) best = std::max(best, fox_complexity(f));
  return best;
}

// Smallest FOX complexity among datasets with more than `min_features`
// pre-filtered features.
inline constexpr int min_fox_complexity_above(int min_features) {
  int best = 0;
  for (const auto& f : kFoxModels) {
    if (f.features <= min_features) continue;
    const int c = fox_complexity(f);
    if (best == 0 || c < best) best = c;
  }
  return best;
}

}  // namespace moelr::reference
