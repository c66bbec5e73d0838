#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "moelr/csv.hpp"
#include "moelr/errors.hpp"
#include "moelr/event_log.hpp"
#include "moelr/timeutil.hpp"

namespace moelr {

// Which timestamp-derived numeric attributes to attach to each event.
struct TemporalFeatureOptions {
  bool hour = true;
  bool weekday = true;
  bool month = true;
  bool elapsed_since_case_start = true;
  bool elapsed_since_prev_event = true;

  bool operator==(const TemporalFeatureOptions&) const = default;
};

// Augments every event of the prefix with numeric attributes derived from its
// timestamp: hour in [0,23], weekday in [0,6] (Monday = 0), month in [1,12],
// elapsed_since_case_start and elapsed_since_prev_event in seconds.
inline PrefixInstance derive_temporal_features(const PrefixInstance& prefix,
                                               const TemporalFeatureOptions& opts = {}) {
  PrefixInstance out = prefix;
  const std::int64_t start =
      out.events.empty() ? 0 : out.events.front().timestamp;
  std::int64_t prev = start;
  auto set_attr = [](Event& e, const char* name, double value) {
    if (e.attributes.count(name))
      throw EncodingError(std::string("event already carries attribute '") + name +
                          "'; rename the column or disable the derived feature");
    e.attributes[name] = value;
  };
  for (auto& event : out.events) {
    const CivilFields civil = civil_fields_utc(event.timestamp);
    if (opts.hour) set_attr(event, "hour", static_cast<double>(civil.hour));
    if (opts.weekday) set_attr(event, "weekday", static_cast<double>(civil.weekday_mon0));
    if (opts.month) set_attr(event, "month", static_cast<double>(civil.month));
    if (opts.elapsed_since_case_start)
      set_attr(event, "elapsed_since_case_start",
               static_cast<double>(event.timestamp - start));
    if (opts.elapsed_since_prev_event)
      set_attr(event, "elapsed_since_prev_event",
               static_cast<double>(event.timestamp - prev));
    prev = event.timestamp;
  }
  return out;
}

inline std::vector<PrefixInstance> derive_temporal_features(
    const std::vector<PrefixInstance>& prefixes, const TemporalFeatureOptions& opts = {}) {
  std::vector<PrefixInstance> out;
  out.reserve(prefixes.size());
  for (const auto& p : prefixes) out.push_back(derive_temporal_features(p, opts));
  return out;
}

enum class FeatureKind { ActivityCount, CategoricalCount, NumericMean };

inline const char* feature_kind_name(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::ActivityCount: return "activity_count";
    case FeatureKind::CategoricalCount: return "categorical_count";
    case FeatureKind::NumericMean: return "numeric_mean";
  }
  return "unknown";
}

struct FeatureDescriptor {
  std::string name;                 // "Activity_A", "org:group_W", "mean_hour"
  FeatureKind kind = FeatureKind::ActivityCount;
  std::string attribute;            // source attribute; empty for activity counts
  std::vector<std::string> values;  // matched values; >1 only for "_other" buckets

  bool operator==(const FeatureDescriptor&) const = default;
};

struct FitOptions {
  bool standardize = true;
  double rare_threshold = 0.01;  // categorical values below this event share collapse
  TemporalFeatureOptions temporal;
};

// Ordered feature descriptors plus train-fitted standardization statistics.
// Lookup tables are derived from the descriptors and rebuilt after
// deserialization; they are not part of the serialized form.
struct FeatureDictionary {
  std::vector<FeatureDescriptor> features;
  std::vector<double> mean;    // size d
  std::vector<double> stddev;  // size d, population form
  bool standardize = true;
  double rare_threshold = 0.01;
  TemporalFeatureOptions temporal;

  std::size_t d() const { return features.size(); }

  std::vector<std::string> feature_names() const {
    std::vector<std::string> names;
    names.reserve(features.size());
    for (const auto& f : features) names.push_back(f.name);
    return names;
  }

  void rebuild_index() {
    activity_index_.clear();
    value_index_.clear();
    numeric_index_.clear();
    for (std::size_t i = 0; i < features.size(); ++i) {
      const auto& f = features[i];
      switch (f.kind) {
        case FeatureKind::ActivityCount:
          for (const auto& v : f.values) activity_index_[v] = i;
          break;
        case FeatureKind::CategoricalCount:
          for (const auto& v : f.values) value_index_[f.attribute + '\0' + v] = i;
          break;
        case FeatureKind::NumericMean:
          numeric_index_[f.attribute] = i;
          break;
      }
    }
  }

  std::optional<std::size_t> activity_feature(const std::string& activity) const {
    auto it = activity_index_.find(activity);
    if (it == activity_index_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::size_t> categorical_feature(const std::string& attribute,
                                                 const std::string& value) const {
    auto it = value_index_.find(attribute + '\0' + value);
    if (it == value_index_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::size_t> numeric_feature(const std::string& attribute) const {
    auto it = numeric_index_.find(attribute);
    if (it == numeric_index_.end()) return std::nullopt;
    return it->second;
  }

  nlohmann::json to_json() const {
    nlohmann::json doc;
    doc["standardize"] = standardize;
    doc["rare_threshold"] = rare_threshold;
    doc["temporal"] = {{"hour", temporal.hour},
                       {"weekday", temporal.weekday},
                       {"month", temporal.month},
                       {"elapsed_since_case_start", temporal.elapsed_since_case_start},
                       {"elapsed_since_prev_event", temporal.elapsed_since_prev_event}};
    nlohmann::json feats = nlohmann::json::array();
    for (const auto& f : features) {
      nlohmann::json item;
      item["name"] = f.name;
      item["kind"] = feature_kind_name(f.kind);
      item["attribute"] = f.attribute;
      item["values"] = f.values;
      feats.push_back(std::move(item));
    }
    doc["features"] = std::move(feats);
    doc["mean"] = mean;
    doc["stddev"] = stddev;
    return doc;
  }

  static FeatureDictionary from_json(const nlohmann::json& doc) try {
    if (!doc.is_object() || !doc.contains("features") || !doc["features"].is_array())
      throw SerializationError("feature dictionary document is malformed");
    FeatureDictionary dict;
    dict.standardize = doc.value("standardize", true);
    dict.rare_threshold = doc.value("rare_threshold", 0.01);
    if (doc.contains("temporal")) {
      const auto& t = doc["temporal"];
      dict.temporal.hour = t.value("hour", true);
      dict.temporal.weekday = t.value("weekday", true);
      dict.temporal.month = t.value("month", true);
      dict.temporal.elapsed_since_case_start = t.value("elapsed_since_case_start", true);
      dict.temporal.elapsed_since_prev_event = t.value("elapsed_since_prev_event", true);
    }
    std::unordered_map<std::string, int> seen;
    for (const auto& item : doc["features"]) {
      FeatureDescriptor f;
      f.name = item.at("name").get<std::string>();
      const std::string kind = item.at("kind").get<std::string>();
      if (kind == "activity_count") f.kind = FeatureKind::ActivityCount;
      else if (kind == "categorical_count") f.kind = FeatureKind::CategoricalCount;
      else if (kind == "numeric_mean") f.kind = FeatureKind::NumericMean;
      else throw SerializationError("unknown feature kind '" + kind + "'");
      f.attribute = item.value("attribute", std::string());
      if (item.contains("values")) f.values = item["values"].get<std::vector<std::string>>();
      if (++seen[f.name] > 1)
        throw SerializationError("duplicate feature name '" + f.name + "'");
      dict.features.push_back(std::move(f));
    }
    dict.mean = doc.value("mean", std::vector<double>{});
    dict.stddev = doc.value("stddev", std::vector<double>{});
    if (dict.mean.size() != dict.features.size() || dict.stddev.size() != dict.features.size())
      throw SerializationError("feature dictionary stats do not match descriptor count");
    for (double s : dict.stddev)
      if (!(s >= 0.0)) throw SerializationError("feature dictionary stddev must be >= 0");
    dict.rebuild_index();
    return dict;
  } catch (const nlohmann::json::exception& e) {
    throw SerializationError(std::string("feature dictionary document is malformed: ") +
                             e.what());
  }

 private:
  std::unordered_map<std::string, std::size_t> activity_index_;
  std::unordered_map<std::string, std::size_t> value_index_;  // attr '\0' value
  std::unordered_map<std::string, std::size_t> numeric_index_;
};

// Fixed-width numeric representation of one prefix.
struct FeatureVector {
  std::vector<double> values;
  int label = 0;
  std::string case_id;
  int prefix_length = 0;
};

struct Dataset {
  std::vector<FeatureVector> rows;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
  std::size_t d() const { return rows.empty() ? 0 : rows.front().values.size(); }
};

namespace detail {

inline bool has_categorical_attribute(const FeatureDictionary& dict, const std::string& attr) {
  for (const auto& f : dict.features)
    if (f.kind == FeatureKind::CategoricalCount && f.attribute == attr) return true;
  return false;
}

}  // namespace detail

// Aggregation encoding: occurrence counts for activities and categorical
// values, arithmetic means for numeric attributes. Unseen activities/values
// contribute nothing. With standardization, v -> (v - mean)/stddev; features
// with stddev 0, and numeric attributes absent from every event, encode 0.
inline FeatureVector encode_prefix(const PrefixInstance& prefix, const FeatureDictionary& dict,
                                   bool standardize) {
  FeatureVector fv;
  fv.label = prefix.label;
  fv.case_id = prefix.case_id;
  fv.prefix_length = prefix.prefix_length;
  fv.values.assign(dict.d(), 0.0);

  std::vector<bool> numeric_present(dict.d(), false);
  std::vector<double> sums(dict.d(), 0.0);
  std::vector<double> counts(dict.d(), 0.0);
  for (const auto& event : prefix.events) {
    if (auto idx = dict.activity_feature(event.activity)) fv.values[*idx] += 1.0;
    for (const auto& [attr, value] : event.attributes) {
      if (std::holds_alternative<std::string>(value)) {
        if (dict.numeric_feature(attr))
          throw EncodingError("attribute '" + attr +
                              "' is categorical in the prefix but numeric in the dictionary");
        if (auto idx = dict.categorical_feature(attr, std::get<std::string>(value)))
          fv.values[*idx] += 1.0;
      } else {
        if (auto idx = dict.numeric_feature(attr)) {
          sums[*idx] += std::get<double>(value);
          counts[*idx] += 1.0;
          numeric_present[*idx] = true;
        } else if (detail::has_categorical_attribute(dict, attr)) {
          throw EncodingError("attribute '" + attr +
                              "' is numeric in the prefix but categorical in the dictionary");
        }
      }
    }
  }
  for (std::size_t i = 0; i < dict.d(); ++i) {
    if (numeric_present[i]) fv.values[i] = sums[i] / counts[i];
  }
  if (standardize) {
    for (std::size_t i = 0; i < dict.d(); ++i) {
      const bool absent_numeric =
          dict.features[i].kind == FeatureKind::NumericMean && !numeric_present[i];
      if (absent_numeric || dict.stddev[i] == 0.0) {
        fv.values[i] = 0.0;
      } else {
        fv.values[i] = (fv.values[i] - dict.mean[i]) / dict.stddev[i];
      }
    }
  }
  return fv;
}

inline FeatureVector encode_prefix(const PrefixInstance& prefix, const FeatureDictionary& dict) {
  return encode_prefix(prefix, dict, dict.standardize);
}

// One activity-count feature per distinct train activity, one count feature
// per distinct (categorical attribute, value) pair with values under
// rare_threshold of all train events collapsed into an "<Attr>_other" bucket,
// and one mean feature per numeric attribute. Standardization statistics are
// computed on the encoded train matrix.
inline FeatureDictionary fit_feature_dictionary(const std::vector<PrefixInstance>& train_prefixes,
                                                const FitOptions& options = {}) {
  if (train_prefixes.empty())
    throw FitError("cannot fit a feature dictionary on an empty train set");

  std::map<std::string, std::size_t> activities;
  std::map<std::string, std::map<std::string, std::size_t>> categorical;  // attr -> value -> count
  std::map<std::string, bool> numeric;                                    // attr -> seen
  std::size_t total_events = 0;
  for (const auto& prefix : train_prefixes) {
    for (const auto& event : prefix.events) {
      ++total_events;
      ++activities[event.activity];
      for (const auto& [attr, value] : event.attributes) {
        if (std::holds_alternative<std::string>(value)) {
          if (numeric.count(attr))
            throw FitError("attribute '" + attr + "' mixes categorical and numeric values");
          ++categorical[attr][std::get<std::string>(value)];
        } else {
          if (categorical.count(attr))
            throw FitError("attribute '" + attr + "' mixes categorical and numeric values");
          numeric[attr] = true;
        }
      }
    }
  }

  FeatureDictionary dict;
  dict.standardize = options.standardize;
  dict.rare_threshold = options.rare_threshold;
  dict.temporal = options.temporal;

  std::unordered_map<std::string, int> names;
  auto add_feature = [&](FeatureDescriptor f) {
    if (++names[f.name] > 1) throw FitError("duplicate feature name '" + f.name + "'");
    dict.features.push_back(std::move(f));
  };

  for (const auto& [activity, count] : activities) {
    (void)count;
    add_feature({"Activity_" + activity, FeatureKind::ActivityCount, "", {activity}});
  }
  for (const auto& [attr, value_counts] : categorical) {
    std::vector<std::string> rare;
    for (const auto& [value, count] : value_counts) {
      const double share = static_cast<double>(count) / static_cast<double>(total_events);
      if (share < options.rare_threshold) {
        rare.push_back(value);
      } else {
        add_feature({attr + "_" + value, FeatureKind::CategoricalCount, attr, {value}});
      }
    }
    if (!rare.empty())
      add_feature({attr + "_other", FeatureKind::CategoricalCount, attr, std::move(rare)});
  }
  for (const auto& [attr, seen] : numeric) {
    (void)seen;
    add_feature({"mean_" + attr, FeatureKind::NumericMean, attr, {}});
  }
  dict.rebuild_index();

  // Train statistics on the raw encoded matrix (population stddev).
  const std::size_t d = dict.d();
  dict.mean.assign(d, 0.0);
  dict.stddev.assign(d, 0.0);
  std::vector<std::vector<double>> matrix;
  matrix.reserve(train_prefixes.size());
  for (const auto& prefix : train_prefixes) {
    const FeatureVector fv = encode_prefix(prefix, dict, /*standardize=*/false);
    matrix.push_back(fv.values);
  }
  const double n = static_cast<double>(matrix.size());
  for (const auto& row : matrix)
    for (std::size_t i = 0; i < d; ++i) dict.mean[i] += row[i];
  for (std::size_t i = 0; i < d; ++i) dict.mean[i] /= n;
  for (const auto& row : matrix)
    for (std::size_t i = 0; i < d; ++i) {
      const double delta = row[i] - dict.mean[i];
      dict.stddev[i] += delta * delta;
    }
  for (std::size_t i = 0; i < d; ++i) dict.stddev[i] = std::sqrt(dict.stddev[i] / n);
  return dict;
}

inline Dataset encode_prefixes(const std::vector<PrefixInstance>& prefixes,
                               const FeatureDictionary& dict) {
  Dataset data;
  data.rows.reserve(prefixes.size());
  for (const auto& p : prefixes) data.rows.push_back(encode_prefix(p, dict));
  return data;
}

// Full path from a raw log partition to an encoded dataset: prefix
// extraction, temporal derivation per the dictionary, encoding.
inline Dataset encode_log(const EventLog& log, const FeatureDictionary& dict, int min_prefix_len,
                          std::optional<int> max_prefix_len = kUnboundedPrefixLength) {
  const auto prefixes = derive_temporal_features(
      extract_prefixes(log, min_prefix_len, max_prefix_len), dict.temporal);
  return encode_prefixes(prefixes, dict);
}

// Encoded CSV layout: case_id, prefix_length, label, then one column per
// dictionary feature.
inline void write_dataset_csv(const Dataset& data, const FeatureDictionary& dict,
                              std::ostream& os) {
  std::vector<std::string> header = {"case_id", "prefix_length", "label"};
  for (const auto& f : dict.features) header.push_back(f.name);
  write_csv_row(os, header);
  std::vector<std::string> row;
  for (const auto& fv : data.rows) {
    if (fv.values.size() != dict.d())
      throw ShapeError("dataset row width does not match the dictionary");
    row.clear();
    row.push_back(fv.case_id);
    row.push_back(std::to_string(fv.prefix_length));
    row.push_back(fv.label ? "1" : "0");
    for (double v : fv.values) row.push_back(format_double(v));
    write_csv_row(os, row);
  }
}

inline Dataset read_dataset_csv(std::istream& in, const FeatureDictionary& dict) {
  CsvReader reader(in);
  std::size_t line = 0;
  auto header = reader.next(&line);
  if (!header) throw SchemaError("encoded dataset has no header row");
  std::vector<std::string> expected = {"case_id", "prefix_length", "label"};
  for (const auto& f : dict.features) expected.push_back(f.name);
  if (*header != expected)
    throw SchemaError("encoded dataset header does not match the feature dictionary");
  Dataset data;
  std::optional<std::vector<std::string>> rec;
  while ((rec = reader.next(&line))) {
    if (detail::record_is_blank(*rec)) continue;
    if (rec->size() != expected.size())
      throw RowError("line " + std::to_string(line) + ": expected " +
                     std::to_string(expected.size()) + " fields, got " +
                     std::to_string(rec->size()));
    FeatureVector fv;
    fv.case_id = (*rec)[0];
    const auto len = parse_double((*rec)[1]);
    if (!len) throw RowError("line " + std::to_string(line) + ": bad prefix_length");
    fv.prefix_length = static_cast<int>(*len);
    const auto label = parse_double((*rec)[2]);
    if (!label || (*label != 0.0 && *label != 1.0))
      throw LabelError("line " + std::to_string(line) + ": label is not in {0,1}");
    fv.label = static_cast<int>(*label);
    fv.values.reserve(dict.d());
    for (std::size_t i = 3; i < rec->size(); ++i) {
      const auto v = parse_double((*rec)[i]);
      if (!v) throw RowError("line " + std::to_string(line) + ": bad feature value");
      fv.values.push_back(*v);
    }
    data.rows.push_back(std::move(fv));
  }
  return data;
}

}  // namespace moelr
