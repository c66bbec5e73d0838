#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include <json.hpp>

#include "moelr/csv.hpp"
#include "moelr/errors.hpp"
#include "moelr/timeutil.hpp"

namespace moelr {

// Categorical string or real number.
using AttrValue = std::variant<std::string, double>;

struct Event {
  std::string activity;
  std::int64_t timestamp = 0;  // seconds since epoch, UTC
  std::map<std::string, AttrValue> attributes;

  bool operator==(const Event&) const = default;
};

struct Trace {
  std::string case_id;
  std::vector<Event> events;  // non-decreasing timestamps
  int label = 0;              // binary outcome

  bool operator==(const Trace&) const = default;
};

struct EventLog {
  std::vector<Trace> traces;

  bool operator==(const EventLog&) const = default;
};

// The first `prefix_length` events of a source trace, carrying its label.
struct PrefixInstance {
  std::string case_id;
  std::vector<Event> events;
  int prefix_length = 0;
  int label = 0;
};

struct SplitSpec {
  double train = 0.64;
  double valid = 0.16;
  double test = 0.20;

  void validate() const {
    const bool open = train > 0.0 && train < 1.0 && valid > 0.0 && valid < 1.0 &&
                      test > 0.0 && test < 1.0;
    if (!open) throw ConfigError("split fractions must each lie in (0,1)");
    if (std::abs(train + valid + test - 1.0) > 1e-9)
      throw ConfigError("split fractions must sum to 1");
  }
};

// Maps CSV columns to roles. Every header column must be covered by a role.
struct LogSchema {
  std::string case_id_column;
  std::string activity_column;
  std::string timestamp_column;
  std::string label_column;
  std::vector<std::string> categorical_columns;
  std::vector<std::string> numeric_columns;
  std::vector<std::string> ignore_columns;
  std::string timestamp_format = kDefaultTimestampFormat;

  static LogSchema from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw SchemaError("schema document must be a JSON object");
    LogSchema s;
    auto required = [&](const char* key) -> std::string {
      if (!doc.contains(key) || !doc[key].is_string() || doc[key].get<std::string>().empty())
        throw SchemaError(std::string("schema missing required string field '") + key + "'");
      return doc[key].get<std::string>();
    };
    s.case_id_column = required("case_id");
    s.activity_column = required("activity");
    s.timestamp_column = required("timestamp");
    s.label_column = required("label");
    auto string_list = [&](const char* key) -> std::vector<std::string> {
      if (!doc.contains(key)) return {};
      if (!doc[key].is_array())
        throw SchemaError(std::string("schema field '") + key + "' must be an array of strings");
      std::vector<std::string> out;
      for (const auto& v : doc[key]) {
        if (!v.is_string())
          throw SchemaError(std::string("schema field '") + key + "' must be an array of strings");
        out.push_back(v.get<std::string>());
      }
      return out;
    };
    s.categorical_columns = string_list("categorical");
    s.numeric_columns = string_list("numeric");
    s.ignore_columns = string_list("ignore");
    if (doc.contains("timestamp_format")) {
      if (!doc["timestamp_format"].is_string())
        throw SchemaError("schema field 'timestamp_format' must be a string");
      s.timestamp_format = doc["timestamp_format"].get<std::string>();
    }
    s.check_role_overlap();
    return s;
  }

  static LogSchema from_json_text(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw SchemaError("schema document is not valid JSON");
    return from_json(doc);
  }

  static LogSchema from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open schema file: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_text(text);
  }

  nlohmann::json to_json() const {
    nlohmann::json doc;
    doc["case_id"] = case_id_column;
    doc["activity"] = activity_column;
    doc["timestamp"] = timestamp_column;
    doc["label"] = label_column;
    doc["categorical"] = categorical_columns;
    doc["numeric"] = numeric_columns;
    doc["ignore"] = ignore_columns;
    doc["timestamp_format"] = timestamp_format;
    return doc;
  }

 private:
  void check_role_overlap() const {
    std::unordered_map<std::string, int> seen;
    auto add = [&](const std::string& name) {
      if (++seen[name] > 1)
        throw SchemaError("column '" + name + "' assigned to more than one role");
    };
    add(case_id_column);
    add(activity_column);
    add(timestamp_column);
    add(label_column);
    for (const auto& c : categorical_columns) add(c);
    for (const auto& c : numeric_columns) add(c);
    for (const auto& c : ignore_columns) add(c);
  }
};

namespace detail {

enum class ColumnRole { CaseId, Activity, Timestamp, Label, Categorical, Numeric, Ignore };

inline bool record_is_blank(const std::vector<std::string>& rec) {
  return rec.size() == 1 && rec[0].empty();
}

}  // namespace detail

// Groups rows into traces by case id (first-appearance order), sorts events
// by timestamp within each case (stable on ties), and attaches the binary
// outcome label carried by the label column.
inline EventLog parse_event_log(std::istream& in, const LogSchema& schema) {
  CsvReader reader(in);
  std::size_t line = 0;
  std::optional<std::vector<std::string>> header;
  while ((header = reader.next(&line))) {
    if (!detail::record_is_blank(*header)) break;
  }
  if (!header) throw SchemaError("event log has no header row");

  const std::size_t width = header->size();
  std::vector<detail::ColumnRole> roles(width);
  std::unordered_map<std::string, std::size_t> position;
  std::unordered_set<std::string> categorical(schema.categorical_columns.begin(),
                                              schema.categorical_columns.end());
  std::unordered_set<std::string> numeric(schema.numeric_columns.begin(),
                                          schema.numeric_columns.end());
  std::unordered_set<std::string> ignored(schema.ignore_columns.begin(),
                                          schema.ignore_columns.end());
  for (std::size_t i = 0; i < width; ++i) {
    const std::string& name = (*header)[i];
    if (!position.emplace(name, i).second)
      throw SchemaError("duplicate column '" + name + "' in event log header");
    if (name == schema.case_id_column) roles[i] = detail::ColumnRole::CaseId;
    else if (name == schema.activity_column) roles[i] = detail::ColumnRole::Activity;
    else if (name == schema.timestamp_column) roles[i] = detail::ColumnRole::Timestamp;
    else if (name == schema.label_column) roles[i] = detail::ColumnRole::Label;
    else if (categorical.count(name)) roles[i] = detail::ColumnRole::Categorical;
    else if (numeric.count(name)) roles[i] = detail::ColumnRole::Numeric;
    else if (ignored.count(name)) roles[i] = detail::ColumnRole::Ignore;
    else throw SchemaError("column '" + name + "' not declared in the schema");
  }
  auto require_column = [&](const std::string& name, const char* role) {
    if (!position.count(name))
      throw SchemaError(std::string("event log is missing the ") + role + " column '" +
                        name + "'");
  };
  require_column(schema.case_id_column, "case_id");
  require_column(schema.activity_column, "activity");
  require_column(schema.timestamp_column, "timestamp");
  require_column(schema.label_column, "label");
  for (const auto& c : schema.categorical_columns) require_column(c, "categorical");
  for (const auto& c : schema.numeric_columns) require_column(c, "numeric");

  EventLog log;
  std::unordered_map<std::string, std::size_t> case_index;
  std::optional<std::vector<std::string>> rec;
  while ((rec = reader.next(&line))) {
    if (detail::record_is_blank(*rec)) continue;
    if (rec->size() != width)
      throw RowError("line " + std::to_string(line) + ": expected " + std::to_string(width) +
                     " fields, got " + std::to_string(rec->size()));
    Event event;
    std::string case_id;
    int label = -1;
    for (std::size_t i = 0; i < width; ++i) {
      const std::string& cell = (*rec)[i];
      switch (roles[i]) {
        case detail::ColumnRole::CaseId:
          case_id = cell;
          break;
        case detail::ColumnRole::Activity:
          if (cell.empty())
            throw RowError("line " + std::to_string(line) + ": empty activity");
          event.activity = cell;
          break;
        case detail::ColumnRole::Timestamp: {
          const auto ts = parse_timestamp(cell, schema.timestamp_format);
          if (!ts)
            throw RowError("line " + std::to_string(line) + ": unparseable timestamp '" +
                           cell + "'");
          event.timestamp = *ts;
          break;
        }
        case detail::ColumnRole::Label: {
          const auto v = parse_double(cell);
          if (!v || (*v != 0.0 && *v != 1.0))
            throw LabelError("line " + std::to_string(line) + ": label '" + cell +
                             "' is not in {0,1}");
          label = static_cast<int>(*v);
          break;
        }
        case detail::ColumnRole::Categorical:
          if (!cell.empty()) event.attributes[(*header)[i]] = cell;
          break;
        case detail::ColumnRole::Numeric:
          if (!cell.empty()) {
            const auto v = parse_double(cell);
            if (!v)
              throw RowError("line " + std::to_string(line) + ": unparseable number '" +
                             cell + "' in column '" + (*header)[i] + "'");
            event.attributes[(*header)[i]] = *v;
          }
          break;
        case detail::ColumnRole::Ignore:
          break;
      }
    }
    if (case_id.empty())
      throw RowError("line " + std::to_string(line) + ": empty case id");
    auto [it, inserted] = case_index.emplace(case_id, log.traces.size());
    if (inserted) {
      log.traces.push_back(Trace{case_id, {}, label});
    } else if (log.traces[it->second].label != label) {
      throw LabelError("line " + std::to_string(line) + ": case '" + case_id +
                       "' carries conflicting labels");
    }
    log.traces[it->second].events.push_back(std::move(event));
  }
  for (auto& trace : log.traces) {
    std::stable_sort(trace.events.begin(), trace.events.end(),
                     [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
  }
  return log;
}

inline EventLog parse_event_log_file(const std::filesystem::path& path, const LogSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open event log: " + path.string());
  return parse_event_log(in, schema);
}

// Writes the log back to CSV using the schema's columns and timestamp format.
// parse -> serialize -> parse is the identity.
inline void serialize_event_log(const EventLog& log, const LogSchema& schema, std::ostream& os) {
  std::vector<std::string> header = {schema.case_id_column, schema.activity_column,
                                     schema.timestamp_column, schema.label_column};
  header.insert(header.end(), schema.categorical_columns.begin(),
                schema.categorical_columns.end());
  header.insert(header.end(), schema.numeric_columns.begin(), schema.numeric_columns.end());
  write_csv_row(os, header);
  std::vector<std::string> row;
  for (const auto& trace : log.traces) {
    for (const auto& event : trace.events) {
      row.clear();
      row.push_back(trace.case_id);
      row.push_back(event.activity);
      row.push_back(format_timestamp(event.timestamp, schema.timestamp_format));
      row.push_back(trace.label ? "1" : "0");
      for (const auto& col : schema.categorical_columns) {
        auto it = event.attributes.find(col);
        row.push_back(it == event.attributes.end() ? std::string()
                                                   : std::get<std::string>(it->second));
      }
      for (const auto& col : schema.numeric_columns) {
        auto it = event.attributes.find(col);
        row.push_back(it == event.attributes.end() ? std::string()
                                                   : format_double(std::get<double>(it->second)));
      }
      write_csv_row(os, row);
    }
  }
}

inline constexpr std::optional<int> kUnboundedPrefixLength = std::nullopt;

// One PrefixInstance per L in [min_len, min(n, max_len)] per trace, ordered
// by case order then L ascending. Traces shorter than min_len contribute none.
inline std::vector<PrefixInstance> extract_prefixes(
    const EventLog& log, int min_len, std::optional<int> max_len = kUnboundedPrefixLength) {
  if (min_len < 1) throw ConfigError("min prefix length must be >= 1");
  if (max_len && *max_len < min_len)
    throw ConfigError("max prefix length must be >= min prefix length");
  std::vector<PrefixInstance> out;
  for (const auto& trace : log.traces) {
    const int n = static_cast<int>(trace.events.size());
    const int upper = max_len ? std::min(n, *max_len) : n;
    for (int len = min_len; len <= upper; ++len) {
      PrefixInstance p;
      p.case_id = trace.case_id;
      p.events.assign(trace.events.begin(), trace.events.begin() + len);
      p.prefix_length = len;
      p.label = trace.label;
      out.push_back(std::move(p));
    }
  }
  return out;
}

struct TemporalSplit {
  EventLog train;
  EventLog valid;
  EventLog test;
};

// Cases sorted by first-event timestamp (ties by case id); partition
// boundaries at floor(N*train) and floor(N*(train+valid)).
inline TemporalSplit temporal_split(const EventLog& log, const SplitSpec& spec) {
  spec.validate();
  std::vector<const Trace*> order;
  order.reserve(log.traces.size());
  for (const auto& trace : log.traces) {
    if (trace.events.empty()) throw EmptyDataError("case '" + trace.case_id + "' has no events");
    order.push_back(&trace);
  }
  std::sort(order.begin(), order.end(), [](const Trace* a, const Trace* b) {
    if (a->events.front().timestamp != b->events.front().timestamp)
      return a->events.front().timestamp < b->events.front().timestamp;
    return a->case_id < b->case_id;
  });
  const auto n = static_cast<double>(order.size());
  const auto b1 = static_cast<std::size_t>(std::floor(n * spec.train + 1e-9));
  const auto b2 = static_cast<std::size_t>(std::floor(n * (spec.train + spec.valid) + 1e-9));
  if (b1 == 0 || b2 <= b1 || b2 >= order.size())
    throw SplitError("temporal split would leave an empty partition (" +
                     std::to_string(order.size()) + " cases)");
  TemporalSplit split;
  for (std::size_t i = 0; i < order.size(); ++i) {
    EventLog& part = i < b1 ? split.train : (i < b2 ? split.valid : split.test);
    part.traces.push_back(*order[i]);
  }
  return split;
}

}  // namespace moelr
