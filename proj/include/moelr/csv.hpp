#pragma once

#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "moelr/errors.hpp"

namespace moelr {

// Minimal RFC-4180 reader: quoted fields may contain commas, doubled quotes,
// and newlines. Records are pulled one at a time.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // Next record, or nullopt at end of input. `line` receives the 1-based
  // line number on which the record starts.
  std::optional<std::vector<std::string>> next(std::size_t* line = nullptr) {
    int c = in_.get();
    if (c == std::char_traits<char>::eof()) return std::nullopt;
    if (line) *line = line_;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    while (true) {
      if (c == std::char_traits<char>::eof()) {
        if (quoted) throw SchemaError("unterminated quoted CSV field");
        fields.push_back(std::move(field));
        return fields;
      }
      const char ch = static_cast<char>(c);
      if (quoted) {
        if (ch == '"') {
          if (in_.peek() == '"') {
            in_.get();
            field.push_back('"');
          } else {
            quoted = false;
          }
        } else {
          if (ch == '\n') ++line_;
          field.push_back(ch);
        }
      } else if (ch == '"' && field.empty()) {
        quoted = true;
      } else if (ch == ',') {
        fields.push_back(std::move(field));
        field.clear();
      } else if (ch == '\n' || ch == '\r') {
        if (ch == '\r' && in_.peek() == '\n') in_.get();
        ++line_;
        fields.push_back(std::move(field));
        return fields;
      } else {
        field.push_back(ch);
      }
      c = in_.get();
    }
  }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
};

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out;
  out.reserve(s.size() + 2);
  out.push_back('"');
  for (char ch : s) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os.put(',');
    os << csv_quote(fields[i]);
  }
  os.put('\n');
}

// Shortest decimal representation that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last || s.empty()) return std::nullopt;
  return v;
}

}  // namespace moelr
