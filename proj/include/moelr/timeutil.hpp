#pragma once

#include <cctype>
#include <cstdint>
#include <cstring>
#include <ctime>
#include <optional>
#include <string>
#include <string_view>

namespace moelr {

inline constexpr const char* kDefaultTimestampFormat = "%Y-%m-%dT%H:%M:%SZ";

// Parses `text` as a UTC instant using a strptime(3) pattern, at second
// precision. After the pattern is consumed, a fractional-seconds suffix
// (truncated) and a literal trailing 'Z' are tolerated.
inline std::optional<std::int64_t> parse_timestamp(const std::string& text,
                                                   const std::string& pattern) {
  // A trailing literal 'Z' in the pattern is handled by the leftover rules
  // below, so fractional seconds before it still parse.
  std::string effective = pattern;
  if (effective.size() >= 2 && effective.back() == 'Z' &&
      effective[effective.size() - 2] != '%')
    effective.pop_back();
  std::tm tm{};
  const char* end = ::strptime(text.c_str(), effective.c_str(), &tm);
  if (end == nullptr) return std::nullopt;
  std::string_view rest(end);
  if (!rest.empty() && rest.front() == '.') {
    rest.remove_prefix(1);
    if (rest.empty() || !std::isdigit(static_cast<unsigned char>(rest.front())))
      return std::nullopt;
    while (!rest.empty() && std::isdigit(static_cast<unsigned char>(rest.front())))
      rest.remove_prefix(1);
  }
  if (rest == "Z") rest = {};
  if (!rest.empty()) return std::nullopt;
  tm.tm_isdst = 0;
  return static_cast<std::int64_t>(::timegm(&tm));
}

inline std::string format_timestamp(std::int64_t epoch_seconds, const std::string& pattern) {
  std::time_t t = static_cast<std::time_t>(epoch_seconds);
  std::tm tm{};
  ::gmtime_r(&t, &tm);
  char buf[128];
  const std::size_t n = std::strftime(buf, sizeof buf, pattern.c_str(), &tm);
  return std::string(buf, n);
}

struct CivilFields {
  int hour;          // 0..23
  int weekday_mon0;  // 0 = Monday .. 6 = Sunday
  int month;         // 1..12
};

inline CivilFields civil_fields_utc(std::int64_t epoch_seconds) {
  std::time_t t = static_cast<std::time_t>(epoch_seconds);
  std::tm tm{};
  ::gmtime_r(&t, &tm);
  return CivilFields{tm.tm_hour, (tm.tm_wday + 6) % 7, tm.tm_mon + 1};
}

}  // namespace moelr
