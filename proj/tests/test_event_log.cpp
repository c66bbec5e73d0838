#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <limits>
#include <sstream>

#include "helpers/random_log.hpp"
#include "moelr/event_log.hpp"

using namespace moelr;
using Catch::Matchers::ContainsSubstring;

namespace {

LogSchema toy_schema() { return testutil::random_log_schema(); }

EventLog parse_text(const std::string& csv, const LogSchema& schema = toy_schema()) {
  std::istringstream in(csv);
  return parse_event_log(in, schema);
}

constexpr const char* kHeader = "case,activity,timestamp,label,grp,cost\n";

// Trace with `n` events starting at `start` (seconds), one minute apart.
Trace make_trace(const std::string& case_id, int n, std::int64_t start, int label = 1) {
  Trace t{case_id, {}, label};
  for (int i = 0; i < n; ++i)
    t.events.push_back(Event{"A", start + 60 * i, {}});
  return t;
}

}  // namespace

TEST_CASE("single case parses into one trace in timestamp order") {
  const auto log = parse_text(std::string(kHeader) +
                              "c1,A,2012-03-05T10:00:00Z,1,W,1.5\n"
                              "c1,B,2012-03-05T09:00:00Z,1,,\n"
                              "c1,A,2012-03-05T11:00:00Z,1,G,2\n");
  REQUIRE(log.traces.size() == 1);
  const auto& t = log.traces[0];
  CHECK(t.case_id == "c1");
  CHECK(t.label == 1);
  REQUIRE(t.events.size() == 3);
  CHECK(t.events[0].activity == "B");
  CHECK(t.events[1].activity == "A");
  CHECK(t.events[2].activity == "A");
  CHECK(t.events[0].attributes.empty());
  CHECK(std::get<std::string>(t.events[1].attributes.at("grp")) == "W");
  CHECK(std::get<double>(t.events[1].attributes.at("cost")) == 1.5);
}

TEST_CASE("interleaved cases are grouped independently") {
  const auto log = parse_text(std::string(kHeader) +
                              "c1,A,2020-01-01T00:00:10Z,1,,\n"
                              "c2,X,2020-01-01T00:00:05Z,0,,\n"
                              "c1,B,2020-01-01T00:00:01Z,1,,\n"
                              "c2,Y,2020-01-01T00:00:20Z,0,,\n");
  REQUIRE(log.traces.size() == 2);
  CHECK(log.traces[0].case_id == "c1");
  CHECK(log.traces[0].events[0].activity == "B");
  CHECK(log.traces[0].events[1].activity == "A");
  CHECK(log.traces[1].case_id == "c2");
  CHECK(log.traces[1].events[0].activity == "X");
  CHECK(log.traces[1].events[1].activity == "Y");
}

TEST_CASE("equal timestamps keep input order") {
  const auto log = parse_text(std::string(kHeader) +
                              "c1,first,2020-01-01T00:00:00Z,1,,\n"
                              "c1,second,2020-01-01T00:00:00Z,1,,\n");
  REQUIRE(log.traces[0].events.size() == 2);
  CHECK(log.traces[0].events[0].activity == "first");
  CHECK(log.traces[0].events[1].activity == "second");
}

TEST_CASE("missing label column is a schema error naming it") {
  CHECK_THROWS_MATCHES(parse_text("case,activity,timestamp,grp,cost\n"
                                  "c1,A,2020-01-01T00:00:00Z,W,1\n"),
                       SchemaError, Catch::Matchers::MessageMatches(ContainsSubstring("label")));
}

TEST_CASE("undeclared column is a schema error") {
  CHECK_THROWS_MATCHES(
      parse_text("case,activity,timestamp,label,grp,cost,mystery\n"),
      SchemaError, Catch::Matchers::MessageMatches(ContainsSubstring("mystery")));
}

TEST_CASE("unparseable timestamp reports the line number") {
  CHECK_THROWS_MATCHES(parse_text(std::string(kHeader) +
                                  "c1,A,2020-01-01T00:00:00Z,1,,\n"
                                  "c1,B,not-a-time,1,,\n"),
                       RowError, Catch::Matchers::MessageMatches(ContainsSubstring("line 3")));
}

TEST_CASE("label outside {0,1} is a label error") {
  CHECK_THROWS_AS(parse_text(std::string(kHeader) + "c1,A,2020-01-01T00:00:00Z,2,,\n"),
                  LabelError);
  CHECK_THROWS_AS(parse_text(std::string(kHeader) + "c1,A,2020-01-01T00:00:00Z,yes,,\n"),
                  LabelError);
}

TEST_CASE("conflicting labels within a case are rejected") {
  CHECK_THROWS_AS(parse_text(std::string(kHeader) +
                             "c1,A,2020-01-01T00:00:00Z,1,,\n"
                             "c1,B,2020-01-01T00:01:00Z,0,,\n"),
                  LabelError);
}

TEST_CASE("empty activity is a row error") {
  CHECK_THROWS_AS(parse_text(std::string(kHeader) + "c1,,2020-01-01T00:00:00Z,1,,\n"),
                  RowError);
}

TEST_CASE("prefixes per trace: one per length in range") {
  EventLog log;
  log.traces.push_back(make_trace("c1", 4, 1000));
  SECTION("min 2, unbounded: lengths 2,3,4") {
    const auto prefixes = extract_prefixes(log, 2);
    REQUIRE(prefixes.size() == 3);
    CHECK(prefixes[0].prefix_length == 2);
    CHECK(prefixes[1].prefix_length == 3);
    CHECK(prefixes[2].prefix_length == 4);
    for (const auto& p : prefixes) {
      CHECK(p.case_id == "c1");
      CHECK(p.label == 1);
      CHECK(p.events.size() == static_cast<std::size_t>(p.prefix_length));
      // Prefix is exactly the first L events.
      for (std::size_t i = 0; i < p.events.size(); ++i)
        CHECK(p.events[i] == log.traces[0].events[i]);
    }
  }
  SECTION("trace shorter than min contributes nothing") {
    EventLog single;
    single.traces.push_back(make_trace("c2", 1, 1000));
    CHECK(extract_prefixes(single, 2).empty());
  }
  SECTION("bounded max") {
    EventLog five;
    five.traces.push_back(make_trace("c3", 5, 1000));
    CHECK(extract_prefixes(five, 2, 3).size() == 2);
  }
}

TEST_CASE("prefix count matches the closed form on random logs") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    std::istringstream in(testutil::random_log_csv(seed));
    const auto log = parse_event_log(in, toy_schema());
    const int min_len = 1 + static_cast<int>(seed % 3);
    const std::optional<int> max_len =
        seed % 2 ? std::optional<int>(min_len + static_cast<int>(seed % 4)) : std::nullopt;
    std::size_t expected = 0;
    for (const auto& t : log.traces) {
      const int n = static_cast<int>(t.events.size());
      const int upper = max_len ? std::min(n, *max_len) : n;
      expected += static_cast<std::size_t>(std::max(0, upper - min_len + 1));
    }
    CHECK(extract_prefixes(log, min_len, max_len).size() == expected);
  }
}

TEST_CASE("temporal split sizes follow the boundary rule") {
  SECTION("10 cases, 0.8/0.1/0.1 -> 8,1,1") {
    EventLog log;
    for (int i = 0; i < 10; ++i)
      log.traces.push_back(make_trace("c" + std::to_string(i), 2, 1000 + i * 100));
    const auto split = temporal_split(log, SplitSpec{0.8, 0.1, 0.1});
    CHECK(split.train.traces.size() == 8);
    CHECK(split.valid.traces.size() == 1);
    CHECK(split.test.traces.size() == 1);
  }
  SECTION("5 cases, 0.64/0.16/0.20 -> 3,1,1") {
    EventLog log;
    for (int i = 0; i < 5; ++i)
      log.traces.push_back(make_trace("c" + std::to_string(i), 2, 1000 + i * 100));
    const auto split = temporal_split(log, SplitSpec{0.64, 0.16, 0.20});
    CHECK(split.train.traces.size() == 3);
    CHECK(split.valid.traces.size() == 1);
    CHECK(split.test.traces.size() == 1);
  }
  SECTION("2 cases cannot fill three partitions") {
    EventLog log;
    log.traces.push_back(make_trace("a", 2, 1000));
    log.traces.push_back(make_trace("b", 2, 2000));
    CHECK_THROWS_AS(temporal_split(log, SplitSpec{0.8, 0.1, 0.1}), SplitError);
  }
}

TEST_CASE("split spec validation") {
  CHECK_THROWS_AS((SplitSpec{0.5, 0.5, 0.5}.validate()), ConfigError);
  CHECK_THROWS_AS((SplitSpec{1.0, 0.0, 0.0}.validate()), ConfigError);
  CHECK_NOTHROW((SplitSpec{0.64, 0.16, 0.20}.validate()));
}

TEST_CASE("split is temporal: train cases start no later than test cases") {
  for (std::uint64_t seed = 30; seed < 50; ++seed) {
    std::istringstream in(testutil::random_log_csv(seed));
    const auto log = parse_event_log(in, toy_schema());
    if (log.traces.size() < 5) continue;
    const auto split = temporal_split(log, SplitSpec{0.64, 0.16, 0.20});
    auto first_ts = [](const Trace& t) { return t.events.front().timestamp; };
    std::int64_t train_max = std::numeric_limits<std::int64_t>::min();
    for (const auto& t : split.train.traces) train_max = std::max(train_max, first_ts(t));
    for (const auto& t : split.valid.traces) CHECK(first_ts(t) >= train_max);
    std::int64_t valid_max = train_max;
    for (const auto& t : split.valid.traces) valid_max = std::max(valid_max, first_ts(t));
    for (const auto& t : split.test.traces) CHECK(first_ts(t) >= valid_max);
    // No case appears twice.
    CHECK(split.train.traces.size() + split.valid.traces.size() + split.test.traces.size() ==
          log.traces.size());
  }
}

TEST_CASE("parse -> serialize -> parse is the identity") {
  const auto schema = toy_schema();
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    std::istringstream in(testutil::random_log_csv(seed));
    const auto first = parse_event_log(in, schema);
    std::ostringstream out;
    serialize_event_log(first, schema, out);
    std::istringstream again(out.str());
    const auto second = parse_event_log(again, schema);
    CHECK(first == second);
  }
}

TEST_CASE("alternate timestamp pattern round-trips") {
  LogSchema schema = toy_schema();
  schema.timestamp_format = "%Y-%m-%d %H:%M:%S";
  const auto log = parse_text(std::string(kHeader) + "c1,A,2014-10-22 11:15:41,1,,\n", schema);
  CHECK(log.traces[0].events[0].timestamp ==
        parse_timestamp("2014-10-22T11:15:41Z", kDefaultTimestampFormat).value());
  std::ostringstream out;
  serialize_event_log(log, schema, out);
  CHECK(out.str().find("2014-10-22 11:15:41") != std::string::npos);
}

TEST_CASE("fractional seconds are truncated") {
  const auto ts = parse_timestamp("2020-06-01T08:30:15.123Z", kDefaultTimestampFormat);
  REQUIRE(ts.has_value());
  CHECK(*ts == parse_timestamp("2020-06-01T08:30:15Z", kDefaultTimestampFormat).value());
}
