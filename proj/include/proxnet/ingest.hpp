#pragma once

// File formats (edge lists, activity CSV, promotion CSV, attendance CSV),
// strict/lenient parsing with line-accurate errors, matching writers, and
// the bundled Southern Women attendance dataset.

#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "proxnet/activity.hpp"
#include "proxnet/graph.hpp"

namespace proxnet {

// Malformed input data. `lines` carries the offending 1-based line numbers.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& message,
                      std::vector<std::size_t> lines = {})
      : std::runtime_error(message), lines_(std::move(lines)) {}

  const std::vector<std::size_t>& lines() const { return lines_; }

 private:
  std::vector<std::size_t> lines_;
};

namespace detail {

// Shortest decimal string that round-trips the double (locale-free).
inline std::string format_double(double v) {
  std::array<char, 64> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf.data(), end);
}

inline std::optional<std::int64_t> parse_int64(std::string_view text) {
  std::int64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty()) return std::nullopt;
  return value;
}

inline std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

inline bool skippable(std::string_view line) {
  return line.empty() || line.front() == '#';
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string join_lines(const std::vector<std::size_t>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(lines[i]);
  }
  return out;
}

inline std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path.string());
  return in;
}

}  // namespace detail

struct EdgeListParse {
  std::vector<LabeledEdge> edges;
  std::vector<std::size_t> skipped_lines;  // malformed lines (lenient mode)
};

// Edge list: one `src<TAB>dst` pair per line; blank lines and lines starting
// with '#' are skipped. A line is malformed when it does not contain exactly
// two nonempty tab-separated fields. Strict mode throws a ParseError listing
// every malformed line; lenient mode skips them and reports their numbers.
inline EdgeListParse parse_edge_list(std::istream& in, bool lenient = false) {
  EdgeListParse out;
  std::vector<std::size_t> bad;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string_view line = detail::strip_cr(raw);
    if (detail::skippable(line)) continue;
    const auto fields = detail::split(line, '\t');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      bad.push_back(lineno);
      continue;
    }
    out.edges.push_back({std::string(fields[0]), std::string(fields[1])});
  }
  if (!bad.empty()) {
    if (!lenient) {
      throw ParseError("malformed edge list line(s): " +
                           detail::join_lines(bad),
                       bad);
    }
    out.skipped_lines = std::move(bad);
  }
  return out;
}

inline EdgeListParse parse_edge_list_file(const std::filesystem::path& path,
                                          bool lenient = false) {
  auto in = detail::open_or_throw(path);
  return parse_edge_list(in, lenient);
}

struct ActivityParse {
  ActivityLog log;
  std::size_t duplicates_collapsed = 0;
};

// Activity CSV with exact header `user,item,time`; rows are three
// comma-separated fields with a nonempty user and item and an integer time.
// Duplicate (user, item) rows collapse to the earliest time (counted).
// Blank and '#' lines are skipped anywhere.
inline ActivityParse parse_activity(std::istream& in) {
  ActivityParse out;
  std::string raw;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string_view line = detail::strip_cr(raw);
    if (detail::skippable(line)) continue;
    if (!have_header) {
      if (line != "user,item,time") {
        throw ParseError("expected header 'user,item,time' at line " +
                             std::to_string(lineno),
                         {lineno});
      }
      have_header = true;
      continue;
    }
    const auto fields = detail::split(line, ',');
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
      throw ParseError("malformed activity row " + std::to_string(lineno),
                       {lineno});
    }
    const auto time = detail::parse_int64(fields[2]);
    if (!time || *time < 0) {
      throw ParseError("time must be a nonnegative integer in activity row " +
                           std::to_string(lineno),
                       {lineno});
    }
    if (!out.log.add(fields[0], fields[1], *time)) {
      ++out.duplicates_collapsed;
    }
  }
  if (!have_header) {
    throw ParseError("missing header 'user,item,time'");
  }
  return out;
}

inline ActivityParse parse_activity_file(const std::filesystem::path& path) {
  auto in = detail::open_or_throw(path);
  return parse_activity(in);
}

// Promotion CSV with exact header `item,promotion_time`.
inline std::vector<std::pair<std::string, std::int64_t>> parse_promotions(
    std::istream& in) {
  std::vector<std::pair<std::string, std::int64_t>> out;
  std::string raw;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string_view line = detail::strip_cr(raw);
    if (detail::skippable(line)) continue;
    if (!have_header) {
      if (line != "item,promotion_time") {
        throw ParseError("expected header 'item,promotion_time' at line " +
                             std::to_string(lineno),
                         {lineno});
      }
      have_header = true;
      continue;
    }
    const auto fields = detail::split(line, ',');
    if (fields.size() != 2 || fields[0].empty()) {
      throw ParseError("malformed promotion row " + std::to_string(lineno),
                       {lineno});
    }
    const auto time = detail::parse_int64(fields[1]);
    if (!time) {
      throw ParseError("non-integer promotion_time in row " +
                           std::to_string(lineno),
                       {lineno});
    }
    out.emplace_back(std::string(fields[0]), *time);
  }
  if (!have_header) {
    throw ParseError("missing header 'item,promotion_time'");
  }
  return out;
}

inline std::vector<std::pair<std::string, std::int64_t>> parse_promotions_file(
    const std::filesystem::path& path) {
  auto in = detail::open_or_throw(path);
  return parse_promotions(in);
}

// Attendance CSV: header row is a corner cell (ignored) followed by event
// labels; each data row is an actor label followed by 0/1 cells.
inline BipartiteAttendance parse_attendance(std::istream& in) {
  std::string raw;
  std::size_t lineno = 0;
  std::vector<std::string> events;
  std::vector<std::string> actors;
  std::vector<std::vector<std::uint8_t>> cells;
  bool have_header = false;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string_view line = detail::strip_cr(raw);
    if (detail::skippable(line)) continue;
    const auto fields = detail::split(line, ',');
    if (!have_header) {
      if (fields.size() < 2) {
        throw ParseError("attendance header needs at least one event column",
                         {lineno});
      }
      for (std::size_t i = 1; i < fields.size(); ++i) {
        events.emplace_back(fields[i]);
      }
      have_header = true;
      continue;
    }
    if (fields.size() != events.size() + 1 || fields[0].empty()) {
      throw ParseError("malformed attendance row " + std::to_string(lineno),
                       {lineno});
    }
    std::vector<std::uint8_t> row;
    row.reserve(events.size());
    for (std::size_t i = 1; i < fields.size(); ++i) {
      if (fields[i] == "0") {
        row.push_back(0);
      } else if (fields[i] == "1") {
        row.push_back(1);
      } else {
        throw ParseError("attendance cell must be 0 or 1 at line " +
                             std::to_string(lineno),
                         {lineno});
      }
    }
    actors.emplace_back(fields[0]);
    cells.push_back(std::move(row));
  }
  if (!have_header) {
    throw ParseError("missing attendance header");
  }
  return BipartiteAttendance(std::move(actors), std::move(events),
                             std::move(cells));
}

inline BipartiteAttendance parse_attendance_file(
    const std::filesystem::path& path) {
  auto in = detail::open_or_throw(path);
  return parse_attendance(in);
}

// Writers — inverses of the parsers above (round-trip safe).

inline void write_edge_list(std::ostream& out, const DirectedGraph& g) {
  for (auto [u, v] : g.edges()) {
    out << g.label(u) << '\t' << g.label(v) << '\n';
  }
}

inline void write_activity(std::ostream& out, const ActivityLog& log) {
  out << "user,item,time\n";
  for (const auto& rec : log.records()) {
    out << log.user_label(rec.user) << ',' << log.item_label(rec.item) << ','
        << rec.time << '\n';
  }
}

inline void write_attendance(std::ostream& out,
                             const BipartiteAttendance& data) {
  out << "actor";
  for (const auto& e : data.events()) out << ',' << e;
  out << '\n';
  for (std::size_t a = 0; a < data.actor_count(); ++a) {
    out << data.actors()[a];
    for (std::size_t e = 0; e < data.event_count(); ++e) {
      out << ',' << (data.attended(a, e) ? '1' : '0');
    }
    out << '\n';
  }
}

// The classic Davis-Gardner-Gardner "Southern Women" dataset: attendance of
// 18 women at 14 social events, reproduced verbatim from the standard
// archival attendance matrix (row sums 8,7,8,7,4,4,4,3,4,4,4,6,7,8,5,2,2,2;
// 89 attendances in total).
inline const BipartiteAttendance& southern_women() {
  static const BipartiteAttendance data = [] {
    const std::vector<std::string> women = {
        "Evelyn", "Laura",  "Theresa",   "Brenda", "Charlotte", "Frances",
        "Eleanor", "Pearl", "Ruth",      "Verne",  "Myrna",     "Katherine",
        "Sylvia",  "Nora",  "Helen",     "Dorothy", "Olivia",   "Flora"};
    std::vector<std::string> events;
    for (int e = 1; e <= 14; ++e) events.push_back("E" + std::to_string(e));
    const std::array<std::array<std::uint8_t, 14>, 18> m = {{
        {1, 1, 1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 0, 0},  // Evelyn
        {1, 1, 1, 0, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0},  // Laura
        {0, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0},  // Theresa
        {1, 0, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0},  // Brenda
        {0, 0, 1, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0},  // Charlotte
        {0, 0, 1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0},  // Frances
        {0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0},  // Eleanor
        {0, 0, 0, 0, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0},  // Pearl
        {0, 0, 0, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 0},  // Ruth
        {0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 1, 0, 0},  // Verne
        {0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 1, 0, 0},  // Myrna
        {0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 1, 1, 1},  // Katherine
        {0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 0, 1, 1, 1},  // Sylvia
        {0, 0, 0, 0, 0, 1, 1, 0, 1, 1, 1, 1, 1, 1},  // Nora
        {0, 0, 0, 0, 0, 0, 1, 1, 0, 1, 1, 1, 0, 0},  // Helen
        {0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0},  // Dorothy
        {0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0},  // Olivia
        {0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0},  // Flora
    }};
    std::vector<std::vector<std::uint8_t>> rows;
    rows.reserve(m.size());
    for (const auto& r : m) rows.emplace_back(r.begin(), r.end());
    return BipartiteAttendance(women, std::move(events), std::move(rows));
  }();
  return data;
}

// Activity view of an attendance table: each actor "recommends" each event
// they attended, all at time 0 (attendance data carries no timestamps).
inline ActivityLog attendance_activity_log(const BipartiteAttendance& data) {
  ActivityLog log;
  for (std::size_t a = 0; a < data.actor_count(); ++a) {
    for (std::size_t e = 0; e < data.event_count(); ++e) {
      if (data.attended(a, e)) {
        log.add(data.actors()[a], data.events()[e], 0);
      }
    }
  }
  return log;
}

// A named dataset shipped with the toolkit.
struct DatasetBundle {
  std::string name;
  std::optional<BipartiteAttendance> attendance;
  std::optional<ActivityLog> activity;
};

inline DatasetBundle load_dataset(std::string_view name) {
  if (name == "southern-women") {
    DatasetBundle b;
    b.name = std::string(name);
    b.attendance = southern_women();
    b.activity = attendance_activity_log(*b.attendance);
    return b;
  }
  throw std::invalid_argument("unknown dataset: " + std::string(name));
}

}  // namespace proxnet
