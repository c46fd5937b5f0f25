#include "tdf/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace tdf {

namespace {

[[noreturn]] void fail_row(const std::string& origin, std::size_t row,
                           const std::string& message) {
  throw ValidationError(origin + ": row " + std::to_string(row) + ": " +
                        message);
}

std::string trim(std::string_view s) {
  const auto* ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    fields.push_back(trim(field));
  }
  if (!line.empty() && line.back() == ',') {
    fields.emplace_back();
  }
  return fields;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<ScoreRecord> parse_trace(std::istream& in,
                                     const std::string& origin) {
  std::vector<ScoreRecord> records;
  std::string line;
  std::size_t row = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) {
      continue;
    }
    if (!header_seen) {
      if (trim(line) != "cid,alpha,t_ms") {
        fail_row(origin, row, "expected header 'cid,alpha,t_ms'");
      }
      header_seen = true;
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() != 3) {
      fail_row(origin, row,
               "expected 3 fields, got " + std::to_string(fields.size()));
    }
    ScoreRecord rec;
    rec.cid = fields[0];
    if (rec.cid.empty()) {
      fail_row(origin, row, "empty classifier id");
    }
    {
      const auto& f = fields[1];
      auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), rec.alpha);
      if (ec != std::errc() || p != f.data() + f.size() ||
          !std::isfinite(rec.alpha)) {
        fail_row(origin, row, "invalid score '" + f + "'");
      }
    }
    {
      const auto& f = fields[2];
      auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), rec.t);
      if (ec != std::errc() || p != f.data() + f.size()) {
        fail_row(origin, row, "invalid timestamp '" + f + "'");
      }
      if (rec.t < 0) {
        fail_row(origin, row, "timestamp must be non-negative");
      }
    }
    records.push_back(std::move(rec));
  }
  if (!header_seen) {
    throw ValidationError(origin + ": empty trace (missing header)");
  }
  return records;
}

std::vector<ScoreRecord> parse_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open trace file: " + path);
  }
  return parse_trace(in, path);
}

void write_trace(std::ostream& out, const std::vector<ScoreRecord>& records) {
  out << "cid,alpha,t_ms\n";
  for (const auto& rec : records) {
    out << rec.cid << ',' << format_double(rec.alpha) << ',' << rec.t << '\n';
  }
}

void write_loop_trace(std::ostream& out, const Trace& trace) {
  out << "t_ms,context,beta,state,activated,completed,score_calcs\n";
  for (const auto& row : trace) {
    out << row.t << ',' << row.context << ',';
    if (row.beta.has_value()) {
      out << format_double(*row.beta);
    }
    out << ',' << device_state_name(row.state) << ',';
    for (std::size_t i = 0; i < row.activated.size(); ++i) {
      if (i > 0) {
        out << ';';
      }
      out << row.activated[i];
    }
    out << ',';
    for (std::size_t i = 0; i < row.completed.size(); ++i) {
      if (i > 0) {
        out << ';';
      }
      out << row.completed[i];
    }
    out << ',' << row.score_calcs << '\n';
  }
}

}  // namespace tdf
