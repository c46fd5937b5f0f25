#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tdf/authloop.hpp"
#include "tdf/core.hpp"

namespace tdf {

// Formats a double with enough digits to round-trip exactly ("%.17g").
std::string format_double(double v);

// Reads a score trace: header line `cid,alpha,t_ms`, then one record per
// row. Rows are returned in file order. Malformed input raises
// ValidationError naming the origin and 1-based row number (the header is
// row 1).
std::vector<ScoreRecord> parse_trace(std::istream& in,
                                     const std::string& origin);
std::vector<ScoreRecord> parse_trace_file(const std::string& path);

// Writes records in the same format parse_trace reads.
void write_trace(std::ostream& out, const std::vector<ScoreRecord>& records);

// Writes an authentication-loop trace:
//   t_ms,context,beta,state,activated,completed,score_calcs
// `beta` is left empty when the fused score is absent; the activation and
// completion lists are joined with ';'.
void write_loop_trace(std::ostream& out, const Trace& trace);

}  // namespace tdf
