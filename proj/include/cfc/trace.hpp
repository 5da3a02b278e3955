#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfc/core.hpp"

namespace cfc {

// Shortest round-trip fixed-notation rendering ("1.5", "-3", "0.125").
std::string format_number(double x);

// "I <id> <left> <right>" or "D <id>".
std::string format_op(const UpdateOp& op);

// "R <id> <level> <index>" or "R <id> dummy".
std::string format_recolor(const RecolorEvent& ev);

// Parses the line-based update trace. Lines starting with '#' and blank
// lines are skipped. Any malformed or inconsistent line (say, a delete of an
// unknown id) raises InputError naming its 1-based line number.
std::vector<UpdateOp> parse_trace(std::istream& in);
std::vector<UpdateOp> parse_trace_string(std::string_view text);

void write_trace(std::ostream& out, std::span<const UpdateOp> ops);

// A recorded run: each update followed by the color changes it caused.
struct LogEntry {
  UpdateOp op;
  std::vector<RecolorEvent> recolors;
};

// Parses the output of `run` (update lines, R lines, '#' comments, and a
// trailing SUMMARY line, which is ignored).
std::vector<LogEntry> parse_run_log(std::istream& in);

// Splits on ASCII whitespace.
std::vector<std::string_view> split_ws(std::string_view line);

// Strict numeric parsing; throws InputError with the given context.
double parse_double(std::string_view token, const std::string& context);
long long parse_integer(std::string_view token, const std::string& context);

}  // namespace cfc
