#include "cfc/trace.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace cfc {

std::string format_number(double x) {
  if (x == 0.0) x = 0.0;  // fold -0
  char buf[512];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::fixed);
  if (ec != std::errc()) return std::to_string(x);
  return std::string(buf, end);
}

std::string format_op(const UpdateOp& op) {
  if (op.kind == UpdateOp::Kind::Insert) {
    return "I " + std::to_string(op.interval.id) + " " + format_number(op.interval.left) + " " +
           format_number(op.interval.right);
  }
  return "D " + std::to_string(op.id);
}

std::string format_recolor(const RecolorEvent& ev) {
  if (ev.color.is_dummy()) return "R " + std::to_string(ev.id) + " dummy";
  return "R " + std::to_string(ev.id) + " " + std::to_string(ev.color.level) + " " +
         std::to_string(ev.color.index);
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_double(std::string_view token, const std::string& context) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value)) {
    throw InputError(context + ": bad number '" + std::string(token) + "'");
  }
  return value;
}

long long parse_integer(std::string_view token, const std::string& context) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw InputError(context + ": bad integer '" + std::string(token) + "'");
  }
  return value;
}

namespace {

std::string line_ctx(std::size_t line_no) { return "line " + std::to_string(line_no); }

UpdateOp parse_op_tokens(const std::vector<std::string_view>& tok, std::size_t line_no) {
  const std::string ctx = line_ctx(line_no);
  if (tok[0] == "I") {
    if (tok.size() != 4) throw InputError(ctx + ": expected 'I <id> <left> <right>'");
    IntervalId id = parse_integer(tok[1], ctx);
    double l = parse_double(tok[2], ctx);
    double r = parse_double(tok[3], ctx);
    if (!(l < r)) throw InputError(ctx + ": left endpoint must be < right endpoint");
    return UpdateOp::insert(Interval{id, l, r});
  }
  if (tok[0] == "D") {
    if (tok.size() != 2) throw InputError(ctx + ": expected 'D <id>'");
    return UpdateOp::erase(parse_integer(tok[1], ctx));
  }
  throw InputError(ctx + ": unknown record '" + std::string(tok[0]) + "'");
}

void check_liveness(std::set<IntervalId>& live, const UpdateOp& op, std::size_t line_no) {
  if (op.kind == UpdateOp::Kind::Insert) {
    if (!live.insert(op.id).second) {
      throw InputError(line_ctx(line_no) + ": interval " + std::to_string(op.id) + " is already live");
    }
  } else if (live.erase(op.id) == 0) {
    throw InputError(line_ctx(line_no) + ": interval " + std::to_string(op.id) + " is not live");
  }
}

}  // namespace

std::vector<UpdateOp> parse_trace(std::istream& in) {
  std::vector<UpdateOp> ops;
  std::set<IntervalId> live;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tok = split_ws(line);
    if (tok.empty() || tok[0].front() == '#') continue;
    UpdateOp op = parse_op_tokens(tok, line_no);
    check_liveness(live, op, line_no);
    ops.push_back(op);
  }
  return ops;
}

std::vector<UpdateOp> parse_trace_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_trace(in);
}

void write_trace(std::ostream& out, std::span<const UpdateOp> ops) {
  for (const auto& op : ops) out << format_op(op) << '\n';
}

std::vector<LogEntry> parse_run_log(std::istream& in) {
  std::vector<LogEntry> entries;
  std::set<IntervalId> live;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tok = split_ws(line);
    if (tok.empty() || tok[0].front() == '#' || tok[0] == "SUMMARY") continue;
    const std::string ctx = line_ctx(line_no);
    if (tok[0] == "R") {
      if (entries.empty()) throw InputError(ctx + ": recolor line before any update");
      RecolorEvent ev;
      if (tok.size() == 3 && tok[2] == "dummy") {
        ev = {parse_integer(tok[1], ctx), Color::dummy(), false};
      } else if (tok.size() == 4) {
        long long level = parse_integer(tok[2], ctx);
        long long index = parse_integer(tok[3], ctx);
        if (level < 0 || index < 0) throw InputError(ctx + ": negative color component");
        ev = {parse_integer(tok[1], ctx),
              Color::palette(static_cast<int>(level), static_cast<int>(index)), false};
      } else {
        throw InputError(ctx + ": expected 'R <id> <level> <index>' or 'R <id> dummy'");
      }
      entries.back().recolors.push_back(ev);
      continue;
    }
    UpdateOp op = parse_op_tokens(tok, line_no);
    check_liveness(live, op, line_no);
    entries.push_back({op, {}});
  }
  return entries;
}

}  // namespace cfc
