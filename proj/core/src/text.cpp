#include "matpg/text.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <vector>

namespace matpg {

std::string format_double(double value) {
  if (std::isnan(value)) {
    return "nan";
  }
  if (std::isinf(value)) {
    return value > 0 ? "inf" : "-inf";
  }
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  assert(ec == std::errc());
  return std::string(buf, ptr);
}

std::string format_double_hex(double value) {
  if (std::isnan(value)) {
    return "nan";
  }
  if (std::isinf(value)) {
    return value > 0 ? "inf" : "-inf";
  }
  char buf[64];
  const int n = std::snprintf(buf, sizeof(buf), "%a", value);
  assert(n > 0 && n < static_cast<int>(sizeof(buf)));
  return std::string(buf, buf + n);
}

double parse_double(std::string_view text) {
  if (text == "nan") {
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (text == "inf") {
    return std::numeric_limits<double>::infinity();
  }
  if (text == "-inf") {
    return -std::numeric_limits<double>::infinity();
  }
  // strtod handles both decimal and 0x hex-float forms.
  const std::string owned(text);
  char* end = nullptr;
  const double value = std::strtod(owned.c_str(), &end);
  if (end != owned.c_str() + owned.size()) {
    throw StructuralError("malformed float literal: " + owned);
  }
  return value;
}

namespace {

OperandSource operand_from_text(std::string_view token) {
  if (token.size() < 2 || (token[0] != 'r' && token[0] != 's')) {
    throw StructuralError("malformed operand: " + std::string(token));
  }
  OperandSource src;
  src.kind = token[0] == 'r' ? OperandSource::Kind::Register
                             : OperandSource::Kind::Observation;
  unsigned idx = 0;
  auto [ptr, ec] = std::from_chars(token.data() + 1, token.data() + token.size(), idx);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw StructuralError("malformed operand index: " + std::string(token));
  }
  src.index = static_cast<std::uint16_t>(idx);
  return src;
}

std::string operand_to_text(const OperandSource& src) {
  return (src.kind == OperandSource::Kind::Register ? "r" : "s") +
         std::to_string(src.index);
}

std::string_view trimmed(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

std::string instruction_to_text(const Instruction& instruction) {
  std::string out = "r" + std::to_string(instruction.dest) + " <- " +
                    format_double_hex(instruction.constant) + " * " +
                    std::string(opcode_name(instruction.op)) + "(" +
                    operand_to_text(instruction.lhs) + ", " +
                    operand_to_text(instruction.rhs) + ")";
  return out;
}

Instruction instruction_from_text(std::string_view line) {
  const std::string_view text = trimmed(line);
  const auto arrow = text.find("<-");
  const auto star = text.find('*', arrow == std::string_view::npos ? 0 : arrow);
  const auto open = text.find('(', star == std::string_view::npos ? 0 : star);
  const auto comma = text.find(',', open == std::string_view::npos ? 0 : open);
  const auto close = text.rfind(')');
  if (arrow == std::string_view::npos || star == std::string_view::npos ||
      open == std::string_view::npos || comma == std::string_view::npos ||
      close == std::string_view::npos || close < comma) {
    throw StructuralError("malformed instruction line: " + std::string(line));
  }

  Instruction instr;
  const std::string_view dest = trimmed(text.substr(0, arrow));
  if (dest.size() < 2 || dest[0] != 'r') {
    throw StructuralError("malformed destination: " + std::string(dest));
  }
  instr.dest = static_cast<std::uint8_t>(std::stoul(std::string(dest.substr(1))));
  instr.constant = parse_double(trimmed(text.substr(arrow + 2, star - arrow - 2)));
  instr.op = opcode_from_name(trimmed(text.substr(star + 1, open - star - 1)));
  instr.lhs = operand_from_text(trimmed(text.substr(open + 1, comma - open - 1)));
  instr.rhs = operand_from_text(trimmed(text.substr(comma + 1, close - comma - 1)));
  return instr;
}

std::string program_to_text(const Program& program) {
  std::string out;
  for (const Instruction& line : program.lines()) {
    out += instruction_to_text(line);
    out += '\n';
  }
  return out;
}

Program program_from_text(std::string_view text) {
  std::vector<Instruction> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    const std::string_view line = trimmed(text.substr(start, end - start));
    if (!line.empty()) {
      lines.push_back(instruction_from_text(line));
    }
    start = end + 1;
  }
  return Program(std::move(lines));
}

}  // namespace matpg
