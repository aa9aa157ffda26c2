#include "matpg/lgp.hpp"

#include <array>
#include <cmath>
#include <string>

namespace matpg {

namespace {
constexpr std::array<std::string_view, kOpcodeCount> kOpcodeNames = {
    "add", "sub", "mul", "div", "max", "exp", "log", "sin", "cos", "tan", "mod"};
}  // namespace

std::string_view opcode_name(Opcode op) {
  return kOpcodeNames[static_cast<std::size_t>(op)];
}

Opcode opcode_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kOpcodeNames.size(); ++i) {
    if (kOpcodeNames[i] == name) {
      return static_cast<Opcode>(i);
    }
  }
  throw StructuralError("unknown opcode name: " + std::string(name));
}

double apply_opcode(Opcode op, double a, double b) {
  switch (op) {
    case Opcode::Add:
      return a + b;
    case Opcode::Sub:
      return a - b;
    case Opcode::Mul:
      return a * b;
    case Opcode::Div:
      return a / b;
    case Opcode::Max:
      return std::fmax(a, b);
    case Opcode::Exp:
      return std::exp(a);
    case Opcode::Log:
      return a > 0.0 ? std::log(a) : std::numeric_limits<double>::quiet_NaN();
    case Opcode::Sin:
      return std::sin(a);
    case Opcode::Cos:
      return std::cos(a);
    case Opcode::Tan:
      return std::tan(a);
    case Opcode::Mod:
      return std::fmod(a, b);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

Program::Program(std::vector<Instruction> lines) : lines_(std::move(lines)) {
  if (lines_.empty()) {
    throw StructuralError("program must have at least one line");
  }
  for (const Instruction& line : lines_) {
    if (line.dest >= kRegisterCount) {
      throw StructuralError("instruction destination register out of range");
    }
    for (const OperandSource* src : {&line.lhs, &line.rhs}) {
      if (src->kind == OperandSource::Kind::Register) {
        if (src->index >= kRegisterCount) {
          throw StructuralError("instruction register operand out of range");
        }
      } else {
        max_obs_index_ = std::max(max_obs_index_, static_cast<int>(src->index));
      }
    }
  }
}

double execute_program(const Program& program, std::span<const double> observation) {
  if (!program.valid_for(observation.size())) {
    throw StructuralError("program reads past the observation length");
  }
  std::array<double, kRegisterCount> regs{};
  for (const Instruction& line : program.lines()) {
    const double a = line.lhs.kind == OperandSource::Kind::Register
                         ? regs[line.lhs.index]
                         : observation[line.lhs.index];
    const double b = line.rhs.kind == OperandSource::Kind::Register
                         ? regs[line.rhs.index]
                         : observation[line.rhs.index];
    regs[line.dest] = line.constant * apply_opcode(line.op, a, b);
  }
  return regs[0];
}

}  // namespace matpg
