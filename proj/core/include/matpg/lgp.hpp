#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace matpg {

/// Thrown when a structurally-invalid object reaches execution. Programs are
/// validated at construction and mutation time, so hitting this indicates a
/// corrupted graph or checkpoint.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class Opcode : std::uint8_t {
  Add,
  Sub,
  Mul,
  Div,
  Max,
  Exp,
  Log,
  Sin,
  Cos,
  Tan,
  Mod,
};

inline constexpr std::size_t kOpcodeCount = 11;
inline constexpr std::size_t kRegisterCount = 8;

constexpr int arity(Opcode op) {
  switch (op) {
    case Opcode::Exp:
    case Opcode::Log:
    case Opcode::Sin:
    case Opcode::Cos:
    case Opcode::Tan:
      return 1;
    default:
      return 2;
  }
}

std::string_view opcode_name(Opcode op);
Opcode opcode_from_name(std::string_view name);

/// Applies one opcode to its operands. Operators are unprotected: division
/// by zero yields signed infinity and non-finite values propagate. The two
/// deliberate edges are log(x <= 0) -> NaN and mod with zero divisor -> NaN.
double apply_opcode(Opcode op, double a, double b);

struct OperandSource {
  enum class Kind : std::uint8_t { Register, Observation };
  Kind kind = Kind::Register;
  std::uint16_t index = 0;

  bool operator==(const OperandSource&) const = default;
};

struct Instruction {
  std::uint8_t dest = 0;
  Opcode op = Opcode::Add;
  OperandSource lhs;
  OperandSource rhs;  // stored but ignored for unary opcodes
  double constant = 1.0;

  bool operator==(const Instruction&) const = default;
};

/// A linear register-machine program. Immutable after construction; the
/// stored result of each instruction is constant * op(lhs, rhs), and the
/// program's output is register 0 after the last line.
class Program {
 public:
  explicit Program(std::vector<Instruction> lines);

  const std::vector<Instruction>& lines() const { return lines_; }
  std::size_t size() const { return lines_.size(); }

  /// Largest observation index read anywhere in the program, or -1 if the
  /// program never reads the observation.
  int max_observation_index() const { return max_obs_index_; }

  bool valid_for(std::size_t observation_dim) const {
    return max_obs_index_ < static_cast<int>(observation_dim);
  }

  bool operator==(const Program&) const = default;

 private:
  std::vector<Instruction> lines_;
  int max_obs_index_ = -1;
};

/// Runs the program on an observation: registers start at 0.0, lines execute
/// in order, and the final value of register 0 is returned. Pure: neither
/// the program nor the observation is modified.
double execute_program(const Program& program, std::span<const double> observation);

/// Maps NaN to -infinity so "highest bid" is well-defined at routing time.
/// Used only for bid comparisons, never for action values.
inline double sanitize_bid(double raw) {
  return raw != raw ? -std::numeric_limits<double>::infinity() : raw;
}

}  // namespace matpg
