#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>

#include "matpg/lgp.hpp"
#include "matpg/variation.hpp"

using namespace matpg;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Instruction line(std::uint8_t dest, Opcode op, OperandSource lhs, OperandSource rhs,
                 double constant) {
  return Instruction{dest, op, lhs, rhs, constant};
}

OperandSource reg(std::uint16_t i) {
  return {OperandSource::Kind::Register, i};
}

OperandSource obs(std::uint16_t i) {
  return {OperandSource::Kind::Observation, i};
}

MutationConfig small_cfg(int lines, int obs_dim) {
  MutationConfig cfg;
  cfg.init_program_size = lines;
  cfg.observation_dim = obs_dim;
  return cfg;
}

}  // namespace

TEST_CASE("opcode table: 11 opcodes with the expected arities") {
  CHECK(kOpcodeCount == 11);
  CHECK(arity(Opcode::Add) == 2);
  CHECK(arity(Opcode::Sub) == 2);
  CHECK(arity(Opcode::Mul) == 2);
  CHECK(arity(Opcode::Div) == 2);
  CHECK(arity(Opcode::Max) == 2);
  CHECK(arity(Opcode::Mod) == 2);
  CHECK(arity(Opcode::Exp) == 1);
  CHECK(arity(Opcode::Log) == 1);
  CHECK(arity(Opcode::Sin) == 1);
  CHECK(arity(Opcode::Cos) == 1);
  CHECK(arity(Opcode::Tan) == 1);
  for (std::size_t i = 0; i < kOpcodeCount; ++i) {
    const Opcode op = static_cast<Opcode>(i);
    CHECK(opcode_from_name(opcode_name(op)) == op);
  }
}

TEST_CASE("apply_opcode basics and edge behavior") {
  CHECK(apply_opcode(Opcode::Add, 2.0, 3.0) == 5.0);
  CHECK(apply_opcode(Opcode::Div, 1.0, 0.0) == kInf);
  CHECK(apply_opcode(Opcode::Div, -1.0, 0.0) == -kInf);
  CHECK(apply_opcode(Opcode::Max, -1.0, -7.19) == -1.0);
  CHECK(std::isnan(apply_opcode(Opcode::Log, -0.5, 0.0)));
  CHECK(std::isnan(apply_opcode(Opcode::Log, 0.0, 0.0)));
  CHECK(std::isnan(apply_opcode(Opcode::Mod, 3.0, 0.0)));
  // mod takes the sign of the dividend
  CHECK(apply_opcode(Opcode::Mod, -7.0, 3.0) == doctest::Approx(-1.0));
  CHECK(apply_opcode(Opcode::Mod, 7.0, -3.0) == doctest::Approx(1.0));
  CHECK(apply_opcode(Opcode::Exp, 0.0, 99.0) == 1.0);
  // non-finite operands propagate
  CHECK(std::isnan(apply_opcode(Opcode::Mul, std::nan(""), 2.0)));
  CHECK(apply_opcode(Opcode::Add, kInf, 1.0) == kInf);
}

TEST_CASE("execute_program: the printed champion sub-expression evaluates as stated") {
  // r1 <- 0.064883 * cos(s18); r0 <- 1.0 * sin(r1)
  Program program({
      line(1, Opcode::Cos, obs(18), reg(0), 0.064883),
      line(0, Opcode::Sin, reg(1), reg(0), 1.0),
  });
  std::vector<double> observation(19, 0.0);
  const double out = execute_program(program, observation);
  CHECK(out == doctest::Approx(0.0648375).epsilon(1e-6));
  // frozen independent scalar evaluation
  CHECK(out == doctest::Approx(0.06483748546596015).epsilon(1e-12));
}

TEST_CASE("execute_program: registers start at zero and register 0 is the output") {
  std::vector<double> observation = {4.0, 5.0};
  SUBCASE("reads of never-written registers give zero") {
    Program program({line(0, Opcode::Add, reg(1), reg(2), 1.0)});
    CHECK(execute_program(program, observation) == 0.0);
  }
  SUBCASE("writes to other registers do not leak into the output") {
    Program program({line(3, Opcode::Add, obs(0), obs(1), 2.0)});
    CHECK(execute_program(program, observation) == 0.0);
  }
  SUBCASE("constant multiplies the raw operation result") {
    Program program({line(0, Opcode::Add, obs(0), obs(1), 0.5)});
    CHECK(execute_program(program, observation) == 4.5);
  }
}

TEST_CASE("execute_program rejects observation reads past the vector length") {
  Program program({line(0, Opcode::Add, obs(7), reg(0), 1.0)});
  std::vector<double> observation(3, 0.0);
  CHECK_THROWS_AS(execute_program(program, observation), StructuralError);
}

TEST_CASE("programs must keep at least one line and valid indices") {
  CHECK_THROWS_AS(Program({}), StructuralError);
  CHECK_THROWS_AS(Program({line(9, Opcode::Add, reg(0), reg(0), 1.0)}),
                  StructuralError);
  CHECK_THROWS_AS(Program({line(0, Opcode::Add, reg(12), reg(0), 1.0)}),
                  StructuralError);
}

TEST_CASE("determinism and purity over 1000 random programs") {
  RngStream rng(2024);
  const MutationConfig cfg = small_cfg(12, 6);
  for (int i = 0; i < 1000; ++i) {
    const Program program = random_program(rng, cfg);
    std::vector<double> observation(6);
    for (double& x : observation) {
      x = rng.uniform(-10.0, 10.0);
    }
    const std::vector<double> obs_copy = observation;
    const std::vector<Instruction> lines_copy = program.lines();

    const double a = execute_program(program, observation);
    const double b = execute_program(program, observation);
    // bit-identical, including NaN
    CHECK(std::memcmp(&a, &b, sizeof(double)) == 0);
    CHECK(observation == obs_copy);
    CHECK(program.lines() == lines_copy);
  }
}

TEST_CASE("doubling an instruction's constant exactly doubles its stored result") {
  RngStream rng(99);
  MutationConfig cfg = small_cfg(1, 4);
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    Instruction instr = random_instruction(rng, cfg);
    instr.dest = 0;
    instr.constant = rng.uniform(-8.0, 8.0);
    std::vector<double> observation(4);
    for (double& x : observation) {
      x = rng.uniform(-4.0, 4.0);
    }
    const double once = execute_program(Program({instr}), observation);
    Instruction doubled = instr;
    doubled.constant = 2.0 * instr.constant;
    const double twice = execute_program(Program({doubled}), observation);
    if (std::isnan(once)) {
      CHECK(std::isnan(twice));
      continue;
    }
    CHECK(twice == 2.0 * once);
    ++checked;
  }
  CHECK(checked > 1500);
}

TEST_CASE("sanitize_bid maps NaN to -infinity and passes everything else") {
  CHECK(sanitize_bid(std::nan("")) == -kInf);
  CHECK(sanitize_bid(kInf) == kInf);
  CHECK(sanitize_bid(-kInf) == -kInf);
  CHECK(sanitize_bid(0.5) == 0.5);
  CHECK(sanitize_bid(0.0) == 0.0);
}
