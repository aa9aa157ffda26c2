#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace matpg {

struct EnvironmentSpec {
  int observation_dim = 1;
  int action_dim = 1;
  std::vector<std::array<double, 2>> action_bounds;  // per-dimension [low, high]
  int max_steps = 1000;
  int task_id = 0;
};

struct StepResult {
  std::vector<double> observation;
  double reward = 0.0;
  bool done = false;
};

/// Plug-in environment interface. Third-party environments (including
/// external physics engines) attach here without engine changes. Instances
/// are never shared across concurrent episodes; each worker makes its own.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::vector<double> reset(std::uint64_t seed) = 0;
  virtual StepResult step(std::span<const double> action) = 0;
  virtual EnvironmentSpec spec() const = 0;
};

/// A fixed set of tasks sharing observation/action shapes, plus optionally a
/// combined sequential episode visiting every task once in random order.
class EnvironmentSuite {
 public:
  virtual ~EnvironmentSuite() = default;

  virtual std::size_t task_count() const = 0;
  virtual int task_id(std::size_t index) const = 0;
  virtual std::unique_ptr<Environment> make_env(std::size_t task_index) const = 0;

  virtual bool supports_combined() const { return false; }
  virtual std::unique_ptr<Environment> make_combined_env() const { return nullptr; }

  virtual int observation_dim() const = 0;
  virtual int action_dim() const = 0;

  /// Emitted for action classes no edge owns; NaN actions also collapse to
  /// this value.
  virtual double default_action() const { return 0.0; }
};

}  // namespace matpg
