#pragma once

#include <memory>
#include <vector>

#include "matpg/environment.hpp"
#include "matpg/rng.hpp"

namespace matpg {

/// Task modes of the built-in desk-scale suite: one 1-D point-mass body, one
/// randomly placed task zone per episode, and five mutually independent ways
/// the zone must be negotiated. Ids are ordered easiest-first.
enum class TaskMode : int {
  Reach = 0,      // drive to the zone center
  Brake = 1,      // arrive below a speed cap
  Oscillate = 2,  // track an alternating reference velocity inside the zone
  Reverse = 3,    // back out of the zone once before proceeding
  Hold = 4,       // keep near-zero velocity inside the zone
};

inline constexpr int kPointMassTaskCount = 5;

/// Tunables for the point-mass family.
///
/// Why the tasks are pairwise non-reducible: every task requires the
/// auxiliary action (the "posture" channel, action class 1) to sit inside a
/// task-specific band while the body is inside the zone, and the five bands
/// are pairwise disjoint. Eight in-zone steps with the posture outside the
/// band terminate the episode, and leaving the zone forward without
/// completing the task terminates as well, so a policy tuned to task i is
/// cut off near the zone entry of any task j != i and collects only the
/// approach reward (a few percent of a completed episode; episode scores are
/// dominated by the completion bonus). On top of the bands, each task gates
/// completion on a distinct velocity profile: unconstrained arrival (Reach),
/// capped arrival speed (Brake), alternating-sign reference tracking
/// (Oscillate), a mandatory back-out excursion (Reverse), and a near-rest
/// dwell (Hold). No single profile satisfies another task's gate.
struct PointMassConfig {
  double dt = 0.05;
  double section_length = 1.0;
  double zone_center_lo = 0.4;  // proportional analog of "between the 4th and 5th meter"
  double zone_center_hi = 0.5;
  double zone_half_width = 0.08;
  double top_speed = 0.2;
  double progress_reward_scale = 2.0;
  double completion_bonus = 10.0;
  int max_steps = 250;
  int action_dim = 2;  // force + posture; extra actuators are inert

  // Posture bands per task, pairwise disjoint.
  double posture_band_lo[kPointMassTaskCount] = {0.5, -1.0, -0.12, 0.18, -0.45};
  double posture_band_hi[kPointMassTaskCount] = {1.0, -0.5, 0.12, 0.45, -0.18};
  int key_required_steps = 5;   // in-zone steps inside the band to unlock success
  int wrong_key_limit = 12;     // in-zone steps outside the band before failing

  // Task-specific gates.
  double brake_speed_cap = 0.12;
  double oscillate_ref_speed = 0.05;
  double oscillate_tolerance = 0.07;
  int oscillate_half_period = 8;
  int oscillate_required_steps = 16;
  int oscillate_violation_limit = 10;  // consecutive tracking misses allowed
  double reverse_backout_margin = 0.02;
  double hold_speed_limit = 0.04;
  int hold_required_steps = 8;

  void validate() const;
};

/// Observation layout (5 entries):
///   s0 = position, s1 = velocity, s2 = task signal (reference velocity /
///   back-out flag / hold progress), s3 = task identifier, s4 = distance to
///   the zone center (center - position, negative past the center).
/// The last two entries are always [task_id, distance_to_center].
class PointMassEnv : public Environment {
 public:
  PointMassEnv(TaskMode task, PointMassConfig cfg);

  std::vector<double> reset(std::uint64_t seed) override;
  StepResult step(std::span<const double> action) override;
  EnvironmentSpec spec() const override;

  double zone_center() const { return zone_center_; }
  bool succeeded() const { return succeeded_; }

 private:
  std::vector<double> observation() const;
  double signal() const;

  TaskMode task_;
  PointMassConfig cfg_;

  double position_ = 0.0;
  double velocity_ = 0.0;
  double zone_center_ = 0.0;
  int steps_ = 0;
  int in_zone_steps_ = 0;
  int key_steps_ = 0;
  int wrong_key_steps_ = 0;
  int hold_steps_ = 0;
  int oscillate_misses_ = 0;
  bool zone_entered_ = false;
  bool backed_out_ = false;
  bool succeeded_ = false;
  bool done_ = true;
};

/// Combined sequential episode: every suite task exactly once, in an order
/// drawn from the reset seed. Each section starts from rest with a fresh
/// zone draw; a section failure ends the whole episode.
class CombinedPointMassEnv : public Environment {
 public:
  CombinedPointMassEnv(std::vector<TaskMode> tasks, PointMassConfig cfg);

  std::vector<double> reset(std::uint64_t seed) override;
  StepResult step(std::span<const double> action) override;
  EnvironmentSpec spec() const override;

  const std::vector<TaskMode>& episode_order() const { return order_; }

 private:
  std::vector<TaskMode> tasks_;
  PointMassConfig cfg_;
  std::vector<TaskMode> order_;
  std::size_t section_ = 0;
  std::uint64_t seed_ = 0;
  std::unique_ptr<PointMassEnv> current_;
  bool done_ = true;
};

class PointMassSuite : public EnvironmentSuite {
 public:
  PointMassSuite(std::vector<int> task_ids, PointMassConfig cfg);

  std::size_t task_count() const override { return task_ids_.size(); }
  int task_id(std::size_t index) const override { return task_ids_[index]; }
  std::unique_ptr<Environment> make_env(std::size_t task_index) const override;
  bool supports_combined() const override { return true; }
  std::unique_ptr<Environment> make_combined_env() const override;
  int observation_dim() const override { return 5; }
  int action_dim() const override { return cfg_.action_dim; }

  const PointMassConfig& config() const { return cfg_; }

 private:
  std::vector<int> task_ids_;
  PointMassConfig cfg_;
};

/// Builds the toy suite for a distinct set of task ids, each in [0, 5).
PointMassSuite make_suite(const std::vector<int>& task_ids, PointMassConfig cfg = {});

}  // namespace matpg
