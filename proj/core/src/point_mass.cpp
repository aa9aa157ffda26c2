#include "matpg/point_mass.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace matpg {

void PointMassConfig::validate() const {
  if (dt <= 0.0 || section_length <= 0.0 || top_speed <= 0.0) {
    throw std::invalid_argument("point-mass dynamics constants must be positive");
  }
  if (!(zone_center_lo < zone_center_hi) || zone_center_lo <= 0.0 ||
      zone_center_hi >= section_length) {
    throw std::invalid_argument("zone center interval must lie inside the section");
  }
  if (max_steps < 1 || action_dim < 2) {
    throw std::invalid_argument("max_steps >= 1 and action_dim >= 2 required");
  }
  for (int t = 0; t < kPointMassTaskCount; ++t) {
    if (!(posture_band_lo[t] < posture_band_hi[t])) {
      throw std::invalid_argument("posture band must be a proper interval");
    }
    for (int u = t + 1; u < kPointMassTaskCount; ++u) {
      const bool overlap = posture_band_lo[t] <= posture_band_hi[u] &&
                           posture_band_lo[u] <= posture_band_hi[t];
      if (overlap) {
        throw std::invalid_argument("posture bands must be pairwise disjoint");
      }
    }
  }
}

PointMassEnv::PointMassEnv(TaskMode task, PointMassConfig cfg)
    : task_(task), cfg_(cfg) {
  cfg_.validate();
}

std::vector<double> PointMassEnv::reset(std::uint64_t seed) {
  RngStream rng(seed);
  position_ = 0.0;
  velocity_ = 0.0;
  zone_center_ = rng.uniform(cfg_.zone_center_lo, cfg_.zone_center_hi);
  steps_ = 0;
  in_zone_steps_ = 0;
  key_steps_ = 0;
  wrong_key_steps_ = 0;
  hold_steps_ = 0;
  oscillate_misses_ = 0;
  zone_entered_ = false;
  backed_out_ = false;
  succeeded_ = false;
  done_ = false;
  return observation();
}

double PointMassEnv::signal() const {
  switch (task_) {
    case TaskMode::Oscillate: {
      const int phase = in_zone_steps_ / cfg_.oscillate_half_period;
      return (phase % 2 == 0) ? cfg_.oscillate_ref_speed : -cfg_.oscillate_ref_speed;
    }
    case TaskMode::Reverse:
      // Three-phase indicator: approaching, inside (must back out), done.
      return zone_entered_ ? (backed_out_ ? 1.0 : -1.0) : 0.0;
    case TaskMode::Hold:
      return static_cast<double>(hold_steps_) /
             static_cast<double>(cfg_.hold_required_steps);
    default:
      return 0.0;
  }
}

std::vector<double> PointMassEnv::observation() const {
  return {position_, velocity_, signal(),
          static_cast<double>(static_cast<int>(task_)), zone_center_ - position_};
}

StepResult PointMassEnv::step(std::span<const double> action) {
  if (done_) {
    throw std::logic_error("step called on a finished episode; call reset first");
  }
  if (action.size() < 2) {
    throw std::invalid_argument("point-mass actions need at least two entries");
  }
  auto clamped = [](double a) {
    if (a != a) {
      return 0.0;  // NaN falls back to the default action
    }
    return std::clamp(a, -1.0, 1.0);
  };
  const double force = clamped(action[0]);
  const double posture = clamped(action[1]);

  // The oscillation reference the agent was shown *before* this step.
  const double ref = signal();

  const double old_position = position_;
  velocity_ = std::clamp(velocity_ + force * cfg_.dt, -cfg_.top_speed, cfg_.top_speed);
  position_ += velocity_ * cfg_.dt;
  ++steps_;

  const int task_index = static_cast<int>(task_);
  const bool in_zone = std::abs(position_ - zone_center_) <= cfg_.zone_half_width;
  bool failed = false;
  bool success = false;

  if (in_zone) {
    zone_entered_ = true;
    ++in_zone_steps_;
    const bool key_ok = posture >= cfg_.posture_band_lo[task_index] &&
                        posture <= cfg_.posture_band_hi[task_index];
    if (key_ok) {
      ++key_steps_;
    } else {
      ++wrong_key_steps_;
      if (wrong_key_steps_ >= cfg_.wrong_key_limit) {
        failed = true;
      }
    }

    switch (task_) {
      case TaskMode::Brake:
        if (std::abs(velocity_) > cfg_.brake_speed_cap) {
          failed = true;
        }
        break;
      case TaskMode::Oscillate:
        if (std::abs(velocity_ - ref) > cfg_.oscillate_tolerance) {
          if (++oscillate_misses_ >= cfg_.oscillate_violation_limit) {
            failed = true;
          }
        } else {
          oscillate_misses_ = 0;
        }
        break;
      case TaskMode::Hold:
        if (std::abs(velocity_) <= cfg_.hold_speed_limit) {
          ++hold_steps_;
        }
        break;
      default:
        break;
    }
  }

  if (task_ == TaskMode::Reverse && zone_entered_ && !backed_out_ &&
      position_ <= zone_center_ - cfg_.zone_half_width - cfg_.reverse_backout_margin) {
    backed_out_ = true;
  }

  if (!failed && key_steps_ >= cfg_.key_required_steps) {
    switch (task_) {
      case TaskMode::Reach:
      case TaskMode::Brake:
        success = position_ >= zone_center_;
        break;
      case TaskMode::Oscillate:
        success = in_zone_steps_ >= cfg_.oscillate_required_steps;
        break;
      case TaskMode::Reverse:
        success = backed_out_ && position_ >= zone_center_;
        break;
      case TaskMode::Hold:
        success = hold_steps_ >= cfg_.hold_required_steps;
        break;
    }
  }

  // Leaving the zone forward without completing the task is the analog of
  // being blocked by the obstacle.
  if (!success && position_ > zone_center_ + cfg_.zone_half_width) {
    failed = true;
  }

  StepResult result;
  result.reward = cfg_.progress_reward_scale * (position_ - old_position);
  if (success) {
    result.reward += cfg_.completion_bonus;
  }
  succeeded_ = success;
  done_ = success || failed || steps_ >= cfg_.max_steps;
  result.done = done_;
  result.observation = observation();
  return result;
}

EnvironmentSpec PointMassEnv::spec() const {
  EnvironmentSpec s;
  s.observation_dim = 5;
  s.action_dim = cfg_.action_dim;
  s.action_bounds.assign(static_cast<std::size_t>(cfg_.action_dim), {-1.0, 1.0});
  s.max_steps = cfg_.max_steps;
  s.task_id = static_cast<int>(task_);
  return s;
}

CombinedPointMassEnv::CombinedPointMassEnv(std::vector<TaskMode> tasks,
                                           PointMassConfig cfg)
    : tasks_(std::move(tasks)), cfg_(cfg) {
  if (tasks_.empty()) {
    throw std::invalid_argument("combined episode needs at least one task");
  }
  cfg_.validate();
}

std::vector<double> CombinedPointMassEnv::reset(std::uint64_t seed) {
  seed_ = seed;
  order_ = tasks_;
  RngStream rng(derive_seed(seed, {0x5ec7, 0}));
  rng.shuffle(order_);
  section_ = 0;
  current_ = std::make_unique<PointMassEnv>(order_[0], cfg_);
  done_ = false;
  return current_->reset(derive_seed(seed_, {0x5ec7, 1, 0}));
}

StepResult CombinedPointMassEnv::step(std::span<const double> action) {
  if (done_) {
    throw std::logic_error("step called on a finished combined episode");
  }
  StepResult result = current_->step(action);
  if (result.done) {
    if (current_->succeeded() && section_ + 1 < order_.size()) {
      ++section_;
      current_ = std::make_unique<PointMassEnv>(order_[section_], cfg_);
      result.observation =
          current_->reset(derive_seed(seed_, {0x5ec7, 1, section_}));
      result.done = false;
    } else {
      done_ = true;
    }
  }
  return result;
}

EnvironmentSpec CombinedPointMassEnv::spec() const {
  PointMassEnv probe(tasks_[0], cfg_);
  EnvironmentSpec s = probe.spec();
  s.max_steps = cfg_.max_steps * static_cast<int>(tasks_.size());
  s.task_id = -1;
  return s;
}

PointMassSuite::PointMassSuite(std::vector<int> task_ids, PointMassConfig cfg)
    : task_ids_(std::move(task_ids)), cfg_(cfg) {
  cfg_.validate();
  if (task_ids_.empty()) {
    throw std::invalid_argument("suite needs at least one task");
  }
  std::set<int> seen;
  for (int id : task_ids_) {
    if (id < 0 || id >= kPointMassTaskCount) {
      throw std::invalid_argument("unknown task id: " + std::to_string(id));
    }
    if (!seen.insert(id).second) {
      throw std::invalid_argument("duplicate task id: " + std::to_string(id));
    }
  }
}

std::unique_ptr<Environment> PointMassSuite::make_env(std::size_t task_index) const {
  return std::make_unique<PointMassEnv>(static_cast<TaskMode>(task_ids_.at(task_index)),
                                        cfg_);
}

std::unique_ptr<Environment> PointMassSuite::make_combined_env() const {
  std::vector<TaskMode> tasks;
  tasks.reserve(task_ids_.size());
  for (int id : task_ids_) {
    tasks.push_back(static_cast<TaskMode>(id));
  }
  return std::make_unique<CombinedPointMassEnv>(std::move(tasks), cfg_);
}

PointMassSuite make_suite(const std::vector<int>& task_ids, PointMassConfig cfg) {
  return PointMassSuite(task_ids, cfg);
}

}  // namespace matpg
