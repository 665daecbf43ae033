// Copyright 2026 The sgrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sgrl/mdp.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "sgrl/errors.h"

namespace sgrl {

SaState ExtractSaState(const RobotState& robot, Point goal) {
  const double dx = goal.x - robot.x;
  const double dy = goal.y - robot.y;
  return {std::hypot(dx, dy), WrapAngle(std::atan2(dy, dx) - robot.theta)};
}

void ValidateRewardParams(const RewardParams& p, double sensor_max) {
  if (!(p.goal_tolerance > 0.0)) throw ArgumentError("goal tolerance must be positive");
  if (!(p.distance_norm > 0.0)) throw ArgumentError("distance_norm must be positive");
  if (!(p.angle_threshold >= 0.0)) throw ArgumentError("angle_threshold must be >= 0");
  if (!(p.comparative_scale > 0.0)) throw ArgumentError("P must be positive");
  if (!(p.brake_distance > 0.0 && p.brake_distance < p.safe_distance &&
        p.safe_distance <= sensor_max)) {
    throw ArgumentError("need 0 < brake_distance < safe_distance <= sensor_max");
  }
}

RewardOutcome SaReward(const SaState& s, const RewardParams& p) {
  if (s.distance < p.goal_tolerance) return {kGoalReward, true};
  const double a = std::abs(s.angle) / kPi;
  if (a > p.angle_threshold) return {-a, false};
  const double d = std::clamp(s.distance / p.distance_norm, 0.0, 1.0);
  return {1.0 - d - a, false};
}

double OaRewardConcise(bool collided) { return collided ? -4.0 : 0.0; }

ComparativeOutcome OaRewardComparativeRule(const SensorReadings& s,
                                           const RewardParams& p) {
  const double smin = *std::min_element(s.begin(), s.end());
  if (smin < p.brake_distance) return {-4.0, 1};
  if (smin > p.safe_distance) return {0.0, 2};
  std::array<double, 3> left{s[0], s[1], s[2]};
  std::array<double, 3> right{s[3], s[4], s[5]};
  std::sort(left.begin(), left.end());
  std::sort(right.begin(), right.end());
  for (int i = 0; i < 2; ++i) {
    if (left[i] != right[i]) {
      return {-p.comparative_scale * (p.safe_distance - std::min(left[i], right[i])),
              3 + i};
    }
  }
  return {-p.comparative_scale * (p.safe_distance - std::min(left[2], right[2])), 5};
}

double OaRewardComparative(const SensorReadings& s, const RewardParams& p) {
  return OaRewardComparativeRule(s, p).reward;
}

double SwitchPenalty(Action a, std::optional<Action> previous, const RewardParams& p) {
  return previous && *previous != a ? p.switch_penalty : 0.0;
}

std::vector<double> SaVector(const SaState& s) { return {s.distance, s.angle}; }

std::vector<double> OaVector(const SensorReadings& s) {
  return std::vector<double>(s.begin(), s.end());
}

BasisSpec SaBasis(double distance_norm) {
  return {2, 4, kActionCount, {0.0, -kPi}, {distance_norm, kPi}};
}

BasisSpec OaBasis(double sensor_max) {
  return {kSensorCount, 3, kActionCount, std::vector<double>(kSensorCount, 0.0),
          std::vector<double>(kSensorCount, sensor_max)};
}

std::optional<Sample> SimulateSample(const GridMap& env, const RobotState& pose,
                                     Point goal, Action action,
                                     std::optional<Action> previous,
                                     const SamplingConfig& cfg) {
  const int steps = cfg.robot.StepsFor(cfg.hold);
  Sample out;
  out.pose = pose;
  out.goal = goal;
  out.previous = previous;
  out.transition.action = ActionIndex(action);
  const double penalty =
      cfg.use_switch_penalty ? SwitchPenalty(action, previous, cfg.reward) : 0.0;

  RobotState p = pose;
  if (cfg.kind == MdpKind::kSubgoalApproach) {
    out.transition.state = SaVector(ExtractSaState(pose, goal));
    for (int i = 0; i < steps; ++i) {
      p = Step(p, action, cfg.robot);
      if (Collides(env, p)) return std::nullopt;
      if (ExtractSaState(p, goal).distance < cfg.reward.goal_tolerance) break;
    }
    const SaState next = ExtractSaState(p, goal);
    const RewardOutcome r = SaReward(next, cfg.reward);
    out.transition.next_state = SaVector(next);
    out.transition.reward = r.reward + penalty;
    out.transition.terminal = r.terminal;
  } else {
    out.transition.state = OaVector(Sense(env, pose, cfg.robot));
    bool collided = false;
    for (int i = 0; i < steps; ++i) {
      const RobotState n = Step(p, action, cfg.robot);
      if (Collides(env, n)) {
        collided = true;
        break;
      }
      p = n;
    }
    const SensorReadings next = Sense(env, p, cfg.robot);
    out.transition.next_state = OaVector(next);
    double base;
    if (collided) {
      base = cfg.reward.collide_penalty;
    } else if (cfg.oa_reward == OaRewardKind::kComparative) {
      base = OaRewardComparative(next, cfg.reward);
    } else {
      base = OaRewardConcise(false);
    }
    out.transition.reward = base + penalty;
    out.transition.terminal = collided;
  }
  out.next_pose = p;
  return out;
}

SampleSet CollectSamples(const GridMap& env, std::size_t count, std::uint64_t seed,
                         const SamplingConfig& cfg) {
  ValidateParams(cfg.robot);
  ValidateRewardParams(cfg.reward, cfg.robot.sensor_max);
  if (cfg.episode_limit < 1) throw ArgumentError("episode_limit must be >= 1");
  const std::vector<Cell> free = env.FreeCells();
  if (free.empty()) throw EnvironmentError("map has no free cell to sample from");

  SampleSet out;
  out.reserve(count);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> heading(-kPi, kPi);
  std::uniform_int_distribution<int> act(0, kActionCount - 1);

  RobotState pose;
  Point goal;
  std::optional<Action> previous;
  int episode_samples = 0;
  bool fresh = true;
  int dropped_in_a_row = 0;

  auto start_episode = [&] {
    if (cfg.kind == MdpKind::kSubgoalApproach) {
      const Cell g = free[pick(rng)];
      goal = {g.x + 0.5, g.y + 0.5};
    }
    for (int attempt = 0;; ++attempt) {
      const Cell c = free[pick(rng)];
      pose = {c.x + unit(rng), c.y + unit(rng), heading(rng)};
      if (cfg.kind != MdpKind::kSubgoalApproach || attempt >= 100 ||
          ExtractSaState(pose, goal).distance >= cfg.reward.goal_tolerance) {
        break;
      }
    }
    previous.reset();
    episode_samples = 0;
    fresh = false;
  };

  while (out.size() < count) {
    if (fresh) start_episode();
    const Action a = ActionFromIndex(act(rng));
    std::optional<Sample> s = SimulateSample(env, pose, goal, a, previous, cfg);
    if (!s) {
      if (++dropped_in_a_row > 100000) {
        throw EnvironmentError("every sampled SA transition leaves free space");
      }
      fresh = true;
      continue;
    }
    dropped_in_a_row = 0;
    const bool done = s->transition.terminal || ++episode_samples >= cfg.episode_limit;
    pose = s->next_pose;
    previous = a;
    out.push_back(std::move(*s));
    fresh = done;
  }
  return out;
}

std::vector<Transition> Transitions(const SampleSet& samples) {
  std::vector<Transition> out;
  out.reserve(samples.size());
  for (const Sample& s : samples) out.push_back(s.transition);
  return out;
}

void WriteSamplesCsv(std::ostream& out, const SampleSet& samples, MdpKind kind) {
  std::vector<std::string> names;
  if (kind == MdpKind::kSubgoalApproach) {
    names = {"d_g", "a_g"};
  } else {
    for (int i = 1; i <= kSensorCount; ++i) names.push_back("s" + std::to_string(i));
  }
  for (const auto& n : names) out << n << ',';
  out << "action,reward";
  for (const auto& n : names) out << ",next_" << n;
  out << ",terminal\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const Sample& s : samples) {
    const Transition& t = s.transition;
    if (t.state.size() != names.size() || t.next_state.size() != names.size()) {
      throw ArgumentError("sample dimension does not match the MDP kind");
    }
    for (double v : t.state) out << v << ',';
    out << t.action << ',' << t.reward;
    for (double v : t.next_state) out << ',' << v;
    out << ',' << (t.terminal ? 1 : 0) << '\n';
  }
}

std::vector<Transition> ReadSamplesCsv(std::istream& in) {
  std::string line;
  int line_no = 1;
  if (!std::getline(in, line)) throw ParseError("empty sample file", line_no);
  std::vector<std::string> header;
  {
    std::istringstream fields(line);
    std::string f;
    while (std::getline(fields, f, ',')) header.push_back(f);
  }
  const auto action_col = std::find(header.begin(), header.end(), "action");
  const std::size_t dim = action_col - header.begin();
  if (dim == 0 || header.size() != 2 * dim + 3 || header.back() != "terminal" ||
      header[dim + 1] != "reward") {
    throw ParseError("unrecognised sample header", line_no);
  }
  std::vector<Transition> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> v;
    std::istringstream fields(line);
    std::string f;
    while (std::getline(fields, f, ',')) {
      char* end = nullptr;
      const double x = std::strtod(f.c_str(), &end);
      if (f.empty() || *end != '\0') throw ParseError("bad number '" + f + "'", line_no);
      v.push_back(x);
    }
    if (v.size() != header.size()) throw ParseError("wrong column count", line_no);
    Transition t;
    t.state.assign(v.begin(), v.begin() + dim);
    const double action = v[dim];
    if (action != std::floor(action) || action < 0 || action >= kActionCount) {
      throw ParseError("bad action index", line_no);
    }
    t.action = static_cast<int>(action);
    t.reward = v[dim + 1];
    t.next_state.assign(v.begin() + dim + 2, v.begin() + 2 * dim + 2);
    const double term = v.back();
    if (term != 0.0 && term != 1.0) throw ParseError("terminal must be 0 or 1", line_no);
    t.terminal = term == 1.0;
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace sgrl
