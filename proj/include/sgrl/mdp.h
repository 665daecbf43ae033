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

#ifndef SGRL_MDP_H_
#define SGRL_MDP_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sgrl/grid_map.h"
#include "sgrl/lspi.h"
#include "sgrl/robot.h"

namespace sgrl {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct SaState {
  double distance = 0.0;  // d_g, cells
  double angle = 0.0;     // a_g in [-pi, pi), positive when the goal is left
};

SaState ExtractSaState(const RobotState& robot, Point goal);

struct RewardParams {
  double goal_tolerance = 0.5;       // d_n
  double distance_norm = 50 * 1.4142135623730951;  // D_norm
  double angle_threshold = 0.05;     // epsilon_a, on |a_g| / pi
  double comparative_scale = 0.9;    // P
  double brake_distance = 1.0;       // D_ur
  double safe_distance = 2.5;        // D_sa
  double collide_penalty = -4.0;
  double switch_penalty = -0.2;
};

inline constexpr double kGoalReward = 10.0;

// Requires 0 < D_ur < D_sa <= sensor_max, P > 0 and positive d_n, D_norm.
void ValidateRewardParams(const RewardParams& p, double sensor_max);

struct RewardOutcome {
  double reward = 0.0;
  bool terminal = false;
};

RewardOutcome SaReward(const SaState& s, const RewardParams& p);
double OaRewardConcise(bool collided);
// Ordered rule table over the sorted left (S1..S3) and right (S4..S6)
// readings. Returns the reward and the 1-based rule that fired.
struct ComparativeOutcome {
  double reward = 0.0;
  int rule = 0;
};
ComparativeOutcome OaRewardComparativeRule(const SensorReadings& s,
                                           const RewardParams& p);
double OaRewardComparative(const SensorReadings& s, const RewardParams& p);
double SwitchPenalty(Action a, std::optional<Action> previous, const RewardParams& p);

enum class MdpKind { kSubgoalApproach, kObstacleAvoid };
enum class OaRewardKind { kConcise, kComparative };

std::vector<double> SaVector(const SaState& s);
std::vector<double> OaVector(const SensorReadings& s);

// Basis for each MDP; the SA distance range is [0, distance_norm].
BasisSpec SaBasis(double distance_norm);
BasisSpec OaBasis(double sensor_max);

struct SamplingConfig {
  MdpKind kind = MdpKind::kObstacleAvoid;
  OaRewardKind oa_reward = OaRewardKind::kConcise;
  bool use_switch_penalty = false;
  RewardParams reward;
  RobotParams robot;
  double hold = 1.0;        // action hold while sampling, s
  int episode_limit = 100;  // samples per episode before a fresh start
};

// A transition plus what is needed to replay it through the simulator.
struct Sample {
  Transition transition;
  RobotState pose;
  RobotState next_pose;
  Point goal;                       // SA only
  std::optional<Action> previous;   // previous action in the episode
};

using SampleSet = std::vector<Sample>;

// Holds `action` from `pose` and scores the outcome. SA stops at the first
// sub-step inside the goal tolerance; both kinds stop at the first colliding
// sub-step. Returns nullopt for an SA transition that leaves free space,
// which the collector drops (the SA process has no collision outcome).
std::optional<Sample> SimulateSample(const GridMap& env, const RobotState& pose,
                                     Point goal, Action action,
                                     std::optional<Action> previous,
                                     const SamplingConfig& cfg);

// Random-policy sample collection. Episodes start at a uniformly random pose
// inside a random free cell (and a random free goal cell centre for SA) and
// end on collision, goal arrival or after episode_limit samples.
// Throws EnvironmentError when the map has no free cell.
SampleSet CollectSamples(const GridMap& env, std::size_t count, std::uint64_t seed,
                         const SamplingConfig& cfg);

std::vector<Transition> Transitions(const SampleSet& samples);

// CSV columns: state fields, action, reward, next-state fields, terminal.
void WriteSamplesCsv(std::ostream& out, const SampleSet& samples, MdpKind kind);
std::vector<Transition> ReadSamplesCsv(std::istream& in);

}  // namespace sgrl

#endif  // SGRL_MDP_H_
