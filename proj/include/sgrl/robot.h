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

#ifndef SGRL_ROBOT_H_
#define SGRL_ROBOT_H_

#include <array>
#include <cmath>
#include <string_view>

#include "sgrl/grid_map.h"

namespace sgrl {

inline constexpr double kPi = 3.14159265358979323846;

// Wraps an angle into [-pi, pi).
inline double WrapAngle(double a) {
  double w = std::fmod(a + kPi, 2.0 * kPi);
  if (w < 0.0) w += 2.0 * kPi;
  w -= kPi;
  // fmod rounding can land exactly on +pi.
  return w >= kPi ? -kPi : w;
}

// Continuous pose in cell units; x is the column axis, y the row axis and
// theta is measured counter-clockwise from +x.
struct RobotState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

struct RobotParams {
  double wheel_radius = 2.0;       // cells
  double track_separation = 1.0;   // cells
  double dt = 0.1;                 // integration step, s
  double action_dt = 0.5;          // action hold during execution, s
  double sensor_max = 5.0;         // cells
  int rays_per_sensor = 7;

  // Number of integration steps per held action of length `hold`.
  int StepsFor(double hold) const;
  // Speed bounds implied by the action set.
  double MaxSpeed() const { return wheel_radius * 0.5; }
  double MaxTurnRate() const { return wheel_radius * 0.5 / track_separation; }
};

// Validates positivity and that action_dt is a whole number of dt steps.
void ValidateParams(const RobotParams& params);

enum class Action { kForward = 0, kTurnLeft = 1, kTurnRight = 2 };
inline constexpr int kActionCount = 3;

struct TrackSpeeds {
  double left;   // rad/s
  double right;  // rad/s
};

// Forward drives both tracks; a turn drives only the outer track.
TrackSpeeds SpeedsFor(Action a);
std::string_view ActionName(Action a);
inline Action ActionFromIndex(int i) { return static_cast<Action>(i); }
inline int ActionIndex(Action a) { return static_cast<int>(a); }

// One explicit Euler step of the tracked-vehicle kinematics over params.dt.
RobotState Step(const RobotState& state, Action action,
                const RobotParams& params);

inline constexpr int kSensorCount = 6;
using SensorReadings = std::array<double, kSensorCount>;

// Six 30-degree ultrasonic cones across the front half-plane; sensor 0 is the
// leftmost ([+90, +60] degrees from the heading). Each reading is the shortest
// ray distance to a blocked cell within the cone, capped at sensor_max.
// Throws SensingError when the robot sits inside a blocked cell.
SensorReadings Sense(const GridMap& map, const RobotState& state,
                     const RobotParams& params);

// Distance along a ray to the first blocked cell (exact grid traversal),
// capped at max_range.
double CastRay(const GridMap& map, double x, double y, double angle,
               double max_range);

// Point-robot collision: the containing cell is blocked or off the map.
bool Collides(const GridMap& map, const RobotState& state);

inline Cell CellOf(double x, double y) {
  return {static_cast<int>(std::floor(x)), static_cast<int>(std::floor(y))};
}

}  // namespace sgrl

#endif  // SGRL_ROBOT_H_
