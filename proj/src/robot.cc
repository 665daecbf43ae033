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

#include "sgrl/robot.h"

#include <algorithm>
#include <limits>

#include "sgrl/errors.h"

namespace sgrl {

int RobotParams::StepsFor(double hold) const {
  return static_cast<int>(std::llround(hold / dt));
}

void ValidateParams(const RobotParams& p) {
  if (!(p.dt > 0.0)) throw ArgumentError("dt must be positive");
  if (!(p.wheel_radius > 0.0) || !(p.track_separation > 0.0)) {
    throw ArgumentError("wheel radius and track separation must be positive");
  }
  if (!(p.sensor_max > 0.0)) throw ArgumentError("sensor_max must be positive");
  if (p.rays_per_sensor < 1) throw ArgumentError("rays_per_sensor must be >= 1");
  const double ratio = p.action_dt / p.dt;
  if (!(p.action_dt > 0.0) || std::abs(ratio - std::round(ratio)) > 1e-9) {
    throw ArgumentError("action_dt must be a positive multiple of dt");
  }
}

TrackSpeeds SpeedsFor(Action a) {
  switch (a) {
    case Action::kForward:
      return {0.5, 0.5};
    case Action::kTurnLeft:
      return {0.0, 0.5};
    case Action::kTurnRight:
      return {0.5, 0.0};
  }
  return {0.0, 0.0};
}

std::string_view ActionName(Action a) {
  switch (a) {
    case Action::kForward:
      return "forward";
    case Action::kTurnLeft:
      return "left";
    case Action::kTurnRight:
      return "right";
  }
  return "?";
}

RobotState Step(const RobotState& s, Action action, const RobotParams& p) {
  const TrackSpeeds w = SpeedsFor(action);
  const double v = p.wheel_radius * (w.left + w.right) / 2.0;
  const double omega = p.wheel_radius * (w.right - w.left) / p.track_separation;
  return {s.x + v * std::cos(s.theta) * p.dt, s.y + v * std::sin(s.theta) * p.dt,
          WrapAngle(s.theta + omega * p.dt)};
}

double CastRay(const GridMap& map, double x, double y, double angle,
               double max_range) {
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);
  Cell c = CellOf(x, y);
  if (map.IsBlocked(c)) return 0.0;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  const int step_x = dx > 0 ? 1 : -1;
  const int step_y = dy > 0 ? 1 : -1;
  const double delta_x = dx != 0.0 ? std::abs(1.0 / dx) : kInf;
  const double delta_y = dy != 0.0 ? std::abs(1.0 / dy) : kInf;
  double next_x = kInf;
  double next_y = kInf;
  if (dx > 0) next_x = (c.x + 1 - x) / dx;
  if (dx < 0) next_x = (c.x - x) / dx;
  if (dy > 0) next_y = (c.y + 1 - y) / dy;
  if (dy < 0) next_y = (c.y - y) / dy;

  while (true) {
    double t;
    if (next_x < next_y) {
      t = next_x;
      next_x += delta_x;
      c.x += step_x;
    } else {
      t = next_y;
      next_y += delta_y;
      c.y += step_y;
    }
    if (t >= max_range) return max_range;
    if (map.IsBlocked(c)) return t;
  }
}

SensorReadings Sense(const GridMap& map, const RobotState& state,
                     const RobotParams& params) {
  if (Collides(map, state)) {
    throw SensingError("robot is inside a blocked cell");
  }
  constexpr double kCone = kPi / 6.0;
  SensorReadings out{};
  const int n = params.rays_per_sensor;
  for (int i = 0; i < kSensorCount; ++i) {
    const double upper = kPi / 2.0 - i * kCone;
    double best = params.sensor_max;
    for (int r = 0; r < n; ++r) {
      const double frac = n == 1 ? 0.5 : static_cast<double>(r) / (n - 1);
      const double rel = upper - frac * kCone;
      best = std::min(best, CastRay(map, state.x, state.y, state.theta + rel,
                                    params.sensor_max));
    }
    out[i] = std::max(best, 1e-9);
  }
  return out;
}

bool Collides(const GridMap& map, const RobotState& state) {
  if (!(state.x >= 0.0) || !(state.y >= 0.0)) return true;
  return map.IsBlocked(CellOf(state.x, state.y));
}

}  // namespace sgrl
