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

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "sgrl/errors.h"
#include "sgrl/robot.h"

namespace sgrl {
namespace {

// Reference sensor: `density` times more rays than the real one, each marched
// in tiny fixed increments.
double MarchOracle(const GridMap& map, const RobotState& s, int sensor,
                   const RobotParams& p, int density = 10) {
  const int rays = density == 1 ? p.rays_per_sensor : density * p.rays_per_sensor;
  double best = p.sensor_max;
  for (int r = 0; r < rays; ++r) {
    const double rel = kPi / 2 - sensor * kPi / 6 - (kPi / 6) * r / (rays - 1);
    const double a = s.theta + rel;
    for (double d = 0.0; d < best; d += 1e-3) {
      if (map.IsBlocked(CellOf(s.x + d * std::cos(a), s.y + d * std::sin(a)))) {
        best = d;
        break;
      }
    }
  }
  return best;
}

// Closed-form pose under constant track speeds.
RobotState Arc(const RobotState& s0, Action a, const RobotParams& p, double t) {
  const TrackSpeeds w = SpeedsFor(a);
  const double v = p.wheel_radius * (w.left + w.right) / 2;
  const double om = p.wheel_radius * (w.right - w.left) / p.track_separation;
  if (om == 0.0) {
    return {s0.x + v * t * std::cos(s0.theta), s0.y + v * t * std::sin(s0.theta),
            s0.theta};
  }
  return {s0.x + v / om * (std::sin(s0.theta + om * t) - std::sin(s0.theta)),
          s0.y - v / om * (std::cos(s0.theta + om * t) - std::cos(s0.theta)),
          WrapAngle(s0.theta + om * t)};
}

TEST_CASE("WrapAngle stays in [-pi, pi)") {
  CHECK(WrapAngle(kPi) == -kPi);
  CHECK(WrapAngle(-kPi) == -kPi);
  CHECK(WrapAngle(0.25) == doctest::Approx(0.25));
  CHECK(WrapAngle(2 * kPi + 0.5) == doctest::Approx(0.5));
  CHECK(WrapAngle(-3 * kPi / 2) == doctest::Approx(kPi / 2));
  for (double a = -20.0; a < 20.0; a += 0.37) {
    const double w = WrapAngle(a);
    CHECK(w >= -kPi);
    CHECK(w < kPi);
  }
}

TEST_CASE("Step integrates the tracked kinematics") {
  const RobotParams p;
  const RobotState fwd = Step({0, 0, 0}, Action::kForward, p);
  CHECK(fwd.x == doctest::Approx(0.1));
  CHECK(fwd.y == doctest::Approx(0.0));
  CHECK(fwd.theta == doctest::Approx(0.0));

  const RobotState left = Step({0, 0, 0}, Action::kTurnLeft, p);
  CHECK(left.x == doctest::Approx(0.05));
  CHECK(left.y == doctest::Approx(0.0));
  CHECK(left.theta == doctest::Approx(0.1));

  const RobotState right = Step({0, 0, 0}, Action::kTurnRight, p);
  CHECK(right.theta == doctest::Approx(-0.1));
}

TEST_CASE("per-step motion is bounded by the action set") {
  const RobotParams p;
  RobotState s{10, 10, 0.3};
  for (int i = 0; i < 200; ++i) {
    const Action a = ActionFromIndex(i * 7 % 3);
    const RobotState n = Step(s, a, p);
    CHECK(std::hypot(n.x - s.x, n.y - s.y) <= p.MaxSpeed() * p.dt + 1e-12);
    CHECK(std::abs(WrapAngle(n.theta - s.theta)) <=
          p.MaxTurnRate() * p.dt + 1e-12);
    s = n;
  }
}

TEST_CASE("a full turn returns the heading") {
  const RobotParams p;
  const double rate = p.MaxTurnRate();
  const int steps = static_cast<int>(std::lround(2 * kPi / rate / p.dt));
  RobotState s{5, 5, 0.4};
  for (int i = 0; i < steps; ++i) s = Step(s, Action::kTurnLeft, p);
  CHECK(std::abs(WrapAngle(s.theta - 0.4)) < p.dt * rate);
}

TEST_CASE("Euler integration converges at first order") {
  RobotParams coarse;
  RobotParams fine = coarse;
  fine.dt = coarse.dt / 2;
  const RobotState s0{3, 4, 0.2};
  const double horizon = 2.0;
  auto error = [&](const RobotParams& p) {
    RobotState s = s0;
    const int n = static_cast<int>(std::lround(horizon / p.dt));
    for (int i = 0; i < n; ++i) s = Step(s, Action::kTurnLeft, p);
    const RobotState exact = Arc(s0, Action::kTurnLeft, p, horizon);
    return std::hypot(s.x - exact.x, s.y - exact.y);
  };
  const double ratio = error(coarse) / error(fine);
  CHECK(ratio > 1.8);
  CHECK(ratio < 2.2);
}

TEST_CASE("Sense") {
  const RobotParams p;
  SUBCASE("open map reads the maximum") {
    const GridMap map(40, 40);
    const SensorReadings r = Sense(map, {20.5, 20.5, 1.0}, p);
    for (double v : r) CHECK(v == 5.0);
  }
  SUBCASE("wall ahead") {
    GridMap map(30, 30);
    for (int y = 0; y < 30; ++y) map.SetBlocked({12, y}, true);
    const RobotState s{10.0, 15.5, 0.0};
    const SensorReadings r = Sense(map, s, p);
    CHECK(std::abs(r[2] - 2.0) <= 0.1);
    CHECK(std::abs(r[3] - 2.0) <= 0.1);
    for (int i : {0, 1, 4, 5}) CHECK(r[i] >= 2.0 - 1e-9);
    for (int i = 0; i < kSensorCount; ++i) {
      CHECK(std::abs(r[i] - MarchOracle(map, s, i, p)) <= 0.1);
    }
  }
  SUBCASE("wall on the left only") {
    GridMap map(30, 30);
    for (int x = 0; x < 30; ++x) map.SetBlocked({x, 17}, true);
    const SensorReadings r = Sense(map, {15.5, 15.5, 0.0}, p);
    const double left_max = std::max({r[0], r[1], r[2]});
    const double right_min = std::min({r[3], r[4], r[5]});
    CHECK(left_max < right_min);
  }
  SUBCASE("walls at assorted headings match the dense oracle") {
    GridMap map(40, 40);
    for (int y = 0; y < 40; ++y) map.SetBlocked({25, y}, true);
    for (int x = 0; x < 40; ++x) map.SetBlocked({x, 12}, true);
    for (double theta = -kPi; theta < kPi; theta += 0.3) {
      const RobotState s{22.2, 15.6, theta};
      const SensorReadings r = Sense(map, s, p);
      for (int k = 0; k < kSensorCount; ++k) {
        CHECK(std::abs(r[k] - MarchOracle(map, s, k, p)) <= 0.1);
      }
    }
  }
  SUBCASE("grid traversal matches marching the same rays") {
    const GridMap map = RandomMap(30, 30, 0.08, 21);
    for (int i = 0; i < 15; ++i) {
      const RobotState s{5.3 + i * 1.31, 4.7 + i * 1.17, -3.0 + i * 0.41};
      if (Collides(map, s)) continue;
      const SensorReadings r = Sense(map, s, p);
      for (int k = 0; k < kSensorCount; ++k) {
        CHECK(r[k] > 0.0);
        CHECK(r[k] <= p.sensor_max);
        CHECK(std::abs(r[k] - MarchOracle(map, s, k, p, 1)) <= 0.01);
      }
    }
  }
  SUBCASE("translation invariance") {
    const GridMap map = RandomMap(20, 20, 0.1, 2);
    GridMap shifted(27, 26);
    for (int y = 0; y < 26; ++y)
      for (int x = 0; x < 27; ++x)
        if (x < 7 || y < 6 || map.IsBlocked({x - 7, y - 6}))
          shifted.SetBlocked({x, y}, true);
    const RobotState s{9.5, 9.5, 0.7};
    if (!Collides(map, s)) {
      const SensorReadings a = Sense(map, s, p);
      const SensorReadings b = Sense(shifted, {s.x + 7, s.y + 6, s.theta}, p);
      for (int k = 0; k < kSensorCount; ++k) CHECK(a[k] == doctest::Approx(b[k]));
    }
  }
  SUBCASE("sensing from inside an obstacle is an error") {
    GridMap map(5, 5);
    map.SetBlocked({2, 2}, true);
    CHECK_THROWS_AS(Sense(map, {2.5, 2.5, 0.0}, p), SensingError);
  }
}

TEST_CASE("Collides") {
  GridMap map(4, 4);
  map.SetBlocked({2, 1}, true);
  CHECK_FALSE(Collides(map, {0.5, 0.5, 0}));
  CHECK(Collides(map, {2.3, 1.9, 0}));
  CHECK(Collides(map, {-0.01, 1.0, 0}));
  CHECK(Collides(map, {1.0, 4.0, 0}));
}

TEST_CASE("ValidateParams") {
  RobotParams p;
  CHECK_NOTHROW(ValidateParams(p));
  p.action_dt = 0.55;
  CHECK_THROWS_AS(ValidateParams(p), ArgumentError);
  p = RobotParams{};
  p.dt = 0;
  CHECK_THROWS_AS(ValidateParams(p), ArgumentError);
}

}  // namespace
}  // namespace sgrl
