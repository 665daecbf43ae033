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

#include "sgrl/planner.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>

#include "sgrl/errors.h"

namespace sgrl {

std::string_view ModeName(Mode m) { return m == Mode::kSa ? "SA" : "OA"; }

std::string_view OutcomeName(Outcome o) {
  switch (o) {
    case Outcome::kReached:
      return "reached";
    case Outcome::kCollided:
      return "collided";
    case Outcome::kTimeout:
      return "timeout";
  }
  return "?";
}

void ValidatePlanConfig(const PlanConfig& cfg) {
  ValidateParams(cfg.robot);
  if (!(cfg.final_tolerance > 0.0) || !(cfg.subgoal_tolerance >= cfg.final_tolerance)) {
    throw ArgumentError("need subgoal_tolerance >= final_tolerance > 0");
  }
  if (!(cfg.oa_trigger >= 0.0)) throw ArgumentError("oa_trigger must be >= 0");
}

double DefaultTimeBudget(double length, const RobotParams& robot) {
  return 4.0 * length / robot.MaxSpeed() + 2.0 * kPi / robot.MaxTurnRate();
}

Mode SelectMdp(const SensorReadings& readings, const PlanConfig& cfg) {
  return *std::min_element(readings.begin(), readings.end()) < cfg.oa_trigger
             ? Mode::kOa
             : Mode::kSa;
}

std::size_t AdvanceSubgoal(const RobotState& robot, const std::vector<Point>& targets,
                           std::size_t cursor, const PlanConfig& cfg) {
  while (cursor < targets.size()) {
    const double tol = cursor + 1 == targets.size() ? cfg.final_tolerance
                                                    : cfg.subgoal_tolerance;
    const double d = std::hypot(targets[cursor].x - robot.x, targets[cursor].y - robot.y);
    if (!(d < tol)) break;
    ++cursor;
  }
  return cursor;
}

Trajectory Execute(const GridMap& world, const RobotState& start,
                   const std::vector<Point>& targets, const Policy& sa,
                   const Policy& oa, const PlanConfig& cfg,
                   const std::function<bool(const RobotState&)>& finished) {
  ValidatePlanConfig(cfg);
  Trajectory out;
  out.start = start;
  out.oa_trigger = cfg.oa_trigger;
  double length = 0.0;
  Point prev{start.x, start.y};
  for (const Point& p : targets) {
    length += std::hypot(p.x - prev.x, p.y - prev.y);
    prev = p;
  }
  out.time_budget =
      cfg.time_budget > 0.0 ? cfg.time_budget : DefaultTimeBudget(length, cfg.robot);
  if (Collides(world, start)) {
    out.outcome = Outcome::kCollided;
    return out;
  }

  const int sub_steps = cfg.robot.StepsFor(cfg.robot.action_dt);
  RobotState pose = start;
  std::size_t cursor = AdvanceSubgoal(pose, targets, 0, cfg);
  long tick = 0;
  while (cursor < targets.size()) {
    const double now = tick * cfg.robot.action_dt;
    if (now + cfg.robot.action_dt > out.time_budget + 1e-9) {
      out.outcome = Outcome::kTimeout;
      return out;
    }
    const SensorReadings readings = Sense(world, pose, cfg.robot);
    const Mode mode = SelectMdp(readings, cfg);
    const int a = mode == Mode::kSa
                      ? sa.Greedy(SaVector(ExtractSaState(pose, targets[cursor])))
                      : oa.Greedy(OaVector(readings));
    const Action action = ActionFromIndex(a);
    bool collided = false;
    for (int i = 0; i < sub_steps && !collided; ++i) {
      pose = Step(pose, action, cfg.robot);
      collided = Collides(world, pose);
    }
    ++tick;
    out.ticks.push_back({tick * cfg.robot.action_dt, pose, action, mode});
    if (collided) {
      out.outcome = Outcome::kCollided;
      return out;
    }
    cursor = AdvanceSubgoal(pose, targets, cursor, cfg);
    if (finished && finished(pose)) break;
  }
  out.outcome = Outcome::kReached;
  return out;
}

bool LineOfSight(const GridMap& map, Point a, Point b) {
  Cell c = CellOf(a.x, a.y);
  const Cell end = CellOf(b.x, b.y);
  if (map.IsBlocked(c)) return false;
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const int sx = dx > 0 ? 1 : -1;
  const int sy = dy > 0 ? 1 : -1;
  // Parameters along the segment (t in [0, 1]) of the next x and y crossings.
  double tx = dx > 0 ? (c.x + 1 - a.x) / dx : dx < 0 ? (c.x - a.x) / dx : kInf;
  double ty = dy > 0 ? (c.y + 1 - a.y) / dy : dy < 0 ? (c.y - a.y) / dy : kInf;
  const double step_x = dx != 0 ? std::abs(1.0 / dx) : kInf;
  const double step_y = dy != 0 ? std::abs(1.0 / dy) : kInf;
  constexpr double kEps = 1e-9;
  while (c != end) {
    if (std::min(tx, ty) > 1.0 + kEps) break;
    if (tx < ty - kEps) {
      c.x += sx;
      tx += step_x;
    } else if (ty < tx - kEps) {
      c.y += sy;
      ty += step_y;
    } else {
      if (map.IsBlocked({c.x + sx, c.y}) || map.IsBlocked({c.x, c.y + sy})) return false;
      c.x += sx;
      c.y += sy;
      tx += step_x;
      ty += step_y;
    }
    if (map.IsBlocked(c)) return false;
  }
  return true;
}

std::vector<Cell> RefinePath(const GridMap& planning_map, const std::vector<Cell>& path) {
  auto centre = [](Cell c) { return Point{c.x + 0.5, c.y + 0.5}; };
  std::vector<Cell> out;
  if (path.empty()) return out;
  out.push_back(path[0]);
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Cell a = path[i - 1];
    const Cell b = path[i];
    if (LineOfSight(planning_map, centre(a), centre(b))) {
      out.push_back(b);
      continue;
    }
    const std::optional<GridPath> leg = GridAStar(planning_map, a, b);
    if (!leg) throw NoPathError("abstract path leg is not traversable");
    const std::vector<Cell>& cells = leg->cells;
    std::size_t at = 0;
    while (at + 1 < cells.size()) {
      std::size_t next = at + 1;
      while (next + 1 < cells.size() &&
             LineOfSight(planning_map, centre(cells[at]), centre(cells[next + 1]))) {
        ++next;
      }
      out.push_back(cells[next]);
      at = next;
    }
  }
  return out;
}

std::vector<Point> TargetsFromPath(const std::vector<Cell>& path, Point goal) {
  std::vector<Point> targets;
  for (std::size_t i = 1; i < path.size(); ++i) {
    targets.push_back({path[i].x + 0.5, path[i].y + 0.5});
  }
  if (targets.empty()) {
    targets.push_back(goal);
  } else {
    targets.back() = goal;
  }
  return targets;
}

Trajectory Plan(const GridMap& world, const SubgoalGraph& graph,
                const RobotState& start, Point goal, const Policy& sa,
                const Policy& oa, const PlanConfig& cfg) {
  const Cell s = CellOf(start.x, start.y);
  const Cell t = CellOf(goal.x, goal.y);
  const PathQuery q = FindPath(graph, s, t);
  if (!q.path) {
    throw NoPathError("no path from (" + std::to_string(s.x) + "," +
                      std::to_string(s.y) + ") to (" + std::to_string(t.x) + "," +
                      std::to_string(t.y) + ") on the planning map");
  }
  const std::vector<Cell> route = RefinePath(graph.map(), q.path->cells);
  Trajectory out = Execute(world, start, TargetsFromPath(route, goal), sa, oa, cfg);
  out.abstract_path = q.path->cells;
  out.abstract_length = q.path->length;
  out.h_time_seconds = q.h_time_seconds;
  return out;
}

GridMap InjectObstacles(const GridMap& world, const std::vector<Cell>& abstract_path,
                        int count, int max_size, std::uint64_t seed,
                        double keep_clear) {
  if (abstract_path.empty()) throw ArgumentError("abstract path is empty");
  if (count < 0 || max_size < 1) throw ArgumentError("bad obstacle count or size");
  GridMap out = world;
  if (count == 0) return out;

  std::vector<Point> verts;
  for (const Cell& c : abstract_path) verts.push_back({c.x + 0.5, c.y + 0.5});
  std::vector<double> cumulative{0.0};
  for (std::size_t i = 1; i < verts.size(); ++i) {
    cumulative.push_back(cumulative.back() + std::hypot(verts[i].x - verts[i - 1].x,
                                                        verts[i].y - verts[i - 1].y));
  }
  const double total = cumulative.back();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> side(1, max_size);
  constexpr double kCorridor = 3.0;
  constexpr int kRetries = 10000;

  for (int placed = 0; placed < count; ++placed) {
    bool ok = false;
    for (int attempt = 0; attempt < kRetries && !ok; ++attempt) {
      // Uniform point along the polyline, then uniform in the 3-cell disc.
      Point c = verts[0];
      if (total > 0.0) {
        const double u = unit(rng) * total;
        const std::size_t seg = std::min<std::size_t>(
            std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                cumulative.begin(),
            verts.size() - 1);
        const double f = (u - cumulative[seg - 1]) /
                         std::max(cumulative[seg] - cumulative[seg - 1], 1e-12);
        c = {verts[seg - 1].x + f * (verts[seg].x - verts[seg - 1].x),
             verts[seg - 1].y + f * (verts[seg].y - verts[seg - 1].y)};
      }
      const double r = kCorridor * std::sqrt(unit(rng));
      const double phi = 2.0 * kPi * unit(rng);
      const double cx = c.x + r * std::cos(phi);
      const double cy = c.y + r * std::sin(phi);
      const int w = side(rng);
      const int h = side(rng);
      const int x0 = static_cast<int>(std::floor(cx - w / 2.0 + 0.5));
      const int y0 = static_cast<int>(std::floor(cy - h / 2.0 + 0.5));

      ok = true;
      for (int y = y0; y < y0 + h && ok; ++y) {
        for (int x = x0; x < x0 + w && ok; ++x) {
          if (!out.InBounds({x, y})) {
            ok = false;
            break;
          }
          for (const Point& v : verts) {
            if (std::hypot(x + 0.5 - v.x, y + 0.5 - v.y) < keep_clear) {
              ok = false;
              break;
            }
          }
        }
      }
      if (!ok) continue;
      for (int y = y0; y < y0 + h; ++y)
        for (int x = x0; x < x0 + w; ++x) out.SetBlocked({x, y}, true);
    }
    if (!ok) {
      throw EnvironmentError("could not place an obstacle clear of the subgoals");
    }
  }
  return out;
}

void WriteTrajectoryCsv(std::ostream& out, const Trajectory& trajectory) {
  out << "t,x,y,theta,action,mdp_mode\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const Tick& t : trajectory.ticks) {
    out << t.time << ',' << t.state.x << ',' << t.state.y << ',' << t.state.theta
        << ',' << ActionName(t.action) << ',' << ModeName(t.mode) << '\n';
  }
}

}  // namespace sgrl
