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

#ifndef SGRL_PLANNER_H_
#define SGRL_PLANNER_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "sgrl/grid_map.h"
#include "sgrl/lspi.h"
#include "sgrl/mdp.h"
#include "sgrl/robot.h"
#include "sgrl/subgoal_graph.h"

namespace sgrl {

enum class Mode { kSa, kOa };
enum class Outcome { kReached, kCollided, kTimeout };

std::string_view ModeName(Mode m);
std::string_view OutcomeName(Outcome o);

struct PlanConfig {
  double subgoal_tolerance = 1.5;
  double final_tolerance = 0.5;
  // Seconds of simulated time; <= 0 selects the default budget derived from
  // the abstract path length.
  double time_budget = 0.0;
  double oa_trigger = 2.5;  // OA mode iff the minimum reading is below this
  RobotParams robot;
};

void ValidatePlanConfig(const PlanConfig& cfg);

// 4x the time needed to drive `length` at full speed, plus one full turn.
double DefaultTimeBudget(double length, const RobotParams& robot);

// One control tick: the pose after holding `action` for act_dt seconds, and
// the simulated time at the end of the tick.
struct Tick {
  double time = 0.0;
  RobotState state;
  Action action = Action::kForward;
  Mode mode = Mode::kSa;
};

struct Trajectory {
  RobotState start;
  std::vector<Tick> ticks;
  Outcome outcome = Outcome::kTimeout;
  std::vector<Cell> abstract_path;
  double abstract_length = 0.0;
  double h_time_seconds = 0.0;
  double time_budget = 0.0;
  double oa_trigger = 0.0;
};

Mode SelectMdp(const SensorReadings& readings, const PlanConfig& cfg);

// Moves the cursor past every target the robot is already within tolerance
// of; the last target uses the final tolerance.
std::size_t AdvanceSubgoal(const RobotState& robot, const std::vector<Point>& targets,
                           std::size_t cursor, const PlanConfig& cfg);

// Drives through `targets` with the two policies on `world`. The trajectory
// carries no abstract-path fields; Plan fills them in. An optional `finished`
// predicate, checked after every tick, also ends the run as reached.
Trajectory Execute(const GridMap& world, const RobotState& start,
                   const std::vector<Point>& targets, const Policy& sa,
                   const Policy& oa, const PlanConfig& cfg,
                   const std::function<bool(const RobotState&)>& finished = {});

// Abstract query on the graph's planning map, then execution on `world`
// (the original, possibly perturbed, map). Throws QueryError for a blocked
// endpoint and NoPathError when the planning map has no path.
Trajectory Plan(const GridMap& world, const SubgoalGraph& graph,
                const RobotState& start, Point goal, const Policy& sa,
                const Policy& oa, const PlanConfig& cfg);

// True when the segment a-b touches no blocked cell (corner touches count).
bool LineOfSight(const GridMap& map, Point a, Point b);

// Inserts waypoints wherever the chord between consecutive path cells is not
// in line of sight on `planning_map`: an optimal grid path for that leg,
// string-pulled. Clear legs are kept as they are.
std::vector<Cell> RefinePath(const GridMap& planning_map, const std::vector<Cell>& path);

// Cell centres of the abstract path after the start cell, with the final
// one replaced by the exact goal point.
std::vector<Point> TargetsFromPath(const std::vector<Cell>& path, Point goal);

// Adds `count` random rectangles (sides 1..max_size) centred within 3 cells of
// the abstract path, never covering a cell within `keep_clear` of a path
// vertex. Throws EnvironmentError after bounded retries.
GridMap InjectObstacles(const GridMap& world, const std::vector<Cell>& abstract_path,
                        int count, int max_size, std::uint64_t seed,
                        double keep_clear = 1.5);

// CSV: t,x,y,theta,action,mdp_mode per tick.
void WriteTrajectoryCsv(std::ostream& out, const Trajectory& trajectory);

}  // namespace sgrl

#endif  // SGRL_PLANNER_H_
