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

#ifndef SGRL_EVALKIT_H_
#define SGRL_EVALKIT_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sgrl/grid_map.h"
#include "sgrl/lspi.h"
#include "sgrl/mdp.h"
#include "sgrl/planner.h"
#include "sgrl/subgoal_graph.h"

namespace sgrl {

// Fraction of ticks whose action differs from the previous tick's. Throws
// ArgumentError for a trajectory without ticks.
double ActionSwitchingFrequency(const Trajectory& trajectory);
double ActionSwitchingFrequency(const std::vector<Action>& actions);

// Polyline length from the start pose through every tick pose.
double PathLength(const Trajectory& trajectory);

struct RunMetrics {
  std::string run_id;
  std::uint64_t seed = 0;
  Outcome outcome = Outcome::kTimeout;
  double switch_freq = 0.0;
  double path_length = 0.0;
  double h_time = 0.0;
};

RunMetrics MetricsOf(const Trajectory& trajectory, std::string run_id,
                     std::uint64_t seed);

// CSV: run_id,seed,outcome,switch_freq,path_len,h_time
void WriteMetricsCsv(std::ostream& out, const std::vector<RunMetrics>& runs);

// ---------------------------------------------------------------------------
// H-time benchmark

struct HtimePair {
  Cell start;
  Cell goal;
  bool solvable = false;
  bool ssg_solvable = false;
  double astar_length = 0.0;
  double ssg_length = 0.0;
  double astar_seconds = 0.0;
  double ssg_seconds = 0.0;
};

struct HtimeReport {
  std::vector<HtimePair> pairs;  // every sampled pair, solvable or not
  int solvable_pairs = 0;
  bool verdicts_agree = true;
  double max_length_error = 0.0;
  double median_astar = 0.0;
  double median_ssg = 0.0;
  double mean_astar = 0.0;
  double mean_ssg = 0.0;
  double median_speedup = 0.0;  // median_astar / median_ssg
};

struct HtimeConfig {
  int queries = 100;             // solvable pairs to collect
  double min_distance = 0.0;     // minimum octile distance between endpoints
  int max_attempts_factor = 100; // attempts allowed per requested pair
};

// Samples free start/goal pairs until `queries` solvable ones are found and
// times both methods on each (one warm-up query first). Throws QueryError when
// too few solvable pairs turn up.
HtimeReport HtimeBenchmark(const SubgoalGraph& graph, const HtimeConfig& cfg,
                           std::uint64_t seed);

// CSV: start_x,start_y,goal_x,goal_y,solvable,astar_len,ssg_len,astar_s,ssg_s
void WriteHtimeCsv(std::ostream& out, const HtimeReport& report);
// One-row summary CSV with a header.
void WriteHtimeSummaryCsv(std::ostream& out, const HtimeReport& report);

// ---------------------------------------------------------------------------
// Gauntlet and training experiments

struct GauntletConfig {
  int width = 50;
  int height = 50;
  double obstacle_ratio = 0.05;
  double budget = 200.0;         // simulated seconds
  double start_clearance = 2.0;  // minimum obstacle distance at the start cell
  PlanConfig plan;               // oa_trigger, robot, tolerances
};

struct GauntletRun {
  bool success = false;
  Outcome outcome = Outcome::kTimeout;
  double switch_freq = 0.0;
  Trajectory trajectory;
};

// Starts on the left edge heading +x and drives with the executor: the SA
// policy aims straight across, the OA policy takes over near obstacles.
// Success is reaching the right-edge finish line without collision within
// the budget. `seed` picks the start row.
GauntletRun RunGauntlet(const GridMap& map, const Policy& sa, const Policy& oa,
                        const GauntletConfig& cfg, std::uint64_t seed);

// Success ratio over a set of maps.
double GauntletTest(const std::vector<GridMap>& maps, const Policy& sa,
                    const Policy& oa, const GauntletConfig& cfg,
                    std::uint64_t seed, std::vector<GauntletRun>* runs = nullptr);

enum class TrainingMapKind { kOffice, kRandom };

struct ExperimentConfig {
  int n_seeds = 30;
  std::uint64_t base_seed = 1;
  std::size_t sample_count = 20000;
  TrainingMapKind map_kind = TrainingMapKind::kOffice;
  OaRewardKind reward = OaRewardKind::kConcise;
  bool switch_penalty = false;
  double random_map_ratio = 0.05;
  double low_switch_threshold = 0.3;
  RewardParams reward_params;
  LspiConfig lspi;
  GauntletConfig gauntlet;
};

struct SeedResult {
  std::uint64_t seed = 0;
  bool success = false;
  Outcome outcome = Outcome::kTimeout;
  double switch_freq = 0.0;
  int lspi_iters = 0;
  bool converged = false;
};

struct TrainingReport {
  std::vector<SeedResult> seeds;
  double success_ratio = 0.0;
  // Policies that succeed with switching frequency below the threshold.
  double low_switch_ratio = 0.0;
  double mean_iterations = 0.0;
};

TrainingReport Summarize(std::vector<SeedResult> seeds, double low_switch_threshold);

// The SA policy used by the gauntlet: trained on an empty map of the
// gauntlet's size with the default SA pipeline.
Policy TrainGauntletSaPolicy(const GauntletConfig& cfg, std::size_t samples,
                             std::uint64_t seed);

// Per seed: collect OA samples on the training map, train, run the gauntlet
// on a fresh random map derived from the seed.
TrainingReport RewardDesignExperiment(const ExperimentConfig& cfg,
                                      const GridMap& office_map, const Policy& sa);

// CSV: seed,success,switch_freq,lspi_iters
void WriteTrainingCsv(std::ostream& out, const TrainingReport& report);

// ---------------------------------------------------------------------------
// SVG

struct SvgScene {
  const GridMap* map = nullptr;           // required
  const GridMap* planning_map = nullptr;  // cells blocked here only get the alert tint
  const SubgoalGraph* graph = nullptr;
  const std::vector<Cell>* abstract_path = nullptr;
  const Trajectory* trajectory = nullptr;
  double scale = 4.0;  // pixels per cell
};

// Throws ArgumentError when layer dimensions disagree.
std::string RenderSvg(const SvgScene& scene);

}  // namespace sgrl

#endif  // SGRL_EVALKIT_H_
