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

#include "sgrl/evalkit.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "sgrl/clearance.h"
#include "sgrl/errors.h"

namespace sgrl {

double ActionSwitchingFrequency(const std::vector<Action>& actions) {
  if (actions.empty()) throw ArgumentError("switching frequency of an empty run");
  int switches = 0;
  for (std::size_t i = 1; i < actions.size(); ++i) switches += actions[i] != actions[i - 1];
  return static_cast<double>(switches) / static_cast<double>(actions.size());
}

double ActionSwitchingFrequency(const Trajectory& trajectory) {
  std::vector<Action> actions;
  actions.reserve(trajectory.ticks.size());
  for (const Tick& t : trajectory.ticks) actions.push_back(t.action);
  return ActionSwitchingFrequency(actions);
}

double PathLength(const Trajectory& trajectory) {
  double len = 0.0;
  RobotState prev = trajectory.start;
  for (const Tick& t : trajectory.ticks) {
    len += std::hypot(t.state.x - prev.x, t.state.y - prev.y);
    prev = t.state;
  }
  return len;
}

RunMetrics MetricsOf(const Trajectory& trajectory, std::string run_id,
                     std::uint64_t seed) {
  RunMetrics m;
  m.run_id = std::move(run_id);
  m.seed = seed;
  m.outcome = trajectory.outcome;
  m.switch_freq = trajectory.ticks.empty() ? 0.0 : ActionSwitchingFrequency(trajectory);
  m.path_length = PathLength(trajectory);
  m.h_time = trajectory.h_time_seconds;
  return m;
}

void WriteMetricsCsv(std::ostream& out, const std::vector<RunMetrics>& runs) {
  out << "run_id,seed,outcome,switch_freq,path_len,h_time\n";
  out << std::setprecision(10);
  for (const RunMetrics& m : runs) {
    out << m.run_id << ',' << m.seed << ',' << OutcomeName(m.outcome) << ','
        << m.switch_freq << ',' << m.path_length << ',' << m.h_time << '\n';
  }
}

namespace {

double Median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  if (v.size() % 2) return v[mid];
  const double hi = v[mid];
  return (hi + *std::max_element(v.begin(), v.begin() + mid)) / 2.0;
}

double Mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double Seconds(std::chrono::steady_clock::duration d) {
  return std::chrono::duration<double>(d).count();
}

}  // namespace

HtimeReport HtimeBenchmark(const SubgoalGraph& graph, const HtimeConfig& cfg,
                           std::uint64_t seed) {
  if (cfg.queries < 1) throw ArgumentError("need at least one query");
  const GridMap& map = graph.map();
  const std::vector<Cell> free = map.FreeCells();
  if (free.size() < 2) throw QueryError("map has fewer than two free cells");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
  HtimeReport report;

  // Warm-up so first-touch costs are not attributed to either method.
  GridAStar(map, free.front(), free.back());
  FindPath(graph, free.front(), free.back());

  const long attempts = static_cast<long>(cfg.queries) * cfg.max_attempts_factor;
  std::vector<double> astar_times, ssg_times;
  for (long i = 0; i < attempts && report.solvable_pairs < cfg.queries; ++i) {
    const Cell s = free[pick(rng)];
    const Cell t = free[pick(rng)];
    if (Octile(s, t) < cfg.min_distance) continue;
    HtimePair p{s, t};
    const auto t0 = std::chrono::steady_clock::now();
    const std::optional<GridPath> grid = GridAStar(map, s, t);
    p.astar_seconds = Seconds(std::chrono::steady_clock::now() - t0);
    const PathQuery q = FindPath(graph, s, t);
    p.ssg_seconds = q.h_time_seconds;
    p.solvable = grid.has_value();
    p.ssg_solvable = q.path.has_value();
    if (p.solvable) p.astar_length = grid->length;
    if (p.ssg_solvable) p.ssg_length = q.path->length;
    if (p.solvable != p.ssg_solvable) report.verdicts_agree = false;
    if (p.solvable && p.ssg_solvable) {
      report.max_length_error =
          std::max(report.max_length_error, std::abs(p.astar_length - p.ssg_length));
      ++report.solvable_pairs;
      astar_times.push_back(p.astar_seconds);
      ssg_times.push_back(p.ssg_seconds);
    }
    report.pairs.push_back(p);
  }
  if (report.solvable_pairs < cfg.queries) {
    throw QueryError("found only " + std::to_string(report.solvable_pairs) +
                     " solvable pairs of the " + std::to_string(cfg.queries) +
                     " requested");
  }
  report.median_astar = Median(astar_times);
  report.median_ssg = Median(ssg_times);
  report.mean_astar = Mean(astar_times);
  report.mean_ssg = Mean(ssg_times);
  report.median_speedup =
      report.median_ssg > 0.0 ? report.median_astar / report.median_ssg
                              : std::numeric_limits<double>::infinity();
  return report;
}

void WriteHtimeCsv(std::ostream& out, const HtimeReport& report) {
  out << "start_x,start_y,goal_x,goal_y,solvable,astar_len,ssg_len,astar_s,ssg_s\n";
  out << std::setprecision(12);
  for (const HtimePair& p : report.pairs) {
    out << p.start.x << ',' << p.start.y << ',' << p.goal.x << ',' << p.goal.y << ','
        << (p.solvable ? 1 : 0) << ',' << p.astar_length << ',' << p.ssg_length << ','
        << p.astar_seconds << ',' << p.ssg_seconds << '\n';
  }
}

void WriteHtimeSummaryCsv(std::ostream& out, const HtimeReport& report) {
  out << "pairs,solvable,verdicts_agree,max_length_error,median_astar_s,median_ssg_s,"
         "mean_astar_s,mean_ssg_s,median_speedup\n";
  out << std::setprecision(10);
  out << report.pairs.size() << ',' << report.solvable_pairs << ','
      << (report.verdicts_agree ? 1 : 0) << ',' << report.max_length_error << ','
      << report.median_astar << ',' << report.median_ssg << ',' << report.mean_astar
      << ',' << report.mean_ssg << ',' << report.median_speedup << '\n';
}

GauntletRun RunGauntlet(const GridMap& map, const Policy& sa, const Policy& oa,
                        const GauntletConfig& cfg, std::uint64_t seed) {
  GauntletRun run;
  const DistanceField field = ComputeDistanceField(map);
  std::vector<int> rows;
  for (int y = 0; y < map.height(); ++y) {
    if (map.IsFree({1, y}) && field.at({1, y}) >= cfg.start_clearance) rows.push_back(y);
  }
  if (rows.empty()) {
    run.outcome = Outcome::kCollided;
    return run;
  }
  std::mt19937_64 rng(seed);
  const int row = rows[std::uniform_int_distribution<std::size_t>(0, rows.size() - 1)(rng)];
  const RobotState start{1.5, row + 0.5, 0.0};
  const double finish = map.width() - 1.0;

  PlanConfig plan = cfg.plan;
  plan.time_budget = cfg.budget;
  // The SA target sits beyond the finish line on the start row.
  const std::vector<Point> target{{map.width() + 5.0, row + 0.5}};
  run.trajectory = Execute(map, start, target, sa, oa, plan,
                           [finish](const RobotState& s) { return s.x >= finish; });
  run.outcome = run.trajectory.outcome;
  run.success = run.outcome == Outcome::kReached;
  if (!run.trajectory.ticks.empty()) {
    run.switch_freq = ActionSwitchingFrequency(run.trajectory);
  }
  return run;
}

double GauntletTest(const std::vector<GridMap>& maps, const Policy& sa,
                    const Policy& oa, const GauntletConfig& cfg,
                    std::uint64_t seed, std::vector<GauntletRun>* runs) {
  if (maps.empty()) return 0.0;
  int ok = 0;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    GauntletRun r = RunGauntlet(maps[i], sa, oa, cfg, seed + i);
    ok += r.success;
    if (runs) runs->push_back(std::move(r));
  }
  return static_cast<double>(ok) / static_cast<double>(maps.size());
}

TrainingReport Summarize(std::vector<SeedResult> seeds, double low_switch_threshold) {
  std::sort(seeds.begin(), seeds.end(),
            [](const SeedResult& a, const SeedResult& b) { return a.seed < b.seed; });
  TrainingReport r;
  r.seeds = std::move(seeds);
  if (r.seeds.empty()) return r;
  int success = 0, low = 0;
  double iters = 0.0;
  for (const SeedResult& s : r.seeds) {
    success += s.success;
    low += s.success && s.switch_freq < low_switch_threshold;
    iters += s.lspi_iters;
  }
  const double n = static_cast<double>(r.seeds.size());
  r.success_ratio = success / n;
  r.low_switch_ratio = low / n;
  r.mean_iterations = iters / n;
  return r;
}

Policy TrainGauntletSaPolicy(const GauntletConfig& cfg, std::size_t samples,
                             std::uint64_t seed) {
  SamplingConfig sc;
  sc.kind = MdpKind::kSubgoalApproach;
  sc.robot = cfg.plan.robot;
  sc.reward.distance_norm = std::hypot(cfg.width, cfg.height);
  const GridMap empty(cfg.width, cfg.height);
  const SampleSet set = CollectSamples(empty, samples, seed, sc);
  return TrainLspi(Transitions(set), SaBasis(sc.reward.distance_norm), {}).policy;
}

namespace {

// Separate streams for training maps, sampling and gauntlet maps.
std::uint64_t Mix(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ull + stream * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

TrainingReport RewardDesignExperiment(const ExperimentConfig& cfg,
                                      const GridMap& office_map, const Policy& sa) {
  if (cfg.n_seeds < 0) throw ArgumentError("n_seeds must be >= 0");
  std::vector<SeedResult> results;
  for (int i = 0; i < cfg.n_seeds; ++i) {
    const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(i);
    const GridMap train =
        cfg.map_kind == TrainingMapKind::kOffice
            ? office_map
            : RandomMap(office_map.width(), office_map.height(), cfg.random_map_ratio,
                        Mix(seed, 1));
    SamplingConfig sc;
    sc.kind = MdpKind::kObstacleAvoid;
    sc.oa_reward = cfg.reward;
    sc.use_switch_penalty = cfg.switch_penalty;
    sc.reward = cfg.reward_params;
    sc.robot = cfg.gauntlet.plan.robot;
    const SampleSet set = CollectSamples(train, cfg.sample_count, Mix(seed, 2), sc);
    const LspiResult trained =
        TrainLspi(Transitions(set), OaBasis(sc.robot.sensor_max), cfg.lspi);

    const GridMap test = RandomMap(cfg.gauntlet.width, cfg.gauntlet.height,
                                   cfg.gauntlet.obstacle_ratio, Mix(seed, 3));
    const GauntletRun run = RunGauntlet(test, sa, trained.policy, cfg.gauntlet, Mix(seed, 4));
    results.push_back({seed, run.success, run.outcome, run.switch_freq,
                       trained.iterations, trained.converged});
  }
  return Summarize(std::move(results), cfg.low_switch_threshold);
}

void WriteTrainingCsv(std::ostream& out, const TrainingReport& report) {
  out << "seed,success,switch_freq,lspi_iters\n";
  out << std::setprecision(10);
  for (const SeedResult& s : report.seeds) {
    out << s.seed << ',' << (s.success ? 1 : 0) << ',' << s.switch_freq << ','
        << s.lspi_iters << '\n';
  }
}

std::string RenderSvg(const SvgScene& scene) {
  if (!scene.map) throw ArgumentError("render needs a map");
  const GridMap& map = *scene.map;
  if (scene.planning_map && (scene.planning_map->width() != map.width() ||
                             scene.planning_map->height() != map.height())) {
    throw ArgumentError("planning map dimensions differ from the map");
  }
  if (scene.graph && (scene.graph->map().width() != map.width() ||
                      scene.graph->map().height() != map.height())) {
    throw ArgumentError("graph dimensions differ from the map");
  }
  const double k = scene.scale;
  std::ostringstream svg;
  svg << std::setprecision(6);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << map.width() * k
      << "\" height=\"" << map.height() * k << "\" viewBox=\"0 0 " << map.width() * k
      << ' ' << map.height() * k << "\">\n";

  // Row runs of equal cell class; class 0 free, 1 alert, 2 obstacle.
  static constexpr const char* kFill[] = {"#ffffff", "#f6c89f", "#333333"};
  svg << "<g id=\"cells\" stroke=\"none\">\n";
  for (int y = 0; y < map.height(); ++y) {
    int x = 0;
    while (x < map.width()) {
      auto cls = [&](int cx) {
        if (map.IsBlocked({cx, y})) return 2;
        return scene.planning_map && scene.planning_map->IsBlocked({cx, y}) ? 1 : 0;
      };
      const int c = cls(x);
      int end = x + 1;
      while (end < map.width() && cls(end) == c) ++end;
      svg << "<rect x=\"" << x * k << "\" y=\"" << y * k << "\" width=\""
          << (end - x) * k << "\" height=\"" << k << "\" fill=\"" << kFill[c]
          << "\"/>\n";
      x = end;
    }
  }
  svg << "</g>\n";

  auto cx = [k](double x) { return x * k; };
  if (scene.graph) {
    const SubgoalGraph& g = *scene.graph;
    svg << "<g id=\"graph\" stroke=\"#8fb3d9\" stroke-width=\"" << 0.25 * k << "\">\n";
    for (int v = 0; v < g.vertex_count(); ++v) {
      const auto [b, e] = g.Neighbors(v);
      for (const auto* it = b; it != e; ++it) {
        if (it->to < v) continue;
        const Cell a = g.vertex(v), c = g.vertex(it->to);
        svg << "<line x1=\"" << cx(a.x + 0.5) << "\" y1=\"" << cx(a.y + 0.5)
            << "\" x2=\"" << cx(c.x + 0.5) << "\" y2=\"" << cx(c.y + 0.5) << "\"/>\n";
      }
    }
    for (const Cell& v : g.vertices()) {
      svg << "<circle cx=\"" << cx(v.x + 0.5) << "\" cy=\"" << cx(v.y + 0.5)
          << "\" r=\"" << 0.4 * k << "\" fill=\"#2a6fb0\" stroke=\"none\"/>\n";
    }
    svg << "</g>\n";
  }
  if (scene.abstract_path && !scene.abstract_path->empty()) {
    svg << "<polyline id=\"abstract\" fill=\"none\" stroke=\"#d62728\" stroke-width=\""
        << 0.35 * k << "\" points=\"";
    for (const Cell& c : *scene.abstract_path) {
      svg << cx(c.x + 0.5) << ',' << cx(c.y + 0.5) << ' ';
    }
    svg << "\"/>\n";
  }
  if (scene.trajectory && !scene.trajectory->ticks.empty()) {
    const Trajectory& t = *scene.trajectory;
    svg << "<circle id=\"start\" cx=\"" << cx(t.start.x) << "\" cy=\"" << cx(t.start.y)
        << "\" r=\"" << 0.6 * k << "\" fill=\"#2ca02c\"/>\n";
    svg << "<polyline id=\"trajectory\" fill=\"none\" stroke=\"#2ca02c\" stroke-width=\""
        << 0.25 * k << "\" points=\"";
    for (const Tick& tick : t.ticks) {
      svg << cx(tick.state.x) << ',' << cx(tick.state.y) << ' ';
    }
    svg << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace sgrl
