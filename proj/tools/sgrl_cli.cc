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

// sgrl: offline preprocessing and training, online planning, benchmarks.
//
//   sgrl <command> [--config file.json] [--seed N] [--out dir] [key=value ...]
//
// Every run writes <out>/manifest.json with the resolved configuration, the
// seed and the SHA-256 of every input file.

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sgrl/clearance.h"
#include "sgrl/errors.h"
#include "sgrl/evalkit.h"
#include "sgrl/grid_map.h"
#include "sgrl/lspi.h"
#include "sgrl/mdp.h"
#include "sgrl/planner.h"
#include "sgrl/robot.h"
#include "sgrl/subgoal_graph.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace sgrl {
namespace {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitParse = 3,
  kExitNoPath = 4,
  kExitNumerical = 5,
};

class UsageError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Configuration: a fixed table of typed keys. Values set from text or JSON
// must match the key's type; unknown keys are rejected.

using Value = std::variant<double, long long, bool, std::string>;

struct KeySpec {
  Value fallback;
  std::vector<std::string> choices;  // non-empty for enumerated strings
};

const std::map<std::string, KeySpec>& Keys() {
  static const std::map<std::string, KeySpec> keys = [] {
    const RobotParams robot;
    const RewardParams reward;
    const LspiConfig lspi;
    const PlanConfig plan;
    const GauntletConfig gauntlet;
    const SamplingConfig sampling;
    std::map<std::string, KeySpec> k;
    k["seed"] = {1LL, {}};
    k["r_alert"] = {kDefaultAlertRadius, {}};

    k["robot.wheel_radius"] = {robot.wheel_radius, {}};
    k["robot.track_separation"] = {robot.track_separation, {}};
    k["robot.dt"] = {robot.dt, {}};
    k["robot.action_dt"] = {robot.action_dt, {}};
    k["robot.sensor_max"] = {robot.sensor_max, {}};
    k["robot.rays_per_sensor"] = {static_cast<long long>(robot.rays_per_sensor), {}};

    k["reward.goal_tolerance"] = {reward.goal_tolerance, {}};
    k["reward.distance_norm"] = {reward.distance_norm, {}};
    k["reward.angle_threshold"] = {reward.angle_threshold, {}};
    k["reward.comparative_scale"] = {reward.comparative_scale, {}};
    k["reward.brake_distance"] = {reward.brake_distance, {}};
    k["reward.safe_distance"] = {reward.safe_distance, {}};
    k["reward.collide_penalty"] = {reward.collide_penalty, {}};
    k["reward.switch_penalty"] = {reward.switch_penalty, {}};

    k["lspi.gamma"] = {lspi.gamma, {}};
    k["lspi.epsilon"] = {lspi.epsilon, {}};
    k["lspi.max_iterations"] = {static_cast<long long>(lspi.max_iterations), {}};
    k["lspi.ridge"] = {lspi.ridge, {}};

    k["plan.subgoal_tolerance"] = {plan.subgoal_tolerance, {}};
    k["plan.final_tolerance"] = {plan.final_tolerance, {}};
    k["plan.time_budget"] = {plan.time_budget, {}};
    k["plan.oa_trigger"] = {plan.oa_trigger, {}};

    k["preprocess.map"] = {std::string(), {}};

    k["train.kind"] = {std::string("sa"), {"sa", "oa"}};
    k["train.map"] = {std::string(), {}};
    k["train.width"] = {50LL, {}};
    k["train.height"] = {50LL, {}};
    k["train.samples"] = {20000LL, {}};
    k["train.oa_reward"] = {std::string("concise"), {"concise", "comparative"}};
    k["train.switch_penalty"] = {false, {}};
    k["train.hold"] = {sampling.hold, {}};
    k["train.episode_limit"] = {static_cast<long long>(sampling.episode_limit), {}};

    k["plan.map"] = {std::string(), {}};
    k["plan.graph"] = {std::string(), {}};
    k["plan.alert_map"] = {std::string(), {}};
    k["plan.sa_policy"] = {std::string(), {}};
    k["plan.oa_policy"] = {std::string(), {}};
    k["plan.start_x"] = {0.5, {}};
    k["plan.start_y"] = {0.5, {}};
    k["plan.start_theta"] = {0.0, {}};
    k["plan.goal_x"] = {0.5, {}};
    k["plan.goal_y"] = {0.5, {}};
    k["plan.inject"] = {0LL, {}};
    k["plan.inject_size"] = {3LL, {}};

    k["bench.map"] = {std::string(), {}};
    k["bench.queries"] = {100LL, {}};
    k["bench.min_distance"] = {0.0, {}};

    k["experiment.n_seeds"] = {30LL, {}};
    k["experiment.samples"] = {20000LL, {}};
    k["experiment.sa_samples"] = {20000LL, {}};
    k["experiment.map_kind"] = {std::string("office"), {"office", "random"}};
    k["experiment.office_map"] = {std::string(), {}};
    k["experiment.reward"] = {std::string("concise"), {"concise", "comparative"}};
    k["experiment.switch_penalty"] = {false, {}};
    k["experiment.random_ratio"] = {0.05, {}};
    k["experiment.low_switch_threshold"] = {0.3, {}};

    k["gauntlet.width"] = {static_cast<long long>(gauntlet.width), {}};
    k["gauntlet.height"] = {static_cast<long long>(gauntlet.height), {}};
    k["gauntlet.obstacle_ratio"] = {gauntlet.obstacle_ratio, {}};
    k["gauntlet.budget"] = {gauntlet.budget, {}};
    k["gauntlet.start_clearance"] = {gauntlet.start_clearance, {}};
    return k;
  }();
  return keys;
}

class Config {
 public:
  Config() {
    for (const auto& [key, spec] : Keys()) values_[key] = spec.fallback;
  }

  void SetText(const std::string& key, const std::string& text) {
    const KeySpec& spec = Spec(key);
    Value v;
    std::size_t used = 0;
    try {
      switch (spec.fallback.index()) {
        case 0:
          v = std::stod(text, &used);
          break;
        case 1:
          v = std::stoll(text, &used);
          break;
        case 2:
          if (text == "true" || text == "1") {
            v = true;
          } else if (text == "false" || text == "0") {
            v = false;
          } else {
            throw UsageError(key + " expects true or false, got '" + text + "'");
          }
          used = text.size();
          break;
        default:
          v = text;
          used = text.size();
      }
    } catch (const std::logic_error&) {
      throw UsageError(key + ": cannot read '" + text + "'");
    }
    if (used != text.size()) throw UsageError(key + ": trailing text in '" + text + "'");
    Store(key, spec, std::move(v));
  }

  void SetJson(const std::string& key, const json& j) {
    const KeySpec& spec = Spec(key);
    Value v;
    switch (spec.fallback.index()) {
      case 0:
        if (!j.is_number()) throw UsageError(key + " expects a number");
        v = j.get<double>();
        break;
      case 1:
        if (!j.is_number_integer()) throw UsageError(key + " expects an integer");
        v = j.get<long long>();
        break;
      case 2:
        if (!j.is_boolean()) throw UsageError(key + " expects true or false");
        v = j.get<bool>();
        break;
      default:
        if (!j.is_string()) throw UsageError(key + " expects a string");
        v = j.get<std::string>();
    }
    Store(key, spec, std::move(v));
  }

  // A flat object of keys, or a manifest whose "config" member is one.
  void LoadFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw EnvironmentError("cannot open config file: " + path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ParseError(path + ": " + e.what(), 0);
    }
    if (j.is_object() && j.contains("config") && j["config"].is_object()) j = j["config"];
    if (!j.is_object()) throw ParseError(path + ": expected a JSON object", 0);
    for (const auto& [key, value] : j.items()) SetJson(key, value);
  }

  double Num(const std::string& key) const { return std::get<double>(values_.at(key)); }
  long long Int(const std::string& key) const {
    return std::get<long long>(values_.at(key));
  }
  bool Flag(const std::string& key) const { return std::get<bool>(values_.at(key)); }
  const std::string& Str(const std::string& key) const {
    return std::get<std::string>(values_.at(key));
  }
  const std::string& Required(const std::string& key) const {
    const std::string& s = Str(key);
    if (s.empty()) throw UsageError("missing required key " + key);
    return s;
  }

  json ToJson() const {
    json j = json::object();
    for (const auto& [key, v] : values_) {
      std::visit([&](const auto& x) { j[key] = x; }, v);
    }
    return j;
  }

 private:
  static const KeySpec& Spec(const std::string& key) {
    const auto it = Keys().find(key);
    if (it == Keys().end()) throw UsageError("unknown config key: " + key);
    return it->second;
  }

  void Store(const std::string& key, const KeySpec& spec, Value v) {
    if (!spec.choices.empty()) {
      const std::string& s = std::get<std::string>(v);
      if (std::find(spec.choices.begin(), spec.choices.end(), s) == spec.choices.end()) {
        std::string all;
        for (const std::string& c : spec.choices) all += (all.empty() ? "" : "|") + c;
        throw UsageError(key + " must be one of " + all + ", got '" + s + "'");
      }
    }
    values_[key] = std::move(v);
  }

  std::map<std::string, Value> values_;
};

int Checked(const Config& c, const std::string& key) {
  const long long v = c.Int(key);
  if (v < 0 || v > std::numeric_limits<int>::max()) {
    throw UsageError(key + " out of range");
  }
  return static_cast<int>(v);
}

RobotParams RobotFrom(const Config& c) {
  RobotParams p;
  p.wheel_radius = c.Num("robot.wheel_radius");
  p.track_separation = c.Num("robot.track_separation");
  p.dt = c.Num("robot.dt");
  p.action_dt = c.Num("robot.action_dt");
  p.sensor_max = c.Num("robot.sensor_max");
  p.rays_per_sensor = Checked(c, "robot.rays_per_sensor");
  ValidateParams(p);
  return p;
}

RewardParams RewardFrom(const Config& c) {
  RewardParams p;
  p.goal_tolerance = c.Num("reward.goal_tolerance");
  p.distance_norm = c.Num("reward.distance_norm");
  p.angle_threshold = c.Num("reward.angle_threshold");
  p.comparative_scale = c.Num("reward.comparative_scale");
  p.brake_distance = c.Num("reward.brake_distance");
  p.safe_distance = c.Num("reward.safe_distance");
  p.collide_penalty = c.Num("reward.collide_penalty");
  p.switch_penalty = c.Num("reward.switch_penalty");
  return p;
}

LspiConfig LspiFrom(const Config& c) {
  LspiConfig l;
  l.gamma = c.Num("lspi.gamma");
  l.epsilon = c.Num("lspi.epsilon");
  l.max_iterations = Checked(c, "lspi.max_iterations");
  l.ridge = c.Num("lspi.ridge");
  return l;
}

PlanConfig PlanFrom(const Config& c) {
  PlanConfig p;
  p.subgoal_tolerance = c.Num("plan.subgoal_tolerance");
  p.final_tolerance = c.Num("plan.final_tolerance");
  p.time_budget = c.Num("plan.time_budget");
  p.oa_trigger = c.Num("plan.oa_trigger");
  p.robot = RobotFrom(c);
  ValidatePlanConfig(p);
  return p;
}

GauntletConfig GauntletFrom(const Config& c) {
  GauntletConfig g;
  g.width = Checked(c, "gauntlet.width");
  g.height = Checked(c, "gauntlet.height");
  g.obstacle_ratio = c.Num("gauntlet.obstacle_ratio");
  g.budget = c.Num("gauntlet.budget");
  g.start_clearance = c.Num("gauntlet.start_clearance");
  g.plan = PlanFrom(c);
  return g;
}

// ---------------------------------------------------------------------------
// Run bookkeeping

std::string Sha256File(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EnvironmentError("cannot open input file: " + path);
  const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed for " + path);
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  }
  return hex.str();
}

class Run {
 public:
  Run(std::string command, fs::path out, const Config& config)
      : command_(std::move(command)), out_(std::move(out)), config_(config) {
    fs::create_directories(out_);
  }

  const Config& config() const { return config_; }

  // Records the input's hash; returns the path unchanged.
  const std::string& Input(const std::string& path) {
    inputs_[path] = Sha256File(path);
    return path;
  }

  std::string Output(const std::string& name) {
    outputs_.push_back(name);
    return (out_ / name).string();
  }

  std::ofstream Open(const std::string& name) {
    std::ofstream f(Output(name));
    if (!f) throw EnvironmentError("cannot write " + (out_ / name).string());
    return f;
  }

  void Note(const std::string& key, json value) { notes_[key] = std::move(value); }

  void WriteManifest(const std::vector<std::string>& argv, int exit_code,
                     const std::string& error) const {
    json m;
    m["command"] = command_;
    m["argv"] = argv;
    m["seed"] = config_.Int("seed");
    m["config"] = config_.ToJson();
    json inputs = json::object();
    for (const auto& [path, hash] : inputs_) inputs[path] = {{"sha256", hash}};
    m["inputs"] = inputs;
    m["outputs"] = outputs_;
    m["results"] = notes_;
    m["exit_code"] = exit_code;
    if (!error.empty()) m["error"] = error;
    std::ofstream f(out_ / "manifest.json");
    f << m.dump(2) << '\n';
  }

 private:
  std::string command_;
  fs::path out_;
  const Config& config_;
  std::map<std::string, std::string> inputs_;
  std::vector<std::string> outputs_;
  json notes_ = json::object();
};

double MillisSince(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::uint64_t SeedOf(const Config& c) { return static_cast<std::uint64_t>(c.Int("seed")); }

// ---------------------------------------------------------------------------
// Commands

void Preprocess(Run& run) {
  const Config& c = run.config();
  const GridMap map = LoadMapFile(run.Input(c.Required("preprocess.map")));
  const auto t0 = std::chrono::steady_clock::now();
  const DistanceField field = ComputeDistanceField(map);
  const double edt_ms = MillisSince(t0);
  const auto t1 = std::chrono::steady_clock::now();
  const GridMap alert = BuildAlertMap(map, field, c.Num("r_alert"));
  const double alert_ms = MillisSince(t1);
  const auto t2 = std::chrono::steady_clock::now();
  const SubgoalGraph graph = SubgoalGraph::Build(alert);
  const double graph_ms = MillisSince(t2);

  SaveMapFile(alert, run.Output("alert.map"));
  std::ofstream g = run.Open("graph.txt");
  graph.Write(g);
  std::ofstream d = run.Open("distance.csv");
  field.WriteCsv(d);
  std::ofstream s = run.Open("stats.csv");
  s << "vertices,edges,distance_ms,alert_ms,graph_ms,total_ms\n"
    << graph.vertex_count() << ',' << graph.edge_count() << ',' << edt_ms << ','
    << alert_ms << ',' << graph_ms << ',' << edt_ms + alert_ms + graph_ms << '\n';
  run.Note("vertices", graph.vertex_count());
  run.Note("edges", graph.edge_count());
  run.Note("preprocess_ms", edt_ms + alert_ms + graph_ms);
  std::cout << "vertices " << graph.vertex_count() << " edges " << graph.edge_count()
            << " preprocess_ms " << edt_ms + alert_ms + graph_ms << '\n';
}

void Train(Run& run) {
  const Config& c = run.config();
  SamplingConfig sc;
  sc.kind = c.Str("train.kind") == "sa" ? MdpKind::kSubgoalApproach : MdpKind::kObstacleAvoid;
  sc.oa_reward = c.Str("train.oa_reward") == "concise" ? OaRewardKind::kConcise
                                                        : OaRewardKind::kComparative;
  sc.use_switch_penalty = c.Flag("train.switch_penalty");
  sc.reward = RewardFrom(c);
  sc.robot = RobotFrom(c);
  sc.hold = c.Num("train.hold");
  sc.episode_limit = Checked(c, "train.episode_limit");
  ValidateRewardParams(sc.reward, sc.robot.sensor_max);

  const std::string& map_path = c.Str("train.map");
  const GridMap env = map_path.empty()
                          ? GridMap(Checked(c, "train.width"), Checked(c, "train.height"))
                          : LoadMapFile(run.Input(map_path));
  const auto samples = static_cast<std::size_t>(c.Int("train.samples"));
  if (c.Int("train.samples") < 0) throw UsageError("train.samples must be >= 0");

  const auto t0 = std::chrono::steady_clock::now();
  const SampleSet set = CollectSamples(env, samples, SeedOf(c), sc);
  const BasisSpec basis = sc.kind == MdpKind::kSubgoalApproach
                              ? SaBasis(sc.reward.distance_norm)
                              : OaBasis(sc.robot.sensor_max);
  const LspiResult result = TrainLspi(Transitions(set), basis, LspiFrom(c));
  const double ms = MillisSince(t0);

  const std::string kind = c.Str("train.kind");
  result.policy.Save(run.Output(kind + "_policy.txt"));
  std::ofstream s = run.Open("samples.csv");
  WriteSamplesCsv(s, set, sc.kind);
  std::ofstream r = run.Open("train.csv");
  r << "kind,seed,samples,lspi_iters,converged,train_ms\n"
    << kind << ',' << SeedOf(c) << ',' << set.size() << ',' << result.iterations << ','
    << (result.converged ? 1 : 0) << ',' << ms << '\n';
  run.Note("lspi_iters", result.iterations);
  run.Note("converged", result.converged);
  std::cout << kind << " policy: " << result.iterations << " iterations, "
            << (result.converged ? "converged" : "not converged") << '\n';
}

void PlanCommand(Run& run) {
  const Config& c = run.config();
  const GridMap world = LoadMapFile(run.Input(c.Required("plan.map")));
  const Policy sa = Policy::Load(run.Input(c.Required("plan.sa_policy")));
  const Policy oa = Policy::Load(run.Input(c.Required("plan.oa_policy")));

  // Preprocessed artifacts when given, otherwise built in-process.
  const std::string& alert_path = c.Str("plan.alert_map");
  const std::string& graph_path = c.Str("plan.graph");
  if (alert_path.empty() != graph_path.empty()) {
    throw UsageError("plan.alert_map and plan.graph go together");
  }
  GridMap planning;
  std::optional<SubgoalGraph> graph;
  if (graph_path.empty()) {
    planning = BuildAlertMap(world, ComputeDistanceField(world), c.Num("r_alert"));
    graph = SubgoalGraph::Build(planning);
  } else {
    planning = LoadMapFile(run.Input(alert_path));
    std::ifstream in(run.Input(graph_path));
    graph = SubgoalGraph::Read(planning, in);
  }
  if (planning.width() != world.width() || planning.height() != world.height()) {
    throw UsageError("alert map and map dimensions differ");
  }

  const RobotState start{c.Num("plan.start_x"), c.Num("plan.start_y"),
                         c.Num("plan.start_theta")};
  const Point goal{c.Num("plan.goal_x"), c.Num("plan.goal_y")};
  const PlanConfig cfg = PlanFrom(c);

  GridMap arena = world;
  const int inject = Checked(c, "plan.inject");
  if (inject > 0) {
    const PathQuery q = FindPath(*graph, CellOf(start.x, start.y), CellOf(goal.x, goal.y));
    if (!q.path) throw NoPathError("no path on the planning map");
    arena = InjectObstacles(world, q.path->cells, inject, Checked(c, "plan.inject_size"),
                            SeedOf(c));
    SaveMapFile(arena, run.Output("arena.map"));
  }
  const Trajectory t = Plan(arena, *graph, start, goal, sa, oa, cfg);

  std::ofstream tc = run.Open("trajectory.csv");
  WriteTrajectoryCsv(tc, t);
  const RunMetrics m = MetricsOf(t, "plan", SeedOf(c));
  std::ofstream mc = run.Open("metrics.csv");
  WriteMetricsCsv(mc, {m});
  SvgScene scene;
  scene.map = &arena;
  scene.planning_map = &planning;
  scene.graph = &*graph;
  scene.abstract_path = &t.abstract_path;
  scene.trajectory = &t;
  std::ofstream svg = run.Open("plan.svg");
  svg << RenderSvg(scene);

  run.Note("outcome", std::string(OutcomeName(t.outcome)));
  run.Note("switch_freq", m.switch_freq);
  run.Note("path_length", m.path_length);
  run.Note("abstract_length", t.abstract_length);
  std::cout << "outcome " << OutcomeName(t.outcome) << " ticks " << t.ticks.size()
            << " switch_freq " << m.switch_freq << " path_len " << m.path_length
            << " abstract_len " << t.abstract_length << '\n';
}

void Bench(Run& run) {
  const Config& c = run.config();
  const GridMap map = LoadMapFile(run.Input(c.Required("bench.map")));
  const SubgoalGraph graph = SubgoalGraph::Build(map);
  HtimeConfig hc;
  hc.queries = Checked(c, "bench.queries");
  hc.min_distance = c.Num("bench.min_distance");
  const HtimeReport r = HtimeBenchmark(graph, hc, SeedOf(c));
  std::ofstream rows = run.Open("htime.csv");
  WriteHtimeCsv(rows, r);
  std::ofstream summary = run.Open("htime_summary.csv");
  WriteHtimeSummaryCsv(summary, r);
  run.Note("median_speedup", r.median_speedup);
  run.Note("verdicts_agree", r.verdicts_agree);
  std::cout << "pairs " << r.solvable_pairs << " median_astar_s " << r.median_astar
            << " median_ssg_s " << r.median_ssg << " speedup " << r.median_speedup
            << (r.verdicts_agree ? "" : " VERDICT MISMATCH") << '\n';
}

void Experiment(Run& run) {
  const Config& c = run.config();
  ExperimentConfig ec;
  if (c.Int("experiment.n_seeds") < 0 || c.Int("experiment.samples") < 0 ||
      c.Int("experiment.sa_samples") < 0) {
    throw UsageError("experiment sizes must be >= 0");
  }
  ec.n_seeds = Checked(c, "experiment.n_seeds");
  ec.base_seed = SeedOf(c);
  ec.sample_count = static_cast<std::size_t>(c.Int("experiment.samples"));
  ec.map_kind = c.Str("experiment.map_kind") == "office" ? TrainingMapKind::kOffice
                                                         : TrainingMapKind::kRandom;
  ec.reward = c.Str("experiment.reward") == "concise" ? OaRewardKind::kConcise
                                                      : OaRewardKind::kComparative;
  ec.switch_penalty = c.Flag("experiment.switch_penalty");
  ec.random_map_ratio = c.Num("experiment.random_ratio");
  ec.low_switch_threshold = c.Num("experiment.low_switch_threshold");
  ec.reward_params = RewardFrom(c);
  ec.lspi = LspiFrom(c);
  ec.gauntlet = GauntletFrom(c);
  ValidateRewardParams(ec.reward_params, ec.gauntlet.plan.robot.sensor_max);

  // The office map also fixes the size of random training maps.
  const GridMap office = LoadMapFile(run.Input(c.Required("experiment.office_map")));
  const Policy sa = TrainGauntletSaPolicy(
      ec.gauntlet, static_cast<std::size_t>(c.Int("experiment.sa_samples")), SeedOf(c));
  const TrainingReport r = RewardDesignExperiment(ec, office, sa);

  std::ofstream rows = run.Open("training.csv");
  WriteTrainingCsv(rows, r);
  std::ofstream summary = run.Open("summary.csv");
  summary << "seeds,success_ratio,low_switch_ratio,mean_iterations\n"
          << r.seeds.size() << ',' << r.success_ratio << ',' << r.low_switch_ratio << ','
          << r.mean_iterations << '\n';
  run.Note("success_ratio", r.success_ratio);
  run.Note("low_switch_ratio", r.low_switch_ratio);
  run.Note("mean_iterations", r.mean_iterations);
  std::cout << "seeds " << r.seeds.size() << " success " << r.success_ratio
            << " low_switch " << r.low_switch_ratio << " mean_iters " << r.mean_iterations
            << '\n';
}

int Main(int argc, char** argv) {
  CLI::App app{"Subgoal-graph planning with learned trajectory policies"};
  app.require_subcommand(1);

  struct Common {
    std::string config_path;
    std::optional<long long> seed;
    std::string out = ".";
    std::vector<std::string> overrides;
  } common;

  using Handler = void (*)(Run&);
  const std::vector<std::tuple<std::string, std::string, Handler>> commands{
      {"preprocess", "distance field, alert map and subgoal graph for a map", Preprocess},
      {"train", "collect samples and train an SA or OA policy", Train},
      {"plan", "plan and execute one start-goal query", PlanCommand},
      {"bench", "time subgoal-graph queries against grid A*", Bench},
      {"experiment", "OA training and gauntlet runs over many seeds", Experiment},
  };
  std::map<CLI::App*, std::pair<std::string, Handler>> handlers;
  for (const auto& [name, help, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", common.config_path, "JSON config (flat keys or a manifest)");
    sub->add_option("--seed", common.seed, "master seed (overrides the seed key)");
    sub->add_option("--out", common.out, "output directory");
    sub->add_option("overrides", common.overrides, "key=value settings");
    handlers[sub] = {name, fn};
  }
  app.add_subcommand("defaults", "print every config key with its default as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (app.got_subcommand("defaults")) {
    std::cout << Config().ToJson().dump(2) << '\n';
    return kExitOk;
  }

  const std::vector<std::string> args(argv, argv + argc);
  Config config;
  std::optional<Run> run;
  auto fail = [&](int code, const std::string& what) {
    std::cerr << "error: " << what << '\n';
    if (run) run->WriteManifest(args, code, what);
    return code;
  };
  try {
    // Rejections happen here, before any work.
    if (!common.config_path.empty()) config.LoadFile(common.config_path);
    for (const std::string& kv : common.overrides) {
      const std::size_t eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw UsageError("expected key=value, got '" + kv + "'");
      }
      config.SetText(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (common.seed) config.SetText("seed", std::to_string(*common.seed));
    if (config.Int("seed") < 0) throw UsageError("seed must be >= 0");

    CLI::App* chosen = app.get_subcommands().front();
    const auto& [name, fn] = handlers.at(chosen);
    run.emplace(name, common.out, config);
    if (!common.config_path.empty()) run->Input(common.config_path);
    fn(*run);
    run->WriteManifest(args, kExitOk, "");
    return kExitOk;
  } catch (const UsageError& e) {
    return fail(kExitUsage, e.what());
  } catch (const ArgumentError& e) {
    return fail(kExitUsage, e.what());
  } catch (const ParseError& e) {
    return fail(kExitParse, e.what());
  } catch (const QueryError& e) {
    return fail(kExitNoPath, e.what());
  } catch (const NumericalError& e) {
    return fail(kExitNumerical, e.what());
  } catch (const std::exception& e) {
    return fail(kExitFailure, e.what());
  }
}

}  // namespace
}  // namespace sgrl

int main(int argc, char** argv) { return sgrl::Main(argc, argv); }
