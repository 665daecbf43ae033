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

#include "sgrl/lspi.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "sgrl/errors.h"

namespace sgrl {

void ValidateBasis(const BasisSpec& spec) {
  if (spec.state_dim < 1) throw ArgumentError("basis state_dim must be >= 1");
  if (spec.order < 1) throw ArgumentError("basis order must be >= 1");
  if (spec.action_count < 1) throw ArgumentError("basis action_count must be >= 1");
  if (static_cast<int>(spec.lower.size()) != spec.state_dim ||
      static_cast<int>(spec.upper.size()) != spec.state_dim) {
    throw ArgumentError("basis bounds must have state_dim entries");
  }
  for (int i = 0; i < spec.state_dim; ++i) {
    if (!(spec.upper[i] > spec.lower[i])) {
      throw ArgumentError("basis bounds must satisfy lower < upper");
    }
  }
}

Eigen::VectorXd BasisBlock(std::span<const double> state, const BasisSpec& spec) {
  if (static_cast<int>(state.size()) != spec.state_dim) {
    throw ArgumentError("state has " + std::to_string(state.size()) +
                        " components, basis expects " +
                        std::to_string(spec.state_dim));
  }
  Eigen::VectorXd block(spec.BlockSize());
  block[0] = 1.0;
  int k = 1;
  for (int i = 0; i < spec.state_dim; ++i) {
    const double x = std::clamp(
        (state[i] - spec.lower[i]) / (spec.upper[i] - spec.lower[i]), 0.0, 1.0);
    double power = 1.0;
    for (int j = 0; j < spec.order; ++j) {
      power *= x;
      block[k++] = power;
    }
  }
  return block;
}

Eigen::VectorXd Features(std::span<const double> state, int action,
                         const BasisSpec& spec) {
  if (action < 0 || action >= spec.action_count) {
    throw ArgumentError("action index out of range");
  }
  const int b = spec.BlockSize();
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(spec.FeatureCount());
  phi.segment(action * b, b) = BasisBlock(state, spec);
  return phi;
}

Policy::Policy(BasisSpec spec, Eigen::VectorXd weights)
    : spec_(std::move(spec)), weights_(std::move(weights)) {
  ValidateBasis(spec_);
  if (weights_.size() != spec_.FeatureCount()) {
    throw ArgumentError("weight vector length does not match the basis");
  }
  if (!weights_.allFinite()) throw NumericalError("policy weights are not finite");
}

double Policy::Q(std::span<const double> state, int action) const {
  if (action < 0 || action >= spec_.action_count) {
    throw ArgumentError("action index out of range");
  }
  const int b = spec_.BlockSize();
  return weights_.segment(action * b, b).dot(BasisBlock(state, spec_));
}

int Policy::GreedyFromBlock(const Eigen::VectorXd& block) const {
  const int b = spec_.BlockSize();
  int best = 0;
  double best_q = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < spec_.action_count; ++a) {
    const double q = weights_.segment(a * b, b).dot(block);
    if (!std::isfinite(q)) throw NumericalError("non-finite Q value");
    if (q > best_q) {
      best_q = q;
      best = a;
    }
  }
  return best;
}

int Policy::Greedy(std::span<const double> state) const {
  return GreedyFromBlock(BasisBlock(state, spec_));
}

void Policy::Write(std::ostream& out) const {
  out << "sgrl-policy 1\n";
  out << "state_dim " << spec_.state_dim << "\n";
  out << "order " << spec_.order << "\n";
  out << "actions " << spec_.action_count << "\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "lower";
  for (double v : spec_.lower) out << ' ' << v;
  out << "\nupper";
  for (double v : spec_.upper) out << ' ' << v;
  out << "\nweights " << weights_.size() << "\n";
  for (Eigen::Index i = 0; i < weights_.size(); ++i) out << weights_[i] << "\n";
}

namespace {

std::istringstream ExpectLine(std::istream& in, const std::string& key, int& line) {
  std::string text;
  ++line;
  if (!std::getline(in, text)) throw ParseError("missing '" + key + "' line", line);
  std::istringstream fields(text);
  std::string word;
  fields >> word;
  if (word != key) throw ParseError("expected '" + key + "'", line);
  return fields;
}

std::vector<double> ReadDoubles(std::istringstream& fields, int n, int line) {
  std::vector<double> out(n);
  for (double& v : out) {
    if (!(fields >> v)) throw ParseError("too few values", line);
  }
  return out;
}

}  // namespace

Policy Policy::Read(std::istream& in) {
  int line = 0;
  BasisSpec spec;
  int version = 0;
  if (!(ExpectLine(in, "sgrl-policy", line) >> version) || version != 1) {
    throw ParseError("unsupported policy version", line);
  }
  if (!(ExpectLine(in, "state_dim", line) >> spec.state_dim)) {
    throw ParseError("bad state_dim", line);
  }
  if (!(ExpectLine(in, "order", line) >> spec.order)) throw ParseError("bad order", line);
  if (!(ExpectLine(in, "actions", line) >> spec.action_count)) {
    throw ParseError("bad actions", line);
  }
  if (spec.state_dim < 1 || spec.order < 1 || spec.action_count < 1) {
    throw ParseError("basis sizes must be positive", line);
  }
  auto lower = ExpectLine(in, "lower", line);
  spec.lower = ReadDoubles(lower, spec.state_dim, line);
  auto upper = ExpectLine(in, "upper", line);
  spec.upper = ReadDoubles(upper, spec.state_dim, line);
  long long count = 0;
  if (!(ExpectLine(in, "weights", line) >> count) || count != spec.FeatureCount()) {
    throw ParseError("weight count does not match the basis", line);
  }
  Eigen::VectorXd w(count);
  for (long long i = 0; i < count; ++i) {
    ++line;
    if (!(in >> w[i])) throw ParseError("missing weight", line);
  }
  try {
    return Policy(std::move(spec), std::move(w));
  } catch (const Error& e) {
    throw ParseError(e.what(), line);
  }
}

void Policy::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  Write(out);
  if (!out) throw Error("write failed for " + path);
}

Policy Policy::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return Read(in);
}

LstdqSystem AccumulateLstdq(std::span<const Transition> samples,
                            const BasisSpec& spec, double gamma,
                            const Policy& policy, double ridge) {
  ValidateBasis(spec);
  const int k = spec.FeatureCount();
  const int b = spec.BlockSize();
  LstdqSystem sys{ridge * Eigen::MatrixXd::Identity(k, k), Eigen::VectorXd::Zero(k)};
  // phi(s,a) is nonzero only in block a, so each sample touches at most two
  // b-by-b blocks of A.
  for (const Transition& t : samples) {
    if (t.action < 0 || t.action >= spec.action_count) {
      throw ArgumentError("sample action index out of range");
    }
    const Eigen::VectorXd f = BasisBlock(t.state, spec);
    const int row = t.action * b;
    sys.a.block(row, row, b, b).noalias() += f * f.transpose();
    sys.b.segment(row, b) += t.reward * f;
    if (!t.terminal && gamma != 0.0) {
      const Eigen::VectorXd g = BasisBlock(t.next_state, spec);
      const int col = policy.GreedyFromBlock(g) * b;
      sys.a.block(row, col, b, b).noalias() -= gamma * (f * g.transpose());
    }
  }
  return sys;
}

Eigen::VectorXd SolveLstdq(const LstdqSystem& system, double ridge) {
  const Eigen::Index k = system.a.rows();
  double added = 0.0;
  double delta = ridge;
  double rcond = 0.0;
  while (true) {
    const Eigen::MatrixXd a =
        system.a + added * Eigen::MatrixXd::Identity(k, k);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    rcond = lu.rcond();
    if (rcond > 1e-14) {
      Eigen::VectorXd w = lu.solve(system.b);
      if (w.allFinite()) return w;
    }
    if (delta >= 1e-2) break;
    delta = delta > 0.0 ? std::min(delta * 10.0, 1e-2) : 1e-6;
    added = delta - ridge;
  }
  std::ostringstream msg;
  msg << "LSTDQ system is singular (reciprocal condition estimate " << rcond
      << " after ridge " << delta << ")";
  throw NumericalError(msg.str());
}

Eigen::VectorXd Lstdq(std::span<const Transition> samples, const BasisSpec& spec,
                      double gamma, const Policy& policy, double ridge) {
  if (samples.empty()) throw ArgumentError("LSTDQ needs at least one sample");
  return SolveLstdq(AccumulateLstdq(samples, spec, gamma, policy, ridge), ridge);
}

LspiResult TrainLspi(std::span<const Transition> samples, const BasisSpec& spec,
                     const LspiConfig& config,
                     std::optional<Eigen::VectorXd> initial_weights) {
  ValidateBasis(spec);
  if (samples.empty()) throw ArgumentError("LSPI needs at least one sample");
  if (!(config.gamma >= 0.0 && config.gamma < 1.0)) {
    throw ArgumentError("gamma must lie in [0, 1)");
  }
  if (config.max_iterations < 1) throw ArgumentError("max_iterations must be >= 1");
  if (!(config.ridge >= 0.0)) throw ArgumentError("ridge must be nonnegative");

  Eigen::VectorXd w = initial_weights.value_or(
      Eigen::VectorXd::Zero(spec.FeatureCount()));
  LspiResult result;
  result.policy = Policy(spec, w);
  for (int it = 1; it <= config.max_iterations; ++it) {
    Eigen::VectorXd next =
        Lstdq(samples, spec, config.gamma, result.policy, config.ridge);
    const double change = (next - w).norm();
    w = std::move(next);
    result.policy = Policy(spec, w);
    result.iterations = it;
    if (change < config.epsilon) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace sgrl
