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

#ifndef SGRL_LSPI_H_
#define SGRL_LSPI_H_

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sgrl {

// Per-action polynomial basis. Each state component is scaled into [0, 1]
// using [lower, upper] (and clamped), then expanded to powers 1..order. The
// block for action a is [1, x1, x1^2, ..., x1^p, x2, ..., xd^p]; blocks of the
// other actions are zero.
struct BasisSpec {
  int state_dim = 0;
  int order = 1;
  int action_count = 3;
  std::vector<double> lower;
  std::vector<double> upper;

  int BlockSize() const { return 1 + state_dim * order; }
  int FeatureCount() const { return action_count * BlockSize(); }

  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;
};

// Throws ArgumentError on inconsistent fields.
void ValidateBasis(const BasisSpec& spec);

// The action-independent block [1, x1, ..., xd^p].
Eigen::VectorXd BasisBlock(std::span<const double> state, const BasisSpec& spec);

// Full feature vector phi(s, a) of length FeatureCount().
Eigen::VectorXd Features(std::span<const double> state, int action,
                         const BasisSpec& spec);

// Linear Q-function with greedy action selection.
class Policy {
 public:
  Policy() = default;
  Policy(BasisSpec spec, Eigen::VectorXd weights);

  const BasisSpec& spec() const { return spec_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  double Q(std::span<const double> state, int action) const;
  // argmax_a Q(s, a); ties go to the lowest action index. Throws
  // NumericalError on a non-finite Q value.
  int Greedy(std::span<const double> state) const;
  int GreedyFromBlock(const Eigen::VectorXd& block) const;

  // Text format: header lines with the basis, then one weight per line,
  // written with full round-trip precision.
  void Write(std::ostream& out) const;
  static Policy Read(std::istream& in);
  void Save(const std::string& path) const;
  static Policy Load(const std::string& path);

  friend bool operator==(const Policy& a, const Policy& b) {
    return a.spec_ == b.spec_ && a.weights_ == b.weights_;
  }

 private:
  BasisSpec spec_;
  Eigen::VectorXd weights_;
};

// One (s, a, r, s', terminal) tuple.
struct Transition {
  std::vector<double> state;
  int action = 0;
  double reward = 0.0;
  std::vector<double> next_state;
  bool terminal = false;
};

struct LspiConfig {
  double gamma = 0.9;
  double epsilon = 1e-3;
  int max_iterations = 20;
  double ridge = 1e-6;
};

// The accumulated least-squares system A w = b.
struct LstdqSystem {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
};

// Accumulates A = ridge * I + sum phi(s,a) (phi(s,a) - gamma phi(s', pi(s')))^T
// and b = sum phi(s,a) r, with the next-state term dropped on terminal
// samples.
LstdqSystem AccumulateLstdq(std::span<const Transition> samples,
                            const BasisSpec& spec, double gamma,
                            const Policy& policy, double ridge);

// Solves the system, escalating the ridge by 10x up to 1e-2 when the
// factorisation is singular. Throws NumericalError with a condition estimate
// if every attempt fails.
Eigen::VectorXd SolveLstdq(const LstdqSystem& system, double ridge);

// Policy evaluation step: the weights of the least-squares fixed point of
// `policy` on `samples`.
Eigen::VectorXd Lstdq(std::span<const Transition> samples, const BasisSpec& spec,
                      double gamma, const Policy& policy, double ridge = 1e-6);

struct LspiResult {
  Policy policy;
  int iterations = 0;
  bool converged = false;
};

// Policy iteration over a fixed sample set until ||w - w'||_2 < epsilon or
// max_iterations evaluations.
LspiResult TrainLspi(std::span<const Transition> samples, const BasisSpec& spec,
                     const LspiConfig& config,
                     std::optional<Eigen::VectorXd> initial_weights = std::nullopt);

}  // namespace sgrl

#endif  // SGRL_LSPI_H_
