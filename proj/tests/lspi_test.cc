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
#include <limits>
#include <random>
#include <sstream>

#include "chain_fixture.h"
#include "doctest.h"
#include "sgrl/errors.h"
#include "sgrl/lspi.h"
#include "sgrl/mdp.h"

namespace sgrl {
namespace {

using fixture::Chain;
using fixture::ChainSamples;
using fixture::Scalar;
using fixture::ValueIterationOracle;

TEST_CASE("feature layout") {
  const BasisSpec sa = SaBasis(70.0);
  CHECK(sa.FeatureCount() == 27);
  CHECK(OaBasis(5.0).FeatureCount() == 57);

  const std::vector<double> s{35.0, kPi / 2};
  const Eigen::VectorXd f = Features(s, 0, sa);
  CHECK(f[0] == 1.0);
  CHECK(f[1] == doctest::Approx(0.5));
  CHECK(f[4] == doctest::Approx(0.0625));
  CHECK(f[5] == doctest::Approx(0.75));
  CHECK(f[8] == doctest::Approx(0.75 * 0.75 * 0.75 * 0.75));
  for (int i = 9; i < 27; ++i) CHECK(f[i] == 0.0);

  const Eigen::VectorXd z = Features(std::vector<double>{0.0, -kPi}, 2, sa);
  for (int i = 0; i < 27; ++i) CHECK(z[i] == (i == 18 ? 1.0 : 0.0));

  CHECK_THROWS_AS(Features(std::vector<double>{1.0}, 0, sa), ArgumentError);
  CHECK_THROWS_AS(Features(s, 3, sa), ArgumentError);
}

TEST_CASE("features clamp out-of-range states") {
  const BasisSpec spec = Scalar(2);
  const Eigen::VectorXd hi = Features(std::vector<double>{7.0}, 0, spec);
  CHECK(hi[1] == 1.0);
  CHECK(hi[2] == 1.0);
  const Eigen::VectorXd lo = Features(std::vector<double>{-3.0}, 0, spec);
  CHECK(lo[1] == 0.0);
}

TEST_CASE("single-sample LSTDQ") {
  const BasisSpec spec{1, 1, 1, {0.0}, {1.0}};
  const Policy zero(spec, Eigen::VectorXd::Zero(2));
  SUBCASE("gamma 0") {
    // State 0 leaves only the constant feature; the x weight is pinned by the
    // ridge alone.
    const std::vector<Transition> t{{{0.0}, 0, 3.5, {0.0}, false}};
    const Eigen::VectorXd w = Lstdq(t, spec, 0.0, zero, 1e-6);
    CHECK(w[0] == doctest::Approx(3.5).epsilon(1e-5));
  }
  SUBCASE("terminal ignores gamma") {
    const std::vector<Transition> t{{{0.0}, 0, -2.0, {0.0}, true}};
    CHECK(Lstdq(t, spec, 0.95, zero, 1e-6)[0] ==
          doctest::Approx(-2.0).epsilon(1e-5));
  }
}

TEST_CASE("LSTDQ matches a hand-solved 2x2 system") {
  // phi(0) = [1, 0], phi(1) = [1, 1]; one action.
  // Sample 1: s=0 -> s'=1, r=1, nonterminal. Sample 2: s=1, r=2, terminal.
  const double g = 0.5;
  const std::vector<Transition> t{{{0.0}, 0, 1.0, {1.0}, false},
                                  {{1.0}, 0, 2.0, {1.0}, true}};
  const BasisSpec spec = Scalar();
  const Policy pi(spec, Eigen::VectorXd::Zero(2));
  for (double delta : {0.0, 1e-6}) {
    // A = delta I + [1 0]^T [1-g, -g] + [1 1]^T [1 1]; b = [1 0] + 2 [1 1].
    const double a00 = delta + (1 - g) + 1, a01 = -g + 1;
    const double a10 = 1, a11 = delta + 1;
    const double b0 = 3, b1 = 2;
    const double det = a00 * a11 - a01 * a10;
    const double w0 = (b0 * a11 - a01 * b1) / det;
    const double w1 = (a00 * b1 - a10 * b0) / det;
    const Eigen::VectorXd w = Lstdq(t, spec, g, pi, delta);
    CHECK(std::abs(w[0] - w0) <= 1e-9);
    CHECK(std::abs(w[1] - w1) <= 1e-9);
  }
  // Without ridge the fixed point is Q(0) = Q(1) = 2.
  const Eigen::VectorXd exact = Lstdq(t, spec, g, pi, 0.0);
  CHECK(exact[0] == doctest::Approx(2.0));
  CHECK(exact[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("LSPI on the chain MDP matches value iteration") {
  const BasisSpec spec = Scalar(1, 2);
  LspiConfig cfg;
  cfg.epsilon = 1e-3;
  for (const Chain& c : fixture::Chains()) {
    const auto oracle = ValueIterationOracle(c, cfg.gamma);
    const auto samples = ChainSamples(c);
    const LspiResult r = TrainLspi(samples, spec, cfg);
    CHECK(r.converged);
    CHECK(r.iterations <= 20);
    for (int s = 0; s < 2; ++s) {
      CHECK(r.policy.Greedy(std::vector<double>{double(s)}) == oracle[s]);
    }
  }
}

TEST_CASE("infinite epsilon stops after one iteration") {
  const Chain c{{{0.95, 0.0}, {0.0, 1.0}}};
  LspiConfig cfg;
  cfg.epsilon = std::numeric_limits<double>::infinity();
  const LspiResult r = TrainLspi(ChainSamples(c), Scalar(1, 2), cfg);
  CHECK(r.iterations == 1);
  CHECK(r.converged);
}

TEST_CASE("LSPI is deterministic and order independent") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  std::vector<Transition> samples;
  for (int i = 0; i < 400; ++i) {
    Transition t;
    for (int k = 0; k < 6; ++k) t.state.push_back(u(rng));
    for (int k = 0; k < 6; ++k) t.next_state.push_back(u(rng));
    t.action = i % 3;
    t.terminal = i % 17 == 0;
    t.reward = t.terminal ? -4.0 : (t.state[2] < 1.0 ? -1.0 : 0.0);
    samples.push_back(t);
  }
  const BasisSpec spec = OaBasis(5.0);
  const LspiResult a = TrainLspi(samples, spec, {});
  const LspiResult b = TrainLspi(samples, spec, {});
  CHECK(a.policy.weights() == b.policy.weights());
  CHECK(a.iterations == b.iterations);

  const Policy pi = a.policy;
  std::vector<Transition> shuffled = samples;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const LstdqSystem s1 = AccumulateLstdq(samples, spec, 0.9, pi, 1e-6);
  const LstdqSystem s2 = AccumulateLstdq(shuffled, spec, 0.9, pi, 1e-6);
  CHECK((s1.a - s2.a).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((s1.b - s2.b).cwiseAbs().maxCoeff() <= 1e-9);
  const Eigen::VectorXd w1 = SolveLstdq(s1, 1e-6);
  const Eigen::VectorXd w2 = SolveLstdq(s2, 1e-6);
  CHECK((w1 - w2).norm() <= 1e-6 * (1 + w1.norm()));

  // The block-sparse accumulation equals the dense outer-product sum.
  Eigen::MatrixXd dense = 1e-6 * Eigen::MatrixXd::Identity(57, 57);
  for (const Transition& t : samples) {
    const Eigen::VectorXd f = Features(t.state, t.action, spec);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(57);
    if (!t.terminal) g = Features(t.next_state, pi.Greedy(t.next_state), spec);
    dense += f * (f - 0.9 * g).transpose();
  }
  CHECK((dense - s1.a).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("all-terminal samples do not bootstrap") {
  std::vector<Transition> samples;
  for (int i = 0; i < 30; ++i) {
    const double x = i / 29.0;
    samples.push_back({{x}, i % 2, std::sin(3 * x), {1 - x}, true});
  }
  const BasisSpec spec = Scalar(3, 2);
  const Policy pi(spec, Eigen::VectorXd::Ones(8));
  const Eigen::VectorXd a = Lstdq(samples, spec, 0.9, pi);
  const Eigen::VectorXd b = Lstdq(samples, spec, 0.0, pi);
  CHECK(a == b);
}

TEST_CASE("greedy action") {
  const BasisSpec spec = SaBasis(70.0);
  const std::vector<double> s{10.0, 1.0};
  CHECK(Policy(spec, Eigen::VectorXd::Zero(27)).Greedy(s) == 0);

  Eigen::VectorXd w = Eigen::VectorXd::Zero(27);
  w[0] = 1.0;
  const Policy fwd(spec, w);
  for (double a = -3.0; a < 3.0; a += 0.5) {
    CHECK(fwd.Greedy(std::vector<double>{5.0, a}) == 0);
  }

  // Left block: Q = 2 * x_a - 1 where x_a is the normalised angle; the other
  // blocks are zero. Left wins exactly when x_a > 0.5, i.e. a_g > 0.
  Eigen::VectorXd lw = Eigen::VectorXd::Zero(27);
  lw[9] = -1.0;
  lw[9 + 5] = 2.0;
  const Policy left(spec, lw);
  CHECK(left.Greedy(std::vector<double>{5.0, 0.7}) == 1);
  CHECK(left.Q(std::vector<double>{5.0, 0.7}, 1) ==
        doctest::Approx(2 * (0.7 + kPi) / (2 * kPi) - 1));
  CHECK(left.Greedy(std::vector<double>{5.0, -0.7}) == 0);

  SUBCASE("greedy is invariant under positive scaling") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    Eigen::VectorXd r(27);
    for (int i = 0; i < 27; ++i) r[i] = n(rng);
    const Policy p1(spec, r);
    const Policy p2(spec, 7.5 * r);
    for (double d = 0; d < 70; d += 6.3)
      for (double a = -3.1; a < 3.1; a += 0.4) {
        const std::vector<double> st{d, a};
        CHECK(p1.Greedy(st) == p2.Greedy(st));
        CHECK(p2.Q(st, 1) == doctest::Approx(7.5 * p1.Q(st, 1)));
      }
  }
}

TEST_CASE("policy file round trip") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n;
  Eigen::VectorXd w(57);
  for (int i = 0; i < 57; ++i) w[i] = n(rng) * std::pow(10.0, i % 7 - 3);
  const Policy p(OaBasis(5.0), w);
  std::stringstream buf;
  p.Write(buf);
  const Policy q = Policy::Read(buf);
  CHECK(p == q);

  std::stringstream bad("sgrl-policy 1\nstate_dim 6\norder 3\nactions 3\n"
                        "lower 0 0 0 0 0 0\nupper 5 5 5 5 5 5\nweights 56\n");
  CHECK_THROWS_AS(Policy::Read(bad), ParseError);
}

TEST_CASE("singular systems escalate the ridge then fail") {
  LstdqSystem sys{Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd::Ones(2)};
  // Zero matrix plus any ridge is invertible.
  const Eigen::VectorXd w = SolveLstdq(sys, 0.0);
  CHECK(w[0] == doctest::Approx(1e6));

  LstdqSystem nan{Eigen::MatrixXd::Constant(2, 2, std::nan("")),
                  Eigen::VectorXd::Ones(2)};
  CHECK_THROWS_AS(SolveLstdq(nan, 1e-6), NumericalError);
}

TEST_CASE("argument checks") {
  const std::vector<Transition> none;
  CHECK_THROWS_AS(TrainLspi(none, Scalar(), {}), ArgumentError);
  LspiConfig cfg;
  cfg.gamma = 1.0;
  const std::vector<Transition> one{{{0.0}, 0, 1.0, {0.0}, true}};
  CHECK_THROWS_AS(TrainLspi(one, Scalar(), cfg), ArgumentError);
  CHECK_THROWS_AS(Policy(Scalar(), Eigen::VectorXd::Zero(3)), ArgumentError);
}

}  // namespace
}  // namespace sgrl
