// Copyright 2026 The logiplan Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include <doctest.h>

#include "logiplan/generator.hpp"
#include "logiplan/oracles.hpp"
#include "test_helpers.hpp"

using namespace logiplan;

TEST_SUITE_BEGIN("oracles");

namespace {

struct Instance {
  Network net;
  CostModel cm;
  EdgeOccupancy occ;
};

Instance random_instance(std::uint64_t seed, double alpha) {
  Instance inst{generate_random_network(3, 4, 5, seed), {}, {}};
  inst.cm = CostModel::from_network(inst.net);
  const Plan plan = solve_gibbs(inst.net, uniform_demand(5), alpha);
  inst.occ = edge_occupancy(plan, PathIndex(inst.net));
  return inst;
}

Instance worked_111() {
  Instance inst{test::unit_111(), {}, {}};
  inst.cm = CostModel::from_network(inst.net);
  Plan plan;
  plan.p = {1.0};
  inst.occ = edge_occupancy(plan, PathIndex(1, 1, 1));
  return inst;
}

double analytic_dual(const Instance& inst, double eps, double tau) {
  // The proof's Gaussian-integral identity, re-derived by hand:
  // tau*eps + sum_e (phi A + phi^2 sigma^2 / (2 tau)).
  Accumulator acc;
  acc.add(tau * eps);
  for (std::size_t e = 0; e < inst.cm.mean.size(); ++e) {
    acc.add(inst.occ.phi[e] * inst.cm.mean[e]);
    acc.add(inst.occ.phi[e] * inst.occ.phi[e] * inst.cm.variance[e] / (2.0 * tau));
  }
  return acc.total();
}

double variance_mass(const Instance& inst) {
  Accumulator acc;
  for (std::size_t e = 0; e < inst.cm.mean.size(); ++e) {
    acc.add(inst.occ.phi[e] * inst.occ.phi[e] * inst.cm.variance[e]);
  }
  return acc.total();
}

}  // namespace

TEST_CASE("dual objective by quadrature matches the analytic expression") {
  const Instance inst = random_instance(101, 0.9);
  for (const double eps : {0.01, 1.0, 7.0}) {
    for (const double tau : {0.05, 0.3, 1.0, 4.0}) {
      CHECK(dual_objective(inst.cm, inst.occ, eps, tau) ==
            doctest::Approx(analytic_dual(inst, eps, tau)).epsilon(1e-8));
    }
  }
}

TEST_CASE("dual objective with zero variances is linear in tau") {
  Instance inst = worked_111();
  inst.cm.variance.assign(3, 0.0);
  const double nominal = nominal_cost(inst.cm, inst.occ);
  for (const double tau : {0.1, 1.0, 10.0}) {
    CHECK(dual_objective(inst.cm, inst.occ, 2.0, tau) ==
          doctest::Approx(2.0 * tau + nominal).epsilon(1e-12));
  }
}

TEST_CASE("dual objective is convex on a tau grid") {
  const Instance inst = random_instance(103, 0.3);
  const double eps = 3.0;
  std::vector<double> taus;
  for (int i = 0; i <= 16; ++i) taus.push_back(0.02 * std::pow(1.5, i));
  std::vector<double> values;
  values.reserve(taus.size());
  for (double tau : taus) values.push_back(dual_objective(inst.cm, inst.occ, eps, tau));
  for (std::size_t i = 1; i + 1 < taus.size(); ++i) {
    // geometric grid, so use the chord through the outer points
    const double t = (taus[i] - taus[i - 1]) / (taus[i + 1] - taus[i - 1]);
    const double chord = (1.0 - t) * values[i - 1] + t * values[i + 1];
    CHECK(values[i] <= chord + 1e-10);
  }
}

TEST_CASE("dual minimization solves the worked instance") {
  const Instance inst = worked_111();
  const DualEvaluation eval = dual_worst_case(inst.cm, inst.occ, 1.0);
  CHECK(eval.value == doctest::Approx(1.816496580927726).epsilon(1e-9));
  CHECK(eval.tau_star == doctest::Approx(0.4082482904638631).epsilon(1e-6));
}

TEST_CASE("dual value collapses to nominal as eps -> 0") {
  const Instance inst = worked_111();
  const DualEvaluation tiny = dual_worst_case(inst.cm, inst.occ, 1e-12);
  CHECK(tiny.value == doctest::Approx(1.0).epsilon(1e-5));
  const DualEvaluation zero = dual_worst_case(inst.cm, inst.occ, 0.0);
  CHECK(zero.value == 1.0);
}

TEST_CASE("dual agrees with the closed form across random instances") {
  for (const std::uint64_t seed : {201ull, 202ull, 203ull}) {
    for (const double alpha : {0.3, 7.0}) {
      const Instance inst = random_instance(seed, alpha);
      for (const double eps : {0.01, 1.0, 10.0}) {
        const DualEvaluation eval = dual_worst_case(inst.cm, inst.occ, eps);
        const double closed = worst_case_cost(inst.cm, eps, inst.occ);
        CHECK(std::abs(eval.value - closed) <= 1e-6 * (1.0 + std::abs(closed)));
        const double tau_expect = std::sqrt(variance_mass(inst) / (2.0 * eps));
        CHECK(std::abs(eval.tau_star - tau_expect) <= 1e-6 * tau_expect);
        // interior first-order condition, evaluated by quadrature
        CHECK(std::abs(dual_derivative(inst.cm, inst.occ, eps, eval.tau_star)) <= 1e-8);
      }
    }
  }
}

TEST_CASE("single-edge dual matches the specialized closed form") {
  const Instance inst = random_instance(205, 0.9);
  const double eps = 2.0;
  for (const std::size_t e : {std::size_t{0}, std::size_t{5}, std::size_t{20}}) {
    const DualEvaluation eval = dual_worst_case_single_edge(inst.cm, inst.occ, eps, e);
    const double closed = single_edge_worst(inst.cm, eps, inst.occ, e);
    CHECK(std::abs(eval.value - closed) <= 1e-6 * (1.0 + std::abs(closed)));
  }
  CHECK_THROWS_AS(dual_worst_case_single_edge(inst.cm, inst.occ, eps, 999), UnknownEdge);
}

TEST_CASE("brute force confirms the gibbs solution on the two-path instance") {
  const Network net = test::net_211(1.0, 2.0);
  const Demand zeta{{1.0}};
  const Plan bf = brute_force_plan(net, zeta, 1.0, 1e-4);
  CHECK(bf.p[0] == doctest::Approx(0.7310585786300049).epsilon(1e-3));
  const Plan gibbs = solve_gibbs(net, zeta, 1.0);
  CHECK(total_variation(bf, gibbs) <= 1e-3);
}

TEST_CASE("brute force trivia") {
  SUBCASE("1x1x1 is a point mass at any alpha") {
    const Network net = test::unit_111();
    for (const double alpha : {0.1, 5.0}) {
      const Plan bf = brute_force_plan(net, Demand{{1.0}}, alpha, 1e-2);
      CHECK(bf.p[0] == 1.0);
    }
  }
  SUBCASE("1x2x1 with symmetric costs splits evenly") {
    const Network net = test::net_with_costs(1, 2, 1, [](std::size_t) { return 1.0; },
                                             [](std::size_t) { return 0.0; });
    const Plan bf = brute_force_plan(net, Demand{{1.0}}, 0.7, 1e-2);
    CHECK(bf.p[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(bf.p[1] == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("too many free dimensions is an error") {
    const Network net = generate_random_network(2, 2, 2, 1);
    CHECK_THROWS_AS(brute_force_plan(net, uniform_demand(2), 1.0, 1e-2), TooLarge);
  }
}

TEST_CASE("gibbs plan objective is optimal against the exhaustive grid") {
  SUBCASE("two-path instance, fine grid") {
    const Network net = test::net_211(0.6, 1.9);
    const Demand zeta{{1.0}};
    for (const double alpha : {0.2, 1.0, 4.0}) {
      const Plan gibbs = solve_gibbs(net, zeta, alpha);
      const Plan bf = brute_force_plan(net, zeta, alpha, 1e-3);
      CHECK(plan_objective(net, gibbs, alpha) <=
            plan_objective(net, bf, alpha) + 1e-12);
    }
  }
  SUBCASE("three free dimensions") {
    const Network net = generate_random_network(2, 2, 1, 301);
    const Demand zeta{{1.0}};
    const Plan gibbs = solve_gibbs(net, zeta, 0.8);
    const Plan bf = brute_force_plan(net, zeta, 0.8, 1e-2);
    CHECK(plan_objective(net, gibbs, 0.8) <= plan_objective(net, bf, 0.8) + 1e-12);
  }
}

TEST_CASE("monte carlo tilts never beat the closed form and the aligned tilt attains it") {
  SUBCASE("worked instance") {
    const Instance inst = worked_111();
    const double lstar = worst_case_cost(inst.cm, 1.0, inst.occ);
    const double best = mc_feasible_tilt_check(inst.cm, inst.occ, 1.0, 10000, 5);
    CHECK(best <= lstar + 1e-9);
    CHECK(best == doctest::Approx(lstar).epsilon(1e-9));
  }
  SUBCASE("random instances") {
    for (const std::uint64_t seed : {11ull, 12ull}) {
      const Instance inst = random_instance(seed, 0.9);
      for (const double eps : {0.5, 7.0}) {
        const double lstar = worst_case_cost(inst.cm, eps, inst.occ);
        const double best = mc_feasible_tilt_check(inst.cm, inst.occ, eps, 2000, seed);
        CHECK(best <= lstar + 1e-9);
        CHECK(best >= lstar - 1e-9);  // aligned direction is included
      }
    }
  }
  SUBCASE("eps = 0 yields exactly the nominal cost") {
    const Instance inst = worked_111();
    CHECK(mc_feasible_tilt_check(inst.cm, inst.occ, 0.0, 100, 1) ==
          nominal_cost(inst.cm, inst.occ));
  }
}

TEST_SUITE_END();
