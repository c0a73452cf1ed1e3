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
#include <random>

#include <doctest.h>

#include "logiplan/generator.hpp"
#include "logiplan/resilience.hpp"
#include "test_helpers.hpp"

using namespace logiplan;

TEST_SUITE_BEGIN("resilience");

namespace {

// Occupancy recomputed the slow way, through the materialized X_e sets.
EdgeOccupancy occupancy_by_enumeration(const Plan& plan, const PathIndex& idx) {
  EdgeOccupancy occ;
  occ.phi.resize(idx.layout().count());
  for (std::size_t e = 0; e < occ.phi.size(); ++e) {
    double sum = 0.0;
    for (std::size_t id : idx.paths_through(e)) sum += plan.p[id];
    occ.phi[e] = sum / 3.0;
  }
  return occ;
}

}  // namespace

TEST_CASE("occupancy of a point-mass plan is 1/3 on its three edges") {
  const PathIndex idx(2, 2, 2);
  Plan plan;
  plan.p.assign(idx.path_count(), 0.0);
  plan.p[idx.id_of(1, 0, 1)] = 1.0;
  const EdgeOccupancy occ = edge_occupancy(plan, idx);
  const EdgeLayout lay = idx.layout();
  for (std::size_t e = 0; e < occ.phi.size(); ++e) {
    const bool on_path = e == lay.production(1) || e == lay.fw(1, 0) || e == lay.ws(0, 1);
    CHECK(occ.phi[e] == doctest::Approx(on_path ? 1.0 / 3.0 : 0.0).epsilon(1e-15));
  }
}

TEST_CASE("occupancy of the uniform plan on 3x4x5") {
  const PathIndex idx(3, 4, 5);
  Plan plan;
  plan.p.assign(idx.path_count(), 1.0 / 60.0);
  const EdgeOccupancy occ = edge_occupancy(plan, idx);
  const EdgeLayout lay = idx.layout();
  for (int f = 0; f < 3; ++f) {
    CHECK(occ.phi[lay.production(f)] == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
  }
}

TEST_CASE("occupancy simplex invariants hold for solver plans") {
  const Network net = generate_random_network(3, 4, 5, 12);
  const PathIndex idx(net);
  for (const double alpha : {0.3, 0.9, 7.0}) {
    const Plan plan = solve_gibbs(net, uniform_demand(5), alpha);
    const EdgeOccupancy occ = edge_occupancy(plan, idx);
    const EdgeOccupancy slow = occupancy_by_enumeration(plan, idx);
    Accumulator total;
    Accumulator by_layer[3];
    for (std::size_t e = 0; e < occ.phi.size(); ++e) {
      CHECK(occ.phi[e] == doctest::Approx(slow.phi[e]).epsilon(1e-13));
      CHECK(occ.phi[e] >= 0.0);
      CHECK(occ.phi[e] <= 1.0 / 3.0 + 1e-15);
      total.add(occ.phi[e]);
      by_layer[static_cast<int>(idx.layout().from_layer(e))].add(occ.phi[e]);
    }
    CHECK(total.total() == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& layer : by_layer) {
      CHECK(layer.total() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("resilience properties hold across random shapes and alphas") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    const int kf = 1 + static_cast<int>(rng() % 4);
    const int kw = 1 + static_cast<int>(rng() % 4);
    const int ks = 1 + static_cast<int>(rng() % 4);
    const Network net = generate_random_network(kf, kw, ks, rng());
    const double alpha = 0.2 + 0.5 * static_cast<double>(rng() % 16);
    const Plan plan = solve_gibbs(net, uniform_demand(ks), alpha);
    const PathIndex idx(net);
    const EdgeOccupancy occ = edge_occupancy(plan, idx);
    const CostModel cm = CostModel::from_network(net);

    Accumulator total;
    for (double phi : occ.phi) {
      CHECK(phi >= 0.0);
      CHECK(phi <= 1.0 / 3.0 + 1e-15);
      total.add(phi);
    }
    CHECK(total.total() == doctest::Approx(1.0).epsilon(1e-12));

    const double eps = 0.05 * static_cast<double>(1 + rng() % 200);
    const double full = worst_case_cost(cm, eps, occ);
    CHECK(full >= nominal_cost(cm, occ));
    for (std::size_t e = 0; e < net.edge_count(); ++e) {
      CHECK(single_edge_worst(cm, eps, occ, e) <= full + 1e-12);
    }
    Accumulator mass;
    for (std::size_t e = 0; e < occ.phi.size(); ++e) {
      mass.add(occ.phi[e] * occ.phi[e] * cm.variance[e]);
    }
    const double gap = full - nominal_cost(cm, occ);
    CHECK(gap * gap == doctest::Approx(2.0 * eps * mass.total()).epsilon(1e-12));
  }
}

TEST_CASE("nominal cost on the worked instance") {
  const Network net = test::unit_111();
  const CostModel cm = CostModel::from_network(net);
  Plan plan;
  plan.p = {1.0};
  const EdgeOccupancy occ = edge_occupancy(plan, PathIndex(1, 1, 1));
  CHECK(nominal_cost(cm, occ) == doctest::Approx(1.0).epsilon(1e-15));

  CostModel zeros = cm;
  zeros.mean.assign(3, 0.0);
  CHECK(nominal_cost(zeros, occ) == 0.0);
  CHECK(worst_case_cost(cm, 0.0, occ) == nominal_cost(cm, occ));
}

TEST_CASE("worked worst-case constants: L* = 1 + sqrt(2/3)") {
  const Network net = test::unit_111();
  const CostModel cm = CostModel::from_network(net);
  Plan plan;
  plan.p = {1.0};
  const EdgeOccupancy occ = edge_occupancy(plan, PathIndex(1, 1, 1));
  const double expected = 1.0 + std::sqrt(2.0 / 3.0);  // 1.816496580927726
  CHECK(worst_case_cost(cm, 1.0, occ) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(worst_case_cost(cm, 1.0, occ) == doctest::Approx(1.816496580927726).epsilon(1e-12));

  const std::vector<double> means = worst_case_means(cm, 1.0, occ);
  const double expected_mean = 1.0 + std::sqrt(6.0) / 3.0;
  for (double m : means) CHECK(m == doctest::Approx(expected_mean).epsilon(1e-12));
}

TEST_CASE("degenerate variances leave the worst case nominal") {
  const Network net = test::net_with_costs(2, 1, 1, [](std::size_t) { return 2.0; },
                                           [](std::size_t) { return 0.0; });
  const CostModel cm = CostModel::from_network(net);
  const Plan plan = solve_gibbs(net, Demand{{1.0}}, 1.0);
  const EdgeOccupancy occ = edge_occupancy(plan, PathIndex(net));
  CHECK(worst_case_cost(cm, 5.0, occ) == nominal_cost(cm, occ));
  CHECK_THROWS_AS(worst_case_means(cm, 1.0, occ), ZeroVarianceMass);
}

TEST_CASE("negative epsilon and domain mismatches are rejected") {
  const Network net = test::unit_111();
  const CostModel cm = CostModel::from_network(net);
  Plan plan;
  plan.p = {1.0};
  const EdgeOccupancy occ = edge_occupancy(plan, PathIndex(1, 1, 1));
  CHECK_THROWS_AS(worst_case_cost(cm, -0.1, occ), NegativeEpsilon);
  EdgeOccupancy wrong;
  wrong.phi = {0.5, 0.5};
  CHECK_THROWS_AS(nominal_cost(cm, wrong), DomainMismatch);
}

TEST_CASE("worst-case means: consistency, unused edges, monotonicity in sigma") {
  const Network net = generate_random_network(3, 4, 5, 19);
  const CostModel cm = CostModel::from_network(net);
  const Plan plan = solve_gibbs(net, uniform_demand(5), 0.9);
  const EdgeOccupancy occ = edge_occupancy(plan, PathIndex(net));
  for (const double eps : {0.01, 1.0, 7.0}) {
    const std::vector<double> means = worst_case_means(cm, eps, occ);
    Accumulator acc;
    for (std::size_t e = 0; e < means.size(); ++e) acc.add(occ.phi[e] * means[e]);
    CHECK(acc.total() == doctest::Approx(worst_case_cost(cm, eps, occ)).epsilon(1e-10));
    for (std::size_t e = 0; e < means.size(); ++e) {
      CHECK(means[e] >= cm.mean[e]);  // shifts only upward
    }
  }

  // An edge with phi = 0 keeps its nominal mean.
  Plan point;
  point.p.assign(plan.p.size(), 0.0);
  point.p[0] = 1.0;
  const EdgeOccupancy pocc = edge_occupancy(point, PathIndex(net));
  const std::vector<double> means = worst_case_means(cm, 2.0, pocc);
  const EdgeLayout lay = net.layout();
  CHECK(pocc.phi[lay.production(2)] == 0.0);
  CHECK(means[lay.production(2)] == cm.mean[lay.production(2)]);

  // Larger sigma on an edge shifts it further, other things equal.
  CostModel bumped = cm;
  bumped.variance[lay.fw(0, 0)] *= 4.0;
  const std::vector<double> base = worst_case_means(cm, 1.0, occ);
  const std::vector<double> more = worst_case_means(bumped, 1.0, occ);
  CHECK(more[lay.fw(0, 0)] - cm.mean[lay.fw(0, 0)] >
        base[lay.fw(0, 0)] - cm.mean[lay.fw(0, 0)]);
}

TEST_CASE("single-edge worst case: worked value and dominance") {
  const Network net = test::unit_111();
  const CostModel cm = CostModel::from_network(net);
  Plan plan;
  plan.p = {1.0};
  const EdgeOccupancy occ = edge_occupancy(plan, PathIndex(1, 1, 1));
  const std::size_t mid = net.layout().fw(0, 0);
  CHECK(single_edge_worst(cm, 2.0, occ, mid) == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
  CHECK(single_edge_worst(cm, 0.0, occ, mid) == nominal_cost(cm, occ));
  CHECK_THROWS_AS(single_edge_worst(cm, 1.0, occ, 99), UnknownEdge);

  const Network rnd = generate_random_network(3, 4, 5, 29);
  const CostModel rcm = CostModel::from_network(rnd);
  const Plan rplan = solve_gibbs(rnd, uniform_demand(5), 0.3);
  const EdgeOccupancy rocc = edge_occupancy(rplan, PathIndex(rnd));
  for (const double eps : {0.1, 1.0, 7.0, 10.0}) {
    const double full = worst_case_cost(rcm, eps, rocc);
    for (std::size_t e = 0; e < rnd.edge_count(); ++e) {
      CHECK(single_edge_worst(rcm, eps, rocc, e) <= full + 1e-12);
    }
  }
}

TEST_CASE("riskiest edge maximizes phi * sigma with canonical tie-breaking") {
  SUBCASE("point-mass plan picks its max-sigma edge") {
    Network net = test::unit_111();
    net.variance = {0.5, 2.0, 1.0};
    const CostModel cm = CostModel::from_network(net);
    Plan plan;
    plan.p = {1.0};
    const EdgeOccupancy occ = edge_occupancy(plan, PathIndex(1, 1, 1));
    CHECK(riskiest_edge(cm, 1.0, occ) == net.layout().fw(0, 0));
  }
  SUBCASE("full tie goes to the first edge in canonical order") {
    // Symmetric 2x1x1: phi is 1/6 on the four upstream edges and 1/3 on the
    // shared last leg; choosing sigma = 1/phi makes every phi*sigma equal.
    const Network net = test::net_with_costs(2, 1, 1, [](std::size_t) { return 1.0; },
                                             [](std::size_t e) { return e < 4 ? 36.0 : 9.0; });
    const CostModel cm = CostModel::from_network(net);
    const Plan plan = solve_gibbs(net, Demand{{1.0}}, 5.0);  // symmetric, equal phi
    const EdgeOccupancy occ = edge_occupancy(plan, PathIndex(net));
    CHECK(riskiest_edge(cm, 1.0, occ) == 0);
  }
  SUBCASE("argmax agrees with a direct scan of L_e*") {
    const Network net = generate_random_network(3, 4, 5, 57);
    const CostModel cm = CostModel::from_network(net);
    const Plan plan = solve_gibbs(net, uniform_demand(5), 0.9);
    const EdgeOccupancy occ = edge_occupancy(plan, PathIndex(net));
    const std::size_t argmax = riskiest_edge(cm, 3.0, occ);
    for (std::size_t e = 0; e < net.edge_count(); ++e) {
      CHECK(single_edge_worst(cm, 3.0, occ, e) <=
            single_edge_worst(cm, 3.0, occ, argmax) + 1e-14);
    }
  }
}

TEST_CASE("resilience curve: grid handling, sqrt-eps law, threshold crossing") {
  const Network net = generate_random_network(3, 4, 5, 67);
  const CostModel cm = CostModel::from_network(net);
  const Plan plan = solve_gibbs(net, uniform_demand(5), 0.3);
  const EdgeOccupancy occ = edge_occupancy(plan, PathIndex(net));

  SUBCASE("single-point grid") {
    const double zero = 0.0;
    const ResilienceCurve curve = resilience_curve(cm, occ, std::span(&zero, 1));
    CHECK(curve.values.size() == 1);
    CHECK(curve.values[0] == nominal_cost(cm, occ));
    CHECK(!curve.threshold_crossing.has_value());
  }

  SUBCASE("exact square-root law") {
    Accumulator mass;
    for (std::size_t e = 0; e < occ.phi.size(); ++e) {
      mass.add(occ.phi[e] * occ.phi[e] * cm.variance[e]);
    }
    std::vector<double> grid;
    for (int i = 0; i <= 100; ++i) grid.push_back(0.12 * i);
    const ResilienceCurve curve = resilience_curve(cm, occ, grid);
    const double l0 = curve.values[0];
    for (std::size_t i = 1; i < grid.size(); ++i) {
      const double gap = curve.values[i] - l0;
      CHECK(gap * gap ==
            doctest::Approx(2.0 * grid[i] * mass.total()).epsilon(1e-12));
      CHECK(curve.values[i] >= curve.values[i - 1]);  // nondecreasing
    }
  }

  SUBCASE("threshold crossing is the first grid point at or above it") {
    std::vector<double> grid{0.0, 1.0, 2.0, 3.0};
    const double threshold = worst_case_cost(cm, 1.5, occ);
    const ResilienceCurve curve = resilience_curve(cm, occ, grid, threshold);
    REQUIRE(curve.threshold_crossing.has_value());
    CHECK(*curve.threshold_crossing == 2.0);
  }
}

TEST_SUITE_END();
