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

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "logiplan/network.hpp"
#include "logiplan/planner.hpp"

namespace logiplan {

// Probabilistic edge costs A_e ~ N(mean_e, variance_e), canonical edge order.
struct CostModel {
  std::vector<double> mean;
  std::vector<double> variance;

  static CostModel from_network(const Network& net) {
    return CostModel{net.nominal, net.variance};
  }
  std::size_t edge_count() const { return mean.size(); }
};

// Edge occupation probabilities phi_e = (1/3) sum_{x in X_e} p_x.
// They form a distribution over edges: sum phi = 1, each layer sums to 1/3,
// and 0 <= phi_e <= 1/3.
struct EdgeOccupancy {
  std::vector<double> phi;
};

EdgeOccupancy edge_occupancy(const Plan& plan, const PathIndex& idx);

// sum_e phi_e * mean_e; equals the worst case at eps = 0.
// Throws DomainMismatch when the edge domains differ.
double nominal_cost(const CostModel& cm, const EdgeOccupancy& occ);

// Closed-form worst-case expected cost over the KL ambiguity ball of radius
// eps (nats): L* = sum phi*mean + sqrt(2 eps sum phi^2 sigma^2).
// Throws NegativeEpsilon and DomainMismatch.
double worst_case_cost(const CostModel& cm, double eps, const EdgeOccupancy& occ);

// Worst-case per-edge means attaining L*:
// mean*_e = mean_e + sigma_e^2 phi_e sqrt(2 eps / sum phi'^2 sigma'^2).
// Satisfies sum phi_e mean*_e == L*. Throws ZeroVarianceMass when
// sum phi^2 sigma^2 == 0, NegativeEpsilon for eps < 0.
std::vector<double> worst_case_means(const CostModel& cm, double eps,
                                     const EdgeOccupancy& occ);

// Worst case when only edge e may fluctuate:
// L_e* = sum phi*mean + phi_e sigma_e sqrt(2 eps).
// Throws UnknownEdge, NegativeEpsilon.
double single_edge_worst(const CostModel& cm, double eps, const EdgeOccupancy& occ,
                         std::size_t edge);

// argmax_e L_e*, equivalently argmax phi_e sigma_e; ties go to the lowest
// canonical edge id.
std::size_t riskiest_edge(const CostModel& cm, double eps, const EdgeOccupancy& occ);

struct ResilienceCurve {
  std::vector<double> epsilons;
  std::vector<double> values;
  std::string label;
  double threshold = 8.0;
  // Smallest grid epsilon whose L* reaches the threshold, if any.
  std::optional<double> threshold_crossing;
};

// Pointwise worst_case_cost over a sorted nonnegative grid.
ResilienceCurve resilience_curve(const CostModel& cm, const EdgeOccupancy& occ,
                                 std::span<const double> eps_grid,
                                 double threshold = 8.0, std::string label = {});

}  // namespace logiplan
