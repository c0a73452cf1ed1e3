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
#include <cstdint>

#include "logiplan/network.hpp"
#include "logiplan/planner.hpp"
#include "logiplan/resilience.hpp"

// Independent ground-truth generators. Everything here recomputes results
// through a different route than the closed forms it is used to check:
// the dual goes through numerical quadrature, the planner check through an
// exhaustive grid, the ambiguity-set check through sampling.

namespace logiplan {

struct DualEvaluation {
  double tau_star = 0.0;
  double value = 0.0;
  int iterations = 0;
};

// Lagrangian dual of the worst-case problem at multiplier tau:
//   tau*eps + tau * sum_e log Int p(A_e) exp(phi_e A_e / tau) dA_e,
// each integral evaluated by adaptive Simpson quadrature over
// [mean - 12 sigma, mean + 12 sigma], deliberately not using the Gaussian
// moment-generating closed form. Throws QuadratureFailure.
double dual_objective(const CostModel& cm, const EdgeOccupancy& occ, double eps,
                      double tau);

// min over tau > 0 of dual_objective: golden-section search on
// [1e-8, tau_hi] (tau_hi doubled until the objective rises), then a
// derivative-sign bisection to pin the minimizer. eps == 0 returns the
// nominal cost. Throws NotConverged.
DualEvaluation dual_worst_case(const CostModel& cm, const EdgeOccupancy& occ,
                               double eps);

// Same dual, restricted to the single-edge ambiguity set C_e.
DualEvaluation dual_worst_case_single_edge(const CostModel& cm,
                                           const EdgeOccupancy& occ, double eps,
                                           std::size_t edge);

// d/dtau of dual_objective, also by quadrature. Exposed so tests can check
// the first-order condition at tau_star.
double dual_derivative(const CostModel& cm, const EdgeOccupancy& occ, double eps,
                       double tau);

// Exhaustive grid search over the demand-constrained simplex. Only instances
// with at most 3 free probability dimensions are accepted (TooLarge
// otherwise). grid_step is the probability resolution per outlet block.
Plan brute_force_plan(const Network& net, const Demand& zeta, double alpha,
                      double grid_step);

// Samples n Gaussian mean-shift tilts (delta_e with
// sum delta^2 / (2 sigma^2) <= eps), plus the worst-case-means direction,
// and returns the maximum sampled expected cost. Always <= L*, and the
// aligned direction attains it. Deterministic per seed.
double mc_feasible_tilt_check(const CostModel& cm, const EdgeOccupancy& occ,
                              double eps, int n, std::uint64_t seed);

}  // namespace logiplan
