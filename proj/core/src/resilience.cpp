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

#include "logiplan/resilience.hpp"

#include <cmath>
#include <string>

#include "logiplan/numeric.hpp"

namespace logiplan {

namespace {

void require_same_domain(const CostModel& cm, const EdgeOccupancy& occ) {
  if (cm.mean.size() != occ.phi.size() || cm.variance.size() != occ.phi.size()) {
    throw DomainMismatch("cost model and occupancy cover different edge sets");
  }
}

void require_nonnegative_eps(double eps) {
  if (!(eps >= 0.0)) {
    throw NegativeEpsilon("epsilon must be nonnegative, got " + std::to_string(eps));
  }
}

// sum_e phi_e^2 sigma_e^2, the fluctuation mass under the KL ball.
double variance_mass(const CostModel& cm, const EdgeOccupancy& occ) {
  Accumulator acc;
  for (std::size_t e = 0; e < occ.phi.size(); ++e) {
    acc.add(occ.phi[e] * occ.phi[e] * cm.variance[e]);
  }
  return acc.total();
}

}  // namespace

EdgeOccupancy edge_occupancy(const Plan& plan, const PathIndex& idx) {
  if (plan.p.size() != idx.path_count()) {
    throw DomainMismatch("plan does not match the path index");
  }
  const EdgeLayout lay = idx.layout();
  std::vector<Accumulator> acc(lay.count());
  idx.for_each([&](std::size_t id, int f, int w, int s) {
    const double share = plan.p[id] / 3.0;
    acc[lay.production(f)].add(share);
    acc[lay.fw(f, w)].add(share);
    acc[lay.ws(w, s)].add(share);
  });
  EdgeOccupancy occ;
  occ.phi.resize(lay.count());
  for (std::size_t e = 0; e < occ.phi.size(); ++e) occ.phi[e] = acc[e].total();
  return occ;
}

double nominal_cost(const CostModel& cm, const EdgeOccupancy& occ) {
  require_same_domain(cm, occ);
  Accumulator acc;
  for (std::size_t e = 0; e < occ.phi.size(); ++e) acc.add(occ.phi[e] * cm.mean[e]);
  return acc.total();
}

double worst_case_cost(const CostModel& cm, double eps, const EdgeOccupancy& occ) {
  require_same_domain(cm, occ);
  require_nonnegative_eps(eps);
  return nominal_cost(cm, occ) + std::sqrt(2.0 * eps * variance_mass(cm, occ));
}

std::vector<double> worst_case_means(const CostModel& cm, double eps,
                                     const EdgeOccupancy& occ) {
  require_same_domain(cm, occ);
  require_nonnegative_eps(eps);
  const double mass = variance_mass(cm, occ);
  if (!(mass > 0.0)) {
    throw ZeroVarianceMass("sum phi^2 sigma^2 is zero; no fluctuation direction exists");
  }
  const double scale = std::sqrt(2.0 * eps / mass);
  std::vector<double> means(cm.mean.size());
  for (std::size_t e = 0; e < means.size(); ++e) {
    means[e] = cm.mean[e] + cm.variance[e] * occ.phi[e] * scale;
  }
  return means;
}

double single_edge_worst(const CostModel& cm, double eps, const EdgeOccupancy& occ,
                         std::size_t edge) {
  require_same_domain(cm, occ);
  require_nonnegative_eps(eps);
  if (edge >= cm.mean.size()) throw UnknownEdge("edge id out of range");
  return nominal_cost(cm, occ) +
         occ.phi[edge] * std::sqrt(cm.variance[edge]) * std::sqrt(2.0 * eps);
}

std::size_t riskiest_edge(const CostModel& cm, double /*eps*/, const EdgeOccupancy& occ) {
  require_same_domain(cm, occ);
  // L_e* ranks by phi_e sigma_e regardless of eps; ties fall to the lowest id.
  std::size_t best = 0;
  double best_score = -1.0;
  for (std::size_t e = 0; e < occ.phi.size(); ++e) {
    const double score = occ.phi[e] * std::sqrt(cm.variance[e]);
    if (score > best_score) {
      best_score = score;
      best = e;
    }
  }
  return best;
}

ResilienceCurve resilience_curve(const CostModel& cm, const EdgeOccupancy& occ,
                                 std::span<const double> eps_grid, double threshold,
                                 std::string label) {
  ResilienceCurve curve;
  curve.label = std::move(label);
  curve.threshold = threshold;
  curve.epsilons.assign(eps_grid.begin(), eps_grid.end());
  curve.values.reserve(eps_grid.size());
  for (double eps : eps_grid) {
    const double value = worst_case_cost(cm, eps, occ);
    curve.values.push_back(value);
    if (!curve.threshold_crossing && value >= threshold) {
      curve.threshold_crossing = eps;
    }
  }
  return curve;
}

}  // namespace logiplan
