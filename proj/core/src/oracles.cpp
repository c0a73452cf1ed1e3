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

#include "logiplan/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "logiplan/numeric.hpp"

namespace logiplan {

namespace {

constexpr double kWindow = 12.0;      // integrate over mean +/- 12 sigma
constexpr double kQuadTol = 1e-12;    // absolute Simpson tolerance (objective)
constexpr double kDerivTol = 1e-11;   // the minimizer refinement needs signs,
                                      // not 12 digits, so it can run looser
constexpr int kQuadMaxDepth = 48;
constexpr double kTauFloor = 1e-8;    // left end of the golden-section bracket

double simpson(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adapt(const F& f, double a, double b, double fa, double fm, double fb,
             double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, a, m);
  const double right = simpson(fm, frm, fb, m, b);
  const double delta = left + right - whole;
  // The second clause stops the recursion once the panel disagreement sits at
  // the rounding floor of the panel values; strict tolerance halving would
  // otherwise starve boundary-layer integrands (large tilts) of depth.
  if (std::abs(delta) <= 15.0 * tol ||
      std::abs(delta) <= 4e-13 * (std::abs(left) + std::abs(right))) {
    return left + right + delta / 15.0;
  }
  if (depth <= 0) {
    throw QuadratureFailure("adaptive Simpson exceeded the depth budget");
  }
  return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// Adaptive Simpson over [a,b], pre-split into panels so a narrow bump
// cannot slip between the first sample points.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
  const int panels = 8;
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + k * h;
    const double hi = lo + h;
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo);
    const double fmid = f(mid);
    const double fhi = f(hi);
    total += adapt(f, lo, hi, flo, fmid, fhi, simpson(flo, fmid, fhi, lo, hi),
                   tol / panels, kQuadMaxDepth);
  }
  return total;
}

// exp(c z - z^2/2 - peak) with peak at z* = clamp(c): algebraically
// (z - z*)(c - (z + z*)/2), which avoids the catastrophic cancellation of
// the raw form when the tilt c is large (the exponent then has magnitude
// ~12c while the difference is O(1)).
double tilted_weight(double c, double zstar, double z) {
  return std::exp((z - zstar) * (c - 0.5 * (z + zstar)));
}

// log of (1/sqrt(2 pi)) Int_{-12}^{12} exp(c z - z^2/2) dz, max-factored so
// the integrand stays in [0,1] for any tilt c.
double log_tilted_integral(double c) {
  const double zstar = std::clamp(c, -kWindow, kWindow);
  const double peak = c * zstar - 0.5 * zstar * zstar;
  const auto h = [c, zstar](double z) { return tilted_weight(c, zstar, z); };
  const double raw = adaptive_simpson(h, -kWindow, kWindow, kQuadTol);
  return peak + std::log(raw) - 0.5 * std::log(2.0 * std::numbers::pi);
}

// log J(c) and <z> under the tilted weight exp(c z - z^2/2) on [-12,12],
// sharing one pair of quadratures.
struct TiltedStats {
  double log_integral = 0.0;
  double mean = 0.0;
};

TiltedStats tilted_stats(double c, double tol) {
  const double zstar = std::clamp(c, -kWindow, kWindow);
  const double peak = c * zstar - 0.5 * zstar * zstar;
  const auto h = [c, zstar](double z) { return tilted_weight(c, zstar, z); };
  const auto zh = [&h](double z) { return z * h(z); };
  const double den = adaptive_simpson(h, -kWindow, kWindow, tol);
  const double num = adaptive_simpson(zh, -kWindow, kWindow, tol);
  TiltedStats out;
  out.log_integral = peak + std::log(den) - 0.5 * std::log(2.0 * std::numbers::pi);
  out.mean = num / den;
  return out;
}

// Shared state for the full and single-edge duals: `active` lists the edges
// allowed to fluctuate (positive variance only; a zero-sigma edge is a point
// mass whose tilt contributes nothing).
struct DualProblem {
  const CostModel* cm = nullptr;
  const EdgeOccupancy* occ = nullptr;
  double eps = 0.0;
  double nominal = 0.0;
  std::vector<std::size_t> active;

  double objective(double tau) const {
    if (!(tau > 0.0)) {
      throw ValidationError("dual objective needs tau > 0");
    }
    Accumulator acc;
    acc.add(tau * eps);
    acc.add(nominal);
    for (std::size_t e : active) {
      const double sigma = std::sqrt(cm->variance[e]);
      const double c = occ->phi[e] * sigma / tau;
      acc.add(tau * log_tilted_integral(c));
    }
    return acc.total();
  }

  double derivative(double tau, double tol = kQuadTol) const {
    Accumulator acc;
    acc.add(eps);
    for (std::size_t e : active) {
      const double sigma = std::sqrt(cm->variance[e]);
      const double c = occ->phi[e] * sigma / tau;
      const TiltedStats stats = tilted_stats(c, tol);
      // d/dtau of tau * log I_e, with log I_e = phi A / tau + log J(c):
      // the phi A part cancels and dc/dtau = -c/tau.
      acc.add(stats.log_integral - c * stats.mean);
    }
    return acc.total();
  }

  double variance_mass() const {
    Accumulator acc;
    for (std::size_t e : active) {
      acc.add(occ->phi[e] * occ->phi[e] * cm->variance[e]);
    }
    return acc.total();
  }
};

DualProblem make_problem(const CostModel& cm, const EdgeOccupancy& occ, double eps,
                         std::optional<std::size_t> only_edge) {
  if (cm.mean.size() != occ.phi.size()) {
    throw DomainMismatch("cost model and occupancy cover different edge sets");
  }
  if (!(eps >= 0.0)) throw NegativeEpsilon("epsilon must be nonnegative");
  DualProblem prob;
  prob.cm = &cm;
  prob.occ = &occ;
  prob.eps = eps;
  Accumulator nom;
  for (std::size_t e = 0; e < cm.mean.size(); ++e) nom.add(occ.phi[e] * cm.mean[e]);
  prob.nominal = nom.total();
  if (only_edge) {
    if (*only_edge >= cm.mean.size()) throw UnknownEdge("edge id out of range");
    if (cm.variance[*only_edge] > 0.0) prob.active.push_back(*only_edge);
  } else {
    for (std::size_t e = 0; e < cm.mean.size(); ++e) {
      if (cm.variance[e] > 0.0) prob.active.push_back(e);
    }
  }
  return prob;
}

DualEvaluation minimize_dual(const DualProblem& prob) {
  if (prob.eps == 0.0 || prob.variance_mass() == 0.0) {
    // tau*eps -> 0 and every integral collapses; the infimum is the nominal
    // cost, approached as tau -> 0 (eps > 0) or tau -> inf (eps == 0).
    return DualEvaluation{0.0, prob.nominal, 0};
  }

  int evals = 0;
  const auto g = [&](double tau) {
    ++evals;
    return prob.objective(tau);
  };

  // Bracket: double tau_hi until the objective starts increasing. Starting
  // at 1 keeps the golden probes approaching the minimizer from above, where
  // the tilts phi sigma / tau are modest and the quadrature stays shallow.
  double lo = kTauFloor;
  double hi = 1.0;
  double ghi = g(hi);
  for (int k = 0;; ++k) {
    if (k > 200) throw NotConverged("dual bracket expansion failed");
    const double next = hi * 2.0;
    const double gnext = g(next);
    if (gnext > ghi) {
      hi = next;
      break;
    }
    hi = next;
    ghi = gnext;
  }

  // Golden-section pass narrows the bracket around the minimizer.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double gc = g(c);
  double gd = g(d);
  while (b - a > 3e-2 * std::max(1e-12, a + b) && b - a > 1e-15) {
    if (gc < gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - invphi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + invphi * (b - a);
      gd = g(d);
    }
  }

  // Refine with a safeguarded secant on the quadrature-based derivative; the
  // objective itself is too flat near the minimum for value comparisons.
  const auto deriv = [&](double tau) {
    ++evals;
    return prob.derivative(tau, kDerivTol);
  };
  double dlo = deriv(a);
  double dhi = deriv(b);
  for (int k = 0; dlo > 0.0 && a > kTauFloor && k < 120; ++k) {
    a = std::max(kTauFloor, 0.5 * a);
    dlo = deriv(a);
  }
  if (dlo > 0.0) {
    // Constrained minimum at the domain floor; no interior stationary point.
    return DualEvaluation{kTauFloor, prob.objective(kTauFloor), evals};
  }
  for (int k = 0; dhi < 0.0 && k < 120; ++k) {
    b *= 2.0;
    dhi = deriv(b);
  }
  double x0 = a;
  double f0 = dlo;
  double x1 = b;
  double f1 = dhi;
  double best = 0.5 * (a + b);
  for (int k = 0; k < 80; ++k) {
    double next = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!std::isfinite(next) || next <= a || next >= b) next = 0.5 * (a + b);
    const double fn = deriv(next);
    best = next;
    if (std::abs(fn) <= 1e-9 || (b - a) <= 1e-14 * next) break;
    if (fn < 0.0) {
      a = next;
    } else {
      b = next;
    }
    x0 = x1;
    f0 = f1;
    x1 = next;
    f1 = fn;
  }

  return DualEvaluation{best, prob.objective(best), evals};
}

double box_muller(std::mt19937_64& rng) {
  const double u1 = 1.0 - static_cast<double>(rng() >> 11) * 0x1.0p-53;  // (0,1]
  const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;       // [0,1)
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

double dual_objective(const CostModel& cm, const EdgeOccupancy& occ, double eps,
                      double tau) {
  return make_problem(cm, occ, eps, std::nullopt).objective(tau);
}

double dual_derivative(const CostModel& cm, const EdgeOccupancy& occ, double eps,
                       double tau) {
  if (!(tau > 0.0)) throw ValidationError("dual derivative needs tau > 0");
  return make_problem(cm, occ, eps, std::nullopt).derivative(tau);
}

DualEvaluation dual_worst_case(const CostModel& cm, const EdgeOccupancy& occ,
                               double eps) {
  return minimize_dual(make_problem(cm, occ, eps, std::nullopt));
}

DualEvaluation dual_worst_case_single_edge(const CostModel& cm,
                                           const EdgeOccupancy& occ, double eps,
                                           std::size_t edge) {
  return minimize_dual(make_problem(cm, occ, eps, edge));
}

Plan brute_force_plan(const Network& net, const Demand& zeta, double alpha,
                      double grid_step) {
  if (!(alpha > 0.0)) throw NonPositiveAlpha("alpha must be positive");
  if (!(grid_step > 0.0)) throw ValidationError("grid_step must be positive");
  const PathIndex idx(net);
  const int cells = net.kf * net.kw;
  const long free_dim = static_cast<long>(net.ks) * (cells - 1);
  if (free_dim > 3) {
    throw TooLarge("brute force supports at most 3 free probability dimensions, got " +
                   std::to_string(free_dim));
  }

  // Per-outlet compositions: k_1..k_m >= 0 summing to round(zeta_s/step).
  std::vector<long> levels(static_cast<std::size_t>(net.ks));
  double candidates = 1.0;
  for (int s = 0; s < net.ks; ++s) {
    const double mass = zeta.zeta[static_cast<std::size_t>(s)];
    const long k = mass > 0.0 ? std::max<long>(1, std::lround(mass / grid_step)) : 0;
    levels[static_cast<std::size_t>(s)] = k;
    double block = 1.0;
    for (int j = 1; j < cells; ++j) block = block * (k + j) / j;  // C(k+m-1, m-1)
    candidates *= block;
  }
  if (candidates > 2e7) {
    throw TooLarge("grid too fine: ~" + std::to_string(candidates) + " candidates");
  }

  Plan current;
  current.alpha = alpha;
  current.p.assign(idx.path_count(), 0.0);
  Plan best = current;
  double best_objective = std::numeric_limits<double>::infinity();

  // Recursive enumeration: outlets outermost, cells within an outlet.
  std::function<void(int)> per_outlet = [&](int s) {
    if (s == net.ks) {
      const double obj = plan_objective(net, current, alpha);
      if (obj < best_objective) {
        best_objective = obj;
        best = current;
      }
      return;
    }
    const long total = levels[static_cast<std::size_t>(s)];
    const double mass = zeta.zeta[static_cast<std::size_t>(s)];
    std::function<void(int, long)> per_cell = [&](int cell, long remaining) {
      if (cell == cells - 1) {
        current.p[static_cast<std::size_t>(cell) * net.ks + s] =
            total > 0 ? mass * static_cast<double>(remaining) / static_cast<double>(total)
                      : 0.0;
        per_outlet(s + 1);
        return;
      }
      for (long k = 0; k <= remaining; ++k) {
        current.p[static_cast<std::size_t>(cell) * net.ks + s] =
            total > 0 ? mass * static_cast<double>(k) / static_cast<double>(total) : 0.0;
        per_cell(cell + 1, remaining - k);
      }
    };
    per_cell(0, total);
  };
  per_outlet(0);
  return best;
}

double mc_feasible_tilt_check(const CostModel& cm, const EdgeOccupancy& occ,
                              double eps, int n, std::uint64_t seed) {
  if (cm.mean.size() != occ.phi.size()) {
    throw DomainMismatch("cost model and occupancy cover different edge sets");
  }
  if (!(eps >= 0.0)) throw NegativeEpsilon("epsilon must be nonnegative");
  if (n < 1) throw ValidationError("need at least one sample");

  const std::size_t m = cm.mean.size();
  Accumulator nom;
  for (std::size_t e = 0; e < m; ++e) nom.add(occ.phi[e] * cm.mean[e]);
  double best = nom.total();

  Accumulator mass_acc;
  for (std::size_t e = 0; e < m; ++e) {
    mass_acc.add(occ.phi[e] * occ.phi[e] * cm.variance[e]);
  }
  const double mass = mass_acc.total();

  // The worst-case-means direction sits exactly on the KL budget boundary
  // and should attain the closed form.
  if (mass > 0.0 && eps > 0.0) {
    const std::vector<double> shifted = worst_case_means(cm, eps, occ);
    Accumulator acc;
    for (std::size_t e = 0; e < m; ++e) acc.add(occ.phi[e] * shifted[e]);
    best = std::max(best, acc.total());
  }

  std::mt19937_64 rng(seed);
  std::vector<double> g(m, 0.0);
  for (int i = 0; i < n; ++i) {
    double g2 = 0.0;
    for (std::size_t e = 0; e < m; ++e) {
      g[e] = cm.variance[e] > 0.0 ? box_muller(rng) : 0.0;
      g2 += g[e] * g[e];
    }
    const double fraction = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (g2 == 0.0 || eps == 0.0) continue;
    // delta_e = t sigma_e g_e with t chosen so sum delta^2/(2 sigma^2) = f*eps.
    const double t = std::sqrt(2.0 * fraction * eps / g2);
    Accumulator acc;
    for (std::size_t e = 0; e < m; ++e) {
      acc.add(occ.phi[e] * (cm.mean[e] + t * std::sqrt(cm.variance[e]) * g[e]));
    }
    best = std::max(best, acc.total());
  }
  return best;
}

}  // namespace logiplan
