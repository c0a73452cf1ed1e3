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

#include "logiplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace logiplan {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_positive_alpha(double alpha) {
  if (!(alpha > 0.0)) {
    throw NonPositiveAlpha("alpha must be positive, got " + std::to_string(alpha));
  }
}

// Per-path log kernel: lk[x] = -C_x / alpha.
std::vector<double> log_kernel(const Network& net, const PathIndex& idx, double alpha) {
  const EdgeLayout lay = net.layout();
  std::vector<double> lk(idx.path_count());
  idx.for_each([&](std::size_t id, int f, int w, int s) {
    const double c = net.nominal[lay.production(f)] + net.nominal[lay.fw(f, w)] +
                     net.nominal[lay.ws(w, s)];
    lk[id] = -c / alpha;
  });
  return lk;
}

}  // namespace

Plan solve_gibbs(const Network& net, const Demand& zeta, double alpha) {
  require_positive_alpha(alpha);
  const PathIndex idx(net);
  const std::vector<double> lk = log_kernel(net, idx, alpha);

  Plan plan;
  plan.alpha = alpha;
  plan.p.assign(idx.path_count(), 0.0);
  const std::size_t block = static_cast<std::size_t>(net.kf) * net.kw;
  for (int s = 0; s < net.ks; ++s) {
    double m = kNegInf;
    for (std::size_t b = 0; b < block; ++b) {
      m = std::max(m, lk[b * net.ks + s]);
    }
    Accumulator z;
    for (std::size_t b = 0; b < block; ++b) z.add(std::exp(lk[b * net.ks + s] - m));
    const double zs = z.total();
    const double mass = zeta.zeta[static_cast<std::size_t>(s)];
    for (std::size_t b = 0; b < block; ++b) {
      const std::size_t id = b * net.ks + s;
      plan.p[id] = mass * std::exp(lk[id] - m) / zs;
    }
  }
  return plan;
}

PerronResult perron_eigenpair(const DenseMatrix& B, double tol, int max_iter) {
  const int n = B.size();
  if (n == 0) throw ZeroMatrix("empty matrix");
  double max_row_sum = 0.0;
  bool any = false;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      if (!(B.at(i, j) >= 0.0)) {
        throw ValidationError("perron_eigenpair needs a nonnegative matrix");
      }
      row += B.at(i, j);
      any = any || B.at(i, j) > 0.0;
    }
    max_row_sum = std::max(max_row_sum, row);
  }
  if (!any) throw ZeroMatrix("all matrix entries are zero");

  // Power iteration on B + cI. The shift keeps bipartite structures (every
  // layered network symmetrized is one) from oscillating between the +/-
  // lambda eigenspaces; B and B + cI share eigenvectors.
  const double shift = max_row_sum;
  std::vector<double> v(static_cast<std::size_t>(n), 1.0 / std::sqrt(double(n)));
  std::vector<double> u = v;
  std::vector<double> tmp(static_cast<std::size_t>(n));

  const auto step = [&](std::vector<double>& x, bool transpose) {
    std::fill(tmp.begin(), tmp.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double b = transpose ? B.at(j, i) : B.at(i, j);
        tmp[static_cast<std::size_t>(i)] += b * x[static_cast<std::size_t>(j)];
      }
      tmp[static_cast<std::size_t>(i)] += shift * x[static_cast<std::size_t>(i)];
    }
    double norm = 0.0;
    for (double t : tmp) norm += t * t;
    norm = std::sqrt(norm);
    double delta = 0.0;
    for (int i = 0; i < n; ++i) {
      const double next = tmp[static_cast<std::size_t>(i)] / norm;
      delta = std::max(delta, std::abs(next - x[static_cast<std::size_t>(i)]));
      x[static_cast<std::size_t>(i)] = next;
    }
    return delta;
  };

  int iter = 0;
  for (; iter < max_iter; ++iter) {
    const double dv = step(v, /*transpose=*/false);
    const double du = step(u, /*transpose=*/true);
    if (dv <= tol && du <= tol) break;
  }
  if (iter >= max_iter) {
    throw NotConverged("perron_eigenpair: no convergence in " +
                       std::to_string(max_iter) + " iterations");
  }

  // Generalized Rayleigh quotient; exact at the fixed point.
  double ubv = 0.0;
  double uv = 0.0;
  for (int i = 0; i < n; ++i) {
    double bi = 0.0;
    for (int j = 0; j < n; ++j) bi += B.at(i, j) * v[static_cast<std::size_t>(j)];
    ubv += u[static_cast<std::size_t>(i)] * bi;
    uv += u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
  }
  if (!(uv > 1e-300)) {
    throw NotConverged("perron_eigenpair: left/right supports are disjoint (reducible matrix)");
  }
  const double lambda = ubv / uv;
  if (!(lambda > 0.0)) {
    throw NotConverged("perron_eigenpair: nonpositive dominant eigenvalue");
  }
  for (double& ui : u) ui /= uv;  // now sum u_i v_i == 1, v keeps unit 2-norm

  return PerronResult{lambda, std::move(u), std::move(v), iter + 1};
}

RBPrior build_rb_prior(const Network& net, double alpha) {
  require_positive_alpha(alpha);
  const int n = net.node_count();
  DenseMatrix B(n);
  const EdgeLayout lay = net.layout();
  for (std::size_t e = 0; e < net.edge_count(); ++e) {
    const Edge edge = lay.at(e);
    const int a = net.graph_index(edge.from);
    const int b = net.graph_index(edge.to);
    const double w = std::exp(-net.nominal[e] / alpha);
    B.at(a, b) = w;  // symmetrized: usable in both directions at equal cost
    B.at(b, a) = w;
  }
  PerronResult eig = perron_eigenpair(B);
  RBPrior prior;
  prior.lambda = eig.lambda;
  prior.u = std::move(eig.u);
  prior.v = std::move(eig.v);
  prior.alpha = alpha;
  prior.B = std::move(B);
  prior.kf = net.kf;
  prior.kw = net.kw;
  prior.ks = net.ks;
  return prior;
}

double rb_path_measure(const RBPrior& prior, std::span<const int> walk) {
  if (walk.size() < 2) {
    throw ValidationError("rb_path_measure needs at least one step");
  }
  const int n = prior.node_count();
  for (int node : walk) {
    if (node < 0 || node >= n) throw ValidationError("walk node out of range");
  }
  // log M = log u_{x0} + log v_{xT} - T log lambda + sum log B_step.
  double log_m = std::log(prior.u[static_cast<std::size_t>(walk.front())]) +
                 std::log(prior.v[static_cast<std::size_t>(walk.back())]) -
                 static_cast<double>(walk.size() - 1) * std::log(prior.lambda);
  for (std::size_t t = 0; t + 1 < walk.size(); ++t) {
    const double b = prior.B.at(walk[t], walk[t + 1]);
    if (!(b > 0.0)) {
      throw NonAdjacentStep("walk step " + std::to_string(t) +
                            " is not an edge of the symmetrized graph");
    }
    log_m += std::log(b);
  }
  return std::exp(log_m);
}

BridgeSolution solve_bridge(const Network& net, const Demand& zeta, double alpha,
                            double tol, int max_iter) {
  require_positive_alpha(alpha);
  if (!(tol > 0.0)) throw ValidationError("solve_bridge: tol must be positive");
  if (max_iter < 1) throw ValidationError("solve_bridge: max_iter must be >= 1");

  const PathIndex idx(net);
  const std::vector<double> lk = log_kernel(net, idx, alpha);
  const std::size_t block = static_cast<std::size_t>(net.kf) * net.kw;

  std::vector<double> log_b(static_cast<std::size_t>(net.ks), 0.0);
  for (int s = 0; s < net.ks; ++s) {
    if (zeta.zeta[static_cast<std::size_t>(s)] == 0.0) {
      log_b[static_cast<std::size_t>(s)] = kNegInf;
    }
  }

  Plan plan;
  plan.alpha = alpha;
  plan.p.assign(idx.path_count(), 0.0);
  std::vector<double> marginal(static_cast<std::size_t>(net.ks), 0.0);

  for (int iter = 1; iter <= max_iter; ++iter) {
    // log Z via max-subtraction over the scaled kernel.
    double m = kNegInf;
    for (std::size_t id = 0; id < lk.size(); ++id) {
      m = std::max(m, lk[id] + log_b[id % static_cast<std::size_t>(net.ks)]);
    }
    if (!std::isfinite(m)) {
      throw NotConverged("solve_bridge: kernel mass underflowed to zero");
    }
    Accumulator zacc;
    for (std::size_t id = 0; id < lk.size(); ++id) {
      zacc.add(std::exp(lk[id] + log_b[id % static_cast<std::size_t>(net.ks)] - m));
    }
    const double log_z = m + std::log(zacc.total());

    double err = 0.0;
    for (int s = 0; s < net.ks; ++s) {
      Accumulator macc;
      for (std::size_t b = 0; b < block; ++b) {
        const std::size_t id = b * net.ks + s;
        const double p = std::exp(lk[id] + log_b[static_cast<std::size_t>(s)] - log_z);
        plan.p[id] = p;
        macc.add(p);
      }
      marginal[static_cast<std::size_t>(s)] = macc.total();
      err = std::max(err, std::abs(marginal[static_cast<std::size_t>(s)] -
                                   zeta.zeta[static_cast<std::size_t>(s)]));
    }
    if (err <= tol) {
      return BridgeSolution{std::move(plan), iter, err};
    }
    for (int s = 0; s < net.ks; ++s) {
      const double target = zeta.zeta[static_cast<std::size_t>(s)];
      if (target == 0.0) {
        log_b[static_cast<std::size_t>(s)] = kNegInf;
      } else {
        log_b[static_cast<std::size_t>(s)] +=
            std::log(target) - std::log(marginal[static_cast<std::size_t>(s)]);
      }
    }
  }
  throw NotConverged("solve_bridge: marginal error above tol after " +
                     std::to_string(max_iter) + " iterations");
}

double plan_entropy(const Plan& plan) {
  Accumulator acc;
  for (double p : plan.p) {
    if (p > 0.0) acc.add(-p * std::log(p));
  }
  return acc.total();
}

double plan_objective(const Network& net, const Plan& plan, double alpha) {
  const PathIndex idx(net);
  const EdgeLayout lay = net.layout();
  Accumulator cost;
  idx.for_each([&](std::size_t id, int f, int w, int s) {
    const double c = net.nominal[lay.production(f)] + net.nominal[lay.fw(f, w)] +
                     net.nominal[lay.ws(w, s)];
    cost.add(c * plan.p[id]);
  });
  return cost.total() - alpha * plan_entropy(plan);
}

double kl_to_prior(const Plan& plan, const RBPrior& prior) {
  const PathIndex idx(prior.kf, prior.kw, prior.ks);
  if (plan.p.size() != idx.path_count()) {
    throw DomainMismatch("plan does not match the prior's path space");
  }
  const double log_lambda = std::log(prior.lambda);
  const double log_ui = std::log(prior.u[0]);
  Accumulator acc;
  idx.for_each([&](std::size_t id, int f, int w, int s) {
    const double p = plan.p[id];
    if (p <= 0.0) return;
    const int nf = 1 + f;
    const int nw = 1 + prior.kf + w;
    const int ns = 1 + prior.kf + prior.kw + s;
    const double b1 = prior.B.at(0, nf);
    const double b2 = prior.B.at(nf, nw);
    const double b3 = prior.B.at(nw, ns);
    const double vs = prior.v[static_cast<std::size_t>(ns)];
    if (!(b1 > 0.0) || !(b2 > 0.0) || !(b3 > 0.0) || !(vs > 0.0) || !(prior.u[0] > 0.0)) {
      throw ZeroPriorMass("plan puts mass on a path with zero prior measure");
    }
    const double log_m = log_ui + std::log(vs) - 3.0 * log_lambda + std::log(b1) +
                         std::log(b2) + std::log(b3);
    acc.add(p * (std::log(p) - log_m));
  });
  return acc.total();
}

double total_variation(const Plan& a, const Plan& b) {
  if (a.p.size() != b.p.size()) {
    throw DomainMismatch("plans live on different path spaces");
  }
  Accumulator acc;
  for (std::size_t i = 0; i < a.p.size(); ++i) acc.add(std::abs(a.p[i] - b.p[i]));
  return 0.5 * acc.total();
}

}  // namespace logiplan
