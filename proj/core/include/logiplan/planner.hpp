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

#include <span>
#include <vector>

#include "logiplan/network.hpp"
#include "logiplan/numeric.hpp"

namespace logiplan {

// A logistic plan: probability distribution over paths, PathIndex order.
// Feasible plans satisfy sum(p) == 1 and the per-outlet marginals equal the
// demand, both to 1e-10.
struct Plan {
  std::vector<double> p;
  double alpha = 0.0;  // regularization weight the plan was produced with
};

// Entropy-regularized plan in closed form: within each outlet block,
// p_x = zeta_s * exp(-C_x/alpha) / sum_{x' in X_s} exp(-C_{x'}/alpha).
// All arithmetic is log-domain with max-subtraction, so alpha down to 1e-6
// with O(10) costs stays finite. Throws NonPositiveAlpha.
Plan solve_gibbs(const Network& net, const Demand& zeta, double alpha);

struct PerronResult {
  double lambda = 0.0;
  std::vector<double> u;  // left eigenvector
  std::vector<double> v;  // right eigenvector
  int iterations = 0;
};

// Dominant eigenpair of a nonnegative matrix by power iteration on B + cI
// (the diagonal shift breaks the period-2 oscillation of bipartite graphs;
// the eigenvectors are unchanged). Left and right iterations run until the
// successive-iterate max-norm change is <= tol. v has unit 2-norm and u is
// scaled so that sum_i u_i v_i = 1. Throws ZeroMatrix and NotConverged.
PerronResult perron_eigenpair(const DenseMatrix& B, double tol = 1e-13,
                              int max_iter = 100000);

// Maximum-entropy random walk reference measure on the symmetrized network
// graph. B_(i,j) = exp(-A_(i,j)/alpha) on symmetrized edges, else 0.
struct RBPrior {
  double lambda = 0.0;
  std::vector<double> u;
  std::vector<double> v;
  double alpha = 0.0;
  DenseMatrix B;       // graph-node indexing, symmetric
  int kf = 0, kw = 0, ks = 0;

  int node_count() const { return 1 + kf + kw + ks; }
};

RBPrior build_rb_prior(const Network& net, double alpha);

// Measure of one walk (x_0,...,x_T) on the symmetrized graph:
// u_{x0} * v_{xT} * lambda^-T * exp(-sum_t A_(x_t,x_{t+1}) / alpha).
// Nodes are graph indices. Throws NonAdjacentStep if a step is not an edge.
double rb_path_measure(const RBPrior& prior, std::span<const int> walk);

struct BridgeSolution {
  Plan plan;
  int iterations = 0;
  double final_marginal_error = 0.0;
};

// Iterative proportional scaling on the kernel K_x = exp(-C_x/alpha): keep a
// terminal scaling over outlets, renormalize, and match the demand marginals.
// The source marginal is a point mass at the virtual node, so the fixed point
// is reached after a single scaling update; the loop stays general. Throws
// NonPositiveAlpha and NotConverged.
BridgeSolution solve_bridge(const Network& net, const Demand& zeta, double alpha,
                            double tol = 1e-10, int max_iter = 10000);

// H(P) = -sum p log p, with 0 log 0 = 0. Nats.
double plan_entropy(const Plan& plan);

// sum_x C_x p_x - alpha * H(P).
double plan_objective(const Network& net, const Plan& plan, double alpha);

// D_KL(P || M_RB) = sum_x p_x log(p_x / M_RB(i,f,w,s)). Throws ZeroPriorMass
// if the plan puts mass on a path whose prior measure underflows to zero.
double kl_to_prior(const Plan& plan, const RBPrior& prior);

// (1/2) sum |p - q|.
double total_variation(const Plan& a, const Plan& b);

}  // namespace logiplan
