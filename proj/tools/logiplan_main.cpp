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

// logiplan: entropy-regularized logistics plans for 3-layer networks and
// closed-form worst-case cost evaluation over KL ambiguity sets.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "logiplan/documents.hpp"
#include "logiplan/generator.hpp"
#include "logiplan/network.hpp"
#include "logiplan/numeric.hpp"
#include "logiplan/oracles.hpp"
#include "logiplan/planner.hpp"
#include "logiplan/resilience.hpp"

namespace {

using namespace logiplan;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInputError = 2;
constexpr int kExitNotConverged = 3;

struct GlobalOptions {
  double threshold = 8.0;
  bool total_cost_scale = false;  // report 3x costs (full expected path cost)
  std::uint64_t seed = 42;

  double scale() const { return total_cost_scale ? 3.0 : 1.0; }
};

// Shortest round-trip formatting keeps CSV/stdout byte-deterministic.
std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string fmt_alpha(double alpha) {
  std::ostringstream os;
  os << alpha;
  return os.str();
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    double a = 0, b = 0, c = 0;
    char sep1 = 0, sep2 = 0;
    std::istringstream is(text);
    if (!(is >> a >> sep1 >> b >> sep2 >> c) || sep1 != ':' || sep2 != ':' || c <= 0) {
      throw ValidationError("bad grid `" + text + "`; expected start:stop:step");
    }
    for (int i = 0;; ++i) {
      const double eps = a + i * c;
      if (eps > b + 1e-9 * std::max(1.0, std::abs(b))) break;
      grid.push_back(eps);
    }
  } else {
    std::istringstream is(text);
    std::string token;
    while (std::getline(is, token, ',')) {
      if (token.empty()) continue;
      grid.push_back(std::stod(token));
    }
  }
  if (grid.empty()) throw ValidationError("empty grid `" + text + "`");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0.0 || (i > 0 && grid[i] < grid[i - 1])) {
      throw ValidationError("grid must be sorted and nonnegative");
    }
  }
  return grid;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
  } else {
    open_out(path) << text;
  }
}

PlanDocument solve_for_cli(const Network& net, const Demand& demand, double alpha,
                           const std::string& solver, double tol, int max_iter) {
  PlanDocument doc;
  doc.solver = solver;
  if (solver == "gibbs") {
    doc.plan = solve_gibbs(net, demand, alpha);
    doc.iterations = 0;
  } else if (solver == "bridge") {
    BridgeSolution sol = solve_bridge(net, demand, alpha, tol, max_iter);
    doc.plan = std::move(sol.plan);
    doc.iterations = sol.iterations;
  } else {
    throw ValidationError("unknown solver `" + solver + "`");
  }
  // Record the achieved marginal violation for either route.
  const PathIndex idx(net);
  double err = 0.0;
  for (int s = 0; s < net.ks; ++s) {
    Accumulator acc;
    for (std::size_t id : idx.paths_to_outlet(s)) acc.add(doc.plan.p[id]);
    err = std::max(err, std::abs(acc.total() - demand.zeta[static_cast<std::size_t>(s)]));
  }
  doc.marginal_error = err;
  return doc;
}

int cmd_generate(int kf, int kw, int ks, std::uint64_t seed, double box,
                 double production_cost, double sigma_ratio, const std::string& out) {
  const Network net = generate_random_network(kf, kw, ks, seed, box, production_cost,
                                              sigma_ratio);
  write_text(out, network_to_json(net, uniform_demand(ks)));
  return kExitOk;
}

int cmd_plan(const GlobalOptions& global, const std::string& network_path, double alpha,
             const std::string& solver, double tol, int max_iter, const std::string& out) {
  const NetworkDocument doc = load_network_file(network_path);
  const PlanDocument plan = solve_for_cli(doc.network, doc.demand, alpha, solver, tol,
                                          max_iter);
  write_text(out, plan_to_json(plan, doc.network));
  const CostModel cm = CostModel::from_network(doc.network);
  const EdgeOccupancy occ = edge_occupancy(plan.plan, PathIndex(doc.network));
  std::cout << "alpha=" << fmt_alpha(alpha) << " solver=" << solver
            << " entropy=" << fmt(plan_entropy(plan.plan))
            << " objective=" << fmt(plan_objective(doc.network, plan.plan, alpha))
            << " nominal_cost=" << fmt(global.scale() * nominal_cost(cm, occ))
            << " iterations=" << plan.iterations
            << " marginal_error=" << fmt(plan.marginal_error) << "\n";
  return kExitOk;
}

int cmd_evaluate(const GlobalOptions& global, const std::string& network_path,
                 const std::vector<std::string>& plan_paths, const std::string& grid_text,
                 const std::string& out) {
  const NetworkDocument doc = load_network_file(network_path);
  const std::vector<double> grid = parse_grid(grid_text);
  const CostModel cm = CostModel::from_network(doc.network);
  const PathIndex idx(doc.network);

  std::vector<ResilienceCurve> curves;
  std::vector<std::string> labels;
  for (const std::string& path : plan_paths) {
    const PlanDocument plan = load_plan_file(path, doc.network);
    const EdgeOccupancy occ = edge_occupancy(plan.plan, idx);
    std::string label = fmt_alpha(plan.plan.alpha);
    for (const std::string& prev : labels) {
      if (prev == label) label += "b";
    }
    labels.push_back(label);
    ResilienceCurve curve = resilience_curve(cm, occ, grid,
                                             global.threshold / global.scale(), label);
    curves.push_back(std::move(curve));
  }

  std::ostringstream csv;
  csv << "epsilon";
  if (curves.size() == 1) {
    csv << ",l_star";
  } else {
    for (const auto& label : labels) csv << ",l_star_alpha_" << label;
  }
  csv << "\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv << fmt(grid[i]);
    for (const auto& curve : curves) csv << "," << fmt(global.scale() * curve.values[i]);
    csv << "\n";
  }
  write_text(out, csv.str());

  for (std::size_t c = 0; c < curves.size(); ++c) {
    std::cout << "alpha=" << labels[c] << " threshold=" << fmt(global.threshold)
              << " crossing_eps=";
    if (curves[c].threshold_crossing) {
      std::cout << fmt(*curves[c].threshold_crossing);
    } else {
      std::cout << "none";
    }
    std::cout << "\n";
  }
  return kExitOk;
}

int cmd_edge_risk(const GlobalOptions& global, const std::string& network_path,
                  const std::string& plan_path, double eps, const std::string& edge_name,
                  const std::string& grid_text, const std::string& out) {
  const NetworkDocument doc = load_network_file(network_path);
  const PlanDocument plan = load_plan_file(plan_path, doc.network);
  const CostModel cm = CostModel::from_network(doc.network);
  const EdgeOccupancy occ = edge_occupancy(plan.plan, PathIndex(doc.network));

  if (!edge_name.empty()) {
    const auto edge = doc.network.find_edge(edge_name);
    if (!edge) throw UnknownEdge("no edge named `" + edge_name + "`");
    const std::vector<double> grid = parse_grid(grid_text);
    std::ostringstream csv;
    csv << "epsilon,l_star,l_star_edge_" << edge_name << "\n";
    for (double e : grid) {
      csv << fmt(e) << "," << fmt(global.scale() * worst_case_cost(cm, e, occ)) << ","
          << fmt(global.scale() * single_edge_worst(cm, e, occ, *edge)) << "\n";
    }
    write_text(out, csv.str());
    return kExitOk;
  }

  // Full ranking, rows in canonical edge order with a rank column.
  const std::size_t m = doc.network.edge_count();
  std::vector<double> le(m);
  for (std::size_t e = 0; e < m; ++e) le[e] = single_edge_worst(cm, eps, occ, e);
  std::vector<std::size_t> order(m);
  for (std::size_t e = 0; e < m; ++e) order[e] = e;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return le[a] > le[b]; });
  std::vector<std::size_t> rank(m);
  for (std::size_t r = 0; r < m; ++r) rank[order[r]] = r + 1;

  std::ostringstream csv;
  csv << "edge,phi,sigma2,l_edge_star,rank\n";
  for (std::size_t e = 0; e < m; ++e) {
    csv << doc.network.edge_name(e) << "," << fmt(occ.phi[e]) << ","
        << fmt(cm.variance[e]) << "," << fmt(global.scale() * le[e]) << "," << rank[e]
        << "\n";
  }
  write_text(out, csv.str());
  std::cout << "riskiest_edge=" << doc.network.edge_name(riskiest_edge(cm, eps, occ))
            << "\n";
  return kExitOk;
}

int cmd_sweep(const GlobalOptions& global, const std::string& network_path,
              const std::string& alphas_text, const std::string& grid_text,
              const std::string& solver, const std::string& out,
              const std::string& plan_prefix) {
  const NetworkDocument doc = load_network_file(network_path);
  std::vector<double> alphas;
  {
    std::istringstream is(alphas_text);
    std::string token;
    while (std::getline(is, token, ',')) {
      if (!token.empty()) alphas.push_back(std::stod(token));
    }
  }
  if (alphas.empty()) throw ValidationError("no alphas given");
  const std::vector<double> grid = parse_grid(grid_text);
  const CostModel cm = CostModel::from_network(doc.network);
  const PathIndex idx(doc.network);

  std::vector<ResilienceCurve> curves;
  std::vector<std::string> labels;
  for (double alpha : alphas) {
    const PlanDocument plan = solve_for_cli(doc.network, doc.demand, alpha, solver,
                                            1e-10, 10000);
    if (!plan_prefix.empty()) {
      save_plan_file(plan_prefix + fmt_alpha(alpha) + ".json", plan, doc.network);
    }
    const EdgeOccupancy occ = edge_occupancy(plan.plan, idx);
    const std::string label = fmt_alpha(alpha);
    labels.push_back(label);
    curves.push_back(resilience_curve(cm, occ, grid, global.threshold / global.scale(),
                                      label));
    std::cout << "alpha=" << label << " entropy=" << fmt(plan_entropy(plan.plan))
              << " nominal_cost=" << fmt(global.scale() * nominal_cost(cm, occ))
              << " crossing_eps=";
    if (curves.back().threshold_crossing) {
      std::cout << fmt(*curves.back().threshold_crossing);
    } else {
      std::cout << "none";
    }
    std::cout << "\n";
  }

  std::ostringstream csv;
  csv << "epsilon";
  for (const auto& label : labels) csv << ",l_star_alpha_" << label;
  csv << "\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv << fmt(grid[i]);
    for (const auto& curve : curves) csv << "," << fmt(global.scale() * curve.values[i]);
    csv << "\n";
  }
  write_text(out, csv.str());
  return kExitOk;
}

int cmd_bench(const GlobalOptions& global, const std::string& sizes_text, int reps,
              double alpha, const std::string& out) {
  if (reps < 1) throw ValidationError("reps must be >= 1");
  std::vector<int> sizes;
  {
    std::istringstream is(sizes_text);
    std::string token;
    while (std::getline(is, token, ',')) {
      if (!token.empty()) sizes.push_back(std::stoi(token));
    }
  }
  if (sizes.empty()) throw ValidationError("no sizes given");

  std::ostringstream csv;
  csv << "|V|,mean_seconds,std_seconds\n";
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const int k = sizes[i];
    const Network net = generate_random_network(k, k, k, global.seed + i);
    const Demand demand = uniform_demand(k);
    solve_bridge(net, demand, alpha);  // warm-up, untimed
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(reps));
    for (int r = 0; r < reps; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      const BridgeSolution sol = solve_bridge(net, demand, alpha);
      const auto t1 = std::chrono::steady_clock::now();
      if (sol.plan.p.empty()) throw ValidationError("empty plan");  // keep the solve alive
      times.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    double mean = 0.0;
    for (double t : times) mean += t;
    mean /= static_cast<double>(reps);
    double var = 0.0;
    for (double t : times) var += (t - mean) * (t - mean);
    const double stddev = reps > 1 ? std::sqrt(var / static_cast<double>(reps - 1)) : 0.0;
    csv << (3 * k + 1) << "," << fmt(mean) << "," << fmt(stddev) << "\n";
  }
  write_text(out, csv.str());
  return kExitOk;
}

int cmd_verify(const GlobalOptions& global, const std::string& network_path, double alpha,
               double eps, const std::string& plan_path) {
  (void)global;
  const NetworkDocument doc = load_network_file(network_path);
  const Network& net = doc.network;
  const PathIndex idx(net);
  const CostModel cm = CostModel::from_network(net);
  bool ok = true;
  const auto report = [&ok](const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << " " << name << " " << detail << "\n";
    ok = ok && pass;
  };

  const Plan gibbs = solve_gibbs(net, doc.demand, alpha);
  const BridgeSolution bridge = solve_bridge(net, doc.demand, alpha);
  const double tv = total_variation(gibbs, bridge.plan);
  report("theorem1-equivalence", tv <= 1e-8, "tv=" + fmt(tv));

  const Plan* checked = &bridge.plan;
  PlanDocument loaded;
  if (!plan_path.empty()) {
    loaded = load_plan_file(plan_path, net);
    checked = &loaded.plan;
  }
  {
    Accumulator total;
    for (double p : checked->p) total.add(p);
    double err = std::abs(total.total() - 1.0);
    bool nonneg = true;
    for (double p : checked->p) nonneg = nonneg && p >= 0.0;
    for (int s = 0; s < net.ks; ++s) {
      Accumulator acc;
      for (std::size_t id : idx.paths_to_outlet(s)) acc.add(checked->p[id]);
      err = std::max(err, std::abs(acc.total() - doc.demand.zeta[static_cast<std::size_t>(s)]));
    }
    report("plan-feasibility", nonneg && err <= 1e-10, "max_violation=" + fmt(err));
  }

  const EdgeOccupancy occ = edge_occupancy(*checked, idx);
  {
    Accumulator total;
    for (double phi : occ.phi) total.add(phi);
    double layer_err = std::abs(total.total() - 1.0);
    const EdgeLayout lay = net.layout();
    Accumulator l0, l1, l2;
    bool in_range = true;
    for (std::size_t e = 0; e < occ.phi.size(); ++e) {
      in_range = in_range && occ.phi[e] >= 0.0 && occ.phi[e] <= 1.0 / 3.0 + 1e-12;
      switch (lay.from_layer(e)) {
        case Layer::Virtual: l0.add(occ.phi[e]); break;
        case Layer::Factory: l1.add(occ.phi[e]); break;
        default: l2.add(occ.phi[e]); break;
      }
    }
    layer_err = std::max(layer_err, std::abs(l0.total() - 1.0 / 3.0));
    layer_err = std::max(layer_err, std::abs(l1.total() - 1.0 / 3.0));
    layer_err = std::max(layer_err, std::abs(l2.total() - 1.0 / 3.0));
    report("occupancy-simplex", in_range && layer_err <= 1e-10,
           "max_violation=" + fmt(layer_err));
  }

  {
    const double closed = worst_case_cost(cm, eps, occ);
    const DualEvaluation dual = dual_worst_case(cm, occ, eps);
    const double gap = std::abs(closed - dual.value) / (1.0 + std::abs(closed));
    report("dual-vs-closed-form", gap <= 1e-6,
           "closed=" + fmt(closed) + " dual=" + fmt(dual.value));
  }

  {
    const RBPrior prior = build_rb_prior(net, alpha);
    const double kl = kl_to_prior(*checked, prior);
    Accumulator rhs;
    rhs.add(plan_objective(net, *checked, alpha) / alpha);
    rhs.add(-std::log(prior.u[0]));
    rhs.add(3.0 * std::log(prior.lambda));
    for (int s = 0; s < net.ks; ++s) {
      const double z = doc.demand.zeta[static_cast<std::size_t>(s)];
      if (z > 0.0) {
        rhs.add(-z * std::log(prior.v[static_cast<std::size_t>(1 + net.kf + net.kw + s)]));
      }
    }
    const double gap = std::abs(kl - rhs.total());
    report("kl-decomposition", gap <= 1e-8, "gap=" + fmt(gap));
  }

  if (static_cast<long>(net.ks) * (net.kf * net.kw - 1) <= 3) {
    const Plan bf = brute_force_plan(net, doc.demand, alpha, 1e-3);
    const double got = plan_objective(net, gibbs, alpha);
    const double grid_best = plan_objective(net, bf, alpha);
    report("gibbs-optimality", got <= grid_best + 1e-9,
           "gibbs=" + fmt(got) + " grid=" + fmt(grid_best));
  }

  return ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-regularized logistics planning and resilience evaluation"};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--threshold", global.threshold,
                 "Cost level treated as business-impossible (default 8)");
  app.add_flag("--total-cost-scale", global.total_cost_scale,
               "Report occupancy costs times 3 (full expected path cost)");
  app.add_option("--seed", global.seed, "Default seed for generation and benchmarks");

  // generate
  auto* gen = app.add_subcommand("generate", "Write a random network document");
  int g_kf = 3, g_kw = 4, g_ks = 5;
  double g_box = 10.0, g_prod = 1.0, g_ratio = 0.1;
  std::optional<std::uint64_t> g_seed;
  std::string g_out = "-";
  gen->add_option("--factories,-f", g_kf)->check(CLI::PositiveNumber);
  gen->add_option("--warehouses,-w", g_kw)->check(CLI::PositiveNumber);
  gen->add_option("--outlets,-s", g_ks)->check(CLI::PositiveNumber);
  gen->add_option("--gen-seed", g_seed, "Seed (defaults to the global --seed)");
  gen->add_option("--box", g_box, "Positions are uniform in [0,box]^2");
  gen->add_option("--production-cost", g_prod);
  gen->add_option("--sigma-ratio", g_ratio, "sigma_e = ratio * cost_e");
  gen->add_option("--out,-o", g_out);

  // plan
  auto* plan = app.add_subcommand("plan", "Solve the entropy-regularized plan");
  std::string p_network, p_solver = "gibbs", p_out = "-";
  double p_alpha = 0.9, p_tol = 1e-10;
  int p_max_iter = 10000;
  plan->add_option("--network,-n", p_network)->required();
  plan->add_option("--alpha,-a", p_alpha)->required();
  plan->add_option("--solver", p_solver)->check(CLI::IsMember({"gibbs", "bridge"}));
  plan->add_option("--tol", p_tol);
  plan->add_option("--max-iter", p_max_iter);
  plan->add_option("--out,-o", p_out);

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "Resilience curve(s) for saved plan(s)");
  std::string e_network, e_grid = "0:10:0.1", e_out = "-";
  std::vector<std::string> e_plans;
  eval->add_option("--network,-n", e_network)->required();
  eval->add_option("--plan,-p", e_plans)->required();
  eval->add_option("--eps-grid", e_grid, "start:stop:step or comma list");
  eval->add_option("--out,-o", e_out);

  // edge-risk
  auto* risk = app.add_subcommand("edge-risk", "Single-edge disruption analysis");
  std::string r_network, r_plan, r_edge, r_grid = "0:10:0.1", r_out = "-";
  double r_eps = 7.0;
  risk->add_option("--network,-n", r_network)->required();
  risk->add_option("--plan,-p", r_plan)->required();
  risk->add_option("--eps", r_eps, "Disruption scale for the ranking");
  risk->add_option("--edge", r_edge, "Sweep this edge over --eps-grid instead");
  risk->add_option("--eps-grid", r_grid);
  risk->add_option("--out,-o", r_out);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Solve several alphas and compare curves");
  std::string s_network, s_alphas = "0.3,0.9,7.0", s_grid = "0:10:0.1";
  std::string s_solver = "gibbs", s_out = "-", s_prefix;
  sweep->add_option("--network,-n", s_network)->required();
  sweep->add_option("--alphas", s_alphas);
  sweep->add_option("--eps-grid", s_grid);
  sweep->add_option("--solver", s_solver)->check(CLI::IsMember({"gibbs", "bridge"}));
  sweep->add_option("--out,-o", s_out);
  sweep->add_option("--plan-prefix", s_prefix, "Also save plan documents with this prefix");

  // bench
  auto* bench = app.add_subcommand("bench", "Time the bridge solver over network sizes");
  std::string b_sizes = "3,6,9,12,15", b_out = "-";
  int b_reps = 10;
  double b_alpha = 0.9;
  bench->add_option("--sizes", b_sizes, "Comma list of k; each instance is k x k x k");
  bench->add_option("--reps", b_reps);
  bench->add_option("--alpha", b_alpha);
  bench->add_option("--out,-o", b_out);

  // verify
  auto* verify = app.add_subcommand("verify", "Run the oracle cross-checks");
  std::string v_network, v_plan;
  double v_alpha = 0.9, v_eps = 7.0;
  verify->add_option("--network,-n", v_network)->required();
  verify->add_option("--alpha,-a", v_alpha);
  verify->add_option("--eps", v_eps);
  verify->add_option("--plan,-p", v_plan, "Also verify this saved plan");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (gen->parsed()) {
      return cmd_generate(g_kf, g_kw, g_ks, g_seed.value_or(global.seed), g_box, g_prod,
                          g_ratio, g_out);
    }
    if (plan->parsed()) {
      return cmd_plan(global, p_network, p_alpha, p_solver, p_tol, p_max_iter, p_out);
    }
    if (eval->parsed()) {
      return cmd_evaluate(global, e_network, e_plans, e_grid, e_out);
    }
    if (risk->parsed()) {
      return cmd_edge_risk(global, r_network, r_plan, r_eps, r_edge, r_grid, r_out);
    }
    if (sweep->parsed()) {
      return cmd_sweep(global, s_network, s_alphas, s_grid, s_solver, s_out, s_prefix);
    }
    if (bench->parsed()) {
      return cmd_bench(global, b_sizes, b_reps, b_alpha, b_out);
    }
    if (verify->parsed()) {
      return cmd_verify(global, v_network, v_alpha, v_eps, v_plan);
    }
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotConverged;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}
