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

#include "logiplan/network.hpp"

#include <cmath>
#include <string>

#include "logiplan/numeric.hpp"

namespace logiplan {

namespace {

constexpr double kDemandTol = 1e-12;

}  // namespace

Edge EdgeLayout::at(std::size_t id) const {
  const std::size_t n_prod = static_cast<std::size_t>(kf);
  const std::size_t n_fw = static_cast<std::size_t>(kf) * kw;
  if (id < n_prod) {
    return Edge{NodeId{Layer::Virtual, 0}, NodeId{Layer::Factory, static_cast<int>(id)}};
  }
  id -= n_prod;
  if (id < n_fw) {
    return Edge{NodeId{Layer::Factory, static_cast<int>(id / kw)},
                NodeId{Layer::Db, static_cast<int>(id % kw)}};
  }
  id -= n_fw;
  if (id < static_cast<std::size_t>(kw) * ks) {
    return Edge{NodeId{Layer::Db, static_cast<int>(id / ks)},
                NodeId{Layer::Outlet, static_cast<int>(id % ks)}};
  }
  throw UnknownEdge("edge id out of range");
}

std::size_t EdgeLayout::id(const Edge& e) const {
  const auto in_range = [](int i, int k) { return i >= 0 && i < k; };
  if (e.from.layer == Layer::Virtual && e.to.layer == Layer::Factory &&
      e.from.index == 0 && in_range(e.to.index, kf)) {
    return production(e.to.index);
  }
  if (e.from.layer == Layer::Factory && e.to.layer == Layer::Db &&
      in_range(e.from.index, kf) && in_range(e.to.index, kw)) {
    return fw(e.from.index, e.to.index);
  }
  if (e.from.layer == Layer::Db && e.to.layer == Layer::Outlet &&
      in_range(e.from.index, kw) && in_range(e.to.index, ks)) {
    return ws(e.from.index, e.to.index);
  }
  throw UnknownEdge("not an admissible edge of this network");
}

Layer EdgeLayout::from_layer(std::size_t id) const {
  if (id < static_cast<std::size_t>(kf)) return Layer::Virtual;
  if (id < static_cast<std::size_t>(kf) + static_cast<std::size_t>(kf) * kw) {
    return Layer::Factory;
  }
  return Layer::Db;
}

Network Network::with_shape(int factories, int dbs, int outlets) {
  Network net;
  net.kf = factories;
  net.kw = dbs;
  net.ks = outlets;
  if (factories < 1 || dbs < 1 || outlets < 1) {
    throw EmptyLayer("every layer needs at least one node");
  }
  net.nominal.assign(net.edge_count(), 0.0);
  net.variance.assign(net.edge_count(), 0.0);
  net.names.reserve(net.node_count());
  net.names.emplace_back("i");
  for (int f = 0; f < factories; ++f) net.names.push_back("f" + std::to_string(f + 1));
  for (int w = 0; w < dbs; ++w) net.names.push_back("w" + std::to_string(w + 1));
  for (int s = 0; s < outlets; ++s) net.names.push_back("s" + std::to_string(s + 1));
  return net;
}

int Network::graph_index(NodeId n) const {
  switch (n.layer) {
    case Layer::Virtual: return 0;
    case Layer::Factory: return 1 + n.index;
    case Layer::Db: return 1 + kf + n.index;
    case Layer::Outlet: return 1 + kf + kw + n.index;
  }
  return 0;
}

NodeId Network::node_at(int graph_index) const {
  if (graph_index == 0) return NodeId{Layer::Virtual, 0};
  graph_index -= 1;
  if (graph_index < kf) return NodeId{Layer::Factory, graph_index};
  graph_index -= kf;
  if (graph_index < kw) return NodeId{Layer::Db, graph_index};
  return NodeId{Layer::Outlet, graph_index - kw};
}

std::optional<NodeId> Network::find_node(std::string_view name) const {
  for (int i = 0; i < node_count(); ++i) {
    if (names[static_cast<std::size_t>(i)] == name) return node_at(i);
  }
  return std::nullopt;
}

std::string Network::edge_name(std::size_t id) const {
  const Edge e = edge_at(id);
  return node_name(e.from) + "->" + node_name(e.to);
}

std::optional<std::size_t> Network::find_edge(std::string_view name) const {
  const auto sep = name.find("->");
  if (sep == std::string_view::npos) return std::nullopt;
  const auto from = find_node(name.substr(0, sep));
  const auto to = find_node(name.substr(sep + 2));
  if (!from || !to) return std::nullopt;
  try {
    return edge_id(Edge{*from, *to});
  } catch (const UnknownEdge&) {
    return std::nullopt;
  }
}

void validate(const Network& net) {
  if (net.kf < 1 || net.kw < 1 || net.ks < 1) {
    throw EmptyLayer("every layer needs at least one node");
  }
  const std::size_t m = net.edge_count();
  if (net.nominal.size() != m) {
    throw MissingEdgeCost("nominal cost table does not cover the edge set");
  }
  if (net.variance.size() != m) {
    throw NegativeVariance("variance table does not cover the edge set");
  }
  for (std::size_t e = 0; e < m; ++e) {
    if (!std::isfinite(net.nominal[e])) {
      throw MissingEdgeCost("non-finite cost on edge " + net.edge_name(e));
    }
    if (!(net.variance[e] >= 0.0)) {
      throw NegativeVariance("negative variance on edge " + net.edge_name(e));
    }
  }
  if (net.has_positions()) {
    if (net.positions.size() != static_cast<std::size_t>(net.node_count())) {
      throw DocumentError("positions must cover every node");
    }
  }
  if (static_cast<int>(net.names.size()) != net.node_count()) {
    throw DocumentError("names must cover every node");
  }
}

Demand uniform_demand(int outlets) {
  if (outlets < 1) throw EmptyLayer("demand needs at least one outlet");
  return normalized_demand(std::vector<double>(outlets, 1.0 / outlets));
}

Demand normalized_demand(std::vector<double> zeta) {
  if (zeta.empty()) throw EmptyLayer("demand needs at least one outlet");
  Accumulator acc;
  for (double z : zeta) {
    if (!(z >= 0.0)) throw DemandNotNormalized("demand weights must be nonnegative");
    acc.add(z);
  }
  const double total = acc.total();
  if (std::abs(total - 1.0) > kDemandTol) {
    throw DemandNotNormalized("demand sums to " + std::to_string(total));
  }
  for (double& z : zeta) z /= total;
  // Pin the sum to exactly 1 by absorbing the residual into the largest entry.
  Accumulator again;
  for (double z : zeta) again.add(z);
  const double residual = 1.0 - again.total();
  if (residual != 0.0) {
    std::size_t arg = 0;
    for (std::size_t s = 1; s < zeta.size(); ++s) {
      if (zeta[s] > zeta[arg]) arg = s;
    }
    zeta[arg] += residual;
  }
  return Demand{std::move(zeta)};
}

std::vector<std::size_t> PathIndex::paths_to_outlet(int s) const {
  std::vector<std::size_t> out;
  out.reserve(static_cast<std::size_t>(kf_) * kw_);
  for (int f = 0; f < kf_; ++f)
    for (int w = 0; w < kw_; ++w) out.push_back(id_of(f, w, s));
  return out;
}

std::vector<std::size_t> PathIndex::paths_through(std::size_t edge) const {
  const EdgeLayout lay = layout();
  const Edge e = lay.at(edge);
  std::vector<std::size_t> out;
  switch (e.from.layer) {
    case Layer::Virtual:
      out.reserve(static_cast<std::size_t>(kw_) * ks_);
      for (int w = 0; w < kw_; ++w)
        for (int s = 0; s < ks_; ++s) out.push_back(id_of(e.to.index, w, s));
      break;
    case Layer::Factory:
      out.reserve(ks_);
      for (int s = 0; s < ks_; ++s) out.push_back(id_of(e.from.index, e.to.index, s));
      break;
    case Layer::Db:
      out.reserve(kf_);
      for (int f = 0; f < kf_; ++f) out.push_back(id_of(f, e.from.index, e.to.index));
      break;
    case Layer::Outlet:
      break;  // unreachable: no edge starts at an outlet
  }
  return out;
}

PathIndex enumerate_paths(const Network& net) { return PathIndex(net); }

double path_cost(const Network& net, const Path& x) {
  const EdgeLayout lay = net.layout();
  return net.nominal[lay.production(x.factory)] + net.nominal[lay.fw(x.factory, x.db)] +
         net.nominal[lay.ws(x.db, x.outlet)];
}

}  // namespace logiplan
