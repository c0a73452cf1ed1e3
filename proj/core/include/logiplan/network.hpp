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
#include <string_view>
#include <vector>

#include "logiplan/errors.hpp"

namespace logiplan {

// Node layers of the 3-layer logistics graph. Exactly one Virtual node
// exists; it feeds every factory and carries the production costs.
enum class Layer { Virtual, Factory, Db, Outlet };

struct NodeId {
  Layer layer = Layer::Virtual;
  int index = 0;
  friend constexpr auto operator<=>(const NodeId&, const NodeId&) = default;
};

// Directed edge of the layered graph. Admissible layer pairs are
// (Virtual,Factory), (Factory,Db) and (Db,Outlet).
struct Edge {
  NodeId from;
  NodeId to;
  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Canonical dense edge ids: production edges first, then factory->db, then
// db->outlet, each block row-major in (from,to). This order doubles as the
// tie-break order and the CSV emission order.
struct EdgeLayout {
  int kf = 0;
  int kw = 0;
  int ks = 0;

  std::size_t count() const {
    return static_cast<std::size_t>(kf) + static_cast<std::size_t>(kf) * kw +
           static_cast<std::size_t>(kw) * ks;
  }
  std::size_t production(int f) const { return static_cast<std::size_t>(f); }
  std::size_t fw(int f, int w) const {
    return static_cast<std::size_t>(kf) + static_cast<std::size_t>(f) * kw + w;
  }
  std::size_t ws(int w, int s) const {
    return static_cast<std::size_t>(kf) + static_cast<std::size_t>(kf) * kw +
           static_cast<std::size_t>(w) * ks + s;
  }
  Edge at(std::size_t id) const;
  std::size_t id(const Edge& e) const;  // throws UnknownEdge
  Layer from_layer(std::size_t id) const;
};

// Path x = (f,w,s); the Virtual production node is an implicit prefix.
struct Path {
  int factory = 0;
  int db = 0;
  int outlet = 0;
  friend constexpr auto operator<=>(const Path&, const Path&) = default;
};

// The layered network with nominal edge costs A_e and cost variances
// sigma_e^2, both indexed by canonical edge id. Immutable in use: build it,
// validate it, then share freely across threads.
struct Network {
  int kf = 0;
  int kw = 0;
  int ks = 0;
  std::vector<double> nominal;    // size edge_count()
  std::vector<double> variance;   // size edge_count()
  std::vector<std::string> names; // size node_count(), graph order; names[0] == "i"
  std::vector<Vec2> positions;    // empty, or size node_count(); virtual entry unused
  double sigma_ratio = 0.1;       // document default: sigma = ratio * |cost|

  static Network with_shape(int factories, int dbs, int outlets);

  EdgeLayout layout() const { return EdgeLayout{kf, kw, ks}; }
  std::size_t edge_count() const { return layout().count(); }
  int node_count() const { return 1 + kf + kw + ks; }
  bool has_positions() const { return !positions.empty(); }

  // Graph node indices: 0 = virtual, then factories, dbs, outlets.
  int graph_index(NodeId n) const;
  NodeId node_at(int graph_index) const;
  const std::string& node_name(NodeId n) const { return names[graph_index(n)]; }
  std::optional<NodeId> find_node(std::string_view name) const;

  Edge edge_at(std::size_t id) const { return layout().at(id); }
  std::size_t edge_id(const Edge& e) const { return layout().id(e); }
  std::string edge_name(std::size_t id) const;          // "f1->w2", "i->f1"
  std::optional<std::size_t> find_edge(std::string_view name) const;
};

// Checks every Network invariant: positive layer sizes, fully costed edges,
// nonnegative variances, position-derived costs consistent when positions
// are present. Throws the matching error.
void validate(const Network& net);

// Demand distribution over outlets, summing to 1.
struct Demand {
  std::vector<double> zeta;
};

Demand uniform_demand(int outlets);

// Enforces zeta >= 0 and |sum - 1| <= 1e-12, then renormalizes so the sum
// is exactly 1. Throws DemandNotNormalized.
Demand normalized_demand(std::vector<double> zeta);

// Dense enumeration of all |F|*|W|*|S| paths; id = (f*kw + w)*ks + s.
class PathIndex {
 public:
  PathIndex() = default;
  PathIndex(int kf, int kw, int ks) : kf_(kf), kw_(kw), ks_(ks) {}
  explicit PathIndex(const Network& net) : PathIndex(net.kf, net.kw, net.ks) {}

  int factories() const { return kf_; }
  int dbs() const { return kw_; }
  int outlets() const { return ks_; }
  EdgeLayout layout() const { return EdgeLayout{kf_, kw_, ks_}; }

  std::size_t path_count() const {
    return static_cast<std::size_t>(kf_) * kw_ * ks_;
  }
  std::size_t id_of(int f, int w, int s) const {
    return (static_cast<std::size_t>(f) * kw_ + w) * ks_ + s;
  }
  Path path_at(std::size_t id) const {
    const int s = static_cast<int>(id % ks_);
    const std::size_t fw = id / ks_;
    return Path{static_cast<int>(fw / kw_), static_cast<int>(fw % kw_), s};
  }
  int outlet_of(std::size_t id) const { return static_cast<int>(id % ks_); }

  // X_s: the paths ending at outlet s.
  std::vector<std::size_t> paths_to_outlet(int s) const;
  // X_e: the paths containing canonical edge `edge`.
  std::vector<std::size_t> paths_through(std::size_t edge) const;

  template <class F>
  void for_each(F&& fn) const {
    std::size_t id = 0;
    for (int f = 0; f < kf_; ++f)
      for (int w = 0; w < kw_; ++w)
        for (int s = 0; s < ks_; ++s) fn(id++, f, w, s);
  }

 private:
  int kf_ = 0;
  int kw_ = 0;
  int ks_ = 0;
};

PathIndex enumerate_paths(const Network& net);

// A_(i,f) + A_(f,w) + A_(w,s) for x = (f,w,s).
double path_cost(const Network& net, const Path& x);

}  // namespace logiplan
