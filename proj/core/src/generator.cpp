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

#include "logiplan/generator.hpp"

#include <cmath>
#include <random>

namespace logiplan {

namespace {

// mt19937_64 output mapped to [0,1) by hand; std::uniform_real_distribution
// is implementation-defined and would break the bit-determinism contract.
double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double euclid(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace

Network generate_random_network(int kf, int kw, int ks, std::uint64_t seed,
                                double box, double production_cost,
                                double sigma_ratio) {
  Network net = Network::with_shape(kf, kw, ks);
  net.sigma_ratio = sigma_ratio;
  std::mt19937_64 rng(seed);

  net.positions.assign(net.node_count(), Vec2{});
  // Virtual node position is irrelevant (production costs are explicit);
  // park it at the box center so emitted documents stay tidy.
  net.positions[0] = Vec2{box / 2.0, box / 2.0};
  for (int i = 1; i < net.node_count(); ++i) {
    net.positions[static_cast<std::size_t>(i)] =
        Vec2{next_unit(rng) * box, next_unit(rng) * box};
  }

  const EdgeLayout lay = net.layout();
  for (int f = 0; f < kf; ++f) net.nominal[lay.production(f)] = production_cost;
  for (int f = 0; f < kf; ++f) {
    const Vec2 pf = net.positions[static_cast<std::size_t>(net.graph_index(NodeId{Layer::Factory, f}))];
    for (int w = 0; w < kw; ++w) {
      const Vec2 pw = net.positions[static_cast<std::size_t>(net.graph_index(NodeId{Layer::Db, w}))];
      net.nominal[lay.fw(f, w)] = euclid(pf, pw);
    }
  }
  for (int w = 0; w < kw; ++w) {
    const Vec2 pw = net.positions[static_cast<std::size_t>(net.graph_index(NodeId{Layer::Db, w}))];
    for (int s = 0; s < ks; ++s) {
      const Vec2 ps = net.positions[static_cast<std::size_t>(net.graph_index(NodeId{Layer::Outlet, s}))];
      net.nominal[lay.ws(w, s)] = euclid(pw, ps);
    }
  }
  for (std::size_t e = 0; e < net.edge_count(); ++e) {
    const double sigma = sigma_ratio * net.nominal[e];
    net.variance[e] = sigma * sigma;
  }
  validate(net);
  return net;
}

}  // namespace logiplan
