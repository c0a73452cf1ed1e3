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

#include "logiplan/documents.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include <json.hpp>

namespace logiplan {

namespace {

using json = nlohmann::ordered_json;

double euclid(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

json parse_text(std::string_view text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw DocumentError("invalid JSON");
  return j;
}

struct LayerSpec {
  std::vector<std::string> ids;
  std::vector<std::optional<Vec2>> positions;
};

LayerSpec read_layer(const json& doc, const std::string& key) {
  LayerSpec spec;
  if (!doc.contains(key)) return spec;
  const json& arr = doc.at(key);
  if (!arr.is_array()) throw DocumentError("`" + key + "` must be a list");
  for (const json& item : arr) {
    if (!item.is_object() || !item.contains("id") || !item.at("id").is_string()) {
      throw DocumentError("every `" + key + "` entry needs a string `id`");
    }
    spec.ids.push_back(item.at("id").get<std::string>());
    if (item.contains("position")) {
      const json& pos = item.at("position");
      if (!pos.is_array() || pos.size() != 2 || !pos[0].is_number() || !pos[1].is_number()) {
        throw DocumentError("`position` must be [x, y]");
      }
      spec.positions.push_back(Vec2{pos[0].get<double>(), pos[1].get<double>()});
    } else {
      spec.positions.push_back(std::nullopt);
    }
  }
  return spec;
}

double require_number(const json& j, const std::string& what) {
  if (!j.is_number()) throw DocumentError(what + " must be a number");
  return j.get<double>();
}

}  // namespace

NetworkDocument parse_network_json(std::string_view text) {
  const json doc = parse_text(text);
  if (!doc.is_object()) throw DocumentError("network document must be an object");

  const LayerSpec fs = read_layer(doc, "factories");
  const LayerSpec wsp = read_layer(doc, "warehouses");
  const LayerSpec os = read_layer(doc, "outlets");
  if (fs.ids.empty()) throw EmptyLayer("no factories");
  if (wsp.ids.empty()) throw EmptyLayer("no warehouses");
  if (os.ids.empty()) throw EmptyLayer("no outlets");

  Network net = Network::with_shape(static_cast<int>(fs.ids.size()),
                                    static_cast<int>(wsp.ids.size()),
                                    static_cast<int>(os.ids.size()));
  {
    std::size_t k = 1;
    for (const auto& id : fs.ids) net.names[k++] = id;
    for (const auto& id : wsp.ids) net.names[k++] = id;
    for (const auto& id : os.ids) net.names[k++] = id;
  }
  {
    std::map<std::string, int> seen;
    seen["i"] = 1;
    for (const std::string& name : net.names) {
      if (seen.count(name) && name != "i") {
        throw DocumentError("duplicate node id `" + name + "`");
      }
      seen[name]++;
    }
  }

  const bool all_placed = [&] {
    for (const auto& p : fs.positions) if (!p) return false;
    for (const auto& p : wsp.positions) if (!p) return false;
    for (const auto& p : os.positions) if (!p) return false;
    return true;
  }();
  if (all_placed) {
    net.positions.assign(static_cast<std::size_t>(net.node_count()), Vec2{});
    std::size_t k = 1;
    for (const auto& p : fs.positions) net.positions[k++] = *p;
    for (const auto& p : wsp.positions) net.positions[k++] = *p;
    for (const auto& p : os.positions) net.positions[k++] = *p;
  }

  if (doc.contains("default_sigma2_ratio")) {
    net.sigma_ratio = require_number(doc.at("default_sigma2_ratio"), "default_sigma2_ratio");
    if (net.sigma_ratio < 0.0) throw NegativeVariance("default_sigma2_ratio must be >= 0");
  }

  const EdgeLayout lay = net.layout();
  const double unset = std::numeric_limits<double>::quiet_NaN();
  std::fill(net.nominal.begin(), net.nominal.end(), unset);
  std::fill(net.variance.begin(), net.variance.end(), unset);

  // Costs from positions first, explicit production costs, then the explicit
  // edge list overriding everything.
  if (all_placed) {
    for (int f = 0; f < net.kf; ++f) {
      const Vec2 pf = net.positions[static_cast<std::size_t>(1 + f)];
      for (int w = 0; w < net.kw; ++w) {
        net.nominal[lay.fw(f, w)] =
            euclid(pf, net.positions[static_cast<std::size_t>(1 + net.kf + w)]);
      }
    }
    for (int w = 0; w < net.kw; ++w) {
      const Vec2 pw = net.positions[static_cast<std::size_t>(1 + net.kf + w)];
      for (int s = 0; s < net.ks; ++s) {
        net.nominal[lay.ws(w, s)] =
            euclid(pw, net.positions[static_cast<std::size_t>(1 + net.kf + net.kw + s)]);
      }
    }
  }
  if (doc.contains("production_cost")) {
    const json& pc = doc.at("production_cost");
    if (pc.is_number()) {
      for (int f = 0; f < net.kf; ++f) net.nominal[lay.production(f)] = pc.get<double>();
    } else if (pc.is_array()) {
      if (pc.size() != static_cast<std::size_t>(net.kf)) {
        throw DocumentError("production_cost list must have one entry per factory");
      }
      for (int f = 0; f < net.kf; ++f) {
        net.nominal[lay.production(f)] = require_number(pc[static_cast<std::size_t>(f)],
                                                        "production_cost entry");
      }
    } else if (pc.is_object()) {
      for (const auto& [id, value] : pc.items()) {
        const auto node = net.find_node(id);
        if (!node || node->layer != Layer::Factory) {
          throw DocumentError("production_cost key `" + id + "` is not a factory");
        }
        net.nominal[lay.production(node->index)] = require_number(value, "production_cost");
      }
    } else {
      throw DocumentError("production_cost must be a number, list, or id map");
    }
  }
  if (doc.contains("edges")) {
    const json& edges = doc.at("edges");
    if (!edges.is_array()) throw DocumentError("`edges` must be a list");
    for (const json& item : edges) {
      if (!item.is_object() || !item.contains("from") || !item.contains("to") ||
          !item.contains("cost")) {
        throw DocumentError("every edge entry needs `from`, `to`, `cost`");
      }
      const auto from = net.find_node(item.at("from").get<std::string>());
      const auto to = net.find_node(item.at("to").get<std::string>());
      if (!from || !to) throw DocumentError("edge endpoint id not found");
      std::size_t e;
      try {
        e = net.edge_id(Edge{*from, *to});
      } catch (const UnknownEdge&) {
        throw DocumentError("edge " + item.at("from").get<std::string>() + "->" +
                            item.at("to").get<std::string>() + " is not admissible");
      }
      net.nominal[e] = require_number(item.at("cost"), "edge cost");
      if (item.contains("sigma2")) {
        const double s2 = require_number(item.at("sigma2"), "edge sigma2");
        if (s2 < 0.0) throw NegativeVariance("sigma2 on " + net.edge_name(e));
        net.variance[e] = s2;
      }
    }
  }

  for (std::size_t e = 0; e < net.edge_count(); ++e) {
    if (std::isnan(net.nominal[e])) {
      throw MissingEdgeCost("no cost for edge " + net.edge_name(e));
    }
    if (std::isnan(net.variance[e])) {
      const double sigma = net.sigma_ratio * net.nominal[e];
      net.variance[e] = sigma * sigma;
    }
  }

  Demand demand;
  if (doc.contains("demand")) {
    const json& dm = doc.at("demand");
    if (!dm.is_object()) throw DocumentError("`demand` must map outlet ids to weights");
    std::vector<double> zeta(static_cast<std::size_t>(net.ks), 0.0);
    for (const auto& [id, value] : dm.items()) {
      const auto node = net.find_node(id);
      if (!node || node->layer != Layer::Outlet) {
        throw DocumentError("demand key `" + id + "` is not an outlet");
      }
      zeta[static_cast<std::size_t>(node->index)] = require_number(value, "demand weight");
    }
    demand = normalized_demand(std::move(zeta));
  } else {
    demand = uniform_demand(net.ks);
  }

  validate(net);
  return NetworkDocument{std::move(net), std::move(demand)};
}

NetworkDocument load_network_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DocumentError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network_json(buf.str());
}

std::string network_to_json(const Network& net, const Demand& demand) {
  json doc = json::object();
  const auto layer_json = [&](Layer layer, int count) {
    json arr = json::array();
    for (int i = 0; i < count; ++i) {
      const NodeId node{layer, i};
      json item = json::object();
      item["id"] = net.node_name(node);
      if (net.has_positions()) {
        const Vec2 p = net.positions[static_cast<std::size_t>(net.graph_index(node))];
        item["position"] = json::array({p.x, p.y});
      }
      arr.push_back(std::move(item));
    }
    return arr;
  };
  doc["factories"] = layer_json(Layer::Factory, net.kf);
  doc["warehouses"] = layer_json(Layer::Db, net.kw);
  doc["outlets"] = layer_json(Layer::Outlet, net.ks);

  const EdgeLayout lay = net.layout();
  const bool equal_production = [&] {
    for (int f = 1; f < net.kf; ++f) {
      if (net.nominal[lay.production(f)] != net.nominal[lay.production(0)]) return false;
    }
    return true;
  }();
  if (equal_production) {
    doc["production_cost"] = net.nominal[lay.production(0)];
  } else {
    json list = json::array();
    for (int f = 0; f < net.kf; ++f) list.push_back(net.nominal[lay.production(f)]);
    doc["production_cost"] = std::move(list);
  }
  doc["default_sigma2_ratio"] = net.sigma_ratio;

  // Emit explicit entries only where the compact fields cannot reproduce the
  // stored values: costs differing from the position-derived distance, or
  // variances differing from the ratio default.
  json edges = json::array();
  for (std::size_t e = 0; e < net.edge_count(); ++e) {
    const Edge edge = lay.at(e);
    double derived = std::numeric_limits<double>::quiet_NaN();
    if (edge.from.layer == Layer::Virtual) {
      derived = net.nominal[e];  // production costs are always explicit fields
    } else if (net.has_positions()) {
      derived = euclid(net.positions[static_cast<std::size_t>(net.graph_index(edge.from))],
                       net.positions[static_cast<std::size_t>(net.graph_index(edge.to))]);
    }
    const double sigma = net.sigma_ratio * net.nominal[e];
    const bool cost_ok = !std::isnan(derived) && derived == net.nominal[e];
    const bool var_ok = net.variance[e] == sigma * sigma;
    if (cost_ok && var_ok) continue;
    json item = json::object();
    item["from"] = net.node_name(edge.from);
    item["to"] = net.node_name(edge.to);
    item["cost"] = net.nominal[e];
    if (!var_ok) item["sigma2"] = net.variance[e];
    edges.push_back(std::move(item));
  }
  if (!edges.empty()) doc["edges"] = std::move(edges);

  json dm = json::object();
  for (int s = 0; s < net.ks; ++s) {
    dm[net.node_name(NodeId{Layer::Outlet, s})] = demand.zeta[static_cast<std::size_t>(s)];
  }
  doc["demand"] = std::move(dm);
  return doc.dump(2) + "\n";
}

void save_network_file(const std::filesystem::path& path, const Network& net,
                       const Demand& demand) {
  std::ofstream out(path);
  if (!out) throw DocumentError("cannot write " + path.string());
  out << network_to_json(net, demand);
}

PlanDocument parse_plan_json(std::string_view text, const Network& net) {
  const json doc = parse_text(text);
  if (!doc.is_object()) throw DocumentError("plan document must be an object");
  PlanDocument out;
  if (!doc.contains("alpha") || !doc.at("alpha").is_number()) {
    throw DocumentError("plan document needs a numeric `alpha`");
  }
  out.plan.alpha = doc.at("alpha").get<double>();
  out.solver = doc.value("solver", std::string{});
  out.iterations = doc.value("iterations", 0);
  out.marginal_error = doc.value("marginal_error", 0.0);

  const PathIndex idx(net);
  out.plan.p.assign(idx.path_count(), 0.0);
  if (!doc.contains("paths") || !doc.at("paths").is_array()) {
    throw DocumentError("plan document needs a `paths` list");
  }
  std::vector<bool> seen(idx.path_count(), false);
  for (const json& item : doc.at("paths")) {
    if (!item.is_object() || !item.contains("f") || !item.contains("w") ||
        !item.contains("s") || !item.contains("p")) {
      throw DocumentError("every path entry needs `f`, `w`, `s`, `p`");
    }
    const auto f = net.find_node(item.at("f").get<std::string>());
    const auto w = net.find_node(item.at("w").get<std::string>());
    const auto s = net.find_node(item.at("s").get<std::string>());
    if (!f || f->layer != Layer::Factory || !w || w->layer != Layer::Db || !s ||
        s->layer != Layer::Outlet) {
      throw DocumentError("path entry ids do not resolve to (factory, warehouse, outlet)");
    }
    const std::size_t id = idx.id_of(f->index, w->index, s->index);
    if (seen[id]) throw DocumentError("duplicate path entry " + net.node_name(*f) + "," +
                                      net.node_name(*w) + "," + net.node_name(*s));
    seen[id] = true;
    out.plan.p[id] = require_number(item.at("p"), "path probability");
  }
  return out;
}

PlanDocument load_plan_file(const std::filesystem::path& path, const Network& net) {
  std::ifstream in(path);
  if (!in) throw DocumentError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_plan_json(buf.str(), net);
}

std::string plan_to_json(const PlanDocument& doc, const Network& net) {
  json out = json::object();
  out["alpha"] = doc.plan.alpha;
  out["solver"] = doc.solver;
  out["iterations"] = doc.iterations;
  out["marginal_error"] = doc.marginal_error;
  json paths = json::array();
  const PathIndex idx(net);
  idx.for_each([&](std::size_t id, int f, int w, int s) {
    json item = json::object();
    item["f"] = net.node_name(NodeId{Layer::Factory, f});
    item["w"] = net.node_name(NodeId{Layer::Db, w});
    item["s"] = net.node_name(NodeId{Layer::Outlet, s});
    item["p"] = doc.plan.p[id];
    paths.push_back(std::move(item));
  });
  out["paths"] = std::move(paths);
  return out.dump(2) + "\n";
}

void save_plan_file(const std::filesystem::path& path, const PlanDocument& doc,
                    const Network& net) {
  std::ofstream out(path);
  if (!out) throw DocumentError("cannot write " + path.string());
  out << plan_to_json(doc, net);
}

}  // namespace logiplan
