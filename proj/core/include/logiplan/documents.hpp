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

#include <filesystem>
#include <string>
#include <string_view>

#include "logiplan/network.hpp"
#include "logiplan/planner.hpp"

// JSON document ingestion and emission. Network documents carry `factories`,
// `warehouses`, `outlets` (lists of {id, position?}), `production_cost`
// (scalar, per-factory list, or id map), optional explicit `edges`
// ({from, to, cost, sigma2?}, overriding position-derived costs),
// `default_sigma2_ratio`, and `demand` (outlet id -> weight; uniform when
// absent). Emission is deterministic: parse(emit(x)) is byte-stable.

namespace logiplan {

struct NetworkDocument {
  Network network;
  Demand demand;
};

// Parses and fully validates a network document.
// Throws DocumentError for malformed input and the specific validation
// errors (MissingEdgeCost, NegativeVariance, DemandNotNormalized, EmptyLayer)
// for contract violations.
NetworkDocument parse_network_json(std::string_view text);
NetworkDocument load_network_file(const std::filesystem::path& path);

std::string network_to_json(const Network& net, const Demand& demand);
void save_network_file(const std::filesystem::path& path, const Network& net,
                       const Demand& demand);

// Plan documents map path triples to probabilities and record how the plan
// was produced.
struct PlanDocument {
  Plan plan;
  std::string solver;  // "gibbs" or "bridge"
  int iterations = 0;
  double marginal_error = 0.0;
};

// The network provides node names and the path enumeration; a plan document
// whose ids do not resolve against it is rejected with DocumentError.
// Probabilities are not checked here so that verification tooling can load
// and then diagnose infeasible plans.
PlanDocument parse_plan_json(std::string_view text, const Network& net);
PlanDocument load_plan_file(const std::filesystem::path& path, const Network& net);

std::string plan_to_json(const PlanDocument& doc, const Network& net);
void save_plan_file(const std::filesystem::path& path, const PlanDocument& doc,
                    const Network& net);

}  // namespace logiplan
