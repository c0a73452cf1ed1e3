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

#include <cstdint>

#include "logiplan/network.hpp"

namespace logiplan {

// Random instance with node positions uniform in [0,box]^2, transport costs
// equal to Euclidean distances, one shared production cost, and variances
// sigma_e^2 = (sigma_ratio * A_e)^2. Bit-deterministic for a fixed seed,
// including across platforms (no std::*_distribution involved).
Network generate_random_network(int kf, int kw, int ks, std::uint64_t seed,
                                double box = 10.0, double production_cost = 1.0,
                                double sigma_ratio = 0.1);

}  // namespace logiplan
