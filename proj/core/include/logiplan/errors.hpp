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

#include <stdexcept>

namespace logiplan {

// Invalid inputs or violated contracts. The CLI maps these to exit code 2.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iterative methods that ran out of budget. The CLI maps these to exit code 3.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// network model
struct MissingEdgeCost final : ValidationError { using ValidationError::ValidationError; };
struct NegativeVariance final : ValidationError { using ValidationError::ValidationError; };
struct DemandNotNormalized final : ValidationError { using ValidationError::ValidationError; };
struct EmptyLayer final : ValidationError { using ValidationError::ValidationError; };
// Malformed document plumbing: bad JSON, unknown ids, inadmissible edges.
struct DocumentError final : ValidationError { using ValidationError::ValidationError; };

// planner
struct NonPositiveAlpha final : ValidationError { using ValidationError::ValidationError; };
struct ZeroMatrix final : ValidationError { using ValidationError::ValidationError; };
struct NonAdjacentStep final : ValidationError { using ValidationError::ValidationError; };
struct ZeroPriorMass final : ValidationError { using ValidationError::ValidationError; };
struct NotConverged final : ConvergenceError { using ConvergenceError::ConvergenceError; };

// resilience
struct DomainMismatch final : ValidationError { using ValidationError::ValidationError; };
struct NegativeEpsilon final : ValidationError { using ValidationError::ValidationError; };
struct ZeroVarianceMass final : ValidationError { using ValidationError::ValidationError; };
struct UnknownEdge final : ValidationError { using ValidationError::ValidationError; };

// oracles
struct QuadratureFailure final : ConvergenceError { using ConvergenceError::ConvergenceError; };
struct TooLarge final : ValidationError { using ValidationError::ValidationError; };

}  // namespace logiplan
