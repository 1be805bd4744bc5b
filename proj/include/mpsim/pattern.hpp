// Copyright 2026 The mpsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mpsim/types.hpp"

namespace mpsim {

enum class BasisKind {
  computational,  // measure in {|0>, |1>}
  rotated_xy,     // measure in {|0> + e^{i theta}|1>, |0> - e^{i theta}|1>}/sqrt(2)
  fixed_unitary,  // basis given as an explicit 2x2 unitary
};

/// Basis choice for one step. For rotated_xy the resolved angle is
/// s * theta0 + parity * pi, where s = -1 iff the XOR of the sign_deps
/// outcomes is 1 and parity is the XOR of the pi_deps outcomes.
struct MeasurementBasis {
  BasisKind kind = BasisKind::computational;
  double theta0 = 0.0;
  std::vector<std::string> sign_deps;
  std::vector<std::string> pi_deps;
  Matrix fixed;  // only for fixed_unitary
};

struct MeasurementStep {
  std::string target;
  MeasurementBasis basis;
};

/// Outcome-conditioned Pauli applied to an output qubit after all
/// measurements. Applies when the XOR of the dep outcomes is 1 (0 when
/// negate is set, so negate with empty deps means "always").
struct Correction {
  std::string target;
  char op = 'X';  // 'X', 'Y' or 'Z'
  std::vector<std::string> deps;
  bool negate = false;
};

struct MeasurementPattern {
  std::vector<MeasurementStep> steps;
  std::vector<std::string> outputs;
  std::vector<Correction> corrections;

  /// Structural checks: unique targets, outputs never measured, every
  /// feed-forward reference points at a strictly earlier step.
  void validate() const;

  static MeasurementPattern from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// The 2x2 unitary U such that measuring in the step's basis is the same as
/// applying U and measuring in the computational basis (outcome 0 maps to
/// the first basis vector). Deterministic in (step, outcomes).
Matrix resolve_basis(const MeasurementStep& step, const std::map<std::string, int>& outcomes);

/// Convenience builder: measure `targets` in the X basis (theta = 0), in the
/// given order, everything else left as declared outputs.
MeasurementPattern x_basis_pattern(const std::vector<std::string>& targets,
                                   const std::vector<std::string>& outputs);

}  // namespace mpsim
