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

#include "mpsim/dense_state.hpp"
#include "mpsim/pattern.hpp"

namespace mpsim {

// Ground truth for every tensor-network operation at n <= kDenseLimit.
// Deliberately plain serial code; nothing here routes through the kernels.

void dense_apply_single_qubit(DenseState& psi, int k, const Matrix& u);
void dense_cphase(DenseState& psi, int a, int b);

struct DenseMeasurement {
  double p0 = 0.0;
  double p1 = 0.0;
  DenseState post;  // normalized projection, qubit kept in place
};

std::pair<double, double> dense_probabilities(const DenseState& psi, int k);
DenseMeasurement dense_measure(const DenseState& psi, int k, int outcome);

/// Drops qubit k, keeping the amplitudes where it equals `value` (the state
/// must already be projected, i.e. the discarded half must carry no weight).
DenseState dense_drop_qubit(const DenseState& psi, int k, int value);

/// Schmidt coefficients across the cut {qubits 0..k-1 | k..n-1}, descending,
/// zeros included (square roots of the reduced-density eigenvalues).
std::vector<double> dense_schmidt_spectrum(const DenseState& psi, int k);

/// Exhaustive measurement tree of a pattern: outcome string ('0'/'1' per
/// step, in step order) -> branch probability. `labels[i]` names qubit i.
/// Corrections do not affect probabilities and are ignored here.
std::map<std::string, double> dense_enumerate_branches(const DenseState& psi,
                                                       const MeasurementPattern& pattern,
                                                       const std::vector<std::string>& labels);

}  // namespace mpsim
