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

#include <cstdint>

#include "mpsim/types.hpp"

namespace mpsim {

/// One Schmidt factorisation extracted from a reduced density matrix.
struct SchmidtFactors {
  /// Retained Schmidt coefficients (square roots of the eigenvalues),
  /// strictly positive and descending.
  RealVector lambda;
  /// Retained eigenvectors as rows: basis_rows(j, old_index) expresses the
  /// j-th new Schmidt vector in the old basis.
  Matrix basis_rows;
};

/// Eigendecomposition of a Hermitian PSD reduced density matrix with pruning.
///
/// Eigenvalues in [-kNegEigTol, 0) are clamped to zero; anything below
/// -kNegEigTol throws InternalError. Directions are dropped when their
/// coefficient is at or below kEpsTrunc, or when the eigenvalue sits under
/// the solver noise floor (a multiple of dim * machine-epsilon * trace) and
/// is therefore indistinguishable from an exact zero.
SchmidtFactors schmidt_from_density(const Matrix& rho);

/// Number of schmidt_from_density calls since process start. The update cost
/// of a simulation is proportional to this count, which gives the scaling
/// tests a noise-free proxy for wall time.
std::uint64_t eig_call_count();

}  // namespace mpsim
