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

#include "mpsim/spectral.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <string>

#include "mpsim/errors.hpp"

namespace mpsim {
namespace {

std::atomic<std::uint64_t> g_eig_calls{0};

}  // namespace

std::uint64_t eig_call_count() { return g_eig_calls.load(); }

SchmidtFactors schmidt_from_density(const Matrix& rho) {
  g_eig_calls.fetch_add(1, std::memory_order_relaxed);
  const Eigen::Index dim = rho.rows();
  if (dim == 0 || rho.cols() != dim) {
    throw InternalError("schmidt_from_density: malformed density matrix");
  }
  Matrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
  if (solver.info() != Eigen::Success) {
    throw InternalError("schmidt_from_density: eigensolver failed");
  }
  const RealVector& evals = solver.eigenvalues();  // ascending
  const double trace = herm.trace().real();
  const double noise_floor =
      64.0 * static_cast<double>(dim) * std::numeric_limits<double>::epsilon() * std::max(trace, 0.0);
  const double floor = std::max(kEpsTrunc * kEpsTrunc, noise_floor);

  Eigen::Index kept = 0;
  for (Eigen::Index i = dim - 1; i >= 0; --i) {
    const double ev = evals(i);
    if (ev < -kNegEigTol) {
      throw InternalError("schmidt_from_density: eigenvalue " + std::to_string(ev) +
                          " below negativity tolerance");
    }
    if (ev > floor && std::sqrt(ev) > kEpsTrunc) {
      ++kept;
    } else {
      break;  // eigenvalues are sorted, the rest are smaller
    }
  }
  if (kept == 0) {
    throw InternalError("schmidt_from_density: no Schmidt coefficient above threshold");
  }

  SchmidtFactors out;
  out.lambda.resize(kept);
  out.basis_rows.resize(kept, dim);
  for (Eigen::Index j = 0; j < kept; ++j) {
    const Eigen::Index src = dim - 1 - j;  // descending order
    out.lambda(j) = std::sqrt(std::max(evals(src), 0.0));
    out.basis_rows.row(j) = solver.eigenvectors().col(src).transpose();
  }
  return out;
}

}  // namespace mpsim
