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

#include <complex>

#include <Eigen/Dense>

namespace mpsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Schmidt coefficients at or below this value are dropped together with the
/// corresponding basis columns.
inline constexpr double kEpsTrunc = 1e-12;

/// Projecting onto an outcome whose probability is at or below this value is
/// rejected, and sampling never selects such an outcome.
inline constexpr double kEpsProb = 1e-12;

/// Density-matrix eigenvalues in [-kNegEigTol, 0) are clamped to zero; values
/// below -kNegEigTol indicate a broken invariant.
inline constexpr double kNegEigTol = 1e-12;

/// Largest qubit count accepted by dense conversions and dense cross-checks.
inline constexpr int kDenseLimit = 20;

}  // namespace mpsim
