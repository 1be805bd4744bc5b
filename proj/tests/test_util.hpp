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

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "mpsim/dense_state.hpp"
#include "mpsim/mps_state.hpp"
#include "mpsim/types.hpp"

namespace mpsim::testing {

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      m(r, c) = Complex(dist(rng), dist(rng));
    }
  }
  return m;
}

/// Haar-ish random unitary from the QR decomposition of a Gaussian matrix.
inline Matrix random_unitary(std::mt19937_64& rng, Eigen::Index dim) {
  const Matrix g = random_matrix(rng, dim, dim);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Complex d = r(i, i);
    q.col(i) *= d / std::abs(d);
  }
  return q;
}

inline DenseState random_state(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  DenseState psi;
  psi.n = n;
  psi.amp.resize(std::size_t{1} << n);
  double norm2 = 0.0;
  for (Complex& a : psi.amp) {
    a = Complex(dist(rng), dist(rng));
    norm2 += std::norm(a);
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (Complex& a : psi.amp) {
    a *= scale;
  }
  return psi;
}

/// max_x |a_x - phase * b_x| minimized over the global phase.
inline double dist_up_to_phase(const DenseState& a, const DenseState& b) {
  if (a.amp.size() != b.amp.size()) {
    return 1e300;
  }
  Complex overlap = 0.0;
  for (std::size_t x = 0; x < a.amp.size(); ++x) {
    overlap += std::conj(b.amp[x]) * a.amp[x];
  }
  const double mag = std::abs(overlap);
  const Complex phase = mag > 1e-300 ? overlap / mag : Complex(1.0, 0.0);
  double dev = 0.0;
  for (std::size_t x = 0; x < a.amp.size(); ++x) {
    dev = std::max(dev, std::abs(a.amp[x] - phase * b.amp[x]));
  }
  return dev;
}

inline double fidelity(const DenseState& a, const DenseState& b) {
  Complex overlap = 0.0;
  for (std::size_t x = 0; x < a.amp.size(); ++x) {
    overlap += std::conj(b.amp[x]) * a.amp[x];
  }
  return std::norm(overlap);
}

/// Compares a pruned MPS spectrum against a full dense spectrum (zeros
/// included); returns the largest elementwise deviation.
inline double spectrum_deviation(const RealVector& lambda, const std::vector<double>& dense) {
  double dev = 0.0;
  const std::size_t n = std::max(dense.size(), static_cast<std::size_t>(lambda.size()));
  for (std::size_t i = 0; i < n; ++i) {
    const double a = i < static_cast<std::size_t>(lambda.size())
                         ? lambda(static_cast<Eigen::Index>(i))
                         : 0.0;
    const double b = i < dense.size() ? dense[i] : 0.0;
    dev = std::max(dev, std::abs(a - b));
  }
  return dev;
}

/// Largest deviation between the MPS bond spectra and the dense Schmidt
/// spectra, over all cuts.
inline double all_bond_spectra_deviation(const MpsState& state, const DenseState& psi);

}  // namespace mpsim::testing

#include "mpsim/dense_oracle.hpp"

namespace mpsim::testing {

inline double all_bond_spectra_deviation(const MpsState& state, const DenseState& psi) {
  double dev = 0.0;
  for (int cut = 1; cut < state.num_sites(); ++cut) {
    dev = std::max(dev, spectrum_deviation(state.bond(cut - 1).lambda,
                                           dense_schmidt_spectrum(psi, cut)));
  }
  return dev;
}

}  // namespace mpsim::testing
