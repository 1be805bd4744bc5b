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

#include "mpsim/dense_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "mpsim/errors.hpp"

namespace mpsim {
namespace {

void check_qubit(const DenseState& psi, int k) {
  if (k < 0 || k >= psi.n) {
    throw ValidationError("dense oracle: qubit index out of range");
  }
}

}  // namespace

DenseState DenseState::plus_state(int n) {
  if (n < 1 || n > kDenseLimit) {
    throw ValidationError("plus_state: qubit count out of range");
  }
  DenseState psi;
  psi.n = n;
  psi.amp.assign(std::size_t{1} << n, Complex(std::pow(0.5, n / 2.0), 0.0));
  return psi;
}

DenseState DenseState::basis_state(int n, std::uint64_t bits) {
  if (n < 1 || n > kDenseLimit) {
    throw ValidationError("basis_state: qubit count out of range");
  }
  DenseState psi;
  psi.n = n;
  psi.amp.assign(std::size_t{1} << n, Complex(0.0, 0.0));
  psi.amp[bits] = 1.0;
  return psi;
}

double DenseState::norm() const {
  double s = 0.0;
  for (const Complex& a : amp) {
    s += std::norm(a);
  }
  return std::sqrt(s);
}

void dense_apply_single_qubit(DenseState& psi, int k, const Matrix& u) {
  check_qubit(psi, k);
  const std::size_t bit = std::size_t{1} << k;
  for (std::size_t x = 0; x < psi.amp.size(); ++x) {
    if (x & bit) {
      continue;
    }
    const Complex a0 = psi.amp[x];
    const Complex a1 = psi.amp[x | bit];
    psi.amp[x] = u(0, 0) * a0 + u(0, 1) * a1;
    psi.amp[x | bit] = u(1, 0) * a0 + u(1, 1) * a1;
  }
}

void dense_cphase(DenseState& psi, int a, int b) {
  check_qubit(psi, a);
  check_qubit(psi, b);
  if (a == b) {
    throw ValidationError("dense_cphase: identical qubits");
  }
  const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
  for (std::size_t x = 0; x < psi.amp.size(); ++x) {
    if ((x & mask) == mask) {
      psi.amp[x] = -psi.amp[x];
    }
  }
}

std::pair<double, double> dense_probabilities(const DenseState& psi, int k) {
  check_qubit(psi, k);
  const std::size_t bit = std::size_t{1} << k;
  double p0 = 0.0;
  double p1 = 0.0;
  for (std::size_t x = 0; x < psi.amp.size(); ++x) {
    ((x & bit) ? p1 : p0) += std::norm(psi.amp[x]);
  }
  return {p0, p1};
}

DenseMeasurement dense_measure(const DenseState& psi, int k, int outcome) {
  const auto [p0, p1] = dense_probabilities(psi, k);
  const double p = outcome == 0 ? p0 : p1;
  if (p <= kEpsProb) {
    throw ValidationError("dense_measure: outcome probability below threshold");
  }
  DenseMeasurement m;
  m.p0 = p0;
  m.p1 = p1;
  m.post = psi;
  const std::size_t bit = std::size_t{1} << k;
  const double scale = 1.0 / std::sqrt(p);
  for (std::size_t x = 0; x < m.post.amp.size(); ++x) {
    const bool is_one = (x & bit) != 0;
    m.post.amp[x] = (is_one == (outcome == 1)) ? m.post.amp[x] * scale : Complex(0.0, 0.0);
  }
  return m;
}

DenseState dense_drop_qubit(const DenseState& psi, int k, int value) {
  check_qubit(psi, k);
  DenseState out;
  out.n = psi.n - 1;
  out.amp.resize(psi.amp.size() / 2);
  const std::size_t low_mask = (std::size_t{1} << k) - 1;
  for (std::size_t y = 0; y < out.amp.size(); ++y) {
    const std::size_t x = (y & low_mask) | ((y & ~low_mask) << 1) |
                          (static_cast<std::size_t>(value) << k);
    out.amp[y] = psi.amp[x];
  }
  return out;
}

std::vector<double> dense_schmidt_spectrum(const DenseState& psi, int k) {
  if (k < 1 || k >= psi.n) {
    throw ValidationError("dense_schmidt_spectrum: cut out of range");
  }
  const std::size_t rows = std::size_t{1} << k;          // left block
  const std::size_t cols = std::size_t{1} << (psi.n - k);  // right block
  // Gram matrix on the smaller side; both give the same nonzero spectrum.
  const bool left_smaller = rows <= cols;
  const std::size_t dim = left_smaller ? rows : cols;
  Matrix gram = Matrix::Zero(dim, dim);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const Complex a = psi.amp[r | (c << k)];
      if (left_smaller) {
        for (std::size_t rp = 0; rp <= r; ++rp) {
          gram(r, rp) += a * std::conj(psi.amp[rp | (c << k)]);
        }
      } else {
        for (std::size_t cp = 0; cp <= c; ++cp) {
          gram(c, cp) += a * std::conj(psi.amp[r | (cp << k)]);
        }
      }
    }
  }
  gram = Matrix(gram.selfadjointView<Eigen::Lower>());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
  std::vector<double> spectrum(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    spectrum[i] = std::sqrt(std::max(solver.eigenvalues()(dim - 1 - i), 0.0));
  }
  return spectrum;
}

namespace {

void enumerate_recursive(const DenseState& psi, const MeasurementPattern& pattern,
                         const std::map<std::string, int>& qubit_of, std::size_t step_idx,
                         std::map<std::string, int>& outcomes, std::string& prefix, double prob,
                         std::map<std::string, double>& result) {
  if (step_idx == pattern.steps.size()) {
    result[prefix] = prob;
    return;
  }
  const MeasurementStep& step = pattern.steps[step_idx];
  DenseState branch = psi;
  dense_apply_single_qubit(branch, qubit_of.at(step.target), resolve_basis(step, outcomes));
  const auto [p0, p1] = dense_probabilities(branch, qubit_of.at(step.target));
  for (int outcome = 0; outcome < 2; ++outcome) {
    const double p = outcome == 0 ? p0 : p1;
    if (p <= kEpsProb) {
      continue;
    }
    DenseMeasurement m = dense_measure(branch, qubit_of.at(step.target), outcome);
    outcomes[step.target] = outcome;
    prefix.push_back(outcome == 0 ? '0' : '1');
    enumerate_recursive(m.post, pattern, qubit_of, step_idx + 1, outcomes, prefix, prob * p, result);
    prefix.pop_back();
    outcomes.erase(step.target);
  }
}

}  // namespace

std::map<std::string, double> dense_enumerate_branches(const DenseState& psi,
                                                       const MeasurementPattern& pattern,
                                                       const std::vector<std::string>& labels) {
  if (static_cast<int>(labels.size()) != psi.n) {
    throw ValidationError("dense_enumerate_branches: label count mismatch");
  }
  std::map<std::string, int> qubit_of;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    qubit_of[labels[i]] = static_cast<int>(i);
  }
  for (const MeasurementStep& step : pattern.steps) {
    if (qubit_of.find(step.target) == qubit_of.end()) {
      throw ValidationError("dense_enumerate_branches: unknown target " + step.target);
    }
  }
  std::map<std::string, double> result;
  std::map<std::string, int> outcomes;
  std::string prefix;
  enumerate_recursive(psi, pattern, qubit_of, 0, outcomes, prefix, 1.0, result);
  return result;
}

}  // namespace mpsim
