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

#include "mpsim/mps_state.hpp"

#include <cmath>
#include <string>

#include "mpsim/errors.hpp"
#include "mpsim/kernels.hpp"
#include "mpsim/spectral.hpp"

namespace mpsim {
namespace {

constexpr double kUnitaryTol = 1e-10;
constexpr double kStructureTol = 1e-8;

void check_unitary_2x2(const Matrix& u) {
  if (u.rows() != 2 || u.cols() != 2) {
    throw ValidationError("single-qubit gate must be 2x2");
  }
  if (((u.adjoint() * u) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() > kUnitaryTol) {
    throw ValidationError("single-qubit gate is not unitary");
  }
}

std::vector<std::string> default_labels(int n) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    labels.push_back("q" + std::to_string(i));
  }
  return labels;
}

}  // namespace

int sample_outcome(double p0, double p1, double u) {
  if (p0 <= kEpsProb) {
    return 1;
  }
  if (p1 <= kEpsProb) {
    return 0;
  }
  return u < p0 / (p0 + p1) ? 0 : 1;
}

MpsState::MpsState(std::vector<SiteTensor> sites, std::vector<BondVector> bonds,
                   std::vector<std::string> labels)
    : sites_(std::move(sites)), bonds_(std::move(bonds)), labels_(std::move(labels)) {
  if (!sites_.empty() && bonds_.size() + 1 != sites_.size()) {
    throw InternalError("MpsState: bond count must be site count - 1");
  }
  if (labels_.size() != sites_.size()) {
    throw InternalError("MpsState: label count must match site count");
  }
}

MpsState MpsState::plus_product(int n) { return plus_product(default_labels(n)); }

MpsState MpsState::plus_product(std::vector<std::string> labels) {
  const int n = static_cast<int>(labels.size());
  if (n < 1) {
    throw ValidationError("plus_product: need at least one site");
  }
  std::vector<SiteTensor> sites(static_cast<std::size_t>(n));
  std::vector<BondVector> bonds(static_cast<std::size_t>(n - 1));
  const double amp = 1.0 / std::sqrt(2.0);
  for (auto& site : sites) {
    site.gamma[0] = Matrix::Constant(1, 1, amp);
    site.gamma[1] = Matrix::Constant(1, 1, amp);
  }
  for (auto& bond : bonds) {
    bond.lambda = RealVector::Ones(1);
  }
  return MpsState(std::move(sites), std::move(bonds), std::move(labels));
}

int MpsState::site_of_label(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

MpsState MpsState::from_dense(const DenseState& psi) {
  return from_dense(psi, default_labels(psi.n));
}

MpsState MpsState::from_dense(const DenseState& psi, std::vector<std::string> labels) {
  const int n = psi.n;
  if (n < 1) {
    throw ValidationError("from_dense: empty state");
  }
  if (n > kDenseLimit) {
    throw ValidationError("from_dense: more than " + std::to_string(kDenseLimit) + " qubits");
  }
  if (psi.amp.size() != (std::size_t{1} << n)) {
    throw ValidationError("from_dense: amplitude count is not 2^n");
  }
  if (std::abs(psi.norm() - 1.0) > 1e-8) {
    throw ValidationError("from_dense: state is not normalized");
  }
  if (static_cast<int>(labels.size()) != n) {
    throw ValidationError("from_dense: label count mismatch");
  }

  std::vector<SiteTensor> sites(static_cast<std::size_t>(n));
  std::vector<BondVector> bonds;
  bonds.reserve(static_cast<std::size_t>(n - 1));

  // Remainder matrix: rows index the current bond basis, columns enumerate
  // the not-yet-split qubits with qubit k as the lowest bit.
  Matrix w(1, std::size_t{1} << n);
  for (std::size_t x = 0; x < psi.amp.size(); ++x) {
    w(0, static_cast<Eigen::Index>(x)) = psi.amp[x];
  }
  RealVector lambda_prev;  // empty means boundary

  for (int k = 0; k < n; ++k) {
    const Eigen::Index chi = w.rows();
    const Eigen::Index half = w.cols() / 2;
    // Row block i holds the physical value of qubit k.
    Matrix w_hat(2 * chi, half);
    for (Eigen::Index c = 0; c < half; ++c) {
      for (Eigen::Index r = 0; r < chi; ++r) {
        w_hat(r, c) = w(r, 2 * c);
        w_hat(chi + r, c) = w(r, 2 * c + 1);
      }
    }
    const RealVector* inv_prev_ptr = nullptr;
    RealVector inv_prev;
    if (lambda_prev.size() > 0) {
      inv_prev = lambda_prev.cwiseInverse();
      inv_prev_ptr = &inv_prev;
    }

    if (k == n - 1) {
      for (int i = 0; i < 2; ++i) {
        sites[static_cast<std::size_t>(k)].gamma[i] =
            kernels::scale_lr(w_hat.block(i * chi, 0, chi, 1), inv_prev_ptr, nullptr);
      }
      break;
    }

    // Split via the smaller-side Gram matrix.
    Matrix u;  // 2chi x rank, columns are the new left Schmidt vectors
    RealVector lam;
    if (2 * chi <= half) {
      SchmidtFactors f = schmidt_from_density(kernels::gram_cols(w_hat));
      lam = f.lambda;
      u = f.basis_rows.transpose();
      w = kernels::matmul_ca(f.basis_rows, w_hat);
    } else {
      SchmidtFactors f = schmidt_from_density(kernels::gram_rows(w_hat));
      lam = f.lambda;
      RealVector inv = lam.cwiseInverse();
      u = kernels::scale_lr(kernels::matmul_ct(w_hat, f.basis_rows), nullptr, &inv);
      w = kernels::scale_lr(f.basis_rows, &lam, nullptr);
    }
    const Eigen::Index rank = lam.size();
    for (int i = 0; i < 2; ++i) {
      sites[static_cast<std::size_t>(k)].gamma[i] =
          kernels::scale_lr(u.block(i * chi, 0, chi, rank), inv_prev_ptr, nullptr);
    }
    bonds.push_back(BondVector{lam});
    lambda_prev = lam;
  }

  MpsState state(std::move(sites), std::move(bonds), std::move(labels));
  state.validate_structure();
  return state;
}

DenseState MpsState::to_dense() const {
  const int n = num_sites();
  if (n == 0) {
    DenseState out;
    out.n = 0;
    out.amp = {Complex(1.0, 0.0)};
    return out;
  }
  if (n > kDenseLimit) {
    throw ValidationError("to_dense: more than " + std::to_string(kDenseLimit) + " qubits");
  }
  Matrix t = Matrix::Ones(1, 1);
  for (int k = 0; k < n; ++k) {
    const RealVector* prev = k > 0 ? &bond(k - 1).lambda : nullptr;
    const Eigen::Index rows = t.rows();
    Matrix next(2 * rows, site(k).chi_right());
    for (int i = 0; i < 2; ++i) {
      const Matrix scaled = kernels::scale_lr(site(k).gamma[i], prev, nullptr);
      next.block(i == 0 ? 0 : rows, 0, rows, next.cols()) = kernels::matmul(t, scaled);
    }
    t = std::move(next);
  }
  DenseState out;
  out.n = n;
  out.amp.resize(std::size_t{1} << n);
  for (std::size_t x = 0; x < out.amp.size(); ++x) {
    out.amp[x] = t(static_cast<Eigen::Index>(x), 0);
  }
  return out;
}

void MpsState::apply_single_qubit(int k, const Matrix& u) {
  if (k < 0 || k >= num_sites()) {
    throw ValidationError("apply_single_qubit: site out of range");
  }
  check_unitary_2x2(u);
  SiteTensor& s = sites_[static_cast<std::size_t>(k)];
  Matrix g0 = u(0, 0) * s.gamma[0] + u(0, 1) * s.gamma[1];
  Matrix g1 = u(1, 0) * s.gamma[0] + u(1, 1) * s.gamma[1];
  s.gamma[0] = std::move(g0);
  s.gamma[1] = std::move(g1);
}

std::pair<double, double> MpsState::outcome_probabilities(int k) const {
  if (k < 0 || k >= num_sites()) {
    throw ValidationError("outcome_probabilities: site out of range");
  }
  const RealVector* left = k > 0 ? &bond(k - 1).lambda : nullptr;
  const RealVector* right = k < num_sites() - 1 ? &bond(k).lambda : nullptr;
  const double p0 = kernels::abs2_sum(kernels::scale_lr(site(k).gamma[0], left, right));
  const double p1 = kernels::abs2_sum(kernels::scale_lr(site(k).gamma[1], left, right));
  return {p0, p1};
}

MpsState::MeasureResult MpsState::measure(int k, RandomStream& rng) const {
  const auto [p0, p1] = outcome_probabilities(k);
  const double u = rng.next_uniform();  // exactly one draw, even when forced
  MeasureResult result;
  result.outcome = sample_outcome(p0, p1, u);
  result.p0 = p0;
  result.p1 = p1;
  result.post = project_and_update(k, result.outcome);
  return result;
}

ChiProfile MpsState::chi_profile() const {
  ChiProfile profile;
  profile.per_bond.reserve(bonds_.size());
  for (const BondVector& b : bonds_) {
    profile.per_bond.push_back(b.chi());
    profile.max_chi = std::max(profile.max_chi, b.chi());
  }
  return profile;
}

bool MpsState::check_canonical(double tol) const {
  const int n = num_sites();
  for (const BondVector& b : bonds_) {
    if (b.chi() == 0) {
      return false;
    }
    double sum = 0.0;
    for (int i = 0; i < b.chi(); ++i) {
      const double v = b.lambda(i);
      if (!(v > 0.0) || (i > 0 && v > b.lambda(i - 1))) {
        return false;
      }
      sum += v * v;
    }
    if (std::abs(sum - 1.0) > tol) {
      return false;
    }
  }
  // Left Gram recursion: identity at every bond iff the left Schmidt-vector
  // families are orthonormal; the final 1x1 value is the squared norm.
  Matrix g = Matrix::Ones(1, 1);
  for (int k = 0; k < n; ++k) {
    const RealVector* prev = k > 0 ? &bond(k - 1).lambda : nullptr;
    const Matrix mid = kernels::scale_lr(g, prev, prev);
    Matrix next = Matrix::Zero(site(k).chi_right(), site(k).chi_right());
    for (int i = 0; i < 2; ++i) {
      next += kernels::matmul_ah(site(k).gamma[i], kernels::matmul(mid, site(k).gamma[i]));
    }
    const Matrix eye = Matrix::Identity(next.rows(), next.cols());
    if (k < n - 1 && (next - eye).cwiseAbs().maxCoeff() > tol) {
      return false;
    }
    if (k == n - 1 && std::abs(next(0, 0) - Complex(1.0, 0.0)) > tol) {
      return false;
    }
    g = std::move(next);
  }
  // Right Gram recursion, mirror image.
  Matrix h = Matrix::Ones(1, 1);
  for (int k = n - 1; k >= 0; --k) {
    const RealVector* nxt = k < n - 1 ? &bond(k).lambda : nullptr;
    const Matrix mid = kernels::scale_lr(h, nxt, nxt);
    Matrix prev = Matrix::Zero(site(k).chi_left(), site(k).chi_left());
    for (int i = 0; i < 2; ++i) {
      prev += kernels::matmul_ct(kernels::matmul(site(k).gamma[i], mid), site(k).gamma[i]);
    }
    const Matrix eye = Matrix::Identity(prev.rows(), prev.cols());
    if (k > 0 && (prev - eye).cwiseAbs().maxCoeff() > tol) {
      return false;
    }
    if (k == 0 && std::abs(prev(0, 0) - Complex(1.0, 0.0)) > tol) {
      return false;
    }
    h = std::move(prev);
  }
  return true;
}

std::size_t MpsState::parameter_count() const {
  std::size_t count = 0;
  for (const SiteTensor& s : sites_) {
    count += 2 * static_cast<std::size_t>(s.chi_left()) * static_cast<std::size_t>(s.chi_right());
  }
  for (const BondVector& b : bonds_) {
    count += static_cast<std::size_t>(b.chi());
  }
  return count;
}

void MpsState::validate_structure() const {
  const int n = num_sites();
  for (int k = 0; k < n; ++k) {
    const SiteTensor& s = site(k);
    if (s.gamma[0].rows() != s.gamma[1].rows() || s.gamma[0].cols() != s.gamma[1].cols()) {
      throw InternalError("site " + std::to_string(k) + ": mismatched physical blocks");
    }
    if (!s.gamma[0].allFinite() || !s.gamma[1].allFinite()) {
      throw InternalError("site " + std::to_string(k) + ": non-finite entries");
    }
    const int expected_left = k == 0 ? 1 : bond(k - 1).chi();
    const int expected_right = k == n - 1 ? 1 : bond(k).chi();
    if (s.chi_left() != expected_left || s.chi_right() != expected_right) {
      throw InternalError("site " + std::to_string(k) + ": bond dimension chain broken");
    }
  }
  for (int k = 0; k + 1 < n; ++k) {
    const BondVector& b = bond(k);
    double sum = 0.0;
    for (int i = 0; i < b.chi(); ++i) {
      const double v = b.lambda(i);
      if (!(v > kEpsTrunc) || (i > 0 && v > b.lambda(i - 1))) {
        throw InternalError("bond " + std::to_string(k) + ": lambda not positive descending");
      }
      sum += v * v;
    }
    if (std::abs(sum - 1.0) > kStructureTol) {
      throw InternalError("bond " + std::to_string(k) + ": lambda normalisation drift " +
                          std::to_string(sum - 1.0));
    }
  }
}

}  // namespace mpsim
