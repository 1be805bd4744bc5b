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

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "mpsim/errors.hpp"
#include "mpsim/kernels.hpp"
#include "mpsim/mps_state.hpp"
#include "mpsim/spectral.hpp"

namespace mpsim {
namespace detail {

// Post-measurement re-canonicalization. The measured cut leaves the state as
// sum_{g,a} A(g,a) |L_g>|R_a> over the old orthonormal Schmidt vectors. One
// eigendecomposition of the cut's reduced density matrix yields the new
// spectrum and the rotation from old to new Schmidt vectors; sweeping that
// rotation outward, one reduced density matrix per bond, rebuilds every
// tensor. Bond dimensions can only shrink: each new density matrix lives in
// the old bond basis.

RightRebuild rebuild_right(const MpsState& src, int first, const Matrix& a) {
  const int n = src.num_sites();
  RightRebuild out;
  {
    SchmidtFactors f = schmidt_from_density(kernels::gram_rows(a));
    out.cut_lambda = f.lambda;
    out.cut_basis_rows = std::move(f.basis_rows);
  }
  if (first >= n) {
    throw InternalError("rebuild_right: no sites to rebuild");
  }
  out.sites.reserve(static_cast<std::size_t>(n - first));
  Matrix m = out.cut_basis_rows;
  RealVector lam = out.cut_lambda;
  for (int k = first; k < n; ++k) {
    std::array<Matrix, 2> c;
    for (int i = 0; i < 2; ++i) {
      c[i] = kernels::matmul(m, src.site(k).gamma[i]);
      if (k < n - 1) {
        c[i] = kernels::scale_lr(c[i], nullptr, &src.bond(k).lambda);
      }
    }
    SiteTensor rebuilt;
    if (k < n - 1) {
      Matrix rho = kernels::gram_rows(kernels::scale_lr(c[0], &lam, nullptr)) +
                   kernels::gram_rows(kernels::scale_lr(c[1], &lam, nullptr));
      SchmidtFactors f = schmidt_from_density(rho);
      const RealVector inv = f.lambda.cwiseInverse();
      for (int i = 0; i < 2; ++i) {
        rebuilt.gamma[i] = kernels::scale_lr(kernels::matmul_ct(c[i], f.basis_rows), nullptr, &inv);
      }
      out.bonds.push_back(BondVector{f.lambda});
      m = std::move(f.basis_rows);
      lam = f.lambda;
    } else {
      rebuilt.gamma = std::move(c);
    }
    out.sites.push_back(std::move(rebuilt));
  }
  return out;
}

LeftRebuild rebuild_left(const MpsState& src, int last, const Matrix& n_rows,
                         const RealVector& cut_lambda) {
  LeftRebuild out;
  out.sites.reserve(static_cast<std::size_t>(last + 1));
  Matrix m = n_rows;
  RealVector lam = cut_lambda;
  for (int k = last; k >= 0; --k) {
    std::array<Matrix, 2> c;
    for (int i = 0; i < 2; ++i) {
      c[i] = kernels::matmul_tr(src.site(k).gamma[i], m);
      if (k > 0) {
        c[i] = kernels::scale_lr(c[i], &src.bond(k - 1).lambda, nullptr);
      }
    }
    SiteTensor rebuilt;
    if (k > 0) {
      Matrix rho = kernels::gram_cols(kernels::scale_lr(c[0], nullptr, &lam)) +
                   kernels::gram_cols(kernels::scale_lr(c[1], nullptr, &lam));
      SchmidtFactors f = schmidt_from_density(rho);
      const RealVector inv = f.lambda.cwiseInverse();
      for (int i = 0; i < 2; ++i) {
        rebuilt.gamma[i] = kernels::scale_lr(kernels::matmul_ca(f.basis_rows, c[i]), &inv, nullptr);
      }
      out.bonds.push_back(BondVector{f.lambda});
      m = std::move(f.basis_rows);
      lam = f.lambda;
    } else {
      rebuilt.gamma = std::move(c);
    }
    out.sites.push_back(std::move(rebuilt));
  }
  std::reverse(out.sites.begin(), out.sites.end());
  std::reverse(out.bonds.begin(), out.bonds.end());
  return out;
}

MpsState collapse_prefix(const MpsState& src, int measured_count, const Matrix& boundary_row) {
  const int n = src.num_sites();
  if (measured_count == 0) {
    return src;
  }
  if (measured_count >= n) {
    return MpsState({}, {}, {});
  }
  RightRebuild rr = rebuild_right(src, measured_count, boundary_row);
  if (rr.cut_lambda.size() != 1) {
    throw InternalError("collapse_prefix: boundary vector produced a rank-" +
                        std::to_string(rr.cut_lambda.size()) + " cut");
  }
  std::vector<std::string> labels(src.labels().begin() + measured_count, src.labels().end());
  MpsState out(std::move(rr.sites), std::move(rr.bonds), std::move(labels));
  out.validate_structure();
  return out;
}

}  // namespace detail

MpsState MpsState::project_and_update(int k, int outcome) const {
  const int n = num_sites();
  if (k < 0 || k >= n) {
    throw ValidationError("project_and_update: site out of range");
  }
  if (outcome != 0 && outcome != 1) {
    throw ValidationError("project_and_update: outcome must be 0 or 1");
  }
  const RealVector* left = k > 0 ? &bond(k - 1).lambda : nullptr;
  const RealVector* right = k < n - 1 ? &bond(k).lambda : nullptr;
  Matrix a = kernels::scale_lr(site(k).gamma[outcome], left, right);
  const double p = kernels::abs2_sum(a);
  if (p <= kEpsProb) {
    throw ValidationError("project_and_update: outcome " + std::to_string(outcome) +
                          " has probability " + std::to_string(p) + " <= eps_prob");
  }
  a *= 1.0 / std::sqrt(p);

  std::vector<std::string> labels = labels_;
  labels.erase(labels.begin() + k);

  if (n == 1) {
    return MpsState({}, {}, {});
  }

  std::vector<SiteTensor> sites;
  std::vector<BondVector> bonds;
  if (k < n - 1) {
    detail::RightRebuild rr = detail::rebuild_right(*this, k + 1, a);
    if (k > 0) {
      // New left Schmidt vectors of the measured cut in the old left basis:
      // N = diag(1/lambda) conj(M) A^T, orthonormal rows by construction.
      const Matrix at = a.transpose();
      const RealVector inv = rr.cut_lambda.cwiseInverse();
      const Matrix n_rows =
          kernels::scale_lr(kernels::matmul_ca(rr.cut_basis_rows, at), &inv, nullptr);
      detail::LeftRebuild lr = detail::rebuild_left(*this, k - 1, n_rows, rr.cut_lambda);
      sites = std::move(lr.sites);
      bonds = std::move(lr.bonds);
      bonds.push_back(BondVector{rr.cut_lambda});
    } else if (rr.cut_lambda.size() != 1) {
      throw InternalError("project_and_update: boundary measurement produced a rank-" +
                          std::to_string(rr.cut_lambda.size()) + " cut");
    }
    sites.insert(sites.end(), std::make_move_iterator(rr.sites.begin()),
                 std::make_move_iterator(rr.sites.end()));
    bonds.insert(bonds.end(), std::make_move_iterator(rr.bonds.begin()),
                 std::make_move_iterator(rr.bonds.end()));
  } else {
    // Measuring the last site: only the leftward sweep remains.
    SchmidtFactors f = schmidt_from_density(kernels::gram_cols(a));
    if (f.lambda.size() != 1) {
      throw InternalError("project_and_update: boundary measurement produced a rank-" +
                          std::to_string(f.lambda.size()) + " cut");
    }
    detail::LeftRebuild lr = detail::rebuild_left(*this, k - 1, f.basis_rows, f.lambda);
    sites = std::move(lr.sites);
    bonds = std::move(lr.bonds);
  }

  MpsState out(std::move(sites), std::move(bonds), std::move(labels));
  out.validate_structure();
  return out;
}

}  // namespace mpsim
