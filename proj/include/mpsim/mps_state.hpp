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

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "mpsim/dense_state.hpp"
#include "mpsim/random_stream.hpp"
#include "mpsim/types.hpp"

namespace mpsim {

/// Site tensor of the canonical-form chain: gamma[i](l, r) carries physical
/// index i in {0,1} and bond indices l, r. The first site has chi_left = 1
/// and the last has chi_right = 1.
struct SiteTensor {
  std::array<Matrix, 2> gamma;

  int chi_left() const { return static_cast<int>(gamma[0].rows()); }
  int chi_right() const { return static_cast<int>(gamma[0].cols()); }
};

/// Schmidt coefficients on one bond: strictly positive, descending, with
/// sum of squares 1.
struct BondVector {
  RealVector lambda;

  int chi() const { return static_cast<int>(lambda.size()); }
};

struct ChiProfile {
  std::vector<int> per_bond;
  int max_chi = 1;
};

struct MeasureResult;

/// An n-qubit pure state in canonical (Schmidt-gauge) matrix-product form:
/// n site tensors interleaved with n-1 bond vectors, where every bond's
/// lambda is the Schmidt spectrum of that bipartition and the flanking
/// Schmidt-vector families are orthonormal. Value type: copy freely, mutate
/// one instance from one thread at a time.
class MpsState {
 public:
  MpsState() = default;
  MpsState(std::vector<SiteTensor> sites, std::vector<BondVector> bonds,
           std::vector<std::string> labels);

  /// |+>^n with the given labels (or q0..q{n-1}).
  static MpsState plus_product(int n);
  static MpsState plus_product(std::vector<std::string> labels);

  /// Sequential-Schmidt construction from a dense vector (n <= kDenseLimit).
  /// The result is canonical and reproduces psi up to global phase; each bond
  /// dimension equals the Schmidt rank of psi across that cut.
  static MpsState from_dense(const DenseState& psi);
  static MpsState from_dense(const DenseState& psi, std::vector<std::string> labels);

  int num_sites() const { return static_cast<int>(sites_.size()); }
  bool empty() const { return sites_.empty(); }
  const SiteTensor& site(int k) const { return sites_[static_cast<std::size_t>(k)]; }
  const BondVector& bond(int k) const { return bonds_[static_cast<std::size_t>(k)]; }
  SiteTensor& site_mut(int k) { return sites_[static_cast<std::size_t>(k)]; }
  BondVector& bond_mut(int k) { return bonds_[static_cast<std::size_t>(k)]; }
  const std::vector<std::string>& labels() const { return labels_; }
  int site_of_label(const std::string& label) const;  // -1 when absent

  /// Full amplitude vector by chain contraction (n <= kDenseLimit). The
  /// empty state yields the scalar [1].
  DenseState to_dense() const;

  /// Absorbs a 2x2 unitary into site k: gamma[i] <- sum_j u(i,j) gamma[j].
  /// Bond vectors are untouched; O(chi^2) scalar work.
  void apply_single_qubit(int k, const Matrix& u);

  /// Computational-basis outcome probabilities for site k, from the
  /// lambda-gamma-lambda block of that site alone. Non-mutating.
  std::pair<double, double> outcome_probabilities(int k) const;

  /// Projects site k onto `outcome`, removes the site, and rebuilds every
  /// remaining tensor and bond by reduced-density-matrix eigendecomposition
  /// sweeps (rightward from the measured cut, then leftward). The result is
  /// canonical and no bond dimension increases.
  MpsState project_and_update(int k, int outcome) const;

  /// Samples an outcome (consuming exactly one uniform from rng, always) and
  /// projects. Outcomes with probability <= kEpsProb are never selected.
  MeasureResult measure(int k, RandomStream& rng) const;

  ChiProfile chi_profile() const;

  /// True iff every bond satisfies the two orthonormality Gram conditions
  /// and the lambda normalisation within tol.
  bool check_canonical(double tol) const;

  /// Stored scalar parameters: 2 * chiL * chiR per site plus chi per bond.
  std::size_t parameter_count() const;

  /// Cheap structural sanity check (dimension chaining, lambda positivity
  /// and normalisation, finite entries). Throws InternalError.
  void validate_structure() const;

 private:
  std::vector<SiteTensor> sites_;
  std::vector<BondVector> bonds_;
  std::vector<std::string> labels_;
};

struct MeasureResult {
  int outcome = 0;
  double p0 = 0.0;
  double p1 = 0.0;
  MpsState post;
};

/// Picks 0 iff u < p0 / (p0 + p1), except that an outcome with probability
/// <= kEpsProb is never picked. Shared by every sampling path.
int sample_outcome(double p0, double p1, double u);

namespace detail {

/// Rebuilds sites [first, n) of src into a fresh canonical chain given the
/// normalized boundary block a(row: new left index, col: old bond basis
/// entering site `first`). Returns the spectrum and basis of the entry cut
/// plus the rebuilt tensors; `cut_lambda` becomes a bond only if the caller
/// still has sites on the left.
struct RightRebuild {
  RealVector cut_lambda;
  Matrix cut_basis_rows;
  std::vector<SiteTensor> sites;
  std::vector<BondVector> bonds;
};
RightRebuild rebuild_right(const MpsState& src, int first, const Matrix& a);

/// Mirror image: rebuilds sites [0, last] given the new-left-vector matrix
/// n_rows (rows: new index, cols: old bond basis leaving site `last`) and
/// the spectrum of that cut.
struct LeftRebuild {
  std::vector<SiteTensor> sites;
  std::vector<BondVector> bonds;
};
LeftRebuild rebuild_left(const MpsState& src, int last, const Matrix& n_rows,
                         const RealVector& cut_lambda);

/// Canonical state of sites [measured_count, n) conditioned on the measured
/// prefix, given the accumulated (normalized) boundary row vector.
MpsState collapse_prefix(const MpsState& src, int measured_count, const Matrix& boundary_row);

}  // namespace detail

}  // namespace mpsim
