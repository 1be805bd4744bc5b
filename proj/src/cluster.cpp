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

#include "mpsim/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "mpsim/dense_oracle.hpp"
#include "mpsim/errors.hpp"
#include "mpsim/kernels.hpp"
#include "mpsim/spectral.hpp"

namespace mpsim {
namespace {

constexpr double kUnitaryTol = 1e-10;

void check_unitary_4x4(const Matrix& g) {
  if (g.rows() != 4 || g.cols() != 4) {
    throw ValidationError("two-site gate must be 4x4");
  }
  if (((g.adjoint() * g) - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() > kUnitaryTol) {
    throw ValidationError("two-site gate is not unitary");
  }
}

int column_span(const std::pair<GridCoord, GridCoord>& e) {
  return std::abs(e.first.col - e.second.col);
}

}  // namespace

Matrix cz_gate() {
  Matrix g = Matrix::Identity(4, 4);
  g(3, 3) = -1.0;
  return g;
}

Matrix swap_gate() {
  Matrix g = Matrix::Zero(4, 4);
  g(0, 0) = 1.0;
  g(1, 2) = 1.0;
  g(2, 1) = 1.0;
  g(3, 3) = 1.0;
  return g;
}

Matrix cnot_gate() {
  Matrix g = Matrix::Zero(4, 4);
  g(0, 0) = 1.0;
  g(2, 2) = 1.0;
  g(1, 3) = 1.0;
  g(3, 1) = 1.0;
  return g;
}

std::string ClusterSpec::label(GridCoord c) const {
  return "c" + std::to_string(c.col) + "r" + std::to_string(c.row);
}

std::vector<std::string> ClusterSpec::site_labels() const {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(num_sites()));
  for (int col = 0; col < length; ++col) {
    for (int row = 0; row < width; ++row) {
      labels.push_back(label({col, row}));
    }
  }
  return labels;
}

std::vector<std::pair<GridCoord, GridCoord>> ClusterSpec::effective_edges() const {
  std::vector<std::pair<GridCoord, GridCoord>> list;
  if (nearest_neighbour) {
    for (int col = 0; col < length; ++col) {
      for (int row = 0; row < width; ++row) {
        if (row + 1 < width) {
          list.push_back({{col, row}, {col, row + 1}});
        }
        if (col + 1 < length) {
          list.push_back({{col, row}, {col + 1, row}});
        }
      }
    }
  } else {
    list = edges;
  }
  auto key = [this](const std::pair<GridCoord, GridCoord>& e) {
    const int a = site_index(e.first);
    const int b = site_index(e.second);
    return std::tuple(std::max(e.first.col, e.second.col), std::min(a, b), std::max(a, b));
  };
  std::sort(list.begin(), list.end(),
            [&](const auto& x, const auto& y) { return key(x) < key(y); });
  return list;
}

void ClusterSpec::validate() const {
  if (width < 1 || length < 1) {
    throw ValidationError("cluster spec: width and length must be >= 1");
  }
  if (range < 0) {
    throw ValidationError("cluster spec: range must be >= 0");
  }
  if (nearest_neighbour && !edges.empty()) {
    throw ValidationError("cluster spec: nearest_neighbour specs must not list edges");
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& e : effective_edges()) {
    for (const GridCoord& c : {e.first, e.second}) {
      if (c.col < 0 || c.col >= length || c.row < 0 || c.row >= width) {
        throw ValidationError("cluster spec: edge endpoint " + label(c) + " outside grid");
      }
    }
    const int a = site_index(e.first);
    const int b = site_index(e.second);
    if (a == b) {
      throw ValidationError("cluster spec: self edge at " + label(e.first));
    }
    if (!seen.insert({std::min(a, b), std::max(a, b)}).second) {
      throw ValidationError("cluster spec: duplicate edge " + label(e.first) + "-" +
                            label(e.second));
    }
  }
}

std::vector<std::string> ClusterSpec::range_violations() const {
  std::vector<std::string> bad;
  for (const auto& e : effective_edges()) {
    if (column_span(e) > range) {
      bad.push_back(label(e.first) + "-" + label(e.second));
    }
  }
  return bad;
}

ClusterSpec ClusterSpec::from_json(const nlohmann::json& j) {
  ClusterSpec spec;
  try {
    spec.width = j.at("width").get<int>();
    spec.length = j.at("length").get<int>();
    spec.range = j.at("range").get<int>();
    spec.nearest_neighbour = j.value("nearest_neighbour", false);
    if (j.contains("edges")) {
      for (const auto& je : j.at("edges")) {
        if (!je.is_array() || je.size() != 2) {
          throw ValidationError("cluster spec: each edge must be a pair of endpoints");
        }
        GridCoord a{je[0].at("col").get<int>(), je[0].at("row").get<int>()};
        GridCoord b{je[1].at("col").get<int>(), je[1].at("row").get<int>()};
        spec.edges.push_back({a, b});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("cluster spec: malformed JSON: ") + e.what());
  }
  spec.validate();
  return spec;
}

nlohmann::json ClusterSpec::to_json() const {
  nlohmann::json je = nlohmann::json::array();
  for (const auto& e : edges) {
    je.push_back({{{"col", e.first.col}, {"row", e.first.row}},
                  {{"col", e.second.col}, {"row", e.second.row}}});
  }
  return {{"width", width},
          {"length", length},
          {"range", range},
          {"nearest_neighbour", nearest_neighbour},
          {"edges", je}};
}

void apply_two_site_gate(MpsState& state, int k, const Matrix& g) {
  const int n = state.num_sites();
  if (k < 0 || k + 1 >= n) {
    throw ValidationError("apply_two_site_gate: sites out of range");
  }
  check_unitary_4x4(g);

  const RealVector* lam_left = k > 0 ? &state.bond(k - 1).lambda : nullptr;
  const RealVector& lam_mid = state.bond(k).lambda;
  const RealVector* lam_right = k + 1 < n - 1 ? &state.bond(k + 1).lambda : nullptr;
  const Eigen::Index chi_l = state.site(k).chi_left();
  const Eigen::Index chi_r = state.site(k + 1).chi_right();

  // Two-site block theta[(i,alpha),(j,gamma)] with all adjacent Schmidt
  // weights absorbed, stored as four (chi_l x chi_r) blocks indexed i + 2j.
  std::array<Matrix, 4> theta;
  for (int i = 0; i < 2; ++i) {
    const Matrix left = kernels::scale_lr(state.site(k).gamma[i], lam_left, &lam_mid);
    for (int j = 0; j < 2; ++j) {
      const Matrix right = kernels::scale_lr(state.site(k + 1).gamma[j], nullptr, lam_right);
      theta[i + 2 * j] = kernels::matmul(left, right);
    }
  }
  theta = kernels::lincomb4(g, theta);

  // Reduced density matrix of the right half, compound index j * chi_r + c.
  Matrix rho = Matrix::Zero(2 * chi_r, 2 * chi_r);
  for (int j = 0; j < 2; ++j) {
    for (int jp = 0; jp < 2; ++jp) {
      Matrix block = kernels::gram_rows_pair(theta[0 + 2 * j], theta[0 + 2 * jp]) +
                     kernels::gram_rows_pair(theta[1 + 2 * j], theta[1 + 2 * jp]);
      rho.block(j * chi_r, jp * chi_r, chi_r, chi_r) = std::move(block);
    }
  }
  SchmidtFactors f = schmidt_from_density(rho);
  const Eigen::Index rank = f.lambda.size();
  if (rank > 2 * std::min(chi_l, chi_r)) {
    throw InternalError("apply_two_site_gate: rank exceeded structural bound");
  }
  const std::array<Matrix, 2> w_block = {f.basis_rows.leftCols(chi_r),
                                         f.basis_rows.rightCols(chi_r)};

  // New right tensor: basis rows unpacked over (j, c), divided by the
  // untouched right-hand lambda.
  SiteTensor new_right;
  RealVector inv_right;
  const RealVector* inv_right_ptr = nullptr;
  if (lam_right != nullptr) {
    inv_right = lam_right->cwiseInverse();
    inv_right_ptr = &inv_right;
  }
  for (int j = 0; j < 2; ++j) {
    new_right.gamma[j] = kernels::scale_lr(w_block[j], nullptr, inv_right_ptr);
  }

  // New left tensor: project theta onto the new right Schmidt vectors and
  // strip the left lambda and the new bond spectrum.
  SiteTensor new_left;
  const RealVector inv_lambda = f.lambda.cwiseInverse();
  RealVector inv_left;
  const RealVector* inv_left_ptr = nullptr;
  if (lam_left != nullptr) {
    inv_left = lam_left->cwiseInverse();
    inv_left_ptr = &inv_left;
  }
  for (int i = 0; i < 2; ++i) {
    Matrix x = kernels::matmul_ct(theta[i + 2 * 0], w_block[0]) +
               kernels::matmul_ct(theta[i + 2 * 1], w_block[1]);
    new_left.gamma[i] = kernels::scale_lr(x, inv_left_ptr, &inv_lambda);
  }

  state.site_mut(k) = std::move(new_left);
  state.site_mut(k + 1) = std::move(new_right);
  state.bond_mut(k).lambda = f.lambda;
}

void apply_cphase(MpsState& state, int a, int b, int* intermediate_max_chi) {
  if (a == b) {
    throw ValidationError("apply_cphase: identical sites");
  }
  const int lo = std::min(a, b);
  const int hi = std::max(a, b);
  if (lo < 0 || hi >= state.num_sites()) {
    throw ValidationError("apply_cphase: sites out of range");
  }
  auto track = [&] {
    if (intermediate_max_chi != nullptr) {
      *intermediate_max_chi = std::max(*intermediate_max_chi, state.chi_profile().max_chi);
    }
  };
  const Matrix swap = swap_gate();
  for (int m = hi - 1; m > lo; --m) {
    apply_two_site_gate(state, m, swap);
    track();
  }
  apply_two_site_gate(state, lo, cz_gate());
  track();
  for (int m = lo + 1; m < hi; ++m) {
    apply_two_site_gate(state, m, swap);
    track();
  }
}

MpsState build_cluster(const ClusterSpec& spec, BuildStats* stats) {
  spec.validate();
  MpsState state = MpsState::plus_product(spec.site_labels());
  int max_chi = 1;
  for (const auto& e : spec.effective_edges()) {
    apply_cphase(state, spec.site_index(e.first), spec.site_index(e.second), &max_chi);
  }
  if (stats != nullptr) {
    stats->intermediate_max_chi = max_chi;
  }
  state.validate_structure();
  return state;
}

DenseState build_cluster_dense(const ClusterSpec& spec) {
  spec.validate();
  if (spec.num_sites() > kDenseLimit) {
    throw ValidationError("build_cluster_dense: more than " + std::to_string(kDenseLimit) +
                          " qubits");
  }
  DenseState psi = DenseState::plus_state(spec.num_sites());
  for (const auto& e : spec.effective_edges()) {
    dense_cphase(psi, spec.site_index(e.first), spec.site_index(e.second));
  }
  return psi;
}

BoundReport verify_chi_bound(const ClusterSpec& spec, const MpsState& state) {
  BoundReport report;
  if (spec.nearest_neighbour) {
    report.bound = 1 << std::min(spec.width, 30);
  } else {
    const double exponent = (spec.range + 0.5) * spec.width;
    report.bound = 1 << std::min(static_cast<int>(std::ceil(exponent)), 30);
  }
  report.range_violations = spec.range_violations();
  const ChiProfile profile = state.chi_profile();
  report.max_chi = profile.max_chi;
  for (std::size_t i = 0; i < profile.per_bond.size(); ++i) {
    BondBoundCheck check;
    check.bond = static_cast<int>(i);
    check.chi = profile.per_bond[i];
    check.bound = report.bound;
    check.ok = check.chi <= report.bound;
    report.bonds.push_back(check);
    report.pass = report.pass && check.ok;
  }
  report.pass = report.pass && report.range_violations.empty();
  return report;
}

}  // namespace mpsim
