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

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mpsim/dense_state.hpp"
#include "mpsim/mps_state.hpp"
#include "mpsim/types.hpp"

namespace mpsim {

struct GridCoord {
  int col = 0;
  int row = 0;

  bool operator==(const GridCoord&) const = default;
};

/// Rectangular grid of width d (rows) and length l (columns) with CPHASE
/// edges. Sites are numbered column by column: k = col * width + row, with
/// label "c<col>r<row>". `range` declares the maximum horizontal (column)
/// distance of any edge; vertical distance is unconstrained.
struct ClusterSpec {
  int width = 1;   // d
  int length = 1;  // l
  int range = 1;   // r
  bool nearest_neighbour = false;
  std::vector<std::pair<GridCoord, GridCoord>> edges;  // explicit edges (empty when NN)

  int num_sites() const { return width * length; }
  int site_index(GridCoord c) const { return c.col * width + c.row; }
  std::string label(GridCoord c) const;
  std::vector<std::string> site_labels() const;

  /// Edges actually applied: the generated grid edges for NN specs, the
  /// explicit list otherwise, sorted column by column (ascending rightmost
  /// endpoint, then site indices).
  std::vector<std::pair<GridCoord, GridCoord>> effective_edges() const;

  /// Structural validation (coordinates in grid, no self or duplicate
  /// edges, NN specs carry no explicit edges). Throws ValidationError.
  /// Declared-range violations are not structural errors; they are reported
  /// by verify_chi_bound.
  void validate() const;

  /// Edges whose horizontal distance exceeds the declared range.
  std::vector<std::string> range_violations() const;

  static ClusterSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// Applies a 4x4 unitary to chain-adjacent sites (k, k+1). Flat two-qubit
/// index convention everywhere: i_k + 2 * i_{k+1}. The affected bond is
/// re-split through an eigendecomposition of the two-site block's reduced
/// density matrix; only gamma[k], gamma[k+1] and lambda[k] change.
void apply_two_site_gate(MpsState& state, int k, const Matrix& g);

/// CPHASE between arbitrary chain sites; non-adjacent pairs go through a
/// SWAP network that is unwound afterwards. When `intermediate_max_chi` is
/// given it accumulates the largest bond dimension seen after each
/// elementary gate.
void apply_cphase(MpsState& state, int a, int b, int* intermediate_max_chi = nullptr);

struct BuildStats {
  int intermediate_max_chi = 1;
};

/// (product of CPHASE edges) |+>^(d*l) as a canonical MPS.
MpsState build_cluster(const ClusterSpec& spec, BuildStats* stats = nullptr);

/// Same state built densely through the oracle (n <= kDenseLimit).
DenseState build_cluster_dense(const ClusterSpec& spec);

struct BondBoundCheck {
  int bond = 0;
  int chi = 0;
  int bound = 0;
  bool ok = true;
};

struct BoundReport {
  int bound = 0;
  int max_chi = 1;
  bool pass = true;
  std::vector<BondBoundCheck> bonds;
  std::vector<std::string> range_violations;
};

/// Checks every bond dimension against the applicable bound: 2^d for
/// nearest-neighbour specs, 2^ceil((r + 1/2) d) for explicit range-r specs.
/// Never mutates the state.
BoundReport verify_chi_bound(const ClusterSpec& spec, const MpsState& state);

// Common 4x4 gates in the flat index convention above.
Matrix cz_gate();
Matrix swap_gate();
Matrix cnot_gate();  // control = lower bit

}  // namespace mpsim
