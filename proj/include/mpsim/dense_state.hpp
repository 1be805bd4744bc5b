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

#include <vector>

#include "mpsim/types.hpp"

namespace mpsim {

/// Brute-force 2^n amplitude vector. Bit-ordering convention, shared with the
/// MPS chain everywhere in this project: amplitude index x assigns qubit k
/// the value (x >> k) & 1, i.e. chain position k is bit k.
struct DenseState {
  int n = 0;
  std::vector<Complex> amp;

  static DenseState plus_state(int n);
  static DenseState basis_state(int n, std::uint64_t bits);

  std::size_t dim() const { return amp.size(); }
  double norm() const;
};

}  // namespace mpsim
