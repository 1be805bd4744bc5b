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

#include <cmath>

#include "mpsim/types.hpp"

namespace mpsim {

inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix pauli_y() {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline Matrix hadamard() {
  Matrix m(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  m << s, s, s, -s;
  return m;
}

/// diag(1, e^{i phi})
inline Matrix rot_z(double phi) {
  Matrix m = Matrix::Identity(2, 2);
  m(1, 1) = std::exp(Complex(0.0, phi));
  return m;
}

/// H rot_z(phi) H
inline Matrix rot_x(double phi) { return hadamard() * rot_z(phi) * hadamard(); }

inline Matrix pauli_by_name(char op) {
  switch (op) {
    case 'X':
      return pauli_x();
    case 'Y':
      return pauli_y();
    case 'Z':
      return pauli_z();
    default:
      break;
  }
  return Matrix::Identity(2, 2);
}

}  // namespace mpsim
