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

#include "mpsim/types.hpp"

namespace mpsim::kernels {

/// Contraction kernels come in two backends. Both share one loop body: the
/// OpenMP backend parallelizes over independent output elements while every
/// per-element reduction runs in a fixed serial order, so the two backends
/// (and any thread count) produce bit-identical results. The serial backend
/// is the reference the tests compare against.
enum class Backend { serial, openmp };

Backend backend();
void set_backend(Backend b);
Backend backend_from_name(const std::string& name);  // "serial" | "openmp"
const char* backend_name(Backend b);

/// diag(left) * a * diag(right); a null side means identity scaling.
Matrix scale_lr(const Matrix& a, const RealVector* left, const RealVector* right);

/// sum_ij |a(i,j)|^2, accumulated column by column.
double abs2_sum(const Matrix& a);

Matrix matmul(const Matrix& a, const Matrix& b);     // a * b
Matrix matmul_ct(const Matrix& a, const Matrix& b);  // a * b^dagger
Matrix matmul_ah(const Matrix& a, const Matrix& b);  // a^dagger * b
Matrix matmul_tr(const Matrix& a, const Matrix& b);  // a * b^T
Matrix matmul_ca(const Matrix& a, const Matrix& b);  // conj(a) * b

/// g(c,c') = sum_r a(r,c) * conj(b(r,c')); gram_rows(a) contracts a with
/// itself and is the reduced-density-matrix builder for right-hand blocks.
Matrix gram_rows_pair(const Matrix& a, const Matrix& b);
Matrix gram_rows(const Matrix& a);

/// g(r,r') = sum_c a(r,c) * conj(a(r',c)); left-hand-block counterpart.
Matrix gram_cols(const Matrix& a);

/// out[p] = sum_q g(p,q) * t[q] for a 4x4 coefficient matrix g; all four
/// input blocks must share one shape.
std::array<Matrix, 4> lincomb4(const Matrix& g, const std::array<Matrix, 4>& t);

}  // namespace mpsim::kernels
