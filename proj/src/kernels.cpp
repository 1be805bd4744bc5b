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

#include "mpsim/kernels.hpp"

#include <omp.h>

#include <cstdint>
#include <vector>

#include "mpsim/errors.hpp"

namespace mpsim::kernels {
namespace {

using std::int64_t;

Backend g_backend = Backend::openmp;

// Problems below this many scalar operations are not worth a parallel region.
constexpr int64_t kGrain = 1 << 15;

bool parallel_for_work(int64_t work) {
  return g_backend == Backend::openmp && work >= kGrain && !omp_in_parallel();
}

}  // namespace

Backend backend() { return g_backend; }

void set_backend(Backend b) { g_backend = b; }

Backend backend_from_name(const std::string& name) {
  if (name == "serial") {
    return Backend::serial;
  }
  if (name == "openmp") {
    return Backend::openmp;
  }
  throw ValidationError("unknown kernel backend: " + name);
}

const char* backend_name(Backend b) {
  return b == Backend::serial ? "serial" : "openmp";
}

Matrix scale_lr(const Matrix& a, const RealVector* left, const RealVector* right) {
  const int64_t m = a.rows();
  const int64_t n = a.cols();
  Matrix out(m, n);
  const bool par = parallel_for_work(m * n);
#pragma omp parallel for schedule(static) if (par)
  for (int64_t j = 0; j < n; ++j) {
    const double rj = right != nullptr ? (*right)(j) : 1.0;
    for (int64_t i = 0; i < m; ++i) {
      const double li = left != nullptr ? (*left)(i) : 1.0;
      out(i, j) = li * a(i, j) * rj;
    }
  }
  return out;
}

double abs2_sum(const Matrix& a) {
  const int64_t m = a.rows();
  const int64_t n = a.cols();
  std::vector<double> per_column(static_cast<std::size_t>(n), 0.0);
  const bool par = parallel_for_work(m * n);
#pragma omp parallel for schedule(static) if (par)
  for (int64_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (int64_t i = 0; i < m; ++i) {
      s += std::norm(a(i, j));
    }
    per_column[static_cast<std::size_t>(j)] = s;
  }
  double total = 0.0;
  for (double s : per_column) {
    total += s;
  }
  return total;
}

namespace {

enum class BUse { plain, adjoint, transpose };

// c = a * op(b); contraction entries accumulate in ascending contraction
// index for every output element regardless of threading.
template <BUse Use>
Matrix product_impl(const Matrix& a, const Matrix& b) {
  const int64_t m = a.rows();
  const int64_t k = a.cols();
  const int64_t n = Use == BUse::plain ? b.cols() : b.rows();
  if ((Use == BUse::plain && b.rows() != k) || (Use != BUse::plain && b.cols() != k)) {
    throw InternalError("kernel product: inner dimension mismatch");
  }
  Matrix c = Matrix::Zero(m, n);
  const bool par = parallel_for_work(m * n * k);
#pragma omp parallel for schedule(static) if (par)
  for (int64_t j = 0; j < n; ++j) {
    for (int64_t l = 0; l < k; ++l) {
      Complex blj;
      if constexpr (Use == BUse::plain) {
        blj = b(l, j);
      } else if constexpr (Use == BUse::adjoint) {
        blj = std::conj(b(j, l));
      } else {
        blj = b(j, l);
      }
      for (int64_t i = 0; i < m; ++i) {
        c(i, j) += a(i, l) * blj;
      }
    }
  }
  return c;
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) { return product_impl<BUse::plain>(a, b); }

Matrix matmul_ct(const Matrix& a, const Matrix& b) { return product_impl<BUse::adjoint>(a, b); }

Matrix matmul_tr(const Matrix& a, const Matrix& b) { return product_impl<BUse::transpose>(a, b); }

Matrix matmul_ah(const Matrix& a, const Matrix& b) {
  const int64_t k = a.rows();
  const int64_t m = a.cols();
  const int64_t n = b.cols();
  if (b.rows() != k) {
    throw InternalError("matmul_ah: inner dimension mismatch");
  }
  Matrix c = Matrix::Zero(m, n);
  const bool par = parallel_for_work(m * n * k);
#pragma omp parallel for schedule(static) if (par)
  for (int64_t j = 0; j < n; ++j) {
    for (int64_t l = 0; l < k; ++l) {
      const Complex blj = b(l, j);
      for (int64_t i = 0; i < m; ++i) {
        c(i, j) += std::conj(a(l, i)) * blj;
      }
    }
  }
  return c;
}

Matrix matmul_ca(const Matrix& a, const Matrix& b) {
  const int64_t m = a.rows();
  const int64_t k = a.cols();
  const int64_t n = b.cols();
  if (b.rows() != k) {
    throw InternalError("matmul_ca: inner dimension mismatch");
  }
  Matrix c = Matrix::Zero(m, n);
  const bool par = parallel_for_work(m * n * k);
#pragma omp parallel for schedule(static) if (par)
  for (int64_t j = 0; j < n; ++j) {
    for (int64_t l = 0; l < k; ++l) {
      const Complex blj = b(l, j);
      for (int64_t i = 0; i < m; ++i) {
        c(i, j) += std::conj(a(i, l)) * blj;
      }
    }
  }
  return c;
}

Matrix gram_rows_pair(const Matrix& a, const Matrix& b) {
  const int64_t r = a.rows();
  const int64_t ca = a.cols();
  const int64_t cb = b.cols();
  if (b.rows() != r) {
    throw InternalError("gram_rows_pair: row count mismatch");
  }
  Matrix g = Matrix::Zero(ca, cb);
  const bool par = parallel_for_work(ca * cb * r);
#pragma omp parallel for schedule(static) if (par)
  for (int64_t cp = 0; cp < cb; ++cp) {
    for (int64_t l = 0; l < r; ++l) {
      const Complex blc = std::conj(b(l, cp));
      for (int64_t c = 0; c < ca; ++c) {
        g(c, cp) += a(l, c) * blc;
      }
    }
  }
  return g;
}

Matrix gram_rows(const Matrix& a) { return gram_rows_pair(a, a); }

Matrix gram_cols(const Matrix& a) {
  const int64_t m = a.rows();
  const int64_t n = a.cols();
  Matrix g = Matrix::Zero(m, m);
  const bool par = parallel_for_work(m * m * n);
#pragma omp parallel for schedule(static) if (par)
  for (int64_t rp = 0; rp < m; ++rp) {
    for (int64_t l = 0; l < n; ++l) {
      const Complex arl = std::conj(a(rp, l));
      for (int64_t i = 0; i < m; ++i) {
        g(i, rp) += a(i, l) * arl;
      }
    }
  }
  return g;
}

std::array<Matrix, 4> lincomb4(const Matrix& g, const std::array<Matrix, 4>& t) {
  if (g.rows() != 4 || g.cols() != 4) {
    throw InternalError("lincomb4: coefficient matrix must be 4x4");
  }
  const int64_t m = t[0].rows();
  const int64_t n = t[0].cols();
  std::array<Matrix, 4> out;
  for (int p = 0; p < 4; ++p) {
    out[p] = Matrix::Zero(m, n);
    const bool par = parallel_for_work(m * n * 4);
#pragma omp parallel for schedule(static) if (par)
    for (int64_t j = 0; j < n; ++j) {
      for (int q = 0; q < 4; ++q) {
        const Complex gpq = g(p, q);
        for (int64_t i = 0; i < m; ++i) {
          out[p](i, j) += gpq * t[q](i, j);
        }
      }
    }
  }
  return out;
}

}  // namespace mpsim::kernels
