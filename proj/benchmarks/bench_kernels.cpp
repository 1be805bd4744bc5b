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

// Compares the serial reference kernels against the OpenMP backend on
// simulation-shaped workloads and prints a speedup table. Both backends must
// produce bit-identical results; this harness asserts that while timing.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mpsim/kernels.hpp"

namespace {

using mpsim::Complex;
using mpsim::Matrix;
using mpsim::RealVector;
namespace kernels = mpsim::kernels;

std::mt19937_64 g_rng(12345);

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      m(r, c) = Complex(dist(g_rng), dist(g_rng));
    }
  }
  return m;
}

RealVector random_positive(Eigen::Index n) {
  std::uniform_real_distribution<double> dist(0.1, 1.0);
  RealVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = dist(g_rng);
  }
  return v;
}

double time_ms(const std::function<void()>& fn, int repeats) {
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(repeats));
  for (int i = 0; i < repeats; ++i) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    times.push_back(
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count());
  }
  std::sort(times.begin(), times.end());
  const std::size_t n = times.size();
  return n % 2 == 1 ? times[n / 2] : 0.5 * (times[n / 2 - 1] + times[n / 2]);
}

struct Workload {
  std::string name;
  std::function<Matrix()> run;
};

int run_suite(int chi, Eigen::Index tall_rows, int repeats) {
  const Matrix a = random_matrix(chi, chi);
  const Matrix b = random_matrix(chi, chi);
  const Matrix tall = random_matrix(tall_rows, chi);
  const RealVector lam = random_positive(chi);

  std::vector<Workload> workloads = {
      {"matmul " + std::to_string(chi) + "^3", [&] { return kernels::matmul(a, b); }},
      {"matmul_ct " + std::to_string(chi) + "^3", [&] { return kernels::matmul_ct(a, b); }},
      {"gram_rows " + std::to_string(tall_rows) + "x" + std::to_string(chi),
       [&] { return kernels::gram_rows(tall); }},
      {"gram_cols " + std::to_string(chi) + "x" + std::to_string(chi),
       [&] { return kernels::gram_cols(a); }},
      {"scale_lr " + std::to_string(tall_rows) + "x" + std::to_string(chi),
       [&] { return kernels::scale_lr(tall, nullptr, &lam); }},
      {"dense_step " + std::to_string(tall_rows) + "x" + std::to_string(chi) + "^2",
       [&] { return kernels::matmul(tall, kernels::scale_lr(a, &lam, nullptr)); }},
  };

  std::printf("threads=%d\n", omp_get_max_threads());
  std::printf("%-24s %12s %12s %9s %s\n", "kernel", "serial_ms", "openmp_ms", "speedup",
              "bit_equal");
  int mismatches = 0;
  for (const Workload& w : workloads) {
    kernels::set_backend(kernels::Backend::serial);
    const Matrix reference = w.run();
    const double serial_ms = time_ms([&] { (void)w.run(); }, repeats);
    kernels::set_backend(kernels::Backend::openmp);
    const Matrix parallel = w.run();
    const double openmp_ms = time_ms([&] { (void)w.run(); }, repeats);
    const bool equal = reference.rows() == parallel.rows() &&
                       reference.cols() == parallel.cols() &&
                       (reference.array() == parallel.array()).all();
    if (!equal) {
      ++mismatches;
    }
    std::printf("%-24s %12.4f %12.4f %9.2fx %s\n", w.name.c_str(), serial_ms, openmp_ms,
                openmp_ms > 0.0 ? serial_ms / openmp_ms : 0.0, equal ? "yes" : "NO");
  }
  kernels::set_backend(kernels::Backend::openmp);
  return mismatches;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial vs OpenMP kernel comparison"};
  bool smoke = false;
  int repeats = 5;
  std::string chis = "64,256,512";
  app.add_flag("--smoke", smoke, "Tiny sizes, single repeat (CI check)");
  app.add_option("--repeats", repeats, "Repeats per measurement, median reported")
      ->capture_default_str();
  app.add_option("--chis", chis, "Comma-separated bond dimensions")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  if (smoke) {
    chis = "16";
    repeats = 1;
  }

  int mismatches = 0;
  std::stringstream ss(chis);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const int chi = std::stoi(item);
    mismatches += run_suite(chi, smoke ? 1024 : 65536, repeats);
    std::printf("\n");
  }
  if (mismatches != 0) {
    std::fprintf(stderr, "backend mismatch in %d workloads\n", mismatches);
    return 2;
  }
  return 0;
}
