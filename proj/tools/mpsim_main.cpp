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

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mpsim/cluster.hpp"
#include "mpsim/dense_oracle.hpp"
#include "mpsim/errors.hpp"
#include "mpsim/kernels.hpp"
#include "mpsim/mps_state.hpp"
#include "mpsim/pattern.hpp"
#include "mpsim/random_stream.hpp"
#include "mpsim/runner.hpp"

namespace {

using mpsim::ClusterSpec;
using mpsim::DenseState;
using mpsim::MeasurementPattern;
using mpsim::MpsState;
using mpsim::RandomStream;
using mpsim::RunMode;
using nlohmann::json;

constexpr int kSchemaVersion = 1;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw mpsim::ValidationError("cannot open file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json parse_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw mpsim::ValidationError("invalid JSON in " + path + ": " + e.what());
  }
}

/// FNV-1a 64-bit over the raw file bytes, hex-encoded.
std::string digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json state_to_json(const MpsState& state) {
  json sites = json::array();
  for (int k = 0; k < state.num_sites(); ++k) {
    const mpsim::SiteTensor& s = state.site(k);
    json gammas = json::array();
    for (int i = 0; i < 2; ++i) {
      json rows = json::array();
      for (Eigen::Index r = 0; r < s.gamma[i].rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < s.gamma[i].cols(); ++c) {
          row.push_back({s.gamma[i](r, c).real(), s.gamma[i](r, c).imag()});
        }
        rows.push_back(row);
      }
      gammas.push_back(rows);
    }
    sites.push_back({{"chi_left", s.chi_left()}, {"chi_right", s.chi_right()}, {"gamma", gammas}});
  }
  json bonds = json::array();
  for (int k = 0; k + 1 < state.num_sites(); ++k) {
    json lambda = json::array();
    for (int i = 0; i < state.bond(k).chi(); ++i) {
      lambda.push_back(state.bond(k).lambda(i));
    }
    bonds.push_back(lambda);
  }
  return {{"schema", kSchemaVersion},
          {"labels", state.labels()},
          {"sites", sites},
          {"bonds", bonds}};
}

int cmd_build(const std::string& spec_path, const std::string& out_path) {
  const ClusterSpec spec = ClusterSpec::from_json(parse_json_file(spec_path));
  mpsim::BuildStats stats;
  const MpsState state = build_cluster(spec, &stats);
  {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      throw mpsim::ValidationError("cannot write file: " + out_path);
    }
    out << state_to_json(state).dump(2) << "\n";
  }
  const mpsim::ChiProfile profile = state.chi_profile();
  json summary = {{"schema", kSchemaVersion},
                  {"spec_digest", digest(read_file(spec_path))},
                  {"n", state.num_sites()},
                  {"max_chi", profile.max_chi},
                  {"chi_profile", profile.per_bond},
                  {"intermediate_max_chi", stats.intermediate_max_chi},
                  {"state_file", out_path}};
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_run(const std::string& spec_path, const std::string& pattern_path, std::uint64_t seed,
            const std::string& mode_name, bool verify) {
  const ClusterSpec spec = ClusterSpec::from_json(parse_json_file(spec_path));
  const MeasurementPattern pattern = MeasurementPattern::from_json(parse_json_file(pattern_path));
  const RunMode mode = mpsim::run_mode_from_name(mode_name);
  if (verify && spec.num_sites() > mpsim::kDenseLimit) {
    throw mpsim::ValidationError("--verify requires at most " +
                                 std::to_string(mpsim::kDenseLimit) + " qubits, got " +
                                 std::to_string(spec.num_sites()));
  }
  const MpsState initial = build_cluster(spec);
  RandomStream rng(seed);
  const mpsim::SimulationRecord record = run_pattern(initial, pattern, rng, mode);

  json report = record_to_json(record, /*include_timings=*/true);
  report["schema"] = kSchemaVersion;
  report["seed"] = seed;
  report["spec_digest"] = digest(read_file(spec_path));
  report["pattern_digest"] = digest(read_file(pattern_path));
  report["kernel_backend"] = mpsim::kernels::backend_name(mpsim::kernels::backend());
  if (verify) {
    const mpsim::DenseCheck check = verify_record_against_dense(
        record, build_cluster_dense(spec), initial.labels(), pattern);
    report["verify"] = {{"fidelity", check.fidelity},
                        {"max_probability_deviation", check.max_probability_deviation}};
  }
  std::cout << report.dump(2) << "\n";
  return 0;
}

int cmd_verify(const std::string& spec_path) {
  const ClusterSpec spec = ClusterSpec::from_json(parse_json_file(spec_path));
  const MpsState state = build_cluster(spec);
  const mpsim::BoundReport report = verify_chi_bound(spec, state);

  json bonds = json::array();
  for (const mpsim::BondBoundCheck& b : report.bonds) {
    bonds.push_back({{"bond", b.bond}, {"chi", b.chi}, {"bound", b.bound}, {"ok", b.ok}});
  }
  bool pass = report.pass;
  json dense_check = {{"performed", false}};
  if (spec.num_sites() <= mpsim::kDenseLimit) {
    const DenseState psi = build_cluster_dense(spec);
    double max_dev = 0.0;
    for (int cut = 1; cut < state.num_sites(); ++cut) {
      const std::vector<double> dense = dense_schmidt_spectrum(psi, cut);
      const mpsim::RealVector& lambda = state.bond(cut - 1).lambda;
      for (std::size_t i = 0; i < dense.size(); ++i) {
        const double mps_value = i < static_cast<std::size_t>(lambda.size())
                                     ? lambda(static_cast<Eigen::Index>(i))
                                     : 0.0;
        max_dev = std::max(max_dev, std::abs(dense[i] - mps_value));
      }
    }
    const bool spectra_ok = max_dev <= 1e-9;
    dense_check = {{"performed", true}, {"max_spectrum_deviation", max_dev}, {"ok", spectra_ok}};
    pass = pass && spectra_ok;
  }
  json out = {{"schema", kSchemaVersion},
              {"spec_digest", digest(read_file(spec_path))},
              {"n", spec.num_sites()},
              {"nearest_neighbour", spec.nearest_neighbour},
              {"bound", report.bound},
              {"max_chi", report.max_chi},
              {"bonds", bonds},
              {"range_violations", report.range_violations},
              {"dense_check", dense_check},
              {"pass", pass}};
  std::cout << out.dump(2) << "\n";
  return pass ? 0 : 1;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> values;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    values.push_back(std::stoi(item));
  }
  if (values.empty()) {
    throw mpsim::ValidationError("empty list flag");
  }
  return values;
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

/// Least-squares slope of log(time) against log(l).
double fit_exponent(const std::vector<double>& ls, const std::vector<double>& ts) {
  const std::size_t n = ls.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(ls[i]);
    const double y = std::log(std::max(ts[i], 1e-9));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct BenchCell {
  int d = 0;
  int l = 0;
  int n = 0;
  int max_chi = 0;
  double total_ms = 0.0;
};

int cmd_bench(const std::string& widths_csv, const std::string& lengths_csv,
              const std::string& mode_name, int repeats, std::uint64_t seed, bool parallel) {
  const std::vector<int> widths = parse_int_list(widths_csv);
  const std::vector<int> lengths = parse_int_list(lengths_csv);
  const RunMode mode = mpsim::run_mode_from_name(mode_name);
  if (repeats < 1) {
    throw mpsim::ValidationError("--repeats must be >= 1");
  }

  std::vector<BenchCell> cells;
  for (int d : widths) {
    for (int l : lengths) {
      cells.push_back({d, l, d * l, 0, 0.0});
    }
  }

  auto run_cell = [&](BenchCell& cell) {
    ClusterSpec spec;
    spec.width = cell.d;
    spec.length = cell.l;
    spec.range = 1;
    spec.nearest_neighbour = true;
    const MpsState state = build_cluster(spec);
    cell.max_chi = state.chi_profile().max_chi;
    const MeasurementPattern pattern = mpsim::x_basis_pattern(state.labels(), {});
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(repeats));
    for (int rep = 0; rep < repeats; ++rep) {
      RandomStream rng(seed);
      const auto start = std::chrono::steady_clock::now();
      const mpsim::SimulationRecord record = run_pattern(state, pattern, rng, mode);
      times.push_back(
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
              .count());
      (void)record;
    }
    cell.total_ms = median(times);
  };

  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < cells.size(); ++i) {
      run_cell(cells[i]);
    }
  } else {
    for (BenchCell& cell : cells) {
      run_cell(cell);
    }
  }

  std::cout << "d,l,n,mode,max_chi,total_ms,per_step_ms\n";
  for (const BenchCell& cell : cells) {
    std::printf("%d,%d,%d,%s,%d,%.6f,%.6f\n", cell.d, cell.l, cell.n, mode_name.c_str(),
                cell.max_chi, cell.total_ms, cell.total_ms / cell.n);
  }
  for (int d : widths) {
    std::vector<double> ls, ts;
    for (const BenchCell& cell : cells) {
      if (cell.d == d) {
        ls.push_back(cell.l);
        ts.push_back(cell.total_ms);
      }
    }
    if (ls.size() >= 2) {
      std::printf("# fit,mode=%s,d=%d,exponent=%.4f\n", mode_name.c_str(), d,
                  fit_exponent(ls, ts));
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cluster-state computation simulator on a canonical-form matrix product state"};
  app.require_subcommand(1);

  std::string backend_name = "openmp";
  app.add_option("--backend", backend_name, "Kernel backend: serial | openmp")
      ->capture_default_str();

  std::string spec_path, pattern_path, out_path;
  std::uint64_t seed = 0;
  std::string mode_name = "full_update";
  bool verify = false;

  CLI::App* build = app.add_subcommand("build", "Build a cluster state and dump it");
  build->add_option("--spec", spec_path, "Cluster spec JSON")->required();
  build->add_option("--out", out_path, "Output state dump path")->required();

  CLI::App* run = app.add_subcommand("run", "Run a measurement pattern");
  run->add_option("--spec", spec_path, "Cluster spec JSON")->required();
  run->add_option("--pattern", pattern_path, "Pattern JSON")->required();
  run->add_option("--seed", seed, "RNG seed (decimal uint64)")->capture_default_str();
  run->add_option("--mode", mode_name, "full_update | in_order")->capture_default_str();
  run->add_flag("--verify", verify, "Cross-check against the dense oracle (n <= 20)");

  CLI::App* verify_cmd = app.add_subcommand("verify", "Check bond dimensions against the bound");
  verify_cmd->add_option("--spec", spec_path, "Cluster spec JSON")->required();

  std::string widths_csv = "1,2,3";
  std::string lengths_csv = "8,16,32,64";
  int repeats = 3;
  bool parallel = false;
  CLI::App* bench = app.add_subcommand("bench", "Timing table over grid sizes (CSV)");
  bench->add_option("--widths", widths_csv, "Comma-separated widths d")->capture_default_str();
  bench->add_option("--lengths", lengths_csv, "Comma-separated lengths l")->capture_default_str();
  bench->add_option("--mode", mode_name, "full_update | in_order")->capture_default_str();
  bench->add_option("--repeats", repeats, "Repeats per cell; medians reported")
      ->capture_default_str();
  bench->add_option("--seed", seed, "RNG seed (decimal uint64)")->capture_default_str();
  bench->add_flag("--parallel", parallel, "Run (d,l) cells concurrently (perturbs timings)");

  CLI11_PARSE(app, argc, argv);

  try {
    mpsim::kernels::set_backend(mpsim::kernels::backend_from_name(backend_name));
    if (build->parsed()) {
      return cmd_build(spec_path, out_path);
    }
    if (run->parsed()) {
      return cmd_run(spec_path, pattern_path, seed, mode_name, verify);
    }
    if (verify_cmd->parsed()) {
      return cmd_verify(spec_path);
    }
    if (bench->parsed()) {
      return cmd_bench(widths_csv, lengths_csv, mode_name, repeats, seed, parallel);
    }
  } catch (const mpsim::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const mpsim::InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
