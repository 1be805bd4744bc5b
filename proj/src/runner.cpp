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

#include "mpsim/runner.hpp"

#include <chrono>
#include <cmath>
#include <utility>

#include <nlohmann/json.hpp>

#include "mpsim/dense_oracle.hpp"
#include "mpsim/errors.hpp"
#include "mpsim/gates.hpp"
#include "mpsim/kernels.hpp"

namespace mpsim {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

const char* basis_kind_name(BasisKind kind) {
  switch (kind) {
    case BasisKind::computational:
      return "computational";
    case BasisKind::rotated_xy:
      return "XY";
    case BasisKind::fixed_unitary:
      return "fixed";
  }
  return "?";
}

double resolved_theta(const MeasurementStep& step, const std::map<std::string, int>& outcomes) {
  if (step.basis.kind != BasisKind::rotated_xy) {
    return 0.0;
  }
  int sign = 0;
  for (const std::string& dep : step.basis.sign_deps) {
    sign ^= outcomes.at(dep);
  }
  int shift = 0;
  for (const std::string& dep : step.basis.pi_deps) {
    shift ^= outcomes.at(dep);
  }
  return (sign ? -1.0 : 1.0) * step.basis.theta0 + (shift ? std::acos(-1.0) : 0.0);
}

void check_pattern_against_state(const MpsState& state, const MeasurementPattern& pattern) {
  pattern.validate();
  for (const MeasurementStep& step : pattern.steps) {
    if (state.site_of_label(step.target) < 0) {
      throw ValidationError("pattern targets unknown qubit " + step.target);
    }
  }
  for (const std::string& output : pattern.outputs) {
    if (state.site_of_label(output) < 0) {
      throw ValidationError("pattern declares unknown output " + output);
    }
  }
}

/// in_order precondition: measured sites are exactly 0..m-1 in ascending
/// order, so the boundary vector can sweep the chain once.
void check_in_order(const MpsState& state, const MeasurementPattern& pattern) {
  for (std::size_t i = 0; i < pattern.steps.size(); ++i) {
    const int site = state.site_of_label(pattern.steps[i].target);
    if (site != static_cast<int>(i)) {
      throw ValidationError("in_order mode requires measuring chain sites 0..m-1 in order; step " +
                            std::to_string(i) + " targets site " + std::to_string(site));
    }
  }
}

void apply_corrections(MpsState& state, const MeasurementPattern& pattern,
                       const std::map<std::string, int>& outcomes) {
  for (const Correction& c : pattern.corrections) {
    int parity = 0;
    for (const std::string& dep : c.deps) {
      parity ^= outcomes.at(dep);
    }
    if (c.negate) {
      parity ^= 1;
    }
    if (parity) {
      const int site = state.site_of_label(c.target);
      if (site < 0) {
        throw ValidationError("correction targets missing qubit " + c.target);
      }
      state.apply_single_qubit(site, pauli_by_name(c.op));
    }
  }
}

int suffix_max_chi(const std::vector<int>& profile, std::size_t from_bond) {
  int max_chi = 1;
  for (std::size_t b = from_bond; b < profile.size(); ++b) {
    max_chi = std::max(max_chi, profile[b]);
  }
  return max_chi;
}

}  // namespace

RunMode run_mode_from_name(const std::string& name) {
  if (name == "full_update") {
    return RunMode::full_update;
  }
  if (name == "in_order") {
    return RunMode::in_order;
  }
  throw ValidationError("unknown run mode: " + name);
}

const char* run_mode_name(RunMode mode) {
  return mode == RunMode::full_update ? "full_update" : "in_order";
}

SimulationRecord run_pattern(const MpsState& state, const MeasurementPattern& pattern,
                             RandomStream& rng, RunMode mode) {
  check_pattern_against_state(state, pattern);
  if (mode == RunMode::in_order) {
    check_in_order(state, pattern);
  }

  SimulationRecord record;
  record.mode = mode;
  const auto run_start = Clock::now();
  std::map<std::string, int> outcomes;

  if (mode == RunMode::full_update) {
    MpsState working = state;
    for (const MeasurementStep& step : pattern.steps) {
      const auto step_start = Clock::now();
      const int site = working.site_of_label(step.target);
      working.apply_single_qubit(site, resolve_basis(step, outcomes));
      const auto [p0, p1] = working.outcome_probabilities(site);
      const int outcome = sample_outcome(p0, p1, rng.next_uniform());
      working = working.project_and_update(site, outcome);

      outcomes[step.target] = outcome;
      StepRecord sr;
      sr.target = step.target;
      sr.basis_kind = basis_kind_name(step.basis.kind);
      sr.theta = resolved_theta(step, outcomes);
      sr.p0 = p0;
      sr.p1 = p1;
      sr.outcome = outcome;
      sr.max_chi_after = working.chi_profile().max_chi;
      sr.wall_ms = ms_since(step_start);
      record.steps.push_back(std::move(sr));
      record.outcome_string.push_back(outcome == 0 ? '0' : '1');
    }
    apply_corrections(working, pattern, outcomes);
    record.final_state = std::move(working);
  } else {
    // Boundary row vector over the bond entering the measurement frontier.
    // Gammas and lambdas of the original chain are read, never written.
    const std::vector<int> original_profile = state.chi_profile().per_bond;
    Matrix boundary = Matrix::Ones(1, 1);
    for (std::size_t m = 0; m < pattern.steps.size(); ++m) {
      const auto step_start = Clock::now();
      const MeasurementStep& step = pattern.steps[m];
      const Matrix u = resolve_basis(step, outcomes);
      const int site = static_cast<int>(m);
      const Matrix t0 = kernels::matmul(boundary, state.site(site).gamma[0]);
      const Matrix t1 = kernels::matmul(boundary, state.site(site).gamma[1]);
      const RealVector* lam = site < state.num_sites() - 1 ? &state.bond(site).lambda : nullptr;
      std::array<Matrix, 2> c;
      double p[2];
      for (int i = 0; i < 2; ++i) {
        c[i] = kernels::scale_lr(u(i, 0) * t0 + u(i, 1) * t1, nullptr, lam);
        p[i] = kernels::abs2_sum(c[i]);
      }
      const int outcome = sample_outcome(p[0], p[1], rng.next_uniform());
      const double total = p[0] + p[1];
      boundary = c[outcome] * (1.0 / std::sqrt(p[outcome]));

      outcomes[step.target] = outcome;
      StepRecord sr;
      sr.target = step.target;
      sr.basis_kind = basis_kind_name(step.basis.kind);
      sr.theta = resolved_theta(step, outcomes);
      sr.p0 = p[0] / total;
      sr.p1 = p[1] / total;
      sr.outcome = outcome;
      sr.max_chi_after = suffix_max_chi(original_profile, m + 1);
      sr.wall_ms = ms_since(step_start);
      record.steps.push_back(std::move(sr));
      record.outcome_string.push_back(outcome == 0 ? '0' : '1');
    }
    MpsState final_state =
        detail::collapse_prefix(state, static_cast<int>(pattern.steps.size()), boundary);
    apply_corrections(final_state, pattern, outcomes);
    record.final_state = std::move(final_state);
  }

  record.final_chi_profile = record.final_state.chi_profile().per_bond;
  record.final_labels = record.final_state.labels();
  record.total_ms = ms_since(run_start);
  return record;
}

namespace {

void enumerate_full_update(const MpsState& state, const MeasurementPattern& pattern,
                           std::size_t step_idx, std::map<std::string, int>& outcomes,
                           std::string& prefix, double prob,
                           std::map<std::string, double>& result) {
  if (step_idx == pattern.steps.size()) {
    result[prefix] = prob;
    return;
  }
  const MeasurementStep& step = pattern.steps[step_idx];
  MpsState branch = state;
  const int site = branch.site_of_label(step.target);
  branch.apply_single_qubit(site, resolve_basis(step, outcomes));
  const auto [p0, p1] = branch.outcome_probabilities(site);
  const double total = p0 + p1;
  for (int outcome = 0; outcome < 2; ++outcome) {
    const double p = (outcome == 0 ? p0 : p1) / total;
    if (p <= kEpsProb) {
      continue;
    }
    MpsState post = branch.project_and_update(site, outcome);
    outcomes[step.target] = outcome;
    prefix.push_back(outcome == 0 ? '0' : '1');
    enumerate_full_update(post, pattern, step_idx + 1, outcomes, prefix, prob * p, result);
    prefix.pop_back();
    outcomes.erase(step.target);
  }
}

void enumerate_in_order(const MpsState& state, const MeasurementPattern& pattern,
                        std::size_t step_idx, const Matrix& boundary,
                        std::map<std::string, int>& outcomes, std::string& prefix, double prob,
                        std::map<std::string, double>& result) {
  if (step_idx == pattern.steps.size()) {
    result[prefix] = prob;
    return;
  }
  const MeasurementStep& step = pattern.steps[step_idx];
  const Matrix u = resolve_basis(step, outcomes);
  const int site = static_cast<int>(step_idx);
  const Matrix t0 = kernels::matmul(boundary, state.site(site).gamma[0]);
  const Matrix t1 = kernels::matmul(boundary, state.site(site).gamma[1]);
  const RealVector* lam = site < state.num_sites() - 1 ? &state.bond(site).lambda : nullptr;
  for (int outcome = 0; outcome < 2; ++outcome) {
    const Matrix c = kernels::scale_lr(u(outcome, 0) * t0 + u(outcome, 1) * t1, nullptr, lam);
    const double p = kernels::abs2_sum(c);
    if (p <= kEpsProb) {
      continue;
    }
    const Matrix next = c * (1.0 / std::sqrt(p));
    outcomes[step.target] = outcome;
    prefix.push_back(outcome == 0 ? '0' : '1');
    enumerate_in_order(state, pattern, step_idx + 1, next, outcomes, prefix, prob * p, result);
    prefix.pop_back();
    outcomes.erase(step.target);
  }
}

}  // namespace

std::map<std::string, double> enumerate_pattern_branches(const MpsState& state,
                                                         const MeasurementPattern& pattern,
                                                         RunMode mode) {
  check_pattern_against_state(state, pattern);
  std::map<std::string, double> result;
  std::map<std::string, int> outcomes;
  std::string prefix;
  if (mode == RunMode::full_update) {
    enumerate_full_update(state, pattern, 0, outcomes, prefix, 1.0, result);
  } else {
    check_in_order(state, pattern);
    enumerate_in_order(state, pattern, 0, Matrix::Ones(1, 1), outcomes, prefix, 1.0, result);
  }
  return result;
}

nlohmann::json record_to_json(const SimulationRecord& record, bool include_timings) {
  nlohmann::json steps = nlohmann::json::array();
  for (const StepRecord& sr : record.steps) {
    steps.push_back({{"target", sr.target},
                     {"basis", sr.basis_kind},
                     {"theta", sr.theta},
                     {"p0", sr.p0},
                     {"p1", sr.p1},
                     {"outcome", sr.outcome},
                     {"max_chi_after", sr.max_chi_after},
                     {"wall_ms", include_timings ? sr.wall_ms : 0.0}});
  }
  return {{"mode", run_mode_name(record.mode)},
          {"outcomes", record.outcome_string},
          {"steps", steps},
          {"final_chi_profile", record.final_chi_profile},
          {"final_labels", record.final_labels},
          {"total_ms", include_timings ? record.total_ms : 0.0}};
}

DenseCheck verify_record_against_dense(const SimulationRecord& record, const DenseState& initial,
                                       const std::vector<std::string>& initial_labels,
                                       const MeasurementPattern& pattern) {
  if (static_cast<int>(initial_labels.size()) != initial.n) {
    throw ValidationError("verify: label count mismatch");
  }
  DenseState psi = initial;
  std::vector<std::string> labels = initial_labels;
  std::map<std::string, int> outcomes;
  DenseCheck check;

  auto qubit_of = [&labels](const std::string& label) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == label) {
        return static_cast<int>(i);
      }
    }
    throw ValidationError("verify: unknown qubit " + label);
  };

  for (std::size_t i = 0; i < record.steps.size(); ++i) {
    const StepRecord& sr = record.steps[i];
    const MeasurementStep& step = pattern.steps.at(i);
    const int k = qubit_of(sr.target);
    dense_apply_single_qubit(psi, k, resolve_basis(step, outcomes));
    const auto [p0, p1] = dense_probabilities(psi, k);
    check.max_probability_deviation = std::max(
        {check.max_probability_deviation, std::abs(p0 - sr.p0), std::abs(p1 - sr.p1)});
    psi = dense_drop_qubit(dense_measure(psi, k, sr.outcome).post, k, sr.outcome);
    labels.erase(labels.begin() + k);
    outcomes[sr.target] = sr.outcome;
  }
  for (const Correction& c : pattern.corrections) {
    int parity = 0;
    for (const std::string& dep : c.deps) {
      parity ^= outcomes.at(dep);
    }
    if (c.negate) {
      parity ^= 1;
    }
    if (parity) {
      dense_apply_single_qubit(psi, qubit_of(c.target), pauli_by_name(c.op));
    }
  }

  const DenseState mps_final = record.final_state.to_dense();
  if (mps_final.amp.size() != psi.amp.size()) {
    throw InternalError("verify: dimension mismatch between dense replay and final state");
  }
  Complex overlap = 0.0;
  for (std::size_t x = 0; x < psi.amp.size(); ++x) {
    overlap += std::conj(psi.amp[x]) * mps_final.amp[x];
  }
  check.fidelity = std::norm(overlap);
  return check;
}

}  // namespace mpsim
