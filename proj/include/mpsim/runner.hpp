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

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mpsim/dense_state.hpp"
#include "mpsim/mps_state.hpp"
#include "mpsim/pattern.hpp"
#include "mpsim/random_stream.hpp"

namespace mpsim {

/// full_update measures through the state, re-canonicalizing the whole chain
/// after every step; any measurement order is accepted. in_order requires
/// the pattern to measure a prefix of the chain in ascending site order and
/// only accumulates a boundary vector over the measured prefix, leaving
/// every tensor untouched until one final collapse of the output suffix.
enum class RunMode { full_update, in_order };

RunMode run_mode_from_name(const std::string& name);
const char* run_mode_name(RunMode mode);

struct StepRecord {
  std::string target;
  std::string basis_kind;
  double theta = 0.0;  // resolved angle; 0 for non-XY bases
  double p0 = 0.0;     // conditional probabilities given earlier outcomes
  double p1 = 0.0;
  int outcome = 0;
  int max_chi_after = 1;
  double wall_ms = 0.0;
};

struct SimulationRecord {
  RunMode mode = RunMode::full_update;
  std::vector<StepRecord> steps;
  std::string outcome_string;
  std::vector<int> final_chi_profile;
  std::vector<std::string> final_labels;
  double total_ms = 0.0;
  MpsState final_state;
};

/// Executes the pattern against a copy of `state`. Exactly one uniform is
/// drawn per step, in pattern order; corrections are applied to the final
/// state after the last measurement. Deterministic given (state, pattern,
/// seed, mode) up to the wall-time fields.
SimulationRecord run_pattern(const MpsState& state, const MeasurementPattern& pattern,
                             RandomStream& rng, RunMode mode);

/// Exhaustive branch tree of the pattern: outcome string -> probability.
/// Branches below kEpsProb are dropped.
std::map<std::string, double> enumerate_pattern_branches(const MpsState& state,
                                                         const MeasurementPattern& pattern,
                                                         RunMode mode);

/// Record serialization; timings are zeroed when include_timings is false so
/// byte-for-byte comparisons can ignore them.
nlohmann::json record_to_json(const SimulationRecord& record, bool include_timings);

struct DenseCheck {
  double max_probability_deviation = 0.0;
  double fidelity = 0.0;  // |<dense final | mps final>|^2
};

/// Replays a record against the dense oracle: same basis resolutions, same
/// outcomes forced, corrections applied, final states compared.
DenseCheck verify_record_against_dense(const SimulationRecord& record, const DenseState& initial,
                                       const std::vector<std::string>& initial_labels,
                                       const MeasurementPattern& pattern);

}  // namespace mpsim
