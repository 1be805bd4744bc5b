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

#include "mpsim/pattern.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include <nlohmann/json.hpp>

#include "mpsim/errors.hpp"

namespace mpsim {
namespace {

constexpr double kUnitaryTol = 1e-10;

int xor_of(const std::vector<std::string>& deps, const std::map<std::string, int>& outcomes) {
  int parity = 0;
  for (const std::string& dep : deps) {
    auto it = outcomes.find(dep);
    if (it == outcomes.end()) {
      throw ValidationError("feed-forward references unknown outcome " + dep);
    }
    parity ^= it->second;
  }
  return parity;
}

Matrix complex_2x2_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 ||
      !j[1].is_array() || j[1].size() != 2) {
    throw ValidationError("pattern: fixed basis matrix must be 2x2 of [re, im] pairs");
  }
  Matrix u(2, 2);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      const auto& e = j[r][c];
      if (!e.is_array() || e.size() != 2) {
        throw ValidationError("pattern: matrix entries must be [re, im] pairs");
      }
      u(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return u;
}

nlohmann::json complex_2x2_to_json(const Matrix& u) {
  nlohmann::json j = nlohmann::json::array();
  for (int r = 0; r < 2; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < 2; ++c) {
      row.push_back({u(r, c).real(), u(r, c).imag()});
    }
    j.push_back(row);
  }
  return j;
}

}  // namespace

Matrix resolve_basis(const MeasurementStep& step, const std::map<std::string, int>& outcomes) {
  switch (step.basis.kind) {
    case BasisKind::computational:
      return Matrix::Identity(2, 2);
    case BasisKind::rotated_xy: {
      const double sign = xor_of(step.basis.sign_deps, outcomes) ? -1.0 : 1.0;
      const double shift = xor_of(step.basis.pi_deps, outcomes) ? std::numbers::pi : 0.0;
      const double theta = sign * step.basis.theta0 + shift;
      // Maps (|0> + e^{i theta}|1>)/sqrt(2) to |0>: a Hadamard after
      // unwinding the phase.
      const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
      const Complex phase = std::exp(Complex(0.0, -theta));
      Matrix u(2, 2);
      u(0, 0) = inv_sqrt2;
      u(0, 1) = inv_sqrt2 * phase;
      u(1, 0) = inv_sqrt2;
      u(1, 1) = -inv_sqrt2 * phase;
      return u;
    }
    case BasisKind::fixed_unitary:
      return step.basis.fixed;
  }
  throw InternalError("resolve_basis: unknown basis kind");
}

void MeasurementPattern::validate() const {
  std::set<std::string> measured_so_far;
  std::set<std::string> outputs_set(outputs.begin(), outputs.end());
  for (const MeasurementStep& step : steps) {
    if (!measured_so_far.insert(step.target).second) {
      throw ValidationError("pattern: qubit " + step.target + " measured twice");
    }
    if (outputs_set.count(step.target) != 0) {
      throw ValidationError("pattern: output qubit " + step.target + " is measured");
    }
    for (const auto* deps : {&step.basis.sign_deps, &step.basis.pi_deps}) {
      for (const std::string& dep : *deps) {
        if (dep == step.target || measured_so_far.count(dep) == 0) {
          throw ValidationError("pattern: step " + step.target +
                                " depends on outcome " + dep +
                                " that is not strictly earlier");
        }
      }
    }
    if (step.basis.kind == BasisKind::fixed_unitary) {
      if (step.basis.fixed.rows() != 2 || step.basis.fixed.cols() != 2 ||
          ((step.basis.fixed.adjoint() * step.basis.fixed) - Matrix::Identity(2, 2))
                  .cwiseAbs()
                  .maxCoeff() > kUnitaryTol) {
        throw ValidationError("pattern: fixed basis for " + step.target + " is not unitary");
      }
    }
  }
  for (const Correction& c : corrections) {
    if (measured_so_far.count(c.target) != 0) {
      throw ValidationError("pattern: correction targets measured qubit " + c.target);
    }
    if (c.op != 'X' && c.op != 'Y' && c.op != 'Z') {
      throw ValidationError("pattern: correction op must be X, Y or Z");
    }
    for (const std::string& dep : c.deps) {
      if (measured_so_far.count(dep) == 0) {
        throw ValidationError("pattern: correction depends on unmeasured qubit " + dep);
      }
    }
  }
}

MeasurementPattern MeasurementPattern::from_json(const nlohmann::json& j) {
  MeasurementPattern pattern;
  try {
    for (const auto& js : j.at("steps")) {
      MeasurementStep step;
      step.target = js.at("target").get<std::string>();
      const auto& jb = js.at("basis");
      const std::string plane = jb.at("plane").get<std::string>();
      if (plane == "computational") {
        step.basis.kind = BasisKind::computational;
      } else if (plane == "XY") {
        step.basis.kind = BasisKind::rotated_xy;
        step.basis.theta0 = jb.at("theta").get<double>();
        for (const auto& d : jb.value("sign_deps", nlohmann::json::array())) {
          step.basis.sign_deps.push_back(d.get<std::string>());
        }
        for (const auto& d : jb.value("pi_deps", nlohmann::json::array())) {
          step.basis.pi_deps.push_back(d.get<std::string>());
        }
      } else if (plane == "fixed") {
        step.basis.kind = BasisKind::fixed_unitary;
        step.basis.fixed = complex_2x2_from_json(jb.at("matrix"));
      } else {
        throw ValidationError("pattern: unknown basis plane " + plane);
      }
      pattern.steps.push_back(std::move(step));
    }
    for (const auto& jo : j.at("outputs")) {
      pattern.outputs.push_back(jo.get<std::string>());
    }
    for (const auto& jc : j.value("corrections", nlohmann::json::array())) {
      Correction c;
      c.target = jc.at("target").get<std::string>();
      const std::string op = jc.at("op").get<std::string>();
      if (op.size() != 1) {
        throw ValidationError("pattern: correction op must be X, Y or Z");
      }
      c.op = op[0];
      for (const auto& d : jc.value("deps", nlohmann::json::array())) {
        c.deps.push_back(d.get<std::string>());
      }
      c.negate = jc.value("negate", false);
      pattern.corrections.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("pattern: malformed JSON: ") + e.what());
  }
  pattern.validate();
  return pattern;
}

nlohmann::json MeasurementPattern::to_json() const {
  nlohmann::json j;
  j["steps"] = nlohmann::json::array();
  for (const MeasurementStep& step : steps) {
    nlohmann::json jb;
    switch (step.basis.kind) {
      case BasisKind::computational:
        jb = {{"plane", "computational"}};
        break;
      case BasisKind::rotated_xy:
        jb = {{"plane", "XY"},
              {"theta", step.basis.theta0},
              {"sign_deps", step.basis.sign_deps},
              {"pi_deps", step.basis.pi_deps}};
        break;
      case BasisKind::fixed_unitary:
        jb = {{"plane", "fixed"}, {"matrix", complex_2x2_to_json(step.basis.fixed)}};
        break;
    }
    j["steps"].push_back({{"target", step.target}, {"basis", jb}});
  }
  j["outputs"] = outputs;
  j["corrections"] = nlohmann::json::array();
  for (const Correction& c : corrections) {
    j["corrections"].push_back({{"target", c.target},
                                {"op", std::string(1, c.op)},
                                {"deps", c.deps},
                                {"negate", c.negate}});
  }
  return j;
}

MeasurementPattern x_basis_pattern(const std::vector<std::string>& targets,
                                   const std::vector<std::string>& outputs) {
  MeasurementPattern pattern;
  for (const std::string& target : targets) {
    MeasurementStep step;
    step.target = target;
    step.basis.kind = BasisKind::rotated_xy;
    step.basis.theta0 = 0.0;
    pattern.steps.push_back(std::move(step));
  }
  pattern.outputs = outputs;
  pattern.validate();
  return pattern;
}

}  // namespace mpsim
