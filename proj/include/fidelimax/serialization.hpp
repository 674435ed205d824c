// Copyright 2026 The fidelimax authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FIDELIMAX_SERIALIZATION_HPP
#define FIDELIMAX_SERIALIZATION_HPP

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "fidelimax/errors.hpp"
#include "fidelimax/estimator.hpp"
#include "fidelimax/operators.hpp"
#include "fidelimax/sha256.hpp"

namespace fidelimax {

using nlohmann::json;

inline constexpr int kEstimatorSchemaVersion = 1;
inline constexpr int kFileSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Matrix <-> JSON. A matrix is a row-major list of rows; every entry is a
// two-element array [re, im].
// ---------------------------------------------------------------------------

inline json matrix_to_json(const Cmatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Cmatrix matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) {
    throw parse_error(what + ": expected a non-empty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  Cmatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw parse_error(what + ": ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& entry = row.at(static_cast<std::size_t>(c));
      if (!entry.is_array() || entry.size() != 2 || !entry.at(0).is_number() ||
          !entry.at(1).is_number()) {
        throw parse_error(what + ": entries must be [re, im] pairs");
      }
      m(i, c) = Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Plan <-> JSON.
// ---------------------------------------------------------------------------

inline json plan_to_json(const MeasurementPlan& plan) {
  json j;
  j["version"] = kFileSchemaVersion;
  j["dimension"] = plan.dim;
  j["epsilon"] = plan.epsilon;
  j["epsilon_o"] = plan.epsilon_o;
  j["target"] = matrix_to_json(plan.target.mat());
  json settings = json::array();
  for (const auto& s : plan.settings) {
    json js;
    js["label"] = s.label;
    js["repetitions"] = s.repetitions;
    json effects = json::array();
    for (const auto& e : s.effects) effects.push_back(matrix_to_json(e.mat()));
    js["effects"] = std::move(effects);
    settings.push_back(std::move(js));
  }
  j["settings"] = std::move(settings);
  return j;
}

inline MeasurementPlan plan_from_json(const json& j) {
  try {
    const auto dim = j.at("dimension").get<Eigen::Index>();
    const double epsilon = j.at("epsilon").get<double>();
    const double epsilon_o = j.value("epsilon_o", 1e-5);
    DensityMatrix target{matrix_from_json(j.at("target"), "target")};
    std::vector<PovmSetting> settings;
    for (const auto& js : j.at("settings")) {
      PovmSetting s;
      s.label = js.value("label", "");
      s.repetitions = js.at("repetitions").get<std::int64_t>();
      for (const auto& je : js.at("effects")) {
        s.effects.emplace_back(matrix_from_json(je, "effect of '" + s.label + "'"));
      }
      settings.push_back(std::move(s));
    }
    MeasurementPlan plan(std::move(target), epsilon, std::move(settings), epsilon_o);
    if (plan.dim != dim) {
      throw invalid_input_error("plan: declared dimension does not match target");
    }
    return plan;
  } catch (const json::exception& e) {
    throw parse_error(std::string("plan: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Canonical plan encoding and fingerprint. The encoding is a JSON text with
// alphabetically sorted keys and every number printed with %.17g (negative
// zero normalized to zero), so byte-equality is well-defined across
// platforms. The fingerprint is its SHA-256 hex digest.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string canonical_number(double x) {
  if (x == 0.0) x = 0.0;  // collapse -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string canonical_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (static_cast<unsigned char>(c) < 0x20) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\u%04x", c);
      out += buf;
    } else {
      out += c;
    }
  }
  out += '"';
  return out;
}

inline void canonical_matrix(const Cmatrix& m, std::string& out) {
  out += '[';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i) out += ',';
    out += '[';
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += '[';
      out += canonical_number(m(i, j).real());
      out += ',';
      out += canonical_number(m(i, j).imag());
      out += ']';
    }
    out += ']';
  }
  out += ']';
}

}  // namespace detail

inline std::string canonical_plan_encoding(const MeasurementPlan& plan) {
  std::string out = "{\"dimension\":" + std::to_string(plan.dim);
  out += ",\"epsilon\":" + detail::canonical_number(plan.epsilon);
  out += ",\"epsilon_o\":" + detail::canonical_number(plan.epsilon_o);
  out += ",\"settings\":[";
  for (std::size_t l = 0; l < plan.settings.size(); ++l) {
    const auto& s = plan.settings[l];
    if (l) out += ',';
    out += "{\"effects\":[";
    for (std::size_t k = 0; k < s.effects.size(); ++k) {
      if (k) out += ',';
      detail::canonical_matrix(s.effects[k].mat(), out);
    }
    out += "],\"label\":" + detail::canonical_string(s.label);
    out += ",\"repetitions\":" + std::to_string(s.repetitions) + "}";
  }
  out += "],\"target\":";
  detail::canonical_matrix(plan.target.mat(), out);
  out += '}';
  return out;
}

inline std::string plan_fingerprint(const MeasurementPlan& plan) {
  return sha256_hex(canonical_plan_encoding(plan));
}

// ---------------------------------------------------------------------------
// Estimator <-> JSON text.
// ---------------------------------------------------------------------------

inline std::string serialize(const AffineEstimator& est) {
  json j;
  j["version"] = kEstimatorSchemaVersion;
  j["constant"] = est.constant;
  j["risk"] = est.risk;
  j["epsilon"] = est.epsilon;
  j["epsilon_o"] = est.epsilon_o;
  j["repetitions"] = est.repetitions;
  j["coefficients"] = est.coefficients;
  j["plan_fingerprint"] = est.plan_fingerprint;
  return j.dump(2) + "\n";
}

inline AffineEstimator deserialize(const std::string& bytes) {
  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::exception& e) {
    throw parse_error(std::string("estimator: invalid JSON: ") + e.what());
  }
  try {
    if (!j.contains("version") || !j.at("version").is_number_integer()) {
      throw parse_error("estimator: missing schema version");
    }
    if (j.at("version").get<int>() != kEstimatorSchemaVersion) {
      throw parse_error("estimator: unknown schema version " +
                        j.at("version").dump());
    }
    AffineEstimator est;
    est.constant = j.at("constant").get<double>();
    est.risk = j.at("risk").get<double>();
    est.epsilon = j.at("epsilon").get<double>();
    est.epsilon_o = j.at("epsilon_o").get<double>();
    est.repetitions = j.at("repetitions").get<std::vector<std::int64_t>>();
    est.coefficients = j.at("coefficients").get<std::vector<std::vector<double>>>();
    est.plan_fingerprint = j.at("plan_fingerprint").get<std::string>();
    est.validate();
    return est;
  } catch (const json::exception& e) {
    throw parse_error(std::string("estimator: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Dataset <-> JSON.
// ---------------------------------------------------------------------------

inline json dataset_to_json(const Dataset& data) {
  json j;
  j["version"] = kFileSchemaVersion;
  j["counts"] = data.counts;
  if (!data.plan_fingerprint.empty()) j["plan_fingerprint"] = data.plan_fingerprint;
  return j;
}

inline Dataset dataset_from_json(const json& j) {
  try {
    Dataset data;
    data.counts = j.at("counts").get<std::vector<std::vector<std::int64_t>>>();
    data.plan_fingerprint = j.value("plan_fingerprint", "");
    data.validate();
    return data;
  } catch (const json::exception& e) {
    throw parse_error(std::string("dataset: ") + e.what());
  }
}

}  // namespace fidelimax

#endif  // FIDELIMAX_SERIALIZATION_HPP
