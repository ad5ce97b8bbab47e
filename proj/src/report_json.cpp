// Copyright 2026 The ladder-sqd Authors
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

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "ladder_sqd/pipeline.hpp"

namespace lsqd {
namespace {

using nlohmann::json;

// JSON has no NaN; missing values become null.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string hex(u64 x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

}  // namespace

std::string to_json(const RunReport& r) {
  json j;
  j["basis"] = to_string(r.basis);
  j["sampler"] = to_string(r.sampler);
  j["symmetrize"] = to_string(r.symmetrize);
  j["seed"] = r.seed;
  j["shots"] = r.shots;
  j["max_configs"] = r.max_configs;
  j["dimensions"] = {{"sampled", r.sampled_dim},
                     {"recovered", r.recovered_dim},
                     {"closed_shell", r.closed_shell_dim},
                     {"symmetrized", r.symmetrized_dim}};
  j["energy"] = {{"D", r.dim}, {"value", number(r.energy)}, {"residual", number(r.residual)}};
  j["reference_energy"] = r.reference_energy ? number(*r.reference_energy) : json(nullptr);
  json its = json::array();
  for (const auto& it : r.iterations) {
    its.push_back({{"recovered", it.recovered_dim},
                   {"closed_shell", it.build.closed_shell_dim},
                   {"one_pass", it.build.one_pass_dim},
                   {"symmetrized", it.build.symmetrized_dim},
                   {"passes", it.build.symmetrize_passes},
                   {"D", it.build.symmetrized_dim},
                   {"energy", number(it.energy)},
                   {"drift", number(it.drift)}});
  }
  j["iterations"] = its;
  j["seconds"] = {{"sample", r.sample_seconds}, {"solve", r.solve_seconds}, {"total", r.total_seconds}};
  return j.dump(2);
}

std::string to_json(const SweepReport& r) {
  json j;
  j["seed"] = r.seed;
  j["reference_energy"] = r.reference_energy ? number(*r.reference_energy) : json(nullptr);
  json pts = json::array();
  for (const auto& p : r.points) {
    json q = {{"basis", to_string(p.series.basis)},
              {"symmetrize", to_string(p.series.symmetrize)},
              {"max_configs", p.max_configs},
              {"D", p.dim},
              {"closed_shell_D", p.closed_shell_dim},
              {"expansion_ratio", number(p.expansion_ratio)},
              {"energy", number(p.energy)}};
    if (!p.error.empty()) q["error"] = p.error;
    pts.push_back(q);
  }
  j["points"] = pts;
  return j.dump(2);
}

std::string to_json(const std::vector<TuneReportRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json q = {{"n_rungs", r.row.n_rungs},
              {"n_electrons", r.row.n_electrons},
              {"t_perp", number(r.t_perp)},
              {"crossing", number(r.crossing)},
              {"gap", number(r.gap)}};
    if (r.row.reference) q["reference_t_perp"] = *r.row.reference;
    if (r.reference_gap) q["reference_gap"] = number(*r.reference_gap);
    if (!r.error.empty()) q["error"] = r.error;
    arr.push_back(q);
  }
  return json{{"rows", arr}}.dump(2);
}

std::string to_json(const CorrelationReport& r) {
  json arr = json::array();
  for (std::size_t i = 0; i < r.series.size(); ++i) {
    const auto& s = r.series[i];
    const auto& f = r.fits[i];
    json vals = json::array();
    for (const auto& [sep, p] : s.values) vals.push_back({sep, number(p.real()), number(p.imag())});
    arr.push_back({{"label", s.label},
                   {"basis", to_string(s.basis)},
                   {"D", s.dim},
                   {"seed", s.seed},
                   {"values", vals},
                   {"fit",
                    {{"c", number(f.c)},
                     {"residual", number(f.residual)},
                     {"points", f.points},
                     {"distance", to_string(f.distance)}}}});
  }
  return json{{"series", arr}}.dump(2);
}

std::string to_json(const OracleReport& r) {
  json arr = json::array();
  for (const auto& c : r.checks) {
    json q = {{"name", c.name},
              {"passed", c.passed},
              {"value", number(c.value)},
              {"tolerance", c.tolerance}};
    if (!c.detail.empty()) q["detail"] = c.detail;
    arr.push_back(q);
  }
  return json{{"passed", r.passed()}, {"checks", arr}}.dump(2);
}

std::string run_manifest(const RunConfig& cfg, const std::string& command) {
  json j = {{"command", command},
            {"version", version()},
            {"config_hash", hex(config_hash(cfg))},
            {"seed", cfg.seed},
            {"threads", cfg.threads},
            {"config", dump_config(cfg)}};
  return j.dump(2);
}

}  // namespace lsqd
