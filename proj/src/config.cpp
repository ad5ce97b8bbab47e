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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "ladder_sqd/pipeline.hpp"

namespace lsqd {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  require(ec == std::errc() && ptr == s.data() + s.size() && !s.empty(), ErrorCode::Parse,
          "bad value for " + key + ": '" + text + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string s = lower(trim(text));
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  fail(ErrorCode::Parse, "bad boolean for " + key + ": '" + text + "'");
}

std::string fmt(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}
std::string fmt(bool b) { return b ? "true" : "false"; }
template <typename T>
std::string fmt_int(T v) {
  return std::to_string(v);
}

template <typename T, typename F>
std::string join(const std::vector<T>& v, F f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += f(v[i]);
  }
  return out;
}

SeriesSpec parse_series(const std::string& key, const std::string& s) {
  const auto parts = split(s, ':');
  require(parts.size() == 2, ErrorCode::Parse, "series entries are basis:mode in " + key);
  try {
    return {basis_kind_from_string(parts[0]), symmetrize_mode_from_string(parts[1])};
  } catch (const Error& e) {
    fail(ErrorCode::Parse, key + ": " + e.what());
  }
}

TuneRow parse_tune_row(const std::string& key, const std::string& s) {
  const auto parts = split(s, ':');
  require(parts.size() == 2 || parts.size() == 3, ErrorCode::Parse,
          "tune rows are N:electrons[:t_perp] in " + key);
  TuneRow r;
  r.n_rungs = parse_number<int>(key, parts[0]);
  r.n_electrons = parse_number<int>(key, parts[1]);
  if (parts.size() == 3) r.reference = parse_number<double>(key, parts[2]);
  return r;
}

struct Entry {
  const char* section;
  const char* key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define LSQD_NUM(sec, name, field, T)                                                  \
  Entry {                                                                             \
    sec, name,                                                                        \
        [](RunConfig& c, const std::string& v) {                                      \
          c.field = parse_number<T>(std::string(sec) + "." + name, v);                \
        },                                                                            \
        [](const RunConfig& c) { return fmt_int(c.field); }                           \
  }
#define LSQD_REAL(sec, name, field)                                                    \
  Entry {                                                                             \
    sec, name,                                                                        \
        [](RunConfig& c, const std::string& v) {                                      \
          c.field = parse_number<double>(std::string(sec) + "." + name, v);           \
        },                                                                            \
        [](const RunConfig& c) { return fmt(c.field); }                               \
  }
#define LSQD_BOOL(sec, name, field)                                                    \
  Entry {                                                                             \
    sec, name,                                                                        \
        [](RunConfig& c, const std::string& v) {                                      \
          c.field = parse_bool(std::string(sec) + "." + name, v);                     \
        },                                                                            \
        [](const RunConfig& c) { return fmt(c.field); }                               \
  }
#define LSQD_STR(sec, name, field)                                                     \
  Entry {                                                                             \
    sec, name, [](RunConfig& c, const std::string& v) { c.field = trim(v); },         \
        [](const RunConfig& c) { return c.field; }                                    \
  }

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& v) {
  std::vector<T> out;
  for (const auto& p : split(v, ',')) out.push_back(parse_number<T>(key, p));
  return out;
}

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      LSQD_NUM("run", "seed", seed, u64),
      LSQD_NUM("run", "threads", threads, int),
      LSQD_NUM("model", "n_rungs", model.n_rungs, int),
      LSQD_NUM("model", "n_up", model.n_up, int),
      LSQD_NUM("model", "n_down", model.n_down, int),
      LSQD_REAL("model", "t", model.t),
      LSQD_REAL("model", "t_perp", model.t_perp),
      LSQD_REAL("model", "u", model.u),
      Entry{"basis", "kind",
            [](RunConfig& c, const std::string& v) {
              try {
                c.basis = basis_kind_from_string(trim(v));
              } catch (const Error& e) {
                fail(ErrorCode::Parse, std::string("basis.kind: ") + e.what());
              }
            },
            [](const RunConfig& c) { return to_string(c.basis); }},
      Entry{"sampler", "kind",
            [](RunConfig& c, const std::string& v) {
              c.sampler.kind = sampler_kind_from_string(trim(v));
            },
            [](const RunConfig& c) { return to_string(c.sampler.kind); }},
      LSQD_NUM("sampler", "shots", sampler.shots, u64),
      LSQD_NUM("sampler", "keep", sampler.keep, std::size_t),
      LSQD_REAL("sampler", "tolerance", sampler.tolerance),
      LSQD_STR("sampler", "momentum_sector", sampler.momentum_sector),
      LSQD_STR("sampler", "file", sampler.file),
      LSQD_REAL("noise", "p_flip", p_flip),
      LSQD_NUM("recovery", "iterations", recovery.iterations, int),
      LSQD_BOOL("recovery", "fresh_stream", recovery.fresh_stream),
      LSQD_BOOL("recovery", "uniform_fallback", recovery.uniform_fallback),
      LSQD_BOOL("subspace", "closed_shell", subspace.closed_shell),
      LSQD_NUM("subspace", "max_configs", subspace.max_configs, std::size_t),
      Entry{"symmetry", "mode",
            [](RunConfig& c, const std::string& v) {
              c.symmetry.mode = symmetrize_mode_from_string(trim(v));
            },
            [](const RunConfig& c) { return to_string(c.symmetry.mode); }},
      LSQD_STR("symmetry", "group", symmetry.group),
      LSQD_STR("symmetry", "group_file", symmetry.group_file),
      LSQD_REAL("symmetry", "threshold", symmetry.threshold),
      LSQD_REAL("solver", "tol", solver.tol),
      LSQD_NUM("solver", "max_iter", solver.max_iter, int),
      LSQD_NUM("solver", "max_subspace", solver.max_subspace, int),
      LSQD_NUM("solver", "dense_threshold", solver.dense_threshold, std::size_t),
      LSQD_BOOL("solver", "cache", solver.cache),
      LSQD_NUM("solver", "cache_mb", solver.cache_mb, std::size_t),
      LSQD_NUM("solver", "exact_max_dim", solver.exact_max_dim, std::size_t),
      Entry{"sweep", "schedule",
            [](RunConfig& c, const std::string& v) {
              c.sweep.schedule = parse_list<std::size_t>("sweep.schedule", v);
            },
            [](const RunConfig& c) {
              return join(c.sweep.schedule, [](std::size_t x) { return std::to_string(x); });
            }},
      Entry{"sweep", "series",
            [](RunConfig& c, const std::string& v) {
              c.sweep.series.clear();
              for (const auto& p : split(v, ','))
                c.sweep.series.push_back(parse_series("sweep.series", p));
            },
            [](const RunConfig& c) {
              return join(c.sweep.series, [](const SeriesSpec& s) { return to_string(s); });
            }},
      LSQD_BOOL("sweep", "parallel", sweep.parallel),
      Entry{"tune", "rows",
            [](RunConfig& c, const std::string& v) {
              c.tune.rows.clear();
              for (const auto& p : split(v, ','))
                c.tune.rows.push_back(parse_tune_row("tune.rows", p));
            },
            [](const RunConfig& c) {
              return join(c.tune.rows, [](const TuneRow& r) {
                std::string s = std::to_string(r.n_rungs) + ":" + std::to_string(r.n_electrons);
                if (r.reference) s += ":" + fmt(*r.reference);
                return s;
              });
            }},
      LSQD_REAL("tune", "lo", tune.lo),
      LSQD_REAL("tune", "hi", tune.hi),
      LSQD_REAL("tune", "window", tune.window),
      LSQD_REAL("tune", "tolerance", tune.tolerance),
      Entry{"correlations", "schedule",
            [](RunConfig& c, const std::string& v) {
              c.correlations.schedule = parse_list<std::size_t>("correlations.schedule", v);
            },
            [](const RunConfig& c) {
              return join(c.correlations.schedule,
                          [](std::size_t x) { return std::to_string(x); });
            }},
      Entry{"correlations", "distance",
            [](RunConfig& c, const std::string& v) {
              try {
                c.correlations.distance = distance_kind_from_string(trim(v));
              } catch (const Error& e) {
                fail(ErrorCode::Parse, std::string("correlations.distance: ") + e.what());
              }
            },
            [](const RunConfig& c) { return to_string(c.correlations.distance); }},
      LSQD_NUM("correlations", "r_min", correlations.r_min, int),
      LSQD_NUM("correlations", "r_max", correlations.r_max, int),
      LSQD_BOOL("correlations", "exclude_midpoint", correlations.exclude_midpoint),
      LSQD_NUM("correlations", "origin", correlations.origin, int),
      LSQD_BOOL("correlations", "include_rhf", correlations.include_rhf),
      LSQD_NUM("correlations", "table_budget_mb", correlations.table_budget_mb, std::size_t),
      LSQD_BOOL("oracle", "corrupt_hermiticity", oracle.corrupt_hermiticity),
      LSQD_STR("output", "dir", output_dir),
  };
  return entries;
}

#undef LSQD_NUM
#undef LSQD_REAL
#undef LSQD_BOOL
#undef LSQD_STR

const Entry& find_entry(const std::string& section, const std::string& key) {
  for (const auto& e : registry()) {
    if (section == e.section && key == e.key) return e;
  }
  fail(ErrorCode::Parse, "unknown config key " + section + "." + key);
}

}  // namespace

std::string to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::Exact: return "exact";
    case SamplerKind::Truncated: return "truncated";
    case SamplerKind::Uniform: return "uniform";
    case SamplerKind::Rhf: return "rhf";
    case SamplerKind::File: return "file";
    case SamplerKind::Full: return "full";
  }
  return "?";
}

SamplerKind sampler_kind_from_string(const std::string& s) {
  const std::string l = lower(s);
  for (auto k : {SamplerKind::Exact, SamplerKind::Truncated, SamplerKind::Uniform,
                 SamplerKind::Rhf, SamplerKind::File, SamplerKind::Full}) {
    if (l == to_string(k)) return k;
  }
  fail(ErrorCode::Parse, "unknown sampler '" + s + "'");
}

std::string to_string(SymmetrizeMode mode) {
  switch (mode) {
    case SymmetrizeMode::Off: return "off";
    case SymmetrizeMode::Determinant: return "determinant";
    case SymmetrizeMode::Config: return "config";
  }
  return "?";
}

SymmetrizeMode symmetrize_mode_from_string(const std::string& s) {
  const std::string l = lower(s);
  if (l == "off" || l == "none" || l == "false") return SymmetrizeMode::Off;
  if (l == "determinant" || l == "on" || l == "true") return SymmetrizeMode::Determinant;
  if (l == "config") return SymmetrizeMode::Config;
  fail(ErrorCode::Parse, "unknown symmetrization mode '" + s + "'");
}

std::string to_string(const SeriesSpec& s) {
  return to_string(s.basis) + ":" + to_string(s.symmetrize);
}

void RunConfig::validate() const {
  model.validate();
  require(threads >= 0, ErrorCode::InvalidArgument, "threads must be >= 0");
  require(sampler.shots > 0 || sampler.kind == SamplerKind::Full ||
              sampler.kind == SamplerKind::File,
          ErrorCode::InvalidArgument, "sampler.shots must be positive");
  require(sampler.tolerance > 0.0, ErrorCode::InvalidArgument, "sampler.tolerance must be > 0");
  require(sampler.kind != SamplerKind::Truncated || sampler.keep > 0,
          ErrorCode::InvalidArgument, "sampler.keep must be positive");
  require(sampler.momentum_sector == "rhf" || sampler.momentum_sector == "all",
          ErrorCode::InvalidArgument, "sampler.momentum_sector must be rhf or all");
  if (sampler.kind == SamplerKind::File) {
    require(!sampler.file.empty(), ErrorCode::InvalidArgument, "sampler.file is required");
    require(std::filesystem::exists(sampler.file), ErrorCode::NotFound,
            "sample file not found: " + sampler.file);
  }
  NoiseModel{p_flip, 0}.validate();
  require(recovery.iterations >= 1, ErrorCode::InvalidArgument,
          "recovery.iterations must be at least 1");
  if (symmetry.group == "file") {
    require(!symmetry.group_file.empty(), ErrorCode::InvalidArgument,
            "symmetry.group_file is required for group = file");
    require(std::filesystem::exists(symmetry.group_file), ErrorCode::NotFound,
            "group file not found: " + symmetry.group_file);
  }
  require(symmetry.threshold >= 0.0, ErrorCode::InvalidArgument, "symmetry.threshold must be >= 0");
  require(solver.tol > 0.0 && solver.max_iter > 0 && solver.max_subspace >= 2,
          ErrorCode::InvalidArgument, "invalid solver settings");
  require(tune.lo < tune.hi && tune.window > 0.0 && tune.tolerance > 0.0,
          ErrorCode::InvalidArgument,
          "invalid tune bracket");
  for (const auto& r : tune.rows) {
    require(r.n_rungs >= 1 && r.n_electrons >= 0 && r.n_electrons % 2 == 0,
            ErrorCode::InvalidArgument, "tune rows need N >= 1 and an even electron count");
  }
  require(correlations.origin >= 0 && correlations.origin < model.n_rungs,
          ErrorCode::InvalidArgument, "correlations.origin out of range");
}

RunConfig parse_config(std::istream& is) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorCode::Parse, std::string("config: ") + e.what());
  }
  RunConfig cfg;
  for (const auto& [section, body] : tree) {
    require(body.data().empty(), ErrorCode::Parse,
            "config: key '" + section + "' outside a section");
    for (const auto& [key, value] : body) {
      find_entry(section, key).set(cfg, value.data());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::NotFound, "cannot open config " + path);
  return parse_config(in);
}

void set_config_value(RunConfig& cfg, const std::string& dotted_key, const std::string& value) {
  const auto dot = dotted_key.find('.');
  require(dot != std::string::npos, ErrorCode::Parse, "config keys are section.key");
  find_entry(dotted_key.substr(0, dot), dotted_key.substr(dot + 1)).set(cfg, value);
}

void dump_config(std::ostream& os, const RunConfig& cfg) {
  std::string section;
  for (const auto& e : registry()) {
    if (section != e.section) {
      if (!section.empty()) os << '\n';
      section = e.section;
      os << '[' << section << "]\n";
    }
    os << e.key << " = " << e.get(cfg) << '\n';
  }
}

std::string dump_config(const RunConfig& cfg) {
  std::ostringstream os;
  dump_config(os, cfg);
  return os.str();
}

u64 config_hash(const RunConfig& cfg) {
  u64 h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump_config(cfg)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace lsqd
