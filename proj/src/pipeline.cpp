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

#include "ladder_sqd/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include <omp.h>

#include "ladder_sqd/random.hpp"
#include "ladder_sqd/symmetry.hpp"

namespace lsqd {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void apply_threads(const RunConfig& cfg) {
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
}

std::string trial_key(const RunConfig& cfg) {
  std::ostringstream os;
  os << std::setprecision(17) << cfg.model.n_rungs << ' ' << cfg.model.n_up << ' '
     << cfg.model.n_down << ' ' << cfg.model.t << ' ' << cfg.model.t_perp << ' ' << cfg.model.u
     << ' ' << cfg.sampler.tolerance << ' ' << cfg.sampler.momentum_sector << ' '
     << cfg.solver.exact_max_dim;
  return os.str();
}

DavidsonOptions davidson_options(const RunConfig& cfg) {
  DavidsonOptions d;
  d.tol = cfg.solver.tol;
  d.max_iter = cfg.solver.max_iter;
  d.max_subspace = cfg.solver.max_subspace;
  return d;
}

/// Total-momentum index of the RHF determinant, or -1 when the closed-shell
/// filling is degenerate.
int rhf_momentum_sector(const IntegralTensors& ints, const BasisTransform& basis, int n_up,
                        int n_down) {
  try {
    return total_momentum_index(rhf_determinant(ints, n_up, n_down), basis);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) return -1;
    throw;
  }
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  require(static_cast<bool>(out), ErrorCode::Io, "cannot write " + p.string());
  out << text;
  require(static_cast<bool>(out), ErrorCode::Io, "write failed: " + p.string());
}

std::filesystem::path output_path(const RunConfig& cfg, const std::string& name) {
  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

const char* version() { return "0.1.0"; }

u64 stage_seed(u64 seed, Stage stage) { return shard_seed(seed, static_cast<u64>(stage)); }

SolverSettings solver_settings(const RunConfig& cfg) {
  SolverSettings s;
  s.davidson = davidson_options(cfg);
  s.matvec.cache_connectivity = cfg.solver.cache;
  s.matvec.cache_cap_bytes = cfg.solver.cache_mb << 20;
  s.dense_threshold = cfg.solver.dense_threshold;
  return s;
}

SymmetryGroup configured_group(const RunConfig& cfg, const BasisTransform& basis) {
  std::vector<std::string> labels;
  if (cfg.symmetry.group == "file") {
    std::ifstream in(cfg.symmetry.group_file);
    require(static_cast<bool>(in), ErrorCode::NotFound,
            "cannot open group file " + cfg.symmetry.group_file);
    labels = parse_group_definition(in);
  } else {
    labels = group_preset(cfg.symmetry.group, basis.n_rungs, basis.kind);
  }
  return make_group(basis, labels);
}

const TrialState& TrialCache::get(const RunConfig& cfg, BasisKind basis) {
  const std::string key = trial_key(cfg);
  if (key != key_) {
    states_.clear();
    key_ = key;
  }
  if (auto it = states_.find(basis); it != states_.end()) return it->second;

  DavidsonOptions dopt = davidson_options(cfg);
  dopt.tol = cfg.sampler.tolerance;
  TrialState st;
  st.basis = basis;
  if (basis == BasisKind::MolecularOrbital) {
    const TrialState& mom = get(cfg, BasisKind::Momentum);
    const auto from = build_basis_transform(cfg.model, BasisKind::Momentum);
    const auto to = build_basis_transform(cfg.model, BasisKind::MolecularOrbital);
    auto [dets, amps] = change_basis(mom.dets, mom.amplitudes, from, to);
    st.dets = std::move(dets);
    st.amplitudes = std::move(amps);
    st.amplitudes.normalize();
    st.energy = mom.energy;
  } else {
    int sector = -1;
    if (basis == BasisKind::Momentum && cfg.sampler.momentum_sector == "rhf") {
      const auto bt = build_basis_transform(cfg.model, basis);
      sector = rhf_momentum_sector(build_hamiltonian(cfg.model, bt), bt, cfg.model.n_up,
                                   cfg.model.n_down);
    }
    ExactResult ex = exact_ground_state(cfg.model, basis, dopt, cfg.solver.exact_max_dim, sector);
    st.dets = std::move(ex.subspace);
    st.amplitudes = std::move(ex.solution.amplitudes);
    st.energy = ex.solution.energy;
  }
  return states_.emplace(basis, std::move(st)).first->second;
}

BitstringSample draw_sample(const RunConfig& cfg, BasisKind basis, TrialCache* cache) {
  TrialCache local;
  TrialCache& tc = cache ? *cache : local;
  const int m = cfg.model.n_orbitals();
  const u64 seed = stage_seed(cfg.seed, Stage::Sample);
  BitstringSample s;
  switch (cfg.sampler.kind) {
    case SamplerKind::Exact: {
      const TrialState& t = tc.get(cfg, basis);
      s = surrogate_sample(t.dets, t.amplitudes, cfg.sampler.shots, seed, m);
      break;
    }
    case SamplerKind::Truncated: {
      const TrialState& t = tc.get(cfg, basis);
      std::vector<std::size_t> order(t.dets.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      const std::size_t keep = std::min(cfg.sampler.keep, order.size());
      std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep),
                        order.end(), [&](std::size_t a, std::size_t b) {
                          const double wa = std::norm(t.amplitudes[static_cast<Eigen::Index>(a)]);
                          const double wb = std::norm(t.amplitudes[static_cast<Eigen::Index>(b)]);
                          return wa != wb ? wa > wb : t.dets[a] < t.dets[b];
                        });
      order.resize(keep);
      std::sort(order.begin(), order.end());
      std::vector<Determinant> dets;
      CVector amps(static_cast<Eigen::Index>(keep));
      for (std::size_t i = 0; i < keep; ++i) {
        dets.push_back(t.dets[order[i]]);
        amps[static_cast<Eigen::Index>(i)] = t.amplitudes[static_cast<Eigen::Index>(order[i])];
      }
      amps.normalize();
      s = surrogate_sample(SubspaceSet(std::move(dets)), amps, cfg.sampler.shots, seed, m);
      break;
    }
    case SamplerKind::Uniform:
      s = uniform_sector_sample(m, cfg.model.n_up, cfg.model.n_down, cfg.sampler.shots, seed);
      break;
    case SamplerKind::Rhf: {
      const auto bt = build_basis_transform(cfg.model, basis);
      s.n_orb = m;
      s.add(rhf_determinant(build_hamiltonian(cfg.model, bt), cfg.model.n_up, cfg.model.n_down),
            cfg.sampler.shots);
      break;
    }
    case SamplerKind::File: {
      std::ifstream in(cfg.sampler.file);
      require(static_cast<bool>(in), ErrorCode::NotFound,
              "cannot open sample file " + cfg.sampler.file);
      s = read_sample(in, m);
      break;
    }
    case SamplerKind::Full:
      fail(ErrorCode::InvalidArgument, "the full sampler draws no bitstrings");
  }
  return inject_noise(s, NoiseModel{cfg.p_flip, stage_seed(cfg.seed, Stage::Noise)});
}

RunReport run_sqd_on_sample(const RunConfig& cfg, const BitstringSample& noisy,
                            const IntegralTensors& ints, const BasisTransform& basis) {
  const auto t0 = Clock::now();
  RunReport rep;
  rep.basis = basis.kind;
  rep.sampler = cfg.sampler.kind;
  rep.symmetrize = cfg.symmetry.mode;
  rep.seed = cfg.seed;
  rep.shots = noisy.shots();
  rep.max_configs = cfg.subspace.max_configs;

  std::optional<SymmetryGroup> group;
  RecoveryLoopOptions ro;
  ro.iterations = cfg.recovery.iterations;
  ro.subspace.closed_shell = cfg.subspace.closed_shell;
  ro.subspace.max_configs = cfg.subspace.max_configs;
  ro.subspace.symmetrize = cfg.symmetry.mode;
  ro.subspace.coeff_threshold = cfg.symmetry.threshold;
  if (cfg.symmetry.mode != SymmetrizeMode::Off) {
    group = configured_group(cfg, basis);
    ro.subspace.group = &*group;
  }
  ro.solver = solver_settings(cfg);
  ro.uniform_fallback = cfg.recovery.uniform_fallback;
  ro.seed = stage_seed(cfg.seed, Stage::Recovery);
  ro.fresh_stream_per_iteration = cfg.recovery.fresh_stream;

  RecoveryLoopResult res;
  try {
    res = recovery_loop(noisy, ints, cfg.model.n_up, cfg.model.n_down, ro);
  } catch (const Error& e) {
    fail(e.code(), std::string("recovery: ") + e.what());
  }
  const auto& last = res.iterations.back();
  rep.sampled_dim = res.sampled_dim;
  rep.recovered_dim = last.recovered_dim;
  rep.closed_shell_dim = last.build.closed_shell_dim;
  rep.symmetrized_dim = last.build.symmetrized_dim;
  rep.dim = res.subspace.size();
  rep.energy = res.solution.energy;
  rep.residual = res.solution.residual_norm;
  rep.iterations = res.iterations;
  rep.subspace = std::move(res.subspace);
  rep.solution = std::move(res.solution);
  rep.solve_seconds = seconds_since(t0);
  rep.total_seconds = rep.solve_seconds;
  return rep;
}

RunReport run_sqd(const RunConfig& cfg, TrialCache* cache) {
  cfg.validate();
  apply_threads(cfg);
  const auto t0 = Clock::now();
  const auto basis = build_basis_transform(cfg.model, cfg.basis);
  const auto ints = build_hamiltonian(cfg.model, basis);
  RunReport rep;
  if (cfg.sampler.kind == SamplerKind::Full) {
    const auto ts = Clock::now();
    const SubspaceSet full = full_sector(cfg.model.n_orbitals(), cfg.model.n_up, cfg.model.n_down);
    require(full.size() <= cfg.solver.exact_max_dim, ErrorCode::BudgetExceeded,
            "full sector exceeds solver.exact_max_dim");
    rep.basis = cfg.basis;
    rep.sampler = cfg.sampler.kind;
    rep.seed = cfg.seed;
    rep.sampled_dim = rep.recovered_dim = rep.closed_shell_dim = rep.symmetrized_dim = full.size();
    rep.solution = solve_lowest(full, ints, solver_settings(cfg));
    rep.subspace = full;
    rep.dim = full.size();
    rep.energy = rep.solution.energy;
    rep.residual = rep.solution.residual_norm;
    rep.reference_energy = rep.energy;
    rep.solve_seconds = seconds_since(ts);
  } else {
    TrialCache local;
    TrialCache& tc = cache ? *cache : local;
    const auto ts = Clock::now();
    const BitstringSample noisy = draw_sample(cfg, cfg.basis, &tc);
    const double sample_seconds = seconds_since(ts);
    rep = run_sqd_on_sample(cfg, noisy, ints, basis);
    rep.sample_seconds = sample_seconds;
    if (cfg.sampler.kind == SamplerKind::Exact || cfg.sampler.kind == SamplerKind::Truncated) {
      rep.reference_energy = tc.get(cfg, cfg.basis).energy;
    }
  }
  rep.total_seconds = seconds_since(t0);
  return rep;
}

SweepReport sweep(const RunConfig& cfg, TrialCache* cache) {
  cfg.validate();
  require(cfg.sampler.kind != SamplerKind::Full, ErrorCode::InvalidArgument,
          "sweeps need a sampler");
  apply_threads(cfg);
  TrialCache local;
  TrialCache& tc = cache ? *cache : local;
  SweepReport rep;
  rep.seed = cfg.seed;

  struct BasisData {
    BasisTransform basis;
    IntegralTensors ints;
    BitstringSample sample;
  };
  std::map<BasisKind, BasisData> data;
  for (const auto& s : cfg.sweep.series) {
    if (data.count(s.basis)) continue;
    BasisData d;
    d.basis = build_basis_transform(cfg.model, s.basis);
    d.ints = build_hamiltonian(cfg.model, d.basis);
    d.sample = draw_sample(cfg, s.basis, &tc);
    data.emplace(s.basis, std::move(d));
  }
  if (cfg.sampler.kind == SamplerKind::Exact || cfg.sampler.kind == SamplerKind::Truncated) {
    rep.reference_energy = tc.get(cfg, cfg.sweep.series.front().basis).energy;
  }

  for (const auto& s : cfg.sweep.series) {
    for (std::size_t k : cfg.sweep.schedule) {
      SweepPoint p;
      p.series = s;
      p.max_configs = k;
      rep.points.push_back(std::move(p));
    }
  }
  const auto n = static_cast<std::ptrdiff_t>(rep.points.size());
#pragma omp parallel for schedule(dynamic) if (cfg.sweep.parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    SweepPoint& p = rep.points[static_cast<std::size_t>(i)];
    RunConfig c = cfg;
    c.basis = p.series.basis;
    c.symmetry.mode = p.series.symmetrize;
    c.subspace.max_configs = p.max_configs;
    const BasisData& d = data.at(p.series.basis);
    try {
      const RunReport r = run_sqd_on_sample(c, d.sample, d.ints, d.basis);
      p.dim = r.dim;
      p.closed_shell_dim = r.closed_shell_dim;
      p.energy = r.energy;
      p.expansion_ratio = r.closed_shell_dim
                              ? static_cast<double>(r.symmetrized_dim) /
                                    static_cast<double>(r.closed_shell_dim)
                              : 1.0;
    } catch (const Error& e) {
      p.error = e.what();
      p.energy = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return rep;
}

std::vector<TuneReportRow> tune_gap(const RunConfig& cfg) {
  std::vector<TuneReportRow> out;
  for (const auto& row : cfg.tune.rows) {
    TuneReportRow r;
    r.row = row;
    LadderParams p = cfg.model;
    p.n_rungs = row.n_rungs;
    p.n_up = p.n_down = row.n_electrons / 2;
    try {
      double lo = cfg.tune.lo;
      double hi = cfg.tune.hi;
      if (row.reference) {
        lo = std::max(lo, *row.reference - cfg.tune.window);
        hi = std::min(hi, *row.reference + cfg.tune.window);
      }
      const TuneResult t = tune_t_perp(p, lo, hi, cfg.tune.tolerance);
      r.t_perp = t.t_perp;
      r.crossing = t.crossing;
      r.gap = t.gap;
    } catch (const Error& e) {
      r.error = e.what();
      r.t_perp = r.crossing = r.gap = std::numeric_limits<double>::quiet_NaN();
    }
    if (row.reference) {
      p.t_perp = *row.reference;
      try {
        r.reference_gap = artificial_gap(p);
      } catch (const Error& e) {
        if (r.error.empty()) r.error = e.what();
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

CorrelationReport correlations(const RunConfig& cfg, TrialCache* cache) {
  cfg.validate();
  apply_threads(cfg);
  TrialCache local;
  TrialCache& tc = cache ? *cache : local;
  const auto basis = build_basis_transform(cfg.model, cfg.basis);
  const auto ints = build_hamiltonian(cfg.model, basis);
  const int m = cfg.model.n_orbitals();
  CorrelatorOptions copt;
  copt.table_budget_bytes = cfg.correlations.table_budget_mb << 20;
  FitOptions fopt;
  fopt.distance = cfg.correlations.distance;
  fopt.r_min = cfg.correlations.r_min;
  fopt.r_max = cfg.correlations.r_max;
  fopt.exclude_midpoint = cfg.correlations.exclude_midpoint;

  CorrelationReport rep;
  auto add = [&](const EigenSolution& sol, const SubspaceSet& sub, const std::string& label) {
    const PairCorrelator corr(sol, sub, m, copt);
    CorrelationSeries s = correlation_series(corr, basis, cfg.correlations.origin);
    s.label = label;
    s.dim = sub.size();
    s.seed = cfg.seed;
    FitResult f;
    try {
      f = fit_power_law(s, cfg.model.n_rungs, fopt);
    } catch (const Error&) {
      f.c = std::numeric_limits<double>::quiet_NaN();
      f.distance = fopt.distance;
    }
    rep.series.push_back(std::move(s));
    rep.fits.push_back(f);
  };

  if (cfg.correlations.include_rhf) {
    const SubspaceSet rhf({rhf_determinant(ints, cfg.model.n_up, cfg.model.n_down)});
    EigenSolution sol;
    sol.amplitudes = CVector::Ones(1);
    sol.energy = diagonal_element(rhf[0], ints).real();
    add(sol, rhf, "rhf");
  }
  if (cfg.sampler.kind == SamplerKind::Full) {
    const RunReport r = run_sqd(cfg, &tc);
    add(r.solution, r.subspace, "sqd");
    return rep;
  }
  const BitstringSample noisy = draw_sample(cfg, cfg.basis, &tc);
  for (std::size_t k : cfg.correlations.schedule) {
    RunConfig c = cfg;
    c.subspace.max_configs = k;
    const RunReport r = run_sqd_on_sample(c, noisy, ints, basis);
    add(r.solution, r.subspace, "sqd");
  }
  return rep;
}

bool OracleReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.passed; });
}

void write_tune_csv(std::ostream& os, const std::vector<TuneReportRow>& rows) {
  os << "n_rungs,n_electrons,filling,t_perp,crossing,gap,reference_t_perp,reference_gap,error\n";
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& r : rows) {
    os << r.row.n_rungs << ',' << r.row.n_electrons << ','
       << static_cast<double>(r.row.n_electrons) / (2.0 * r.row.n_rungs) << ',' << r.t_perp << ','
       << r.crossing << ',' << r.gap << ',';
    if (r.row.reference) os << *r.row.reference;
    os << ',';
    if (r.reference_gap) os << *r.reference_gap;
    os << ',' << r.error << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const SweepReport& r) {
  os << "basis,symmetrize,max_configs,D,closed_shell_D,expansion_ratio,energy,seed,error\n";
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& p : r.points) {
    os << to_string(p.series.basis) << ',' << to_string(p.series.symmetrize) << ','
       << p.max_configs << ',' << p.dim << ',' << p.closed_shell_dim << ',' << p.expansion_ratio
       << ',' << p.energy << ',' << r.seed << ',' << p.error << '\n';
  }
}

std::string run_command(const RunConfig& cfg, const std::string& command, bool* ok) {
  if (ok) *ok = true;
  const bool write = !cfg.output_dir.empty();
  std::string json;
  if (command == "tune-gap") {
    const auto rows = tune_gap(cfg);
    json = to_json(rows);
    if (write) {
      std::ostringstream csv;
      write_tune_csv(csv, rows);
      write_file(output_path(cfg, "tune_gap.csv"), csv.str());
    }
  } else if (command == "run-sqd") {
    const RunReport r = run_sqd(cfg);
    json = to_json(r);
    if (write) {
      std::ostringstream sub, sol;
      write_subspace(sub, r.subspace, cfg.model.n_orbitals());
      write_solution(sol, r.solution, r.subspace, cfg.model.n_orbitals());
      write_file(output_path(cfg, "subspace.txt"), sub.str());
      write_file(output_path(cfg, "solution.txt"), sol.str());
    }
  } else if (command == "sweep") {
    const SweepReport r = sweep(cfg);
    json = to_json(r);
    if (write) {
      std::ostringstream csv;
      write_sweep_csv(csv, r);
      write_file(output_path(cfg, "sweep.csv"), csv.str());
    }
  } else if (command == "correlations") {
    const CorrelationReport r = correlations(cfg);
    json = to_json(r);
    if (write) {
      for (const auto& s : r.series) {
        std::ostringstream csv;
        write_correlation_csv(csv, s);
        write_file(output_path(cfg, "correlation_" + s.label + "_D" + std::to_string(s.dim) +
                                        ".csv"),
                   csv.str());
      }
    }
  } else if (command == "oracle-check") {
    const OracleReport r = oracle_check(cfg);
    json = to_json(r);
    if (ok) *ok = r.passed();
  } else {
    fail(ErrorCode::InvalidArgument, "unknown command '" + command + "'");
  }
  if (write) {
    const std::string stem = command;
    write_file(output_path(cfg, stem + ".json"), json + "\n");
    write_file(output_path(cfg, "manifest.json"), run_manifest(cfg, command) + "\n");
  }
  return json;
}

}  // namespace lsqd
