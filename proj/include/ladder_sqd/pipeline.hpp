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

/**
 * @file pipeline.hpp
 * @brief Run configuration and the batch commands: gap tuning, single SQD
 *        runs, dimension sweeps, pair correlations and oracle checks.
 *
 * A run is fully determined by its RunConfig. Every random stream is derived
 * from `seed` through shard_seed with a fixed index per stage, so artifacts
 * reproduce bit-for-bit at a fixed thread count.
 */

#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ladder_sqd/common.hpp"
#include "ladder_sqd/lattice_model.hpp"
#include "ladder_sqd/observables.hpp"
#include "ladder_sqd/sampling.hpp"
#include "ladder_sqd/sci_core.hpp"

namespace lsqd {

enum class SamplerKind {
  /// Ground state of the run model solved at `sampler.tolerance`.
  Exact,
  /// Exact state cut to its `sampler.keep` largest amplitudes.
  Truncated,
  Uniform,
  /// Every shot on the closed-shell RHF determinant.
  Rhf,
  /// Bitstrings read from `sampler.file`.
  File,
  /// No sampling: the complete sector is the subspace.
  Full,
};

std::string to_string(SamplerKind kind);
SamplerKind sampler_kind_from_string(const std::string& s);
std::string to_string(SymmetrizeMode mode);
SymmetrizeMode symmetrize_mode_from_string(const std::string& s);

struct TuneRow {
  int n_rungs = 0;
  int n_electrons = 0;
  /// Published t_perp, evaluated as given next to the tuned value.
  std::optional<double> reference;
};

struct SeriesSpec {
  BasisKind basis = BasisKind::Momentum;
  SymmetrizeMode symmetrize = SymmetrizeMode::Off;
};

std::string to_string(const SeriesSpec& s);

struct RunConfig {
  u64 seed = 1;
  /// OpenMP threads; 0 leaves the runtime default.
  int threads = 0;

  LadderParams model{4, 2, 2, 1.0, 0.99975, 1.0};
  BasisKind basis = BasisKind::Momentum;

  struct Sampler {
    SamplerKind kind = SamplerKind::Exact;
    u64 shots = 10000;
    std::size_t keep = 1000;
    /// Davidson tolerance of the trial state.
    double tolerance = 1e-6;
    /// "rhf" solves only the total-momentum sector of the RHF determinant,
    /// "all" the whole (n_up, n_down) sector.
    std::string momentum_sector = "rhf";
    std::string file;
  } sampler;

  double p_flip = 1.44e-2;

  struct Recovery {
    int iterations = 5;
    bool fresh_stream = false;
    bool uniform_fallback = true;
  } recovery;

  struct Subspace {
    bool closed_shell = true;
    std::size_t max_configs = 0;
  } subspace;

  struct Symmetry {
    SymmetrizeMode mode = SymmetrizeMode::Off;
    /// Preset name (see group_preset) or "file".
    std::string group = "auto";
    std::string group_file;
    double threshold = 1e-12;
  } symmetry;

  struct Solver {
    double tol = 1e-8;
    int max_iter = 1000;
    int max_subspace = 20;
    std::size_t dense_threshold = 64;
    bool cache = true;
    std::size_t cache_mb = 512;
    std::size_t exact_max_dim = std::size_t{4} << 20;
  } solver;

  struct Sweep {
    std::vector<std::size_t> schedule{10, 20, 40, 80};
    std::vector<SeriesSpec> series{{BasisKind::Momentum, SymmetrizeMode::Off},
                                   {BasisKind::Momentum, SymmetrizeMode::Determinant},
                                   {BasisKind::MolecularOrbital, SymmetrizeMode::Off},
                                   {BasisKind::MolecularOrbital, SymmetrizeMode::Determinant}};
    bool parallel = false;
  } sweep;

  struct Tune {
    std::vector<TuneRow> rows{{8, 12, 0.7076}, {10, 16, 1.119}, {12, 20, 1.366}, {14, 24, 0.8455}};
    /// Bracket for rows without a reference value.
    double lo = 0.01;
    double hi = 3.9;
    /// Rows with a reference are searched in reference +- window.
    double window = 0.05;
    double tolerance = 1e-3;
  } tune;

  struct Correlations {
    /// max_configs values; 0 means the untruncated subspace.
    std::vector<std::size_t> schedule{0};
    DistanceKind distance = DistanceKind::Chord;
    int r_min = 1;
    int r_max = -1;
    bool exclude_midpoint = true;
    int origin = 0;
    bool include_rhf = true;
    std::size_t table_budget_mb = 256;
  } correlations;

  struct Oracle {
    bool corrupt_hermiticity = false;
  } oracle;

  /// Artifacts are written here when non-empty.
  std::string output_dir;

  /// Throws InvalidArgument (bad values) or NotFound (missing files).
  void validate() const;
};

/// Sectioned key = value text; unknown sections or keys are Parse errors.
RunConfig parse_config(std::istream& is);
RunConfig load_config(const std::string& path);
/// Sets one "section.key" entry from its text form.
void set_config_value(RunConfig& cfg, const std::string& dotted_key, const std::string& value);
/// Every key with its current value, in parse_config format.
void dump_config(std::ostream& os, const RunConfig& cfg);
std::string dump_config(const RunConfig& cfg);
/// FNV-1a of the dumped config.
u64 config_hash(const RunConfig& cfg);

SolverSettings solver_settings(const RunConfig& cfg);
SymmetryGroup configured_group(const RunConfig& cfg, const BasisTransform& basis);

/// A sampled distribution over determinants of one basis.
struct TrialState {
  BasisKind basis = BasisKind::Momentum;
  SubspaceSet dets;
  CVector amplitudes;
  double energy = 0.0;
};

/// Trial states per basis. The exact state is solved once in the momentum
/// basis and carried to the molecular basis by change_basis; the site basis
/// is solved directly.
class TrialCache {
 public:
  const TrialState& get(const RunConfig& cfg, BasisKind basis);
  void clear() { states_.clear(); }

 private:
  std::map<BasisKind, TrialState> states_;
  std::string key_;
};

/// Stage-local seeds.
enum class Stage : u64 { Sample = 1, Noise = 2, Recovery = 3 };
u64 stage_seed(u64 seed, Stage stage);

struct RunReport {
  BasisKind basis = BasisKind::Momentum;
  SamplerKind sampler = SamplerKind::Exact;
  SymmetrizeMode symmetrize = SymmetrizeMode::Off;
  u64 seed = 0;
  u64 shots = 0;
  std::size_t max_configs = 0;

  std::size_t sampled_dim = 0;
  std::size_t recovered_dim = 0;
  std::size_t closed_shell_dim = 0;
  std::size_t symmetrized_dim = 0;
  /// Final subspace dimension, the D of `energy`.
  std::size_t dim = 0;
  double energy = 0.0;
  double residual = 0.0;
  std::optional<double> reference_energy;
  std::vector<RecoveryIteration> iterations;

  double sample_seconds = 0.0;
  double solve_seconds = 0.0;
  double total_seconds = 0.0;

  /// Final state, kept for downstream observables.
  SubspaceSet subspace;
  EigenSolution solution;
};

/// Samples, adds noise, runs the recovery loop and solves.
RunReport run_sqd(const RunConfig& cfg, TrialCache* cache = nullptr);
/// The recovery loop and solve on an already noisy sample.
RunReport run_sqd_on_sample(const RunConfig& cfg, const BitstringSample& noisy,
                            const IntegralTensors& ints, const BasisTransform& basis);

/// Noisy bitstrings of the configured sampler in `basis`.
BitstringSample draw_sample(const RunConfig& cfg, BasisKind basis, TrialCache* cache = nullptr);

struct SweepPoint {
  SeriesSpec series;
  std::size_t max_configs = 0;
  std::size_t dim = 0;
  std::size_t closed_shell_dim = 0;
  double energy = 0.0;
  /// symmetrized / closed-shell dimension of the final iteration.
  double expansion_ratio = 1.0;
  std::string error;
};

struct SweepReport {
  u64 seed = 0;
  std::optional<double> reference_energy;
  std::vector<SweepPoint> points;
};

/// One sample per basis, shared by every series and schedule point in it.
SweepReport sweep(const RunConfig& cfg, TrialCache* cache = nullptr);

struct TuneReportRow {
  TuneRow row;
  double t_perp = 0.0;
  double crossing = 0.0;
  double gap = 0.0;
  std::optional<double> reference_gap;
  std::string error;
};

std::vector<TuneReportRow> tune_gap(const RunConfig& cfg);

struct CorrelationReport {
  std::vector<CorrelationSeries> series;
  std::vector<FitResult> fits;
};

/// P(r) of the RHF determinant and of the SQD state at every schedule point.
CorrelationReport correlations(const RunConfig& cfg, TrialCache* cache = nullptr);

struct OracleCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct OracleReport {
  std::vector<OracleCheck> checks;
  bool passed() const;
};

/// Invariant suite on the configured model (and fixed small models where a
/// brute-force reference is needed).
OracleReport oracle_check(const RunConfig& cfg);

/// CSV and JSON renderings.
void write_tune_csv(std::ostream& os, const std::vector<TuneReportRow>& rows);
void write_sweep_csv(std::ostream& os, const SweepReport& r);
std::string to_json(const RunReport& r);
std::string to_json(const SweepReport& r);
std::string to_json(const std::vector<TuneReportRow>& rows);
std::string to_json(const CorrelationReport& r);
std::string to_json(const OracleReport& r);
/// Config hash, version, seed and thread count.
std::string run_manifest(const RunConfig& cfg, const std::string& command);

/// Runs a command by name ("tune-gap", "run-sqd", "sweep", "correlations",
/// "oracle-check"), writes its artifacts and returns the JSON report. `ok`
/// is false only when an oracle check fails.
std::string run_command(const RunConfig& cfg, const std::string& command, bool* ok = nullptr);

const char* version();

}  // namespace lsqd
