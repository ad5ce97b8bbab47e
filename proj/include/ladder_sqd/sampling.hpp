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
 * @file sampling.hpp
 * @brief Surrogate bitstring sampling, readout noise, configuration recovery
 *        and the self-consistent recovery loop.
 *
 * Every randomized routine splits its work into shards with seeds derived
 * from the master seed, so results are bit-identical for any thread count.
 */

#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "ladder_sqd/common.hpp"
#include "ladder_sqd/determinant_space.hpp"
#include "ladder_sqd/sci_core.hpp"
#include "ladder_sqd/symmetry.hpp"

namespace lsqd {

/// Measured bitstrings with multiplicities. Entries may lie in any particle
/// sector.
struct BitstringSample {
  int n_orb = 0;
  std::map<Determinant, u64> counts;

  u64 shots() const;
  std::size_t distinct() const { return counts.size(); }
  void add(const Determinant& d, u64 n = 1);
};

/// "bitstring count" per line, `#` comments allowed.
void write_sample(std::ostream& os, const BitstringSample& s);
BitstringSample read_sample(std::istream& is, int n_orb);

struct NoiseModel {
  /// Independent flip probability of every measured bit.
  double p_flip = 1.44e-2;
  u64 seed = 0;

  /// Throws InvalidArgument unless 0 <= p_flip < 0.5.
  void validate() const;
};

/// Draws `shots` determinants with probability |amplitude|^2. Throws
/// InvalidArgument when the amplitudes are not normalized to 1e-8.
BitstringSample surrogate_sample(const SubspaceSet& dets, const CVector& amplitudes, u64 shots,
                                 u64 seed, int n_orb);

/// Uniform draws over the (n_up, n_down) sector without enumerating it.
BitstringSample uniform_sector_sample(int n_orb, int n_up, int n_down, u64 shots, u64 seed);

/// Flips each of the 2M bits of every shot independently with p_flip.
BitstringSample inject_noise(const BitstringSample& sample, const NoiseModel& noise);

/// In-sector part of the sample.
BitstringSample filter_sample(const BitstringSample& sample, int n_up, int n_down);

/// Repairs each bitstring outside the (n_up, n_down) sector: per spin, a
/// surplus (deficit) is removed by flipping occupied (empty) bits one at a
/// time, bit i chosen with probability proportional to |x_i - n_ref_i| among
/// the eligible bits. In-sector bitstrings pass through. When all eligible
/// weights vanish the draw is uniform, or DegenerateWeights is raised as
/// InvalidArgument if `uniform_fallback` is false.
BitstringSample configuration_recovery(const BitstringSample& sample,
                                       const OccupationVector& n_ref, int n_up, int n_down,
                                       u64 seed, bool uniform_fallback = true);

/// Distinct determinants of the sample.
SubspaceSet sample_subspace(const BitstringSample& sample);

/// Spinless configurations ranked by how many shots carry them as either
/// spin string; ties broken by ascending mask.
std::vector<std::pair<u64, u64>> config_frequencies(const BitstringSample& sample);

/// Determinants ranked by count; ties broken by determinant order.
std::vector<std::pair<Determinant, u64>> determinant_frequencies(const BitstringSample& sample);

enum class SymmetrizeMode {
  Off,
  /// Closure of the determinant subspace under the group.
  Determinant,
  /// Closure of the spinless configuration set, then the direct product.
  Config,
};

struct SubspaceOptions {
  /// Closed-shell U x U construction; ignored for n_up != n_down.
  bool closed_shell = true;
  /// Keep only the most frequent configurations (closed shell) or
  /// determinants (open shell); 0 keeps everything.
  std::size_t max_configs = 0;
  SymmetrizeMode symmetrize = SymmetrizeMode::Off;
  const SymmetryGroup* group = nullptr;
  double coeff_threshold = 1e-12;
};

struct SubspaceBuild {
  SubspaceSet subspace;
  std::size_t n_configs = 0;
  /// Determinants before symmetrization (U x U or the filtered union).
  std::size_t closed_shell_dim = 0;
  std::size_t one_pass_dim = 0;
  std::size_t symmetrized_dim = 0;
  int symmetrize_passes = 0;
};

/// Turns an in-sector sample into the solver subspace.
SubspaceBuild build_subspace(const BitstringSample& in_sector, int n_up, int n_down,
                             const SubspaceOptions& opts);

struct RecoveryLoopOptions {
  int iterations = 5;
  SubspaceOptions subspace;
  SolverSettings solver;
  /// Reference for the first recovery. Without it the first iteration
  /// keeps only the in-sector bitstrings (or, if there are none, recovers
  /// against uniform half filling).
  std::optional<OccupationVector> initial_reference;
  bool uniform_fallback = true;
  u64 seed = 0;
  /// By default every iteration reuses the same recovery stream, so the
  /// loop is a deterministic map of the reference occupations and can reach
  /// an exact fixed point.
  bool fresh_stream_per_iteration = false;
};

struct RecoveryIteration {
  std::size_t recovered_dim = 0;
  /// Dimension counters; the subspace itself is kept only for the final
  /// iteration, in RecoveryLoopResult.
  SubspaceBuild build;
  double energy = 0.0;
  /// max_i |n_new - n_prev|; NaN on the first iteration without a reference.
  double drift = 0.0;
};

struct RecoveryLoopResult {
  SubspaceSet subspace;
  EigenSolution solution;
  OccupationVector occupations;
  std::size_t sampled_dim = 0;
  std::vector<RecoveryIteration> iterations;
};

/// Recovery, subspace construction, diagonalization and new occupations,
/// repeated `iterations` times on the same raw sample.
RecoveryLoopResult recovery_loop(const BitstringSample& sample, const IntegralTensors& ints,
                                 int n_up, int n_down, const RecoveryLoopOptions& opts);

}  // namespace lsqd
