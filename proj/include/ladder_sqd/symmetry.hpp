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
 * @file symmetry.hpp
 * @brief Space-group operations of the ladder as one-body representation
 *        matrices, determinant images and subspace symmetrization.
 *
 * Convention: g c^dag_i g^-1 = sum_j c^dag_j D_ji(g). The ladder axis is x
 * (rung index), the legs sit at +-y, and the inversion center is rung 0.
 * Operation labels: E, C2x, C2y, C2z, I, sigma_xy, sigma_xz, sigma_yz and
 * T<R> for a shift by R rungs (T1, T_1 and "T 1" are all accepted).
 */

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ladder_sqd/common.hpp"
#include "ladder_sqd/determinant_space.hpp"
#include "ladder_sqd/lattice_model.hpp"

namespace lsqd {

/// Representation that maps column i to a single row perm[i] with phase[i].
struct FastPath {
  std::vector<int> perm;
  std::vector<cplx> phase;
};

struct SymmetryOperation {
  std::string label;
  CMatrix d;
  std::optional<FastPath> fast_path;
  /// Orbital masks of the connected blocks of d; every column maps into the
  /// rows of its own block.
  std::vector<u64> blocks;

  int n_orb() const { return static_cast<int>(d.rows()); }
  double unitarity_error() const;
};

/// Wraps `d`, zeroing entries below 1e-14 and detecting the permutation
/// fast path.
SymmetryOperation make_operation(std::string label, CMatrix d);

/// Canonical spelling of an operation label; throws InvalidArgument on an
/// unknown label. Translations come back as "T<R>" with 0 <= R < n_rungs.
std::string canonical_label(const std::string& label, int n_rungs);

/// Site orbital image of each site orbital (2 * rung + leg).
std::vector<int> site_permutation(const std::string& label, int n_rungs);

/// Representation in any basis from the site permutation: D = v^dag P v.
SymmetryOperation site_operation(const BasisTransform& basis, const std::string& label);

/// Point-group operation in the momentum basis, built from the column labels:
/// sigma_x blocks on (k, -k) pairs for the k-flipping operations, with a -1
/// on the antibonding branch for operations that swap the legs.
SymmetryOperation momentum_pointgroup_rep(const BasisTransform& basis, const std::string& label);

/// Translation by r rungs in the molecular-orbital basis: rotation blocks
/// R(kr) on each (g, u) pair and exp(-ikr) = +-1 on self-paired momenta.
SymmetryOperation molecular_translation_rep(const BasisTransform& basis, int r);

/// exp(-i K r) for a momentum-basis determinant of total momentum K.
cplx momentum_translation_phase(const Determinant& det, const BasisTransform& basis, int r);

struct ConfigImage {
  std::vector<std::pair<u64, cplx>> terms;
};

struct DeterminantImage {
  std::vector<std::pair<Determinant, cplx>> terms;

  double norm2() const;
};

/// Image of the single-spin occupation `mask`. Terms are sorted by mask.
ConfigImage apply_to_config(const SymmetryOperation& op, u64 mask, double coeff_threshold = 1e-12);

/// Image of a determinant: coefficient of each target is the product over
/// spins of det(D[target rows, source columns]). Terms with
/// |coeff| <= coeff_threshold are dropped; threshold >= 1 is rejected.
DeterminantImage apply_to_determinant(const SymmetryOperation& op, const Determinant& det,
                                      double coeff_threshold = 1e-12);

struct SymmetryGroup {
  int n_rungs = 0;
  BasisKind basis = BasisKind::Site;
  std::vector<SymmetryOperation> ops;
  /// closure_table[a][b] = index of the op matching d_a d_b, or -1.
  std::vector<std::vector<int>> closure_table;

  void build_closure_table(double tol = 1e-10);
  bool is_closed() const;
};

/// Operations for each label. Momentum-basis point operations and
/// molecular-basis translations use the explicit block constructions; the
/// rest go through site_operation.
SymmetryGroup make_group(const BasisTransform& basis, const std::vector<std::string>& labels);

/// Preset label lists: "none", "point" (the seven non-identity D2h
/// operations), "translation" (T1 .. T<N-1>), "space" (both) and "auto"
/// (the family not already preserved by the basis: point for momentum,
/// translation for molecular, space for site).
std::vector<std::string> group_preset(const std::string& name, int n_rungs, BasisKind basis);

/// One operation per line, `#` starts a comment, blank lines ignored.
std::vector<std::string> parse_group_definition(std::istream& is);

struct SymmetrizeResult {
  SubspaceSet subspace;
  std::size_t input_dim = 0;
  /// Dimension after a single application of every operation.
  std::size_t one_pass_dim = 0;
  /// Passes that added determinants (0 for an already closed input).
  int passes = 0;
};

/// Union of the subspace with all image supports, iterated to closure.
/// Throws NotConverged after max_passes (default 4 * n_rungs).
SymmetrizeResult symmetrize_subspace(const SubspaceSet& subspace, const SymmetryGroup& group,
                                     double coeff_threshold = 1e-12, int max_passes = 0);

struct ConfigSymmetrizeResult {
  SpinlessConfigSet configs;
  std::size_t input_size = 0;
  std::size_t one_pass_size = 0;
  int passes = 0;
};

/// Closure of a spinless configuration set under the group. Since D acts on
/// both spins alike, U x U of the result is a closed determinant subspace.
ConfigSymmetrizeResult symmetrize_configs(const SpinlessConfigSet& configs,
                                          const SymmetryGroup& group,
                                          double coeff_threshold = 1e-12, int max_passes = 0);

/// Re-expresses a state given over determinants of `from` in the orbitals
/// of `to`, using the lift of W = to.v^dag from.v. Block-diagonal W (for
/// example momentum to molecular) keeps the expansion short.
std::pair<SubspaceSet, CVector> change_basis(const SubspaceSet& dets, const CVector& amplitudes,
                                             const BasisTransform& from,
                                             const BasisTransform& to,
                                             double coeff_threshold = 1e-14);

bool check_closure(const SubspaceSet& subspace, const SymmetryOperation& op,
                   double coeff_threshold = 1e-12);

/// Text dump: label line, dimension line, then "row col re im" per nonzero.
void write_operation(std::ostream& os, const SymmetryOperation& op);

}  // namespace lsqd
