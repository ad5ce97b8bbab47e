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
 * @file sci_core.hpp
 * @brief Complex Hermitian selected-CI engine: Slater-Condon rules, the
 *        projected Hamiltonian P H P, a Davidson eigensolver and dense/FCI
 *        reference solvers.
 */

#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "ladder_sqd/common.hpp"
#include "ladder_sqd/determinant_space.hpp"
#include "ladder_sqd/lattice_model.hpp"

namespace lsqd {

// ---------------------------------------------------------------------------
// Fermionic sign kernels. Modes are ordered ascending; the sign of an
// operator acting on a mask is (-1)^(number of occupied modes below it).

inline int occupied_below(u64 mask, int i) {
  return std::popcount(mask & ((u64{1} << i) - 1));
}

/// Applies c_i (or c^dag_i) to `mask` in place, returning the sign. The
/// caller guarantees that the mode is occupied (empty).
inline double annihilate(u64& mask, int i) {
  const double s = (occupied_below(mask, i) & 1) ? -1.0 : 1.0;
  mask ^= u64{1} << i;
  return s;
}
inline double create(u64& mask, int i) {
  const double s = (occupied_below(mask, i) & 1) ? -1.0 : 1.0;
  mask |= u64{1} << i;
  return s;
}

/// Sign of c^dag_p c_h |mask>, h occupied, p empty (or p == h).
inline double single_excitation_sign(u64 mask, int h, int p) {
  double s = annihilate(mask, h);
  return s * create(mask, p);
}

// ---------------------------------------------------------------------------

cplx diagonal_element(const Determinant& d, const IntegralTensors& ints);

/// <bra|H|ket>. Exactly zero beyond double excitations. Throws
/// InvalidArgument when the particle sectors differ.
cplx slater_condon_element(const Determinant& bra, const Determinant& ket,
                           const IntegralTensors& ints);

struct EigenSolution {
  double energy = 0.0;
  CVector amplitudes;
  double residual_norm = 0.0;
  int iterations = 0;
  /// Number of computed roots within 1e-8 of this one (1 when nondegenerate
  /// or when only one root was requested).
  int degeneracy = 1;
};

struct MatvecOptions {
  /// Use the alpha x beta string algorithm when the subspace is a direct
  /// product (closed-shell runs and FCI).
  bool use_product_path = true;
  /// Cache per-row connectivity on the generic path if it fits.
  bool cache_connectivity = true;
  std::size_t cache_cap_bytes = std::size_t{512} << 20;
};

/// H~ = P H P restricted to a determinant subspace; applied matrix-free.
class ProjectedHamiltonian {
 public:
  ProjectedHamiltonian(const SubspaceSet& subspace, const IntegralTensors& ints,
                       MatvecOptions opts = {});
  ~ProjectedHamiltonian();
  ProjectedHamiltonian(ProjectedHamiltonian&&) noexcept;
  ProjectedHamiltonian& operator=(ProjectedHamiltonian&&) noexcept;

  std::size_t dim() const { return subspace_->size(); }
  const SubspaceSet& subspace() const { return *subspace_; }
  const IntegralTensors& integrals() const { return *ints_; }
  const RVector& diagonal() const { return diag_; }
  bool uses_product_path() const;

  /// y = H~ x. Throws InvalidArgument on dimension mismatch.
  void apply(const CVector& x, CVector& y) const;
  CVector matvec(const CVector& x) const {
    CVector y;
    apply(x, y);
    return y;
  }
  cplx element(std::size_t i, std::size_t j) const;

 private:
  struct ProductKernel;
  struct GenericKernel;

  const SubspaceSet* subspace_;
  const IntegralTensors* ints_;
  RVector diag_;
  std::unique_ptr<ProductKernel> product_;
  std::unique_ptr<GenericKernel> generic_;
};

struct DavidsonOptions {
  int n_roots = 1;
  double tol = 1e-8;
  int max_iter = 1000;
  int max_subspace = 20;
  u64 seed = 7;
  double guess_noise = 1e-3;
};

class NotConvergedError : public Error {
 public:
  NotConvergedError(const std::string& what, double best_residual)
      : Error(ErrorCode::NotConverged, what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

/// Generic operator form used by the solver: y = A x on vectors of `dim`.
using LinearOperator = std::function<void(const CVector&, CVector&)>;

std::vector<EigenSolution> davidson_lowest(const LinearOperator& op, const RVector& diagonal,
                                           const DavidsonOptions& opts);
std::vector<EigenSolution> davidson_lowest(const ProjectedHamiltonian& h,
                                           const DavidsonOptions& opts);

/// Dense matrix of H~ built element by element from the Slater-Condon rules.
CMatrix dense_matrix(const SubspaceSet& subspace, const IntegralTensors& ints);

/// Full eigendecomposition, ascending. Throws BudgetExceeded above `cap`.
std::vector<EigenSolution> dense_diagonalize(const SubspaceSet& subspace,
                                             const IntegralTensors& ints,
                                             std::size_t cap = 4096);

struct SolverSettings {
  DavidsonOptions davidson;
  MatvecOptions matvec;
  /// Subspaces up to this dimension are diagonalized densely.
  std::size_t dense_threshold = 64;
};

/// Lowest root of H~ on `subspace`, dense below the threshold and Davidson
/// otherwise. With davidson.n_roots > 1 the degeneracy of the lowest root is
/// resolved against the extra roots.
EigenSolution solve_lowest(const SubspaceSet& subspace, const IntegralTensors& ints,
                           const SolverSettings& settings = {});

/// Closed-shell restricted determinant: the n_up (n_down) lowest diagonal
/// levels of h1 in a basis where h1 is diagonal (momentum or molecular).
/// Throws Unsupported when h1 is not diagonal and InvalidArgument when the
/// frontier level is degenerate.
Determinant rhf_determinant(const IntegralTensors& ints, int n_up, int n_down);

struct ExactResult {
  BasisTransform basis;
  IntegralTensors integrals;
  SubspaceSet subspace;
  EigenSolution solution;
};

/// Lowest state of the complete (n_up, n_down) sector of `params`. With
/// momentum_sector >= 0 (momentum basis only) the search is restricted to
/// determinants of that total momentum index.
ExactResult exact_ground_state(const LadderParams& params, BasisKind kind,
                               const DavidsonOptions& opts = {},
                               std::size_t max_dim = std::size_t{4} << 20,
                               int momentum_sector = -1);

/// Spin-resolved orbital occupations, alpha block (index i) then beta block
/// (index M + i).
struct OccupationVector {
  int n_orb = 0;
  std::vector<double> n;

  double up(int i) const { return n[static_cast<std::size_t>(i)]; }
  double down(int i) const { return n[static_cast<std::size_t>(n_orb + i)]; }
};

OccupationVector occupations(const EigenSolution& sol, const SubspaceSet& subspace, int n_orb);
double max_abs_diff(const OccupationVector& a, const OccupationVector& b);

/// Full-precision text serialization: header lines then
/// "<bitstring> <re> <im>" per determinant.
void write_solution(std::ostream& os, const EigenSolution& sol, const SubspaceSet& subspace,
                    int n_orb);
std::pair<SubspaceSet, EigenSolution> read_solution(std::istream& is, int n_orb);

}  // namespace lsqd
