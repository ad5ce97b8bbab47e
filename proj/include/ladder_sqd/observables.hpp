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
 * @file observables.hpp
 * @brief Rung-singlet pair operators, the pair correlation function
 *        P(r) = <O^dag_r O_0> and power-law fits.
 *
 * The pair operator of rung r is
 *
 *   O_r = sum_{ij} a_{i,up} O_ij a_{j,down}
 *       = (a_{rA,up} a_{rB,down} - a_{rA,down} a_{rB,up}) / sqrt(2),
 *
 * so the site matrix is symmetric with 1/sqrt(2) on (rA, rB) and (rB, rA).
 * In a basis with orbitals v the same operator is
 * sum_{mu nu} d_{mu,up} (v^T O v)_{mu nu} d_{nu,down}.
 */

#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ladder_sqd/common.hpp"
#include "ladder_sqd/determinant_space.hpp"
#include "ladder_sqd/lattice_model.hpp"
#include "ladder_sqd/sci_core.hpp"

namespace lsqd {

struct PairOperatorMatrix {
  int r = 0;
  BasisKind basis = BasisKind::Site;
  CMatrix o_tilde;
};

/// Site-basis matrix of O_r on a ladder of n_rungs.
CMatrix site_pair_matrix(int n_rungs, int r);

/// O~_r = v^T O_r v. Throws InvalidArgument unless 0 <= r < N.
PairOperatorMatrix order_parameter_matrix(const BasisTransform& basis, int r);

struct CorrelatorOptions {
  /// Cap on the stored one-body transition tables; above it the
  /// connections are regenerated on the fly.
  std::size_t table_budget_bytes = std::size_t{256} << 20;
};

/// Factorized evaluation of <Psi| O^dag_r O_0 |Psi> over the pair view
/// Psi_{pq} of a determinant expansion (missing (p, q) entries are zero).
///
/// One-body transition tables T[(a, c)] = <a| d^dag_mu d_xi |c> over the
/// up strings and the down strings are contracted with Psi into the mixed
/// spin transition density R[mu xi nu eta] = <E^up_{mu xi} E^down_{nu eta}>,
/// after which each P(r) is a contraction with O~_r^* and O~_0.
class PairCorrelator {
 public:
  PairCorrelator(const EigenSolution& sol, const SubspaceSet& subspace, int n_orb,
                 const CorrelatorOptions& opts = {});
  ~PairCorrelator();
  PairCorrelator(PairCorrelator&&) noexcept;
  PairCorrelator& operator=(PairCorrelator&&) noexcept;

  int n_orb() const { return m_; }
  /// True when the transition tables fit the budget and were stored.
  bool tables_stored() const { return tables_stored_; }

  /// <O^dag[o_r] O[o_0]>; throws InvalidArgument on a dimension mismatch.
  cplx operator()(const CMatrix& o_r, const CMatrix& o_0) const;
  cplx operator()(const PairOperatorMatrix& o_r, const PairOperatorMatrix& o_0) const;

 private:
  int m_ = 0;
  bool tables_stored_ = false;
  std::vector<cplx> density_;  // R[((mu * M + xi) * M + nu) * M + eta]
};

/// One-shot factorized evaluation.
cplx pair_correlation(const EigenSolution& sol, const SubspaceSet& subspace, int n_orb,
                      const CMatrix& o_r, const CMatrix& o_0, const CorrelatorOptions& opts = {});

/// Independent route: forms O_0|Psi> and O_r|Psi> on the (n_up - 1,
/// n_down - 1) sector and takes their overlap.
cplx pair_correlation_direct(const EigenSolution& sol, const SubspaceSet& subspace, int n_orb,
                             const CMatrix& o_r, const CMatrix& o_0);

struct CorrelationSeries {
  /// (separation, P(separation)) for separations 0 .. N-1.
  std::vector<std::pair<int, cplx>> values;
  std::string label;
  BasisKind basis = BasisKind::Site;
  std::size_t dim = 0;
  u64 seed = 0;
};

/// P(r) = <O^dag_{origin + r} O_origin> for r = 0 .. N-1.
CorrelationSeries correlation_series(const PairCorrelator& corr, const BasisTransform& basis,
                                     int origin = 0);

/// CSV with header "r,re,im,basis,D,seed".
void write_correlation_csv(std::ostream& os, const CorrelationSeries& s, bool header = true);

enum class DistanceKind { Chord, Plain };

std::string to_string(DistanceKind kind);
DistanceKind distance_kind_from_string(const std::string& s);

/// Chord distance (N / pi) sin(pi r / N) on a ring of N rungs, or r itself.
double ring_distance(int r, int n_rungs, DistanceKind kind);

struct FitOptions {
  DistanceKind distance = DistanceKind::Chord;
  int r_min = 1;
  /// Largest separation used; -1 means floor(N / 2).
  int r_max = -1;
  /// Skip r = N / 2 on even rings, where both directions coincide.
  bool exclude_midpoint = true;
};

struct FitResult {
  double c = 0.0;
  /// Root-mean-square deviation of |P| from c / d^2 over the used points.
  double residual = 0.0;
  int points = 0;
  DistanceKind distance = DistanceKind::Chord;
};

/// Least-squares fit of |P(r)| to c / d(r)^2 with the exponent fixed at 2.
/// Throws InvalidArgument with fewer than two usable points.
FitResult fit_power_law(const CorrelationSeries& s, int n_rungs, const FitOptions& opts = {});

}  // namespace lsqd
