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
 * @file lattice_model.hpp
 * @brief Periodic two-leg ladder Hubbard model, its orbital bases and
 *        integral tensors.
 *
 * Site orbitals are indexed as `2 * rung + leg` (leg A = 0, leg B = 1).
 * Every basis is described by a unitary `v` whose columns are the new
 * orbitals expanded in site orbitals, i.e. c'^dag_a = sum_p v(p, a) c^dag_p.
 *
 * Two-body convention (used by every module):
 *
 *   H = sum_{pq,s} h1(p,q) c^dag_{ps} c_{qs}
 *     + 1/2 sum_{pqrs,s,s'} <pq|rs> c^dag_{ps} c^dag_{qs'} c_{ss'} c_{rs}
 *
 * with <pq|rs> stored at h2[((p*M + q)*M + r)*M + s]. The on-site Hubbard
 * term U n_up n_down is <pp|pp> = U in the site basis.
 */

#pragma once

#include <string>
#include <vector>

#include "ladder_sqd/common.hpp"

namespace lsqd {

struct LadderParams {
  int n_rungs = 0;
  int n_up = 0;
  int n_down = 0;
  double t = 1.0;
  double t_perp = 0.0;
  double u = 0.0;

  int n_orbitals() const { return 2 * n_rungs; }
  int n_electrons() const { return n_up + n_down; }

  /// Throws InvalidArgument when the parameters do not describe a valid model.
  void validate() const;
};

enum class BasisKind { Site, Momentum, MolecularOrbital };
enum class Branch { Bonding, Antibonding };
enum class Parity { None, Even, Odd };

std::string to_string(BasisKind kind);
BasisKind basis_kind_from_string(const std::string& s);

/// Per-column metadata of a basis transform.
struct OrbitalLabel {
  int rung = -1;  // site basis only
  int leg = -1;   // site basis only
  /// Momentum grid index n with k = 2 pi n / N. For molecular orbitals this is
  /// the representative with 0 <= n <= N/2.
  int momentum = -1;
  Branch branch = Branch::Bonding;
  Parity parity = Parity::None;
  /// Column of the (k, -k) or (g, u) partner, -1 for self-paired momenta.
  int partner = -1;
};

struct BasisTransform {
  BasisKind kind = BasisKind::Site;
  int n_rungs = 0;
  CMatrix v;
  std::vector<OrbitalLabel> labels;

  int n_orbitals() const { return static_cast<int>(v.cols()); }
};

struct IntegralTensors {
  int n_orb = 0;
  CMatrix h1;
  std::vector<cplx> h2;
  double e_core = 0.0;

  IntegralTensors() = default;
  explicit IntegralTensors(int n);

  std::size_t eri_index(int p, int q, int r, int s) const {
    const std::size_t m = static_cast<std::size_t>(n_orb);
    return ((static_cast<std::size_t>(p) * m + q) * m + r) * m + s;
  }
  cplx& eri(int p, int q, int r, int s) { return h2[eri_index(p, q, r, s)]; }
  const cplx& eri(int p, int q, int r, int s) const { return h2[eri_index(p, q, r, s)]; }

  /// Largest violation of h1 = h1^dag and <pq|rs> = <rs|pq>^*.
  double hermiticity_error() const;
};

struct BandLevel {
  int momentum = 0;  // grid index
  double k = 0.0;
  Branch branch = Branch::Bonding;
  double energy = 0.0;
};

IntegralTensors build_site_hamiltonian(const LadderParams& params);

/// eps(k) = -2 t cos k -/+ t_perp for bonding / antibonding (just -/+ t_perp
/// for a single rung, which has no intra-leg bond).
/// Throws InvalidArgument when k is not on the 2 pi n / N grid.
double band_dispersion(const LadderParams& params, double k, Branch branch);
double band_dispersion_at(const LadderParams& params, int momentum_index, Branch branch);

/// All 2N single-particle levels, sorted ascending by energy.
std::vector<BandLevel> band_levels(const LadderParams& params);

/// LUMO - HOMO of the noninteracting closed-shell filling. Zero when the
/// frontier level is degenerate across the Fermi level.
double artificial_gap(const LadderParams& params);

struct TuneResult {
  double t_perp = 0.0;
  double crossing = 0.0;  // t_perp at which the frontier levels cross
  double gap = 0.0;
};

/// Locates a frontier bonding/antibonding level crossing in [lo, hi] and
/// returns a t_perp next to it whose closed-shell gap is below `tolerance`.
TuneResult tune_t_perp(const LadderParams& params, double lo, double hi, double tolerance);

BasisTransform build_basis_transform(const LadderParams& params, BasisKind kind);

/// h1' = v^dag h1 v and the matching four-index rotation of h2.
IntegralTensors rotate_integrals(const IntegralTensors& tensors, const CMatrix& v);

/// Site Hamiltonian expressed in the requested basis.
IntegralTensors build_hamiltonian(const LadderParams& params, const BasisTransform& basis);

}  // namespace lsqd
