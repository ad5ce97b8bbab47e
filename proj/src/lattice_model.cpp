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

#include "ladder_sqd/lattice_model.hpp"

#include <algorithm>
#include <cmath>

namespace lsqd {

namespace {

int site_index(int rung, int leg) { return 2 * rung + leg; }

// cos(2 pi n / N) evaluated on the folded index so that +k and -k give
// bitwise identical levels.
double grid_cos(int n, int n_rungs) {
  n = ((n % n_rungs) + n_rungs) % n_rungs;
  const int folded = std::min(n, n_rungs - n);
  if (2 * folded == n_rungs) return -1.0;
  if (folded == 0) return 1.0;
  return std::cos(2.0 * kPi * folded / n_rungs);
}

// Column ordering of the momentum basis: (k, -k) pairs per branch, then the
// self-paired momenta 0 and pi.
struct MomentumColumn {
  int n;
  Branch branch;
  int partner;
};

std::vector<MomentumColumn> momentum_columns(int n_rungs) {
  std::vector<MomentumColumn> cols;
  const int n_pairs = (n_rungs - 1) / 2;
  for (Branch b : {Branch::Bonding, Branch::Antibonding}) {
    for (int n = 1; n <= n_pairs; ++n) {
      const int c = static_cast<int>(cols.size());
      cols.push_back({n, b, c + 1});
      cols.push_back({n_rungs - n, b, c});
    }
  }
  for (Branch b : {Branch::Bonding, Branch::Antibonding}) {
    cols.push_back({0, b, -1});
    if (n_rungs % 2 == 0 && n_rungs > 1) cols.push_back({n_rungs / 2, b, -1});
  }
  return cols;
}

std::vector<cplx> contract_index(const std::vector<cplx>& in, const CMatrix& w, int pos,
                                 int m) {
  // out[.., a, ..] = sum_p w(p, a) in[.., p, ..] with the index at `pos`.
  std::size_t stride = 1;
  for (int i = 0; i < 3 - pos; ++i) stride *= static_cast<std::size_t>(m);
  const std::size_t block = stride * static_cast<std::size_t>(m);
  const std::size_t total = in.size();
  std::vector<cplx> out(total, cplx{0.0, 0.0});
  for (std::size_t outer = 0; outer < total; outer += block) {
    for (int p = 0; p < m; ++p) {
      const cplx* src = in.data() + outer + static_cast<std::size_t>(p) * stride;
      for (int a = 0; a < m; ++a) {
        const cplx wpa = w(p, a);
        if (wpa == cplx{0.0, 0.0}) continue;
        cplx* dst = out.data() + outer + static_cast<std::size_t>(a) * stride;
        for (std::size_t inner = 0; inner < stride; ++inner) dst[inner] += wpa * src[inner];
      }
    }
  }
  return out;
}

}  // namespace

void LadderParams::validate() const {
  require(n_rungs >= 1, ErrorCode::InvalidArgument, "n_rungs must be positive");
  require(n_rungs <= 32, ErrorCode::InvalidArgument, "n_rungs above 32 exceeds 64-bit masks");
  require(n_up >= 0 && n_down >= 0, ErrorCode::InvalidArgument,
          "electron counts must be non-negative");
  require(n_up <= n_orbitals() && n_down <= n_orbitals(), ErrorCode::InvalidArgument,
          "more electrons of one spin than orbitals");
  require(t > 0.0, ErrorCode::InvalidArgument, "intra-leg hopping t must be positive");
  require(std::isfinite(t_perp) && std::isfinite(u), ErrorCode::InvalidArgument,
          "t_perp and u must be finite");
}

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::Site: return "site";
    case BasisKind::Momentum: return "momentum";
    case BasisKind::MolecularOrbital: return "molecular";
  }
  return "unknown";
}

BasisKind basis_kind_from_string(const std::string& s) {
  if (s == "site") return BasisKind::Site;
  if (s == "momentum" || s == "k") return BasisKind::Momentum;
  if (s == "molecular" || s == "mo" || s == "molecular_orbital") {
    return BasisKind::MolecularOrbital;
  }
  fail(ErrorCode::Parse, "unknown basis kind '" + s + "'");
}

IntegralTensors::IntegralTensors(int n)
    : n_orb(n),
      h1(CMatrix::Zero(n, n)),
      h2(static_cast<std::size_t>(n) * n * n * n, cplx{0.0, 0.0}) {}

double IntegralTensors::hermiticity_error() const {
  double err = (h1 - h1.adjoint()).cwiseAbs().maxCoeff();
  const int m = n_orb;
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q)
      for (int r = 0; r < m; ++r)
        for (int s = 0; s < m; ++s) {
          err = std::max(err, std::abs(eri(p, q, r, s) - std::conj(eri(r, s, p, q))));
        }
  return err;
}

IntegralTensors build_site_hamiltonian(const LadderParams& params) {
  params.validate();
  const int n = params.n_rungs;
  IntegralTensors ints(params.n_orbitals());
  // With N = 2 both neighbours of a rung are the same rung, so the bond is
  // accumulated twice (-2t).
  if (n > 1) {
    for (int i = 0; i < n; ++i) {
      const int j = (i + 1) % n;
      for (int leg = 0; leg < 2; ++leg) {
        const int p = site_index(i, leg);
        const int q = site_index(j, leg);
        ints.h1(p, q) += -params.t;
        ints.h1(q, p) += -params.t;
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    ints.h1(site_index(i, 0), site_index(i, 1)) += -params.t_perp;
    ints.h1(site_index(i, 1), site_index(i, 0)) += -params.t_perp;
  }
  for (int p = 0; p < params.n_orbitals(); ++p) ints.eri(p, p, p, p) = params.u;
  return ints;
}

double band_dispersion_at(const LadderParams& params, int momentum_index, Branch branch) {
  // a single rung has no intra-leg bond
  const double c = params.n_rungs == 1 ? 0.0 : grid_cos(momentum_index, params.n_rungs);
  const double sign = branch == Branch::Bonding ? -1.0 : 1.0;
  return -2.0 * params.t * c + sign * params.t_perp;
}

double band_dispersion(const LadderParams& params, double k, Branch branch) {
  require(params.n_rungs >= 1, ErrorCode::InvalidArgument, "n_rungs must be positive");
  const double x = k * params.n_rungs / (2.0 * kPi);
  const double n = std::round(x);
  require(std::abs(x - n) < 1e-9, ErrorCode::InvalidArgument,
          "momentum is not on the 2 pi n / N grid");
  return band_dispersion_at(params, static_cast<int>(n), branch);
}

std::vector<BandLevel> band_levels(const LadderParams& params) {
  std::vector<BandLevel> levels;
  levels.reserve(2 * params.n_rungs);
  for (Branch b : {Branch::Bonding, Branch::Antibonding}) {
    for (int n = 0; n < params.n_rungs; ++n) {
      levels.push_back({n, 2.0 * kPi * n / params.n_rungs, b, band_dispersion_at(params, n, b)});
    }
  }
  std::stable_sort(levels.begin(), levels.end(),
                   [](const BandLevel& a, const BandLevel& b) { return a.energy < b.energy; });
  return levels;
}

double artificial_gap(const LadderParams& params) {
  params.validate();
  const int ne = params.n_electrons();
  require(ne % 2 == 0, ErrorCode::Unsupported, "artificial gap needs an even electron count");
  const int n_occ = ne / 2;
  require(n_occ > 0 && n_occ < 2 * params.n_rungs, ErrorCode::Unsupported,
          "artificial gap undefined for empty or full bands");
  const auto levels = band_levels(params);
  const double gap = levels[n_occ].energy - levels[n_occ - 1].energy;
  return gap < 1e-14 ? 0.0 : gap;
}

namespace {

int occupied_bonding(LadderParams p) {
  const auto levels = band_levels(p);
  const int n_occ = p.n_electrons() / 2;
  const double homo = levels[n_occ - 1].energy;
  int count = 0;
  for (const auto& l : levels) {
    if (l.branch == Branch::Bonding && l.energy <= homo) ++count;
  }
  return count;
}

}  // namespace

TuneResult tune_t_perp(const LadderParams& params, double lo, double hi, double tolerance) {
  require(lo > 0.0 && hi > lo && hi < 4.0 * params.t, ErrorCode::InvalidArgument,
          "search interval must lie inside (0, 4t)");
  require(tolerance > 0.0, ErrorCode::InvalidArgument, "tolerance must be positive");
  LadderParams p = params;
  p.t_perp = lo;
  (void)artificial_gap(p);  // validates the filling

  const int steps = 4000;
  const double h = (hi - lo) / steps;
  p.t_perp = lo;
  int prev = occupied_bonding(p);
  for (int i = 1; i <= steps; ++i) {
    double a = lo + (i - 1) * h;
    double b = (i == steps) ? hi : lo + i * h;
    p.t_perp = b;
    const int cur = occupied_bonding(p);
    if (cur == prev) continue;
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
      const double mid = 0.5 * (a + b);
      p.t_perp = mid;
      if (occupied_bonding(p) == prev) {
        a = mid;
      } else {
        b = mid;
      }
    }
    const double crossing = 0.5 * (a + b);
    // Frontier levels move with slopes -1 and +1, so the gap is 2|t_perp - crossing|.
    const double offset = 0.25 * tolerance;
    for (double cand : {crossing + offset, crossing - offset}) {
      if (cand <= lo || cand >= hi) continue;
      p.t_perp = cand;
      const double g = artificial_gap(p);
      if (g > 0.0 && g < tolerance) return {cand, crossing, g};
    }
    p.t_perp = b;
    prev = cur;
  }
  fail(ErrorCode::NotFound, "no frontier level crossing with a closed-shell gap in interval");
}

BasisTransform build_basis_transform(const LadderParams& params, BasisKind kind) {
  params.validate();
  const int n = params.n_rungs;
  const int m = params.n_orbitals();
  BasisTransform bt;
  bt.kind = kind;
  bt.n_rungs = n;
  bt.v = CMatrix::Zero(m, m);
  bt.labels.resize(m);

  if (kind == BasisKind::Site) {
    bt.v.setIdentity();
    for (int i = 0; i < n; ++i)
      for (int leg = 0; leg < 2; ++leg) {
        auto& l = bt.labels[site_index(i, leg)];
        l.rung = i;
        l.leg = leg;
      }
    return bt;
  }

  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const auto cols = momentum_columns(n);
  for (int c = 0; c < m; ++c) {
    const auto& col = cols[c];
    const double leg_b = col.branch == Branch::Bonding ? inv_sqrt2 : -inv_sqrt2;
    for (int i = 0; i < n; ++i) {
      const double phase = 2.0 * kPi * col.n * i / n;
      const cplx f = std::polar(inv_sqrt_n, phase);
      bt.v(site_index(i, 0), c) = f * inv_sqrt2;
      bt.v(site_index(i, 1), c) = f * leg_b;
    }
    auto& l = bt.labels[c];
    l.momentum = col.n;
    l.branch = col.branch;
    l.partner = col.partner;
  }
  if (kind == BasisKind::Momentum) return bt;

  // g/u recombination of each (k, -k) pair; self-paired momenta are real.
  const cplx minus_i{0.0, -1.0};
  for (int c = 0; c < m; ++c) {
    auto& l = bt.labels[c];
    if (l.partner < 0) {
      l.parity = Parity::Even;
      continue;
    }
    if (l.partner < c) continue;
    const int cm = l.partner;
    const CVector ck = bt.v.col(c);
    const CVector cmk = bt.v.col(cm);
    bt.v.col(c) = inv_sqrt2 * (ck + cmk);
    bt.v.col(cm) = minus_i * inv_sqrt2 * (ck - cmk);
    l.parity = Parity::Even;
    bt.labels[cm].parity = Parity::Odd;
    bt.labels[cm].momentum = l.momentum;
  }
  bt.kind = BasisKind::MolecularOrbital;
  return bt;
}

IntegralTensors rotate_integrals(const IntegralTensors& tensors, const CMatrix& v) {
  const int m = tensors.n_orb;
  require(v.rows() == m && v.cols() == m, ErrorCode::InvalidArgument,
          "basis transform dimension does not match integrals");
  IntegralTensors out;
  out.n_orb = m;
  out.e_core = tensors.e_core;
  out.h1 = v.adjoint() * tensors.h1 * v;
  const CMatrix vc = v.conjugate();
  auto t = contract_index(tensors.h2, vc, 0, m);
  t = contract_index(t, vc, 1, m);
  t = contract_index(t, v, 2, m);
  out.h2 = contract_index(t, v, 3, m);
  return out;
}

IntegralTensors build_hamiltonian(const LadderParams& params, const BasisTransform& basis) {
  const auto site = build_site_hamiltonian(params);
  if (basis.kind == BasisKind::Site) return site;
  return rotate_integrals(site, basis.v);
}

}  // namespace lsqd
