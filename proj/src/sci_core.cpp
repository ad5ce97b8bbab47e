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
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "ladder_sqd/sci_core.hpp"

namespace lsqd {

CMatrix dense_matrix(const SubspaceSet& subspace, const IntegralTensors& ints) {
  const auto n = static_cast<Eigen::Index>(subspace.size());
  CMatrix h(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const cplx v = slater_condon_element(subspace[static_cast<std::size_t>(i)],
                                           subspace[static_cast<std::size_t>(j)], ints);
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
    h(i, i) = h(i, i).real();
  }
  return h;
}

std::vector<EigenSolution> dense_diagonalize(const SubspaceSet& subspace,
                                             const IntegralTensors& ints, std::size_t cap) {
  require(!subspace.empty(), ErrorCode::InvalidArgument, "empty subspace");
  require(subspace.size() <= cap, ErrorCode::BudgetExceeded,
          "dense diagonalization of dimension " + std::to_string(subspace.size()) +
              " exceeds cap " + std::to_string(cap));
  Eigen::SelfAdjointEigenSolver<CMatrix> es(dense_matrix(subspace, ints));
  require(es.info() == Eigen::Success, ErrorCode::Internal, "dense eigensolver failed");
  std::vector<EigenSolution> out(subspace.size());
  for (std::size_t r = 0; r < out.size(); ++r) {
    auto& s = out[r];
    s.energy = es.eigenvalues()[static_cast<Eigen::Index>(r)];
    s.amplitudes = es.eigenvectors().col(static_cast<Eigen::Index>(r));
    Eigen::Index imax = 0;
    s.amplitudes.cwiseAbs().maxCoeff(&imax);
    const cplx a = s.amplitudes[imax];
    s.amplitudes *= std::conj(a) / std::abs(a);
  }
  for (auto& s : out) {
    int deg = 0;
    for (const auto& t : out) deg += std::abs(t.energy - s.energy) < 1e-8 ? 1 : 0;
    s.degeneracy = deg;
  }
  return out;
}

ExactResult exact_ground_state(const LadderParams& params, BasisKind kind,
                               const DavidsonOptions& opts, std::size_t max_dim,
                               int momentum_sector) {
  params.validate();
  require(momentum_sector < 0 || kind == BasisKind::Momentum, ErrorCode::InvalidArgument,
          "a momentum sector needs the momentum basis");
  ExactResult r;
  r.basis = build_basis_transform(params, kind);
  r.integrals = build_hamiltonian(params, r.basis);
  r.subspace = full_sector(params.n_orbitals(), params.n_up, params.n_down);
  if (momentum_sector >= 0) {
    require(momentum_sector < params.n_rungs, ErrorCode::InvalidArgument,
            "momentum sector index out of range");
    std::vector<Determinant> keep;
    for (const auto& d : r.subspace) {
      if (total_momentum_index(d, r.basis) == momentum_sector) keep.push_back(d);
    }
    r.subspace = SubspaceSet(std::move(keep));
  }
  require(r.subspace.size() <= max_dim, ErrorCode::BudgetExceeded,
          "FCI dimension " + std::to_string(r.subspace.size()) + " exceeds budget " +
              std::to_string(max_dim));
  SolverSettings settings;
  settings.davidson = opts;
  r.solution = solve_lowest(r.subspace, r.integrals, settings);
  return r;
}

EigenSolution solve_lowest(const SubspaceSet& subspace, const IntegralTensors& ints,
                           const SolverSettings& settings) {
  require(!subspace.empty(), ErrorCode::InvalidArgument, "empty subspace");
  if (subspace.size() <= settings.dense_threshold) {
    return dense_diagonalize(subspace, ints, std::max<std::size_t>(settings.dense_threshold, 1))
        .front();
  }
  ProjectedHamiltonian h(subspace, ints, settings.matvec);
  DavidsonOptions d = settings.davidson;
  d.n_roots = std::min<int>(d.n_roots, static_cast<int>(subspace.size()));
  return davidson_lowest(h, d).front();
}

Determinant rhf_determinant(const IntegralTensors& ints, int n_up, int n_down) {
  const int m = ints.n_orb;
  require(n_up >= 0 && n_down >= 0 && n_up <= m && n_down <= m, ErrorCode::InvalidArgument,
          "electron count outside the orbital space");
  const CMatrix off = ints.h1 - CMatrix(ints.h1.diagonal().asDiagonal());
  require(off.cwiseAbs().maxCoeff() < 1e-12, ErrorCode::Unsupported,
          "restricted determinant needs a basis with diagonal one-body integrals");
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return ints.h1(a, a).real() < ints.h1(b, b).real();
  });
  auto fill = [&](int n) {
    if (n > 0 && n < m) {
      const double homo = ints.h1(order[static_cast<std::size_t>(n - 1)],
                                  order[static_cast<std::size_t>(n - 1)]).real();
      const double lumo = ints.h1(order[static_cast<std::size_t>(n)],
                                  order[static_cast<std::size_t>(n)]).real();
      require(lumo - homo > 1e-12, ErrorCode::InvalidArgument,
              "frontier level is degenerate; no unique restricted determinant");
    }
    u64 occ = 0;
    for (int i = 0; i < n; ++i) occ |= u64{1} << order[static_cast<std::size_t>(i)];
    return occ;
  };
  return {fill(n_up), fill(n_down)};
}

OccupationVector occupations(const EigenSolution& sol, const SubspaceSet& subspace, int n_orb) {
  require(static_cast<std::size_t>(sol.amplitudes.size()) == subspace.size(),
          ErrorCode::InvalidArgument, "amplitude count does not match subspace");
  OccupationVector occ;
  occ.n_orb = n_orb;
  occ.n.assign(static_cast<std::size_t>(2 * n_orb), 0.0);
  const double norm = sol.amplitudes.squaredNorm();
  require(norm > 0.0, ErrorCode::InvalidArgument, "zero wavefunction");
  for (std::size_t i = 0; i < subspace.size(); ++i) {
    const double w = std::norm(sol.amplitudes[static_cast<Eigen::Index>(i)]) / norm;
    const auto& d = subspace[i];
    for (int p = 0; p < n_orb; ++p) {
      if ((d.alpha >> p) & 1U) occ.n[static_cast<std::size_t>(p)] += w;
      if ((d.beta >> p) & 1U) occ.n[static_cast<std::size_t>(n_orb + p)] += w;
    }
  }
  for (double& x : occ.n) x = std::clamp(x, 0.0, 1.0);
  return occ;
}

double max_abs_diff(const OccupationVector& a, const OccupationVector& b) {
  require(a.n.size() == b.n.size(), ErrorCode::InvalidArgument, "occupation size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.n.size(); ++i) d = std::max(d, std::abs(a.n[i] - b.n[i]));
  return d;
}

void write_solution(std::ostream& os, const EigenSolution& sol, const SubspaceSet& subspace,
                    int n_orb) {
  require(static_cast<std::size_t>(sol.amplitudes.size()) == subspace.size(),
          ErrorCode::InvalidArgument, "amplitude count does not match subspace");
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  os << "# energy " << sol.energy << '\n';
  os << "# residual " << sol.residual_norm << '\n';
  os << "# iterations " << sol.iterations << '\n';
  os << "# dimension " << subspace.size() << '\n';
  for (std::size_t i = 0; i < subspace.size(); ++i) {
    const cplx a = sol.amplitudes[static_cast<Eigen::Index>(i)];
    os << to_bitstring(subspace[i], n_orb) << ' ' << a.real() << ' ' << a.imag() << '\n';
  }
  os.precision(old);
}

std::pair<SubspaceSet, EigenSolution> read_solution(std::istream& is, int n_orb) {
  EigenSolution sol;
  std::vector<std::pair<Determinant, cplx>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, key;
      ls >> hash >> key;
      if (key == "energy") ls >> sol.energy;
      else if (key == "residual") ls >> sol.residual_norm;
      else if (key == "iterations") ls >> sol.iterations;
      continue;
    }
    std::string bits;
    double re = 0.0, im = 0.0;
    ls >> bits >> re >> im;
    require(!ls.fail(), ErrorCode::Parse, "malformed solution line: " + line);
    rows.emplace_back(from_bitstring(bits, n_orb), cplx{re, im});
  }
  std::vector<Determinant> dets;
  dets.reserve(rows.size());
  for (const auto& r : rows) dets.push_back(r.first);
  SubspaceSet sub(std::move(dets));
  require(sub.size() == rows.size(), ErrorCode::Parse, "duplicate determinant in solution");
  sol.amplitudes = CVector::Zero(static_cast<Eigen::Index>(sub.size()));
  for (const auto& r : rows) sol.amplitudes[static_cast<Eigen::Index>(*sub.find(r.first))] = r.second;
  return {std::move(sub), std::move(sol)};
}

}  // namespace lsqd
