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

#include "ladder_sqd/fock_oracle.hpp"

#include <unordered_map>

namespace lsqd::oracle {

FockSpace::FockSpace(int n_orb) : m_(n_orb) {
  require(n_orb >= 1 && n_orb <= 8, ErrorCode::InvalidArgument, "Fock oracle supports M <= 8");
}

Determinant FockSpace::det(std::size_t idx) const {
  const u64 mask = (u64{1} << m_) - 1;
  return {idx & mask, (idx >> m_) & mask};
}

std::optional<std::pair<std::size_t, double>> FockSpace::apply(const std::vector<FockOp>& ops,
                                                               std::size_t state) const {
  double sign = 1.0;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    const std::size_t bit = std::size_t{1} << it->mode;
    const bool occ = (state & bit) != 0;
    if (it->create == occ) return std::nullopt;
    int below = 0;
    for (int j = 0; j < it->mode; ++j) below += (state >> j) & 1U;
    if (below % 2) sign = -sign;
    state ^= bit;
  }
  return std::make_pair(state, sign);
}

void FockSpace::accumulate(const std::vector<FockOp>& ops, cplx coeff, const CVector& x,
                           CVector& y) const {
  for (std::size_t s = 0; s < dim(); ++s) {
    const cplx xs = x[static_cast<Eigen::Index>(s)];
    if (xs == cplx{0.0, 0.0}) continue;
    if (auto r = apply(ops, s)) y[static_cast<Eigen::Index>(r->first)] += coeff * r->second * xs;
  }
}

CMatrix FockSpace::hamiltonian(const IntegralTensors& ints,
                               const std::vector<std::size_t>& states) const {
  std::unordered_map<std::size_t, Eigen::Index> pos;
  for (std::size_t i = 0; i < states.size(); ++i) pos[states[i]] = static_cast<Eigen::Index>(i);
  const auto n = static_cast<Eigen::Index>(states.size());
  CMatrix h = CMatrix::Zero(n, n);
  auto add = [&](const std::vector<FockOp>& ops, cplx c) {
    if (std::abs(c) < 1e-15) return;
    for (std::size_t j = 0; j < states.size(); ++j) {
      if (auto r = apply(ops, states[j])) {
        auto it = pos.find(r->first);
        if (it != pos.end()) h(it->second, static_cast<Eigen::Index>(j)) += c * r->second;
      }
    }
  };
  const int m = m_;
  for (int s = 0; s < 2; ++s)
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q) add({{true, p + s * m}, {false, q + s * m}}, ints.h1(p, q));
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2)
      for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q)
          for (int r = 0; r < m; ++r)
            for (int t = 0; t < m; ++t)
              add({{true, p + s1 * m}, {true, q + s2 * m}, {false, t + s2 * m}, {false, r + s1 * m}},
                  0.5 * ints.eri(p, q, r, t));
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) += ints.e_core;
  return h;
}

CVector FockSpace::lift_state(const CMatrix& d, std::size_t state) const {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim()));
  v[0] = 1.0;
  // creation operators are written in ascending order, so the highest mode
  // acts on the vacuum first
  for (int mode = 2 * m_ - 1; mode >= 0; --mode) {
    if (!((state >> mode) & 1U)) continue;
    const int spin = mode / m_;
    const int i = mode % m_;
    CVector w = CVector::Zero(v.size());
    for (int j = 0; j < m_; ++j) {
      const cplx c = d(j, i);
      if (c == cplx{0.0, 0.0}) continue;
      accumulate({{true, j + spin * m_}}, c, v, w);
    }
    v = std::move(w);
  }
  return v;
}

CMatrix FockSpace::lift(const CMatrix& d, const std::vector<std::size_t>& states) const {
  std::unordered_map<std::size_t, Eigen::Index> pos;
  for (std::size_t i = 0; i < states.size(); ++i) pos[states[i]] = static_cast<Eigen::Index>(i);
  const auto n = static_cast<Eigen::Index>(states.size());
  CMatrix u = CMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const CVector col = lift_state(d, states[static_cast<std::size_t>(j)]);
    for (Eigen::Index s = 0; s < col.size(); ++s) {
      if (std::abs(col[s]) < 1e-15) continue;
      auto it = pos.find(static_cast<std::size_t>(s));
      require(it != pos.end(), ErrorCode::Internal, "lifted state leaves the sector");
      u(it->second, j) = col[s];
    }
  }
  return u;
}

std::vector<std::size_t> FockSpace::sector(int n_up, int n_down) const {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < dim(); ++s) {
    const auto d = det(s);
    if (d.n_alpha() == n_up && d.n_beta() == n_down) out.push_back(s);
  }
  return out;
}

CVector FockSpace::embed(const SubspaceSet& s, const CVector& amps) const {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dim()));
  for (std::size_t i = 0; i < s.size(); ++i)
    v[static_cast<Eigen::Index>(index(s[i]))] = amps[static_cast<Eigen::Index>(i)];
  return v;
}

}  // namespace lsqd::oracle
