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
 * @file fock_oracle.hpp
 * @brief Brute-force second-quantized reference over the full Fock space.
 *
 * Spin-orbital mode i < M is (i, up), mode M + i is (i, down); the Fock
 * index of a determinant is alpha | beta << M. States apply creation
 * operators in ascending mode order, which is the library's determinant
 * convention, but nothing here reuses the Slater-Condon sign code.
 */

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ladder_sqd/common.hpp"
#include "ladder_sqd/determinant_space.hpp"
#include "ladder_sqd/lattice_model.hpp"

namespace lsqd::oracle {

struct FockOp {
  bool create;
  int mode;
};

class FockSpace {
 public:
  explicit FockSpace(int n_orb);

  int n_orb() const { return m_; }
  std::size_t dim() const { return std::size_t{1} << (2 * m_); }
  std::size_t index(const Determinant& d) const { return d.alpha | (d.beta << m_); }
  Determinant det(std::size_t idx) const;

  /// Applies the operator string right-to-left (last element first) to a
  /// basis state; nullopt when annihilated.
  std::optional<std::pair<std::size_t, double>> apply(const std::vector<FockOp>& ops,
                                                      std::size_t state) const;
  /// Same on a vector, with a coefficient.
  void accumulate(const std::vector<FockOp>& ops, cplx coeff, const CVector& x, CVector& y) const;

  /// Full Hamiltonian restricted to the given basis states.
  CMatrix hamiltonian(const IntegralTensors& ints, const std::vector<std::size_t>& states) const;
  /// U(g) = lift of a one-body unitary with g c^dag_i g^-1 = sum_j c^dag_j D_ji,
  /// built by applying the transformed creation operators to the vacuum.
  CVector lift_state(const CMatrix& d, std::size_t state) const;
  CMatrix lift(const CMatrix& d, const std::vector<std::size_t>& states) const;

  std::vector<std::size_t> sector(int n_up, int n_down) const;
  CVector embed(const SubspaceSet& s, const CVector& amps) const;

 private:
  int m_;
};

}  // namespace lsqd::oracle
