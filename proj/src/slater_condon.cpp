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

#include <bit>

#include "ladder_sqd/sci_core.hpp"

namespace lsqd {

namespace {

template <typename F>
inline void for_each_bit(u64 mask, F&& f) {
  while (mask) {
    f(std::countr_zero(mask));
    mask &= mask - 1;
  }
}

inline int lowest(u64 mask) { return std::countr_zero(mask); }
inline int highest(u64 mask) { return 63 - std::countl_zero(mask); }

// Same-spin single excitation h -> p on `ket` (of this spin), with `other`
// the opposite-spin occupation.
cplx single_value(u64 ket, u64 other, int h, int p, const IntegralTensors& ints) {
  cplx v = ints.h1(p, h);
  for_each_bit(ket & ~(u64{1} << h), [&](int j) {
    v += ints.eri(p, j, h, j) - ints.eri(p, j, j, h);
  });
  for_each_bit(other, [&](int j) { v += ints.eri(p, j, h, j); });
  return v;
}

}  // namespace

cplx diagonal_element(const Determinant& d, const IntegralTensors& ints) {
  cplx e{ints.e_core, 0.0};
  for (u64 mask : {d.alpha, d.beta}) {
    for_each_bit(mask, [&](int i) {
      e += ints.h1(i, i);
      for_each_bit(mask, [&](int j) {
        if (j > i) e += ints.eri(i, j, i, j) - ints.eri(i, j, j, i);
      });
    });
  }
  for_each_bit(d.alpha, [&](int i) {
    for_each_bit(d.beta, [&](int j) { e += ints.eri(i, j, i, j); });
  });
  return e;
}

cplx slater_condon_element(const Determinant& bra, const Determinant& ket,
                           const IntegralTensors& ints) {
  require(bra.n_alpha() == ket.n_alpha() && bra.n_beta() == ket.n_beta(),
          ErrorCode::InvalidArgument, "Slater-Condon element between different sectors");
  const u64 xa = bra.alpha ^ ket.alpha;
  const u64 xb = bra.beta ^ ket.beta;
  const int da = std::popcount(xa) / 2;
  const int db = std::popcount(xb) / 2;
  if (da + db > 2) return {0.0, 0.0};
  if (da + db == 0) return diagonal_element(ket, ints);

  if (da == 1 && db == 0) {
    const int h = lowest(ket.alpha & xa);
    const int p = lowest(bra.alpha & xa);
    return single_excitation_sign(ket.alpha, h, p) * single_value(ket.alpha, ket.beta, h, p, ints);
  }
  if (da == 0 && db == 1) {
    const int h = lowest(ket.beta & xb);
    const int p = lowest(bra.beta & xb);
    return single_excitation_sign(ket.beta, h, p) * single_value(ket.beta, ket.alpha, h, p, ints);
  }
  if (da == 1 && db == 1) {
    const int ha = lowest(ket.alpha & xa);
    const int pa = lowest(bra.alpha & xa);
    const int hb = lowest(ket.beta & xb);
    const int pb = lowest(bra.beta & xb);
    const double s = single_excitation_sign(ket.alpha, ha, pa) *
                     single_excitation_sign(ket.beta, hb, pb);
    return s * ints.eri(pa, pb, ha, hb);
  }
  // Same-spin double: c^dag_p c^dag_q c_j c_i with i < j holes, p < q particles.
  const bool alpha = da == 2;
  const u64 kmask = alpha ? ket.alpha : ket.beta;
  const u64 x = alpha ? xa : xb;
  const u64 holes = kmask & x;
  const u64 parts = (alpha ? bra.alpha : bra.beta) & x;
  const int i = lowest(holes), j = highest(holes);
  const int p = lowest(parts), q = highest(parts);
  u64 m = kmask;
  double s = annihilate(m, i);
  s *= annihilate(m, j);
  s *= create(m, q);
  s *= create(m, p);
  return s * (ints.eri(p, q, i, j) - ints.eri(p, q, j, i));
}

}  // namespace lsqd
