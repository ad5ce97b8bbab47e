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
#include <bit>
#include <cstdint>
#include <unordered_map>

#include "ladder_sqd/sci_core.hpp"

namespace lsqd {

namespace {

constexpr double kIntegralCutoff = 1e-14;

template <typename F>
inline void for_each_bit(u64 mask, F&& f) {
  while (mask) {
    f(std::countr_zero(mask));
    mask &= mask - 1;
  }
}

struct SparseEntry {
  std::uint32_t col;
  cplx value;
};

// Row-compressed list of (column, value).
struct Csr {
  std::vector<std::size_t> offsets{0};
  std::vector<SparseEntry> entries;
};

struct ExcitationEntry {
  std::uint32_t col;   // source string index
  std::uint32_t pair;  // p * M + r
  double sign;
};

struct ExcitationList {
  std::vector<std::size_t> offsets{0};
  std::vector<ExcitationEntry> entries;
};

using StringIndex = std::unordered_map<u64, std::uint32_t>;

StringIndex index_strings(const std::vector<u64>& s) {
  StringIndex idx;
  idx.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) idx.emplace(s[i], static_cast<std::uint32_t>(i));
  return idx;
}

// Pure same-spin Hamiltonian over one string set: one-body plus same-spin
// two-body, including the diagonal.
Csr same_spin_matrix(const std::vector<u64>& strings, const StringIndex& idx, int m,
                     const IntegralTensors& ints) {
  Csr csr;
  const u64 full = orbital_mask(m);
  for (std::size_t ia = 0; ia < strings.size(); ++ia) {
    const u64 a = strings[ia];
    const Determinant bra{a, 0};
    std::vector<SparseEntry> row;
    row.push_back({static_cast<std::uint32_t>(ia), slater_condon_element(bra, bra, ints)});
    const u64 occ = a;
    const u64 vir = full & ~a;
    for_each_bit(occ, [&](int i) {
      for_each_bit(vir, [&](int p) {
        const u64 b = (a ^ (u64{1} << i)) | (u64{1} << p);
        const auto it = idx.find(b);
        if (it == idx.end()) return;
        const cplx v = slater_condon_element(bra, Determinant{b, 0}, ints);
        if (std::abs(v) > kIntegralCutoff) row.push_back({it->second, v});
      });
    });
    for_each_bit(occ, [&](int i) {
      for_each_bit(occ & ~((u64{2} << i) - 1), [&](int j) {
        for_each_bit(vir, [&](int p) {
          for_each_bit(vir & ~((u64{2} << p) - 1), [&](int q) {
            const u64 b = (a ^ (u64{1} << i) ^ (u64{1} << j)) | (u64{1} << p) | (u64{1} << q);
            const auto it = idx.find(b);
            if (it == idx.end()) return;
            const cplx v = slater_condon_element(bra, Determinant{b, 0}, ints);
            if (std::abs(v) > kIntegralCutoff) row.push_back({it->second, v});
          });
        });
      });
    });
    std::sort(row.begin(), row.end(),
              [](const SparseEntry& x, const SparseEntry& y) { return x.col < y.col; });
    csr.entries.insert(csr.entries.end(), row.begin(), row.end());
    csr.offsets.push_back(csr.entries.size());
  }
  return csr;
}

// For each target string: every source string s and orbital pair (p, r) with
// <target| c^dag_p c_r |s> = sign != 0, diagonal p == r included.
ExcitationList one_body_transitions(const std::vector<u64>& strings, const StringIndex& idx,
                                    int m) {
  ExcitationList list;
  const u64 full = orbital_mask(m);
  for (std::size_t ia = 0; ia < strings.size(); ++ia) {
    const u64 a = strings[ia];
    for_each_bit(a, [&](int p) {
      list.entries.push_back({static_cast<std::uint32_t>(ia),
                              static_cast<std::uint32_t>(p * m + p), 1.0});
    });
    for_each_bit(a, [&](int p) {
      for_each_bit(full & ~a, [&](int r) {
        const u64 s = (a ^ (u64{1} << p)) | (u64{1} << r);
        const auto it = idx.find(s);
        if (it == idx.end()) return;
        list.entries.push_back({it->second, static_cast<std::uint32_t>(p * m + r),
                                single_excitation_sign(s, r, p)});
      });
    });
    list.offsets.push_back(list.entries.size());
  }
  return list;
}

}  // namespace

struct ProjectedHamiltonian::ProductKernel {
  int m = 0;
  std::vector<u64> alphas, betas;
  Csr h_alpha, h_beta;
  ExcitationList e_alpha, e_beta;
  // vmix[(p*M + r)*M*M + q*M + s] = <pq|rs>
  std::vector<cplx> vmix;
  std::vector<char> block_nonzero;

  void apply(const CVector& x, CVector& y) const {
    const std::size_t na = alphas.size(), nb = betas.size();
    const std::size_t m2 = static_cast<std::size_t>(m) * m;
    const cplx* xc = x.data();
    cplx* yc = y.data();
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t ia_s = 0; ia_s < static_cast<std::ptrdiff_t>(na); ++ia_s) {
      const std::size_t ia = static_cast<std::size_t>(ia_s);
      cplx* yrow = yc + ia * nb;
      for (std::size_t ib = 0; ib < nb; ++ib) yrow[ib] = 0.0;
      // alpha-only part
      for (std::size_t k = h_alpha.offsets[ia]; k < h_alpha.offsets[ia + 1]; ++k) {
        const auto& e = h_alpha.entries[k];
        const cplx* xrow = xc + e.col * nb;
        for (std::size_t ib = 0; ib < nb; ++ib) yrow[ib] += e.value * xrow[ib];
      }
      // beta-only part
      const cplx* xrow_a = xc + ia * nb;
      for (std::size_t ib = 0; ib < nb; ++ib) {
        cplx acc = 0.0;
        for (std::size_t k = h_beta.offsets[ib]; k < h_beta.offsets[ib + 1]; ++k) {
          acc += h_beta.entries[k].value * xrow_a[h_beta.entries[k].col];
        }
        yrow[ib] += acc;
      }
      // opposite-spin part: sum <pq|rs> E^a_pr E^b_qs
      for (std::size_t ka = e_alpha.offsets[ia]; ka < e_alpha.offsets[ia + 1]; ++ka) {
        const auto& ea = e_alpha.entries[ka];
        if (!block_nonzero[ea.pair]) continue;
        const cplx* vblock = vmix.data() + static_cast<std::size_t>(ea.pair) * m2;
        const cplx* xrow = xc + static_cast<std::size_t>(ea.col) * nb;
        for (std::size_t ib = 0; ib < nb; ++ib) {
          cplx acc = 0.0;
          for (std::size_t kb = e_beta.offsets[ib]; kb < e_beta.offsets[ib + 1]; ++kb) {
            const auto& eb = e_beta.entries[kb];
            const cplx v = vblock[eb.pair];
            if (v.real() == 0.0 && v.imag() == 0.0) continue;
            acc += eb.sign * v * xrow[eb.col];
          }
          yrow[ib] += ea.sign * acc;
        }
      }
    }
  }
};

struct ProjectedHamiltonian::GenericKernel {
  bool cached = false;
  Csr rows;

  template <typename F>
  static void for_each_neighbor(const Determinant& d, const SubspaceSet& s, int m, F&& f) {
    const u64 full = orbital_mask(m);
    auto probe = [&](const Determinant& c) {
      if (auto j = s.find(c)) f(*j, c);
    };
    probe(d);
    for (int spin = 0; spin < 2; ++spin) {
      const u64 occ = spin == 0 ? d.alpha : d.beta;
      const u64 vir = full & ~occ;
      auto with = [&](u64 mask) {
        return spin == 0 ? Determinant{mask, d.beta} : Determinant{d.alpha, mask};
      };
      for_each_bit(occ, [&](int i) {
        for_each_bit(vir, [&](int p) { probe(with((occ ^ (u64{1} << i)) | (u64{1} << p))); });
      });
      for_each_bit(occ, [&](int i) {
        for_each_bit(occ & ~((u64{2} << i) - 1), [&](int j) {
          for_each_bit(vir, [&](int p) {
            for_each_bit(vir & ~((u64{2} << p) - 1), [&](int q) {
              probe(with((occ ^ (u64{1} << i) ^ (u64{1} << j)) | (u64{1} << p) | (u64{1} << q)));
            });
          });
        });
      });
    }
    const u64 va = full & ~d.alpha, vb = full & ~d.beta;
    for_each_bit(d.alpha, [&](int i) {
      for_each_bit(va, [&](int p) {
        const u64 a = (d.alpha ^ (u64{1} << i)) | (u64{1} << p);
        for_each_bit(d.beta, [&](int j) {
          for_each_bit(vb, [&](int q) {
            probe(Determinant{a, (d.beta ^ (u64{1} << j)) | (u64{1} << q)});
          });
        });
      });
    });
  }

  static std::vector<SparseEntry> row(std::size_t i, const SubspaceSet& s,
                                      const IntegralTensors& ints) {
    std::vector<SparseEntry> out;
    const Determinant& d = s[i];
    for_each_neighbor(d, s, ints.n_orb, [&](std::size_t j, const Determinant& c) {
      const cplx v = slater_condon_element(d, c, ints);
      if (std::abs(v) > kIntegralCutoff) out.push_back({static_cast<std::uint32_t>(j), v});
    });
    std::sort(out.begin(), out.end(),
              [](const SparseEntry& x, const SparseEntry& y) { return x.col < y.col; });
    return out;
  }
};

ProjectedHamiltonian::ProjectedHamiltonian(const SubspaceSet& subspace,
                                           const IntegralTensors& ints, MatvecOptions opts)
    : subspace_(&subspace), ints_(&ints) {
  const std::size_t n = subspace.size();
  require(n > 0, ErrorCode::InvalidArgument, "empty subspace");
  require(n < (std::size_t{1} << 32), ErrorCode::BudgetExceeded, "subspace too large");
  const int m = ints.n_orb;
  diag_.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) diag_[i] = diagonal_element(subspace[i], ints).real();

  if (opts.use_product_path && subspace.is_product()) {
    auto k = std::make_unique<ProductKernel>();
    k->m = m;
    k->alphas = subspace.alpha_strings();
    k->betas = subspace.beta_strings();
    const auto ia = index_strings(k->alphas);
    const auto ib = index_strings(k->betas);
    k->h_alpha = same_spin_matrix(k->alphas, ia, m, ints);
    k->h_beta = same_spin_matrix(k->betas, ib, m, ints);
    k->e_alpha = one_body_transitions(k->alphas, ia, m);
    k->e_beta = one_body_transitions(k->betas, ib, m);
    const std::size_t m2 = static_cast<std::size_t>(m) * m;
    k->vmix.resize(m2 * m2);
    k->block_nonzero.assign(m2, 0);
    for (int p = 0; p < m; ++p)
      for (int r = 0; r < m; ++r)
        for (int q = 0; q < m; ++q)
          for (int s = 0; s < m; ++s) {
            cplx v = ints.eri(p, q, r, s);
            if (std::abs(v) <= kIntegralCutoff) v = 0.0;
            const std::size_t pr = static_cast<std::size_t>(p) * m + r;
            k->vmix[pr * m2 + static_cast<std::size_t>(q) * m + s] = v;
            if (v != cplx{0.0, 0.0}) k->block_nonzero[pr] = 1;
          }
    product_ = std::move(k);
    return;
  }

  generic_ = std::make_unique<GenericKernel>();
  if (opts.cache_connectivity) {
    // Upper bound on the fan-out of one row.
    const Determinant& d0 = subspace[0];
    const std::size_t na = static_cast<std::size_t>(d0.n_alpha());
    const std::size_t nb = static_cast<std::size_t>(d0.n_beta());
    const std::size_t va = static_cast<std::size_t>(m) - na, vb = static_cast<std::size_t>(m) - nb;
    const std::size_t fan = 1 + na * va + nb * vb + na * (na - (na > 0)) * va * (va - (va > 0)) / 4 +
                            nb * (nb - (nb > 0)) * vb * (vb - (vb > 0)) / 4 + na * va * nb * vb;
    const std::size_t full_space = n;
    const std::size_t bytes = std::min(fan, full_space) * n * sizeof(SparseEntry);
    if (bytes <= opts.cache_cap_bytes) {
      std::vector<std::vector<SparseEntry>> rows(n);
#pragma omp parallel for schedule(dynamic, 64)
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        rows[static_cast<std::size_t>(i)] = GenericKernel::row(static_cast<std::size_t>(i), subspace, ints);
      }
      for (auto& r : rows) {
        generic_->rows.entries.insert(generic_->rows.entries.end(), r.begin(), r.end());
        generic_->rows.offsets.push_back(generic_->rows.entries.size());
      }
      generic_->cached = true;
    }
  }
}

ProjectedHamiltonian::~ProjectedHamiltonian() = default;
ProjectedHamiltonian::ProjectedHamiltonian(ProjectedHamiltonian&&) noexcept = default;
ProjectedHamiltonian& ProjectedHamiltonian::operator=(ProjectedHamiltonian&&) noexcept = default;

bool ProjectedHamiltonian::uses_product_path() const { return product_ != nullptr; }

void ProjectedHamiltonian::apply(const CVector& x, CVector& y) const {
  const std::size_t n = dim();
  require(static_cast<std::size_t>(x.size()) == n, ErrorCode::InvalidArgument,
          "matvec dimension mismatch");
  y.resize(x.size());
  if (product_) {
    product_->apply(x, y);
    return;
  }
  if (generic_->cached) {
    const auto& csr = generic_->rows;
#pragma omp parallel for schedule(dynamic, 256)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      cplx acc = 0.0;
      for (std::size_t k = csr.offsets[i]; k < csr.offsets[i + 1]; ++k) {
        acc += csr.entries[k].value * x[csr.entries[k].col];
      }
      y[i] = acc;
    }
    return;
  }
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    cplx acc = 0.0;
    for (const auto& e : GenericKernel::row(static_cast<std::size_t>(i), *subspace_, *ints_)) {
      acc += e.value * x[e.col];
    }
    y[i] = acc;
  }
}

cplx ProjectedHamiltonian::element(std::size_t i, std::size_t j) const {
  return slater_condon_element((*subspace_)[i], (*subspace_)[j], *ints_);
}

}  // namespace lsqd
