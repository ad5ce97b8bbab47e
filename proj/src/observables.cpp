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

#include "ladder_sqd/observables.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lsqd {

namespace {

struct Transition {
  int target;
  int mu;
  int xi;
  double sign;
};

// Strings of one spin with their one-body connections inside the set.
class StringSpace {
 public:
  StringSpace(std::vector<u64> strings, int n_orb, std::size_t budget)
      : strings_(std::move(strings)), m_(n_orb) {
    index_.reserve(strings_.size());
    for (std::size_t i = 0; i < strings_.size(); ++i) index_.emplace(strings_[i], static_cast<int>(i));
    const int n = strings_.empty() ? 0 : std::popcount(strings_.front());
    const std::size_t estimate =
        strings_.size() * static_cast<std::size_t>(n * (m_ - n + 1)) * sizeof(Transition);
    if (estimate <= budget) {
      table_.resize(strings_.size());
      for (std::size_t i = 0; i < strings_.size(); ++i) generate(static_cast<int>(i), table_[i]);
    }
  }

  std::size_t size() const { return strings_.size(); }
  bool stored() const { return !table_.empty() || strings_.empty(); }
  int find(u64 s) const {
    auto it = index_.find(s);
    return it == index_.end() ? -1 : it->second;
  }

  // Connections <target| d^dag_mu d_xi |source> of `source`, regenerated
  // into `scratch` when the table was not stored.
  const std::vector<Transition>& from(int source, std::vector<Transition>& scratch) const {
    if (!table_.empty()) return table_[static_cast<std::size_t>(source)];
    generate(source, scratch);
    return scratch;
  }

 private:
  void generate(int source, std::vector<Transition>& out) const {
    out.clear();
    const u64 x = strings_[static_cast<std::size_t>(source)];
    for (int xi = 0; xi < m_; ++xi) {
      if (!((x >> xi) & 1U)) continue;
      out.push_back({source, xi, xi, 1.0});
      for (int mu = 0; mu < m_; ++mu) {
        if ((x >> mu) & 1U) continue;
        const u64 y = (x ^ (u64{1} << xi)) | (u64{1} << mu);
        const int t = find(y);
        if (t >= 0) out.push_back({t, mu, xi, single_excitation_sign(x, xi, mu)});
      }
    }
  }

  std::vector<u64> strings_;
  int m_;
  std::unordered_map<u64, int> index_;
  std::vector<std::vector<Transition>> table_;
};

void check_pair_matrix(const CMatrix& o, int m) {
  require(o.rows() == m && o.cols() == m, ErrorCode::InvalidArgument,
          "pair operator matrix does not match the orbital basis");
}

}  // namespace

CMatrix site_pair_matrix(int n_rungs, int r) {
  require(n_rungs >= 1, ErrorCode::InvalidArgument, "ladder needs at least one rung");
  require(r >= 0 && r < n_rungs, ErrorCode::InvalidArgument,
          "rung " + std::to_string(r) + " outside [0, " + std::to_string(n_rungs) + ")");
  const int m = 2 * n_rungs;
  CMatrix o = CMatrix::Zero(m, m);
  const double w = 1.0 / std::sqrt(2.0);
  o(2 * r, 2 * r + 1) = w;
  o(2 * r + 1, 2 * r) = w;
  return o;
}

PairOperatorMatrix order_parameter_matrix(const BasisTransform& basis, int r) {
  PairOperatorMatrix p;
  p.r = r;
  p.basis = basis.kind;
  p.o_tilde = basis.v.transpose() * site_pair_matrix(basis.n_rungs, r) * basis.v;
  return p;
}

PairCorrelator::PairCorrelator(const EigenSolution& sol, const SubspaceSet& subspace, int n_orb,
                               const CorrelatorOptions& opts)
    : m_(n_orb) {
  require(static_cast<std::size_t>(sol.amplitudes.size()) == subspace.size(),
          ErrorCode::InvalidArgument, "amplitude count does not match subspace");
  require(n_orb >= 1 && n_orb <= 32, ErrorCode::InvalidArgument, "orbital count out of range");
  const std::size_t m = static_cast<std::size_t>(m_);
  density_.assign(m * m * m * m, cplx{});
  if (subspace.empty()) return;

  const StringSpace up(subspace.alpha_strings(), m_, opts.table_budget_bytes / 2);
  const StringSpace down(subspace.beta_strings(), m_, opts.table_budget_bytes / 2);
  tables_stored_ = up.stored() && down.stored();

  // pair view: rows[a] = sorted (b, Psi_ab)
  std::vector<std::vector<std::pair<int, cplx>>> rows(up.size());
  for (std::size_t i = 0; i < subspace.size(); ++i) {
    const auto& d = subspace[i];
    rows[static_cast<std::size_t>(up.find(d.alpha))].emplace_back(
        down.find(d.beta), sol.amplitudes[static_cast<Eigen::Index>(i)]);
  }
  for (auto& r : rows) std::sort(r.begin(), r.end(), [](auto& a, auto& b) { return a.first < b.first; });

  int n_threads = 1;
#ifdef _OPENMP
  n_threads = omp_get_max_threads();
#endif
  std::vector<std::vector<cplx>> partial(static_cast<std::size_t>(n_threads));

#pragma omp parallel num_threads(n_threads)
  {
    int tid = 0;
#ifdef _OPENMP
    tid = omp_get_thread_num();
#endif
    auto& acc = partial[static_cast<std::size_t>(tid)];
    acc.assign(m * m * m * m, cplx{});
    std::vector<cplx> conj_row(down.size(), cplx{});
    std::vector<cplx> rho(m * m);
    std::vector<Transition> scratch_up, scratch_down;
    std::vector<std::size_t> order;
    std::vector<const Transition*> group;

#pragma omp for schedule(static)
    for (std::ptrdiff_t g = 0; g < static_cast<std::ptrdiff_t>(up.size()); ++g) {
      const auto& row_g = rows[static_cast<std::size_t>(g)];
      if (row_g.empty()) continue;
      const auto& ups = up.from(static_cast<int>(g), scratch_up);
      // only the diagonal target repeats; rho depends on the target alone
      order.resize(ups.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t x, std::size_t y) { return ups[x].target < ups[y].target; });
      for (std::size_t k = 0; k < order.size();) {
        const int a = ups[order[k]].target;
        group.clear();
        for (; k < order.size() && ups[order[k]].target == a; ++k) group.push_back(&ups[order[k]]);
        const auto& row_a = rows[static_cast<std::size_t>(a)];
        if (row_a.empty()) continue;
        for (const auto& [b, v] : row_a) conj_row[static_cast<std::size_t>(b)] = std::conj(v);
        std::fill(rho.begin(), rho.end(), cplx{});
        for (const auto& [dl, psi] : row_g) {
          for (const auto& t : down.from(dl, scratch_down)) {
            const cplx c = conj_row[static_cast<std::size_t>(t.target)];
            if (c == cplx{}) continue;
            rho[static_cast<std::size_t>(t.mu) * m + static_cast<std::size_t>(t.xi)] +=
                t.sign * c * psi;
          }
        }
        for (const auto& [b, v] : row_a) conj_row[static_cast<std::size_t>(b)] = cplx{};
        for (const Transition* t : group) {
          cplx* dst = acc.data() +
                      (static_cast<std::size_t>(t->mu) * m + static_cast<std::size_t>(t->xi)) * m * m;
          for (std::size_t q = 0; q < m * m; ++q) dst[q] += t->sign * rho[q];
        }
      }
    }
  }
  for (const auto& acc : partial) {
    for (std::size_t q = 0; q < density_.size(); ++q) density_[q] += acc[q];
  }
}

PairCorrelator::~PairCorrelator() = default;
PairCorrelator::PairCorrelator(PairCorrelator&&) noexcept = default;
PairCorrelator& PairCorrelator::operator=(PairCorrelator&&) noexcept = default;

cplx PairCorrelator::operator()(const CMatrix& o_r, const CMatrix& o_0) const {
  check_pair_matrix(o_r, m_);
  check_pair_matrix(o_0, m_);
  const std::size_t m = static_cast<std::size_t>(m_);
  cplx p{};
  for (int mu = 0; mu < m_; ++mu) {
    for (int xi = 0; xi < m_; ++xi) {
      const cplx* r = density_.data() + (static_cast<std::size_t>(mu) * m + xi) * m * m;
      for (int nu = 0; nu < m_; ++nu) {
        const cplx a = std::conj(o_r(mu, nu));
        if (a == cplx{}) continue;
        for (int eta = 0; eta < m_; ++eta) {
          p += a * o_0(xi, eta) * r[static_cast<std::size_t>(nu) * m + eta];
        }
      }
    }
  }
  return p;
}

cplx PairCorrelator::operator()(const PairOperatorMatrix& o_r, const PairOperatorMatrix& o_0) const {
  require(o_r.basis == o_0.basis, ErrorCode::InvalidArgument,
          "pair operators are expressed in different bases");
  return (*this)(o_r.o_tilde, o_0.o_tilde);
}

cplx pair_correlation(const EigenSolution& sol, const SubspaceSet& subspace, int n_orb,
                      const CMatrix& o_r, const CMatrix& o_0, const CorrelatorOptions& opts) {
  return PairCorrelator(sol, subspace, n_orb, opts)(o_r, o_0);
}

cplx pair_correlation_direct(const EigenSolution& sol, const SubspaceSet& subspace, int n_orb,
                             const CMatrix& o_r, const CMatrix& o_0) {
  require(static_cast<std::size_t>(sol.amplitudes.size()) == subspace.size(),
          ErrorCode::InvalidArgument, "amplitude count does not match subspace");
  check_pair_matrix(o_r, n_orb);
  check_pair_matrix(o_0, n_orb);
  using Map = std::unordered_map<Determinant, cplx, DeterminantHash>;
  auto apply = [&](const CMatrix& o) {
    Map out;
    for (std::size_t i = 0; i < subspace.size(); ++i) {
      const Determinant& d = subspace[i];
      const cplx psi = sol.amplitudes[static_cast<Eigen::Index>(i)];
      // spin-down operators pass every spin-up creator
      const double base = (d.n_alpha() & 1) ? -1.0 : 1.0;
      for (int nu = 0; nu < n_orb; ++nu) {
        if (!((d.beta >> nu) & 1U)) continue;
        u64 b = d.beta;
        const double s_down = base * annihilate(b, nu);
        for (int mu = 0; mu < n_orb; ++mu) {
          if (!((d.alpha >> mu) & 1U) || o(mu, nu) == cplx{}) continue;
          u64 a = d.alpha;
          const double s = s_down * annihilate(a, mu);
          out[{a, b}] += s * o(mu, nu) * psi;
        }
      }
    }
    return out;
  };
  const Map phi_r = apply(o_r);
  const Map phi_0 = apply(o_0);
  // sum in a fixed order for reproducibility
  std::vector<std::pair<Determinant, cplx>> terms(phi_0.begin(), phi_0.end());
  std::sort(terms.begin(), terms.end(), [](auto& x, auto& y) { return x.first < y.first; });
  cplx p{};
  for (const auto& [d, v] : terms) {
    auto it = phi_r.find(d);
    if (it != phi_r.end()) p += std::conj(it->second) * v;
  }
  return p;
}

CorrelationSeries correlation_series(const PairCorrelator& corr, const BasisTransform& basis,
                                     int origin) {
  const int n = basis.n_rungs;
  require(origin >= 0 && origin < n, ErrorCode::InvalidArgument, "origin outside the ladder");
  CorrelationSeries s;
  s.basis = basis.kind;
  const auto o0 = order_parameter_matrix(basis, origin);
  for (int r = 0; r < n; ++r) {
    s.values.emplace_back(r, corr(order_parameter_matrix(basis, (origin + r) % n), o0));
  }
  return s;
}

void write_correlation_csv(std::ostream& os, const CorrelationSeries& s, bool header) {
  if (header) os << "r,re,im,basis,D,seed\n";
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& [r, p] : s.values) {
    os << r << ',' << p.real() << ',' << p.imag() << ',' << to_string(s.basis) << ',' << s.dim
       << ',' << s.seed << '\n';
  }
  os.precision(old);
}

std::string to_string(DistanceKind kind) { return kind == DistanceKind::Chord ? "chord" : "plain"; }

DistanceKind distance_kind_from_string(const std::string& s) {
  if (s == "chord") return DistanceKind::Chord;
  if (s == "plain") return DistanceKind::Plain;
  fail(ErrorCode::InvalidArgument, "unknown distance kind '" + s + "' (chord, plain)");
}

double ring_distance(int r, int n_rungs, DistanceKind kind) {
  if (kind == DistanceKind::Plain) return static_cast<double>(r);
  const double n = static_cast<double>(n_rungs);
  return n / kPi * std::sin(kPi * r / n);
}

FitResult fit_power_law(const CorrelationSeries& s, int n_rungs, const FitOptions& opts) {
  require(n_rungs >= 1, ErrorCode::InvalidArgument, "ladder needs at least one rung");
  const int r_max = opts.r_max < 0 ? n_rungs / 2 : opts.r_max;
  std::vector<std::pair<double, double>> pts;  // (1 / d^2, |P|)
  for (const auto& [r, p] : s.values) {
    if (r < std::max(opts.r_min, 1) || r > r_max) continue;
    if (opts.exclude_midpoint && n_rungs % 2 == 0 && 2 * r == n_rungs) continue;
    const double d = ring_distance(r, n_rungs, opts.distance);
    if (!(d > 0.0)) continue;
    pts.emplace_back(1.0 / (d * d), std::abs(p));
  }
  require(pts.size() >= 2, ErrorCode::InvalidArgument,
          "power-law fit needs at least two usable points, got " + std::to_string(pts.size()));
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [x, y] : pts) {
    sxy += x * y;
    sxx += x * x;
  }
  FitResult f;
  f.c = sxy / sxx;
  f.points = static_cast<int>(pts.size());
  f.distance = opts.distance;
  double ss = 0.0;
  for (const auto& [x, y] : pts) ss += (y - f.c * x) * (y - f.c * x);
  f.residual = std::sqrt(ss / static_cast<double>(pts.size()));
  return f;
}

}  // namespace lsqd
