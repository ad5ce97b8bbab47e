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

// Block Davidson for the lowest eigenpairs of a Hermitian operator with a
// diagonal preconditioner and collapse-to-Ritz restarts.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ladder_sqd/random.hpp"
#include "ladder_sqd/sci_core.hpp"

namespace lsqd {

namespace {

// Orthogonalizes v against the first k columns of basis (two passes of
// classical Gram-Schmidt) and returns its remaining norm.
double orthogonalize(CVector& v, const CMatrix& basis, Eigen::Index k) {
  for (int pass = 0; pass < 2; ++pass) {
    if (k == 0) break;
    const CVector proj = basis.leftCols(k).adjoint() * v;
    v.noalias() -= basis.leftCols(k) * proj;
  }
  return v.norm();
}

void fix_phase(CVector& v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const cplx a = v[imax];
  if (std::abs(a) > 0.0) v *= std::conj(a) / std::abs(a);
}

}  // namespace

std::vector<EigenSolution> davidson_lowest(const LinearOperator& op, const RVector& diagonal,
                                           const DavidsonOptions& o) {
  const Eigen::Index n = diagonal.size();
  const int nroots = o.n_roots;
  require(nroots >= 1, ErrorCode::InvalidArgument, "n_roots must be positive");
  require(n >= nroots, ErrorCode::InvalidArgument, "dimension smaller than n_roots");
  require(o.tol > 0.0, ErrorCode::InvalidArgument, "tolerance must be positive");
  const Eigen::Index max_sub = std::min<Eigen::Index>(std::max(o.max_subspace, 2 * nroots + 1), n);

  CMatrix v(n, max_sub), av(n, max_sub);
  Eigen::Index k = 0;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return diagonal[a] < diagonal[b]; });

  Rng rng(o.seed);
  CVector tmp(n), atmp(n);
  for (Eigen::Index g = 0; k < nroots && g < n; ++g) {
    for (Eigen::Index i = 0; i < n; ++i) tmp[i] = o.guess_noise * (2.0 * rng.uniform() - 1.0);
    tmp[order[static_cast<std::size_t>(g)]] += 1.0;
    const double nrm = orthogonalize(tmp, v, k);
    if (nrm < 1e-10) continue;
    v.col(k) = tmp / nrm;
    op(v.col(k), atmp);
    av.col(k) = atmp;
    ++k;
  }

  double best = std::numeric_limits<double>::infinity();
  std::vector<EigenSolution> out(static_cast<std::size_t>(nroots));
  for (int iter = 1; iter <= o.max_iter; ++iter) {
    CMatrix g = v.leftCols(k).adjoint() * av.leftCols(k);
    g = 0.5 * (g + g.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(g);
    const CMatrix y = es.eigenvectors().leftCols(nroots);
    const CMatrix x = v.leftCols(k) * y;
    const CMatrix ax = av.leftCols(k) * y;

    std::vector<CVector> residuals;
    std::vector<double> thetas;
    double worst = 0.0;
    for (int r = 0; r < nroots; ++r) {
      const double theta = es.eigenvalues()[r];
      CVector res = ax.col(r) - theta * x.col(r);
      const double rn = res.norm();
      worst = std::max(worst, rn);
      out[static_cast<std::size_t>(r)].energy = theta;
      out[static_cast<std::size_t>(r)].residual_norm = rn;
      out[static_cast<std::size_t>(r)].iterations = iter;
      if (rn >= o.tol) {
        residuals.push_back(std::move(res));
        thetas.push_back(theta);
      }
    }
    best = std::min(best, worst);
    if (residuals.empty()) {
      for (int r = 0; r < nroots; ++r) {
        CVector a = x.col(r);
        a /= a.norm();
        fix_phase(a);
        out[static_cast<std::size_t>(r)].amplitudes = std::move(a);
      }
      for (int r = 0; r < nroots; ++r) {
        int deg = 0;
        for (int s = 0; s < nroots; ++s) {
          if (std::abs(out[static_cast<std::size_t>(s)].energy -
                       out[static_cast<std::size_t>(r)].energy) < 1e-8) {
            ++deg;
          }
        }
        out[static_cast<std::size_t>(r)].degeneracy = deg;
      }
      return out;
    }

    if (k + static_cast<Eigen::Index>(residuals.size()) > max_sub) {
      // thick restart: collapse onto the lowest half of the Ritz vectors
      const Eigen::Index keep = std::max<Eigen::Index>(nroots, std::min(k, max_sub / 2));
      const CMatrix yk = es.eigenvectors().leftCols(keep);
      v.leftCols(keep) = (v.leftCols(k) * yk).eval();
      k = keep;
      Eigen::HouseholderQR<CMatrix> qr(v.leftCols(k));
      v.leftCols(k) = qr.householderQ() * CMatrix::Identity(n, k);
      // fresh products so rounding does not accumulate across restarts
      for (Eigen::Index c = 0; c < k; ++c) {
        op(v.col(c), atmp);
        av.col(c) = atmp;
      }
    }

    Eigen::Index added = 0;
    for (std::size_t r = 0; r < residuals.size() && k < max_sub; ++r) {
      CVector t = residuals[r];
      for (Eigen::Index i = 0; i < n; ++i) {
        double den = thetas[r] - diagonal[i];
        if (std::abs(den) < 1e-4) den = den < 0 ? -1e-4 : 1e-4;
        t[i] /= den;
      }
      double nrm = t.norm();
      if (nrm == 0.0 || !std::isfinite(nrm)) continue;
      t /= nrm;
      nrm = orthogonalize(t, v, k);
      if (nrm < 1e-3) {
        // preconditioned direction mostly spanned; fall back to the raw residual
        t = residuals[r] / residuals[r].norm();
        nrm = orthogonalize(t, v, k);
        if (nrm < 1e-10) continue;
      }
      v.col(k) = t / nrm;
      op(v.col(k), atmp);
      av.col(k) = atmp;
      ++k;
      ++added;
    }
    if (added == 0) break;
  }
  std::ostringstream msg;
  msg << "Davidson did not converge; best residual " << best;
  throw NotConvergedError(msg.str(), best);
}

std::vector<EigenSolution> davidson_lowest(const ProjectedHamiltonian& h,
                                           const DavidsonOptions& opts) {
  return davidson_lowest([&h](const CVector& x, CVector& y) { h.apply(x, y); }, h.diagonal(),
                         opts);
}

}  // namespace lsqd
