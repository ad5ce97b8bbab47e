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
#include <functional>

#include "ladder_sqd/fock_oracle.hpp"
#include "ladder_sqd/pipeline.hpp"
#include "ladder_sqd/random.hpp"
#include "ladder_sqd/symmetry.hpp"

namespace lsqd {
namespace {

const BasisKind kBases[] = {BasisKind::Site, BasisKind::Momentum, BasisKind::MolecularOrbital};

std::vector<std::string> all_labels(int n) {
  std::vector<std::string> l = {"E", "C2x", "C2y", "C2z", "I", "sigma_xy", "sigma_xz", "sigma_yz"};
  for (int r = 1; r < n; ++r) l.push_back("T" + std::to_string(r));
  return l;
}

/// Largest model the brute-force Fock references handle comfortably.
LadderParams small_model(const LadderParams& p) {
  LadderParams s = p;
  if (s.n_rungs > 3) {
    s.n_rungs = 2;
    s.n_up = std::min(s.n_up, 2);
    s.n_down = std::min(s.n_down, 2);
  }
  return s;
}

struct Integrals {
  BasisTransform basis;
  IntegralTensors ints;
};

Integrals integrals(const LadderParams& p, BasisKind kind, bool corrupt) {
  Integrals r{build_basis_transform(p, kind), {}};
  r.ints = build_hamiltonian(p, r.basis);
  if (corrupt && r.ints.n_orb > 1) r.ints.h1(0, 1) += 0.25;
  return r;
}

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

OracleReport oracle_check(const RunConfig& cfg) {
  cfg.model.validate();
  const bool corrupt = cfg.oracle.corrupt_hermiticity;
  const LadderParams& model = cfg.model;
  const LadderParams small = small_model(model);
  const int n_small = small.n_orbitals();
  OracleReport rep;

  auto run = [&](const std::string& name, double tol, const std::function<double()>& f) {
    OracleCheck c;
    c.name = name;
    c.tolerance = tol;
    try {
      c.value = f();
      c.passed = std::isfinite(c.value) && c.value <= tol;
    } catch (const std::exception& e) {
      c.value = std::numeric_limits<double>::quiet_NaN();
      c.detail = e.what();
    }
    rep.checks.push_back(std::move(c));
  };

  run("integral_hermiticity", 1e-12, [&] {
    double e = 0.0;
    for (auto k : kBases) e = std::max(e, integrals(model, k, corrupt).ints.hermiticity_error());
    return e;
  });

  run("basis_unitarity", 1e-12, [&] {
    double e = 0.0;
    for (auto k : kBases) {
      const auto bt = build_basis_transform(model, k);
      const CMatrix id = CMatrix::Identity(bt.v.cols(), bt.v.cols());
      e = std::max(e, max_abs(bt.v.adjoint() * bt.v - id));
    }
    return e;
  });

  run("representation_unitarity", 1e-12, [&] {
    double e = 0.0;
    for (auto k : kBases) {
      const auto g = make_group(build_basis_transform(model, k), all_labels(model.n_rungs));
      for (const auto& op : g.ops) e = std::max(e, op.unitarity_error());
    }
    return e;
  });

  run("translation_homomorphism", 1e-12, [&] {
    double e = 0.0;
    const int n = model.n_rungs;
    std::vector<std::string> labels;
    for (int r = 0; r < n; ++r) labels.push_back("T" + std::to_string(r));
    for (auto k : kBases) {
      const auto g = make_group(build_basis_transform(model, k), labels);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          e = std::max(e, max_abs(g.ops[static_cast<std::size_t>(a)].d *
                                      g.ops[static_cast<std::size_t>(b)].d -
                                  g.ops[static_cast<std::size_t>((a + b) % n)].d));
    }
    return e;
  });

  run("determinant_image_norm", 1e-10, [&] {
    double e = 0.0;
    const SubspaceSet sector = full_sector(n_small, small.n_up, small.n_down);
    for (auto k : kBases) {
      const auto g = make_group(build_basis_transform(small, k), all_labels(small.n_rungs));
      for (const auto& op : g.ops)
        for (const auto& d : sector)
          e = std::max(e, std::abs(apply_to_determinant(op, d, 0.0).norm2() - 1.0));
    }
    return e;
  });

  run("image_vs_fock", 1e-12, [&] {
    double e = 0.0;
    const oracle::FockSpace fock(n_small);
    const SubspaceSet sector = full_sector(n_small, small.n_up, small.n_down);
    for (auto k : kBases) {
      const auto g = make_group(build_basis_transform(small, k), all_labels(small.n_rungs));
      for (const auto& op : g.ops) {
        for (const auto& d : sector) {
          CVector mine = CVector::Zero(static_cast<Eigen::Index>(fock.dim()));
          for (const auto& [t, c] : apply_to_determinant(op, d, 0.0).terms)
            mine[static_cast<Eigen::Index>(fock.index(t))] += c;
          e = std::max(e, (mine - fock.lift_state(op.d, fock.index(d))).cwiseAbs().maxCoeff());
        }
      }
    }
    return e;
  });

  run("fock_commutation", 1e-10, [&] {
    double e = 0.0;
    LadderParams two = model;
    two.n_rungs = 2;
    two.n_up = two.n_down = 1;
    const oracle::FockSpace fock(4);
    for (auto k : kBases) {
      const auto in = integrals(two, k, corrupt);
      const auto g = make_group(in.basis, all_labels(2));
      for (int nu = 0; nu <= 4; ++nu)
        for (int nd = 0; nd <= 4; ++nd) {
          const auto states = fock.sector(nu, nd);
          const CMatrix h = fock.hamiltonian(in.ints, states);
          for (const auto& op : g.ops) {
            const CMatrix u = fock.lift(op.d, states);
            e = std::max(e, max_abs(h * u - u * h));
          }
        }
    }
    return e;
  });

  run("slater_condon_vs_fock", 1e-12, [&] {
    double e = 0.0;
    const oracle::FockSpace fock(n_small);
    const SubspaceSet sector = full_sector(n_small, small.n_up, small.n_down);
    std::vector<std::size_t> states;
    for (const auto& d : sector) states.push_back(fock.index(d));
    for (auto k : kBases) {
      const auto in = integrals(small, k, corrupt);
      e = std::max(e, max_abs(dense_matrix(sector, in.ints) - fock.hamiltonian(in.ints, states)));
    }
    return e;
  });

  run("projected_hamiltonian_hermiticity", 1e-12, [&] {
    double e = 0.0;
    const SubspaceSet sector = full_sector(n_small, small.n_up, small.n_down);
    for (auto k : kBases) {
      const CMatrix h = dense_matrix(sector, integrals(small, k, corrupt).ints);
      e = std::max(e, max_abs(h - h.adjoint()));
    }
    return e;
  });

  run("momentum_sector_blocks", 1e-12, [&] {
    const auto in = integrals(small, BasisKind::Momentum, corrupt);
    const SubspaceSet sector = full_sector(n_small, small.n_up, small.n_down);
    const CMatrix h = dense_matrix(sector, in.ints);
    double e = 0.0;
    for (std::size_t i = 0; i < sector.size(); ++i)
      for (std::size_t j = 0; j < sector.size(); ++j)
        if (total_momentum_index(sector[i], in.basis) != total_momentum_index(sector[j], in.basis))
          e = std::max(e, std::abs(h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
    return e;
  });

  run("fci_basis_independence", 1e-9, [&] {
    const SubspaceSet sector = full_sector(n_small, small.n_up, small.n_down);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (auto k : kBases) {
      const double en = dense_diagonalize(sector, integrals(small, k, corrupt).ints)[0].energy;
      lo = std::min(lo, en);
      hi = std::max(hi, en);
    }
    return hi - lo;
  });

  run("variational_monotonicity", 1e-10, [&] {
    const SubspaceSet sector = full_sector(n_small, small.n_up, small.n_down);
    std::vector<Determinant> order(sector.begin(), sector.end());
    Rng rng(shard_seed(cfg.seed, 11));
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    double worst = 0.0;
    for (auto k : kBases) {
      const auto in = integrals(small, k, corrupt);
      double prev = std::numeric_limits<double>::infinity();
      for (std::size_t n = 1; n <= order.size(); n = std::max(n + 1, n * 3 / 2)) {
        const SubspaceSet s(std::vector<Determinant>(order.begin(),
                                                     order.begin() + static_cast<std::ptrdiff_t>(n)));
        const double en = solve_lowest(s, in.ints).energy;
        worst = std::max(worst, en - prev);
        prev = en;
      }
    }
    return worst;
  });

  run("factorization_equivalence", 1e-10, [&] {
    double e = 0.0;
    const SubspaceSet sector = full_sector(n_small, small.n_up, small.n_down);
    for (auto k : kBases) {
      const auto in = integrals(small, k, corrupt);
      const EigenSolution sol = dense_diagonalize(sector, in.ints)[0];
      const PairCorrelator corr(sol, sector, n_small);
      const auto o0 = order_parameter_matrix(in.basis, 0);
      for (int r = 0; r < small.n_rungs; ++r) {
        const auto orr = order_parameter_matrix(in.basis, r);
        e = std::max(e, std::abs(corr(orr, o0) - pair_correlation_direct(sol, sector, n_small,
                                                                          orr.o_tilde, o0.o_tilde)));
      }
    }
    return e;
  });

  return rep;
}

}  // namespace lsqd
