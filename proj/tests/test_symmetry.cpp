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
#include <map>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "ladder_sqd/sci_core.hpp"
#include "ladder_sqd/symmetry.hpp"
#include "ladder_sqd/fock_oracle.hpp"

namespace lsqd {
namespace {

LadderParams ladder(int n, int nu, int nd, double tp = 0.8, double u = 1.0) {
  LadderParams p;
  p.n_rungs = n;
  p.n_up = nu;
  p.n_down = nd;
  p.t_perp = tp;
  p.u = u;
  return p;
}

const std::vector<BasisKind> kBases = {BasisKind::Site, BasisKind::Momentum,
                                       BasisKind::MolecularOrbital};

std::vector<std::string> all_labels(int n) {
  std::vector<std::string> l = {"E", "C2x", "C2y", "C2z", "I", "sigma_xy", "sigma_xz", "sigma_yz"};
  for (int r = 0; r < n; ++r) l.push_back("T" + std::to_string(r));
  return l;
}

double max_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

TEST(Operations, UnitaryInEveryBasis) {
  for (int n : {1, 2, 3, 4, 5, 8}) {
    for (auto kind : kBases) {
      const auto bt = build_basis_transform(ladder(n, 1, 1), kind);
      const auto g = make_group(bt, all_labels(n));
      for (const auto& op : g.ops) EXPECT_LT(op.unitarity_error(), 1e-12) << op.label;
    }
  }
}

TEST(Operations, ExplicitConstructionsMatchSitePermutation) {
  for (int n : {2, 3, 4, 6, 8}) {
    const auto k = build_basis_transform(ladder(n, 1, 1), BasisKind::Momentum);
    for (const auto& l : {"E", "C2x", "C2y", "C2z", "I", "sigma_xy", "sigma_xz", "sigma_yz"}) {
      EXPECT_LT(max_diff(momentum_pointgroup_rep(k, l).d, site_operation(k, l).d), 1e-12)
          << n << " " << l;
    }
    const auto mo = build_basis_transform(ladder(n, 1, 1), BasisKind::MolecularOrbital);
    for (int r = 0; r < n; ++r) {
      EXPECT_LT(max_diff(molecular_translation_rep(mo, r).d,
                         site_operation(mo, "T" + std::to_string(r)).d),
                1e-12)
          << n << " " << r;
    }
  }
}

TEST(MomentumPointGroup, InvolutionWithFastPath) {
  const auto k = build_basis_transform(ladder(8, 1, 1), BasisKind::Momentum);
  for (const auto& l : {"C2y", "I", "sigma_yz", "C2x"}) {
    const auto op = momentum_pointgroup_rep(k, l);
    ASSERT_TRUE(op.fast_path.has_value());
    EXPECT_LT(max_diff(op.d * op.d, CMatrix::Identity(16, 16)), 1e-15);
  }
  // C2y flips every (k, -k) pair with unit phases: no diagonal elements
  // except on the self-paired momenta
  const auto c2y = momentum_pointgroup_rep(k, "C2y");
  for (int c = 0; c < 16; ++c) {
    const bool self = k.labels[static_cast<std::size_t>(c)].partner < 0;
    EXPECT_EQ(c2y.d(c, c) != cplx(0.0), self);
  }
  EXPECT_THROW(momentum_pointgroup_rep(k, "T1"), Error);
  EXPECT_THROW(momentum_pointgroup_rep(k, "C3z"), Error);
  const auto mo = build_basis_transform(ladder(8, 1, 1), BasisKind::MolecularOrbital);
  EXPECT_THROW(momentum_pointgroup_rep(mo, "C2y"), Error);
}

TEST(MomentumPointGroup, SingleMomentumMapsToPartner) {
  const auto k = build_basis_transform(ladder(8, 1, 1), BasisKind::Momentum);
  const auto op = momentum_pointgroup_rep(k, "C2y");
  const Determinant d{u64{1} << 0, 0};  // bonding k = pi/4
  const auto img = apply_to_determinant(op, d);
  ASSERT_EQ(img.terms.size(), 1U);
  EXPECT_EQ(img.terms[0].first, (Determinant{u64{1} << 1, 0}));
  EXPECT_EQ(img.terms[0].second, cplx(1.0));
}

TEST(MomentumPointGroup, FilledPairPicksUpFermionSign) {
  const auto k = build_basis_transform(ladder(2, 1, 1), BasisKind::Momentum);
  // N = 2 has no (k, -k) pairs; use N = 3 (M = 6) for a genuine pair
  const auto k3 = build_basis_transform(ladder(3, 1, 1), BasisKind::Momentum);
  const auto op = momentum_pointgroup_rep(k3, "C2y");
  const Determinant d{0b11, 0};
  const auto img = apply_to_determinant(op, d);
  ASSERT_EQ(img.terms.size(), 1U);
  EXPECT_EQ(img.terms[0].first, d);
  EXPECT_EQ(img.terms[0].second, cplx(-1.0));
  oracle::FockSpace fock(6);
  const CVector ref = fock.lift_state(op.d, fock.index(d));
  EXPECT_NEAR(std::abs(ref[static_cast<Eigen::Index>(fock.index(d))] - cplx(-1.0)), 0.0, 1e-15);
  (void)k;
}

TEST(MolecularTranslation, Examples) {
  const auto mo = build_basis_transform(ladder(4, 1, 1), BasisKind::MolecularOrbital);
  EXPECT_LT(max_diff(molecular_translation_rep(mo, 0).d, CMatrix::Identity(8, 8)), 1e-15);
  const auto t1 = molecular_translation_rep(mo, 1);
  // columns 0, 1 are the (g, u) pair at k = pi/2 on the bonding branch
  EXPECT_EQ(mo.labels[0].momentum, 1);
  EXPECT_EQ(t1.d(0, 0), cplx(0.0));
  EXPECT_EQ(t1.d(0, 1), cplx(-1.0));
  EXPECT_EQ(t1.d(1, 0), cplx(1.0));
  EXPECT_EQ(t1.d(1, 1), cplx(0.0));
  EXPECT_THROW(molecular_translation_rep(mo, 4), Error);
  EXPECT_THROW(molecular_translation_rep(mo, -1), Error);
  const auto k = build_basis_transform(ladder(4, 1, 1), BasisKind::Momentum);
  EXPECT_THROW(molecular_translation_rep(k, 1), Error);
}

TEST(MolecularTranslation, Homomorphism) {
  for (int n : {3, 4, 6, 8}) {
    const auto mo = build_basis_transform(ladder(n, 1, 1), BasisKind::MolecularOrbital);
    // at N = 4 every block rotates by a multiple of pi/2, a signed permutation
    EXPECT_EQ(molecular_translation_rep(mo, 1).fast_path.has_value(), n == 4);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const CMatrix prod = molecular_translation_rep(mo, a).d * molecular_translation_rep(mo, b).d;
        EXPECT_LT(max_diff(prod, molecular_translation_rep(mo, (a + b) % n).d), 1e-12);
      }
  }
}

TEST(MolecularTranslation, SinglyOccupiedPairGivesTwoTerms) {
  const auto mo = build_basis_transform(ladder(8, 1, 1), BasisKind::MolecularOrbital);
  const auto t1 = molecular_translation_rep(mo, 1);
  const Determinant d{0b01, 0};  // g orbital of k = pi/4
  const auto img = apply_to_determinant(t1, d);
  ASSERT_EQ(img.terms.size(), 2U);
  EXPECT_NEAR(img.terms[0].second.real(), std::cos(kPi / 4), 1e-15);
  EXPECT_NEAR(img.terms[1].second.real(), std::sin(kPi / 4), 1e-15);
  // both members of the pair occupied: det of the rotation block = 1
  const auto full = apply_to_determinant(t1, {0b11, 0});
  ASSERT_EQ(full.terms.size(), 1U);
  EXPECT_NEAR(std::abs(full.terms[0].second - cplx(1.0)), 0.0, 1e-15);
  // k r = pi/2 prunes to a single term
  const auto mo4 = build_basis_transform(ladder(4, 1, 1), BasisKind::MolecularOrbital);
  EXPECT_EQ(apply_to_determinant(molecular_translation_rep(mo4, 1), {0b01, 0}).terms.size(), 1U);
}

TEST(MomentumTranslationPhase, Examples) {
  const auto k = build_basis_transform(ladder(4, 1, 1), BasisKind::Momentum);
  // columns: 0,1 bonding k=+-pi/2; 4 bonding k=0; 5 bonding k=pi
  EXPECT_EQ(momentum_translation_phase({0b11, 0b10000}, k, 3), cplx(1.0));
  EXPECT_EQ(momentum_translation_phase({0b100000, 0}, k, 1), cplx(-1.0));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const Determinant d{rng() & 0xFF, rng() & 0xFF};
    for (int r = 0; r < 4; ++r) {
      const cplx ph = momentum_translation_phase(d, k, r);
      EXPECT_NEAR(std::abs(ph), 1.0, 1e-15);
      const auto img = apply_to_determinant(site_operation(k, "T" + std::to_string(r)), d);
      ASSERT_EQ(img.terms.size(), 1U);
      EXPECT_EQ(img.terms[0].first, d);
      EXPECT_NEAR(std::abs(img.terms[0].second - ph), 0.0, 1e-12);
    }
  }
  const auto mo = build_basis_transform(ladder(4, 1, 1), BasisKind::MolecularOrbital);
  EXPECT_THROW(momentum_translation_phase({1, 1}, mo, 1), Error);
}

TEST(ApplyToDeterminant, IdentityAndThreshold) {
  const auto k = build_basis_transform(ladder(4, 1, 1), BasisKind::Momentum);
  const auto e = momentum_pointgroup_rep(k, "E");
  const Determinant d{0b1011, 0b0110};
  const auto img = apply_to_determinant(e, d);
  ASSERT_EQ(img.terms.size(), 1U);
  EXPECT_EQ(img.terms[0].first, d);
  EXPECT_EQ(img.terms[0].second, cplx(1.0));
  try {
    apply_to_determinant(e, d, 1.0);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::InvalidArgument);
  }
}

// Image coefficients against the Fock-space lift, and image norms, for every
// operation, basis and determinant of M <= 6.
TEST(ApplyToDeterminant, MatchesFockOracle) {
  for (int n : {1, 2, 3}) {
    const int m = 2 * n;
    oracle::FockSpace fock(m);
    for (auto kind : kBases) {
      const auto bt = build_basis_transform(ladder(n, 1, 1), kind);
      const auto g = make_group(bt, all_labels(n));
      for (const auto& op : g.ops) {
        for (std::size_t s = 0; s < fock.dim(); s += (m == 6 ? 7 : 1)) {
          const Determinant d = fock.det(s);
          const auto img = apply_to_determinant(op, d, 0.0);
          EXPECT_NEAR(img.norm2(), 1.0, 1e-10);
          const CVector ref = fock.lift_state(op.d, s);
          CVector mine = CVector::Zero(ref.size());
          for (const auto& [t, c] : img.terms) mine[static_cast<Eigen::Index>(fock.index(t))] += c;
          ASSERT_LT((mine - ref).cwiseAbs().maxCoeff(), 1e-12)
              << to_string(kind) << " " << op.label << " " << to_bitstring(d, m);
        }
      }
    }
  }
}

TEST(ApplyToDeterminant, TranslationHomomorphismOnImages) {
  const int n = 4;
  const auto mo = build_basis_transform(ladder(n, 1, 1), BasisKind::MolecularOrbital);
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 20; ++rep) {
    const Determinant d{rng() & 0xFF, rng() & 0xFF};
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const auto ta = molecular_translation_rep(mo, a);
        const auto tb = molecular_translation_rep(mo, b);
        std::map<Determinant, cplx> twice;
        for (const auto& [d1, c1] : apply_to_determinant(ta, d, 0.0).terms)
          for (const auto& [d2, c2] : apply_to_determinant(tb, d1, 0.0).terms) twice[d2] += c1 * c2;
        std::map<Determinant, cplx> once;
        for (const auto& [d1, c1] :
             apply_to_determinant(molecular_translation_rep(mo, (a + b) % n), d, 0.0).terms)
          once[d1] += c1;
        for (const auto& [det, c] : twice) EXPECT_NEAR(std::abs(c - once[det]), 0.0, 1e-10);
        for (const auto& [det, c] : once) EXPECT_NEAR(std::abs(c - twice[det]), 0.0, 1e-10);
      }
  }
}

TEST(Commutation, HamiltonianCommutesWithEveryOperation) {
  const auto p = ladder(2, 1, 1, 0.7, 1.9);
  oracle::FockSpace fock(4);
  for (auto kind : kBases) {
    const auto bt = build_basis_transform(p, kind);
    const auto ints = build_hamiltonian(p, bt);
    const auto g = make_group(bt, all_labels(2));
    for (int nu = 0; nu <= 4; ++nu)
      for (int nd = 0; nd <= 4; ++nd) {
        const auto states = fock.sector(nu, nd);
        const CMatrix h = fock.hamiltonian(ints, states);
        for (const auto& op : g.ops) {
          const CMatrix u = fock.lift(op.d, states);
          EXPECT_LT((h * u - u * h).cwiseAbs().maxCoeff(), 1e-10) << op.label;
        }
      }
  }
}

TEST(Group, ClosureTables) {
  for (int n : {3, 4}) {
    for (auto kind : kBases) {
      const auto bt = build_basis_transform(ladder(n, 1, 1), kind);
      auto point = make_group(bt, {"E", "C2x", "C2y", "C2z", "I", "sigma_xy", "sigma_xz", "sigma_yz"});
      point.build_closure_table();
      EXPECT_TRUE(point.is_closed());
      std::vector<std::string> t;
      for (int r = 0; r < n; ++r) t.push_back("T" + std::to_string(r));
      auto trans = make_group(bt, t);
      trans.build_closure_table();
      EXPECT_TRUE(trans.is_closed());
      auto partial = make_group(bt, {"C2y", "C2x"});
      partial.build_closure_table();
      EXPECT_FALSE(partial.is_closed());
    }
  }
}

TEST(Group, LabelsPresetsAndDefinitionFile) {
  EXPECT_EQ(canonical_label("σ_yz", 4), "sigma_yz");
  EXPECT_EQ(canonical_label("sigmaxz", 4), "sigma_xz");
  EXPECT_EQ(canonical_label("T 5", 4), "T1");
  EXPECT_EQ(canonical_label("T_-1", 4), "T3");
  EXPECT_THROW(canonical_label("C4z", 4), Error);
  EXPECT_EQ(group_preset("point", 4, BasisKind::Site).size(), 7U);
  EXPECT_EQ(group_preset("translation", 4, BasisKind::Site).size(), 3U);
  EXPECT_EQ(group_preset("space", 4, BasisKind::Site).size(), 10U);
  EXPECT_EQ(group_preset("auto", 4, BasisKind::Momentum), group_preset("point", 4, BasisKind::Site));
  EXPECT_EQ(group_preset("auto", 4, BasisKind::MolecularOrbital),
            group_preset("translation", 4, BasisKind::Site));
  EXPECT_TRUE(group_preset("none", 4, BasisKind::Site).empty());
  EXPECT_THROW(group_preset("lattice", 4, BasisKind::Site), Error);
  std::istringstream def("# ops\nC2y\n\n  T 1   # shift\nI\n");
  EXPECT_EQ(parse_group_definition(def), (std::vector<std::string>{"C2y", "T1", "I"}));
}

TEST(Group, MatrixDump) {
  const auto k = build_basis_transform(ladder(2, 1, 1), BasisKind::Momentum);
  std::ostringstream os;
  write_operation(os, momentum_pointgroup_rep(k, "C2x"));
  EXPECT_EQ(os.str(), "# C2x\n4 4\n0 0 1 0\n1 1 1 0\n2 2 -1 0\n3 3 -1 0\n");
}

SubspaceSet random_sector_subset(int m, int nu, int nd, double frac, u64 seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u;
  std::vector<Determinant> dets;
  for (const auto& d : full_sector(m, nu, nd))
    if (u(rng) < frac) dets.push_back(d);
  return SubspaceSet(std::move(dets));
}

TEST(Symmetrize, MomentumPointGroupIsPermutation) {
  const auto k = build_basis_transform(ladder(6, 3, 3), BasisKind::Momentum);
  const auto sub = random_sector_subset(12, 3, 3, 0.002, 4);
  for (const auto& l : group_preset("point", 6, BasisKind::Momentum)) {
    const auto g = make_group(k, {l});
    const auto r = symmetrize_subspace(sub, g);
    EXPECT_LE(r.subspace.size(), 2 * sub.size());
    EXPECT_LE(r.passes, 1);
    EXPECT_TRUE(check_closure(r.subspace, g.ops[0]));
  }
  const auto all = make_group(k, group_preset("point", 6, BasisKind::Momentum));
  const auto r = symmetrize_subspace(sub, all);
  EXPECT_EQ(r.passes, 1);
  EXPECT_EQ(r.one_pass_dim, r.subspace.size());
  for (const auto& op : all.ops) EXPECT_TRUE(check_closure(r.subspace, op));
}

TEST(Symmetrize, FixedPointAndClosure) {
  for (auto kind : kBases) {
    const auto bt = build_basis_transform(ladder(4, 2, 2), kind);
    const auto g = make_group(bt, group_preset("space", 4, kind));
    const auto sub = random_sector_subset(8, 2, 2, 0.01, 9);
    const auto r = symmetrize_subspace(sub, g);
    EXPECT_GE(r.subspace.size(), sub.size());
    for (const auto& d : sub) EXPECT_TRUE(r.subspace.contains(d));
    for (const auto& op : g.ops) EXPECT_TRUE(check_closure(r.subspace, op)) << op.label;
    const auto again = symmetrize_subspace(r.subspace, g);
    EXPECT_TRUE(again.subspace == r.subspace);
    EXPECT_EQ(again.passes, 0);
  }
}

TEST(Symmetrize, MomentumSubspaceClosedUnderTranslations) {
  const auto k = build_basis_transform(ladder(4, 2, 2), BasisKind::Momentum);
  const auto g = make_group(k, group_preset("translation", 4, BasisKind::Momentum));
  const auto sub = random_sector_subset(8, 2, 2, 0.05, 10);
  EXPECT_TRUE(symmetrize_subspace(sub, g).subspace == sub);
}

TEST(Symmetrize, ConfigClosureGivesClosedProduct) {
  const auto mo = build_basis_transform(ladder(4, 2, 2), BasisKind::MolecularOrbital);
  const auto g = make_group(mo, group_preset("translation", 4, BasisKind::MolecularOrbital));
  const auto u = make_config_set({0b00000011, 0b00010100});
  const auto r = symmetrize_configs(u, g);
  const auto prod = product_subspace(r.configs);
  for (const auto& op : g.ops) EXPECT_TRUE(check_closure(prod, op));
  // determinant-level closure of U x U moves both spins together, so it is
  // contained in (closure of U) x (closure of U)
  const auto direct = symmetrize_subspace(product_subspace(u), g);
  for (const auto& d : direct.subspace) EXPECT_TRUE(prod.contains(d));
  EXPECT_LT(direct.subspace.size(), prod.size());
}

TEST(Symmetrize, CheckClosureExamples) {
  const auto k = build_basis_transform(ladder(4, 2, 2), BasisKind::Momentum);
  const auto c2y = momentum_pointgroup_rep(k, "C2y");
  const SubspaceSet single(std::vector<Determinant>{{0b01 | 0b10000, 0b11}});
  EXPECT_FALSE(check_closure(single, c2y));
  EXPECT_TRUE(check_closure(full_sector(8, 2, 2), c2y));
  const auto mo = build_basis_transform(ladder(4, 2, 2), BasisKind::MolecularOrbital);
  EXPECT_TRUE(check_closure(full_sector(8, 2, 2), molecular_translation_rep(mo, 1)));
}

TEST(Symmetrize, PassCapRaisesNotConverged) {
  // site-basis T1 orbits have length N, needing N - 1 passes
  const auto site = build_basis_transform(ladder(4, 1, 1), BasisKind::Site);
  const auto g = make_group(site, {"T1"});
  const SubspaceSet single(std::vector<Determinant>{{0b1, 0b10}});
  EXPECT_EQ(symmetrize_subspace(single, g).passes, 3);
  EXPECT_EQ(symmetrize_subspace(single, g).subspace.size(), 4U);
  try {
    symmetrize_subspace(single, g, 1e-12, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotConverged);
  }
}

// A nondegenerate ground state of a symmetrized subspace is an eigenvector of
// every group operation.
TEST(Symmetrize, GroundStateIsSymmetryEigenvector) {
  const auto p = ladder(4, 2, 2, 0.75, 1.0);
  for (auto kind : {BasisKind::Momentum, BasisKind::MolecularOrbital}) {
    const auto bt = build_basis_transform(p, kind);
    const auto ints = build_hamiltonian(p, bt);
    const auto g = make_group(bt, group_preset("space", 4, kind));
    const auto sub = symmetrize_subspace(random_sector_subset(8, 2, 2, 0.1, 12), g).subspace;
    ProjectedHamiltonian h(sub, ints);
    DavidsonOptions o;
    o.n_roots = 2;
    o.tol = 1e-10;
    const auto sol = davidson_lowest(h, o);
    ASSERT_GT(sol[1].energy - sol[0].energy, 1e-6);
    for (const auto& op : g.ops) {
      CVector img = CVector::Zero(sol[0].amplitudes.size());
      for (std::size_t i = 0; i < sub.size(); ++i)
        for (const auto& [t, c] : apply_to_determinant(op, sub[i]).terms)
          img[static_cast<Eigen::Index>(*sub.find(t))] += c * sol[0].amplitudes[static_cast<Eigen::Index>(i)];
      EXPECT_NEAR(std::abs(sol[0].amplitudes.dot(img)), 1.0, 1e-8) << op.label;
    }
  }
}

TEST(MomentumSector, RhfSectorHoldsGroundState) {
  const auto p = ladder(4, 2, 2, 0.75, 1.0);
  const auto full = exact_ground_state(p, BasisKind::Momentum);
  const int k = total_momentum_index(rhf_determinant(full.integrals, 2, 2), full.basis);
  const auto sector = exact_ground_state(p, BasisKind::Momentum, {}, std::size_t{4} << 20, k);
  EXPECT_LT(sector.subspace.size(), full.subspace.size());
  EXPECT_NEAR(sector.solution.energy, full.solution.energy, 1e-9);
  EXPECT_THROW(exact_ground_state(p, BasisKind::Site, {}, std::size_t{4} << 20, 0), Error);
  EXPECT_THROW(exact_ground_state(p, BasisKind::Momentum, {}, std::size_t{4} << 20, 4), Error);
}

TEST(ChangeBasis, LiftsMomentumStateToMolecularOrbitals) {
  const auto p = ladder(4, 2, 2, 0.75, 1.0);
  const auto km = exact_ground_state(p, BasisKind::Momentum);
  const auto mo = exact_ground_state(p, BasisKind::MolecularOrbital);
  const auto [dets, amps] =
      change_basis(km.subspace, km.solution.amplitudes, km.basis, mo.basis);
  EXPECT_NEAR(amps.norm(), 1.0, 1e-10);
  cplx overlap{};
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const auto j = mo.subspace.find(dets[i]);
    ASSERT_TRUE(j.has_value());
    overlap += std::conj(mo.solution.amplitudes[static_cast<Eigen::Index>(*j)]) *
               amps[static_cast<Eigen::Index>(i)];
  }
  EXPECT_NEAR(std::abs(overlap), 1.0, 1e-8);
}

TEST(ChangeBasis, RoundTripIsIdentity) {
  const auto p = ladder(3, 2, 1);
  const auto site = build_basis_transform(p, BasisKind::Site);
  const auto mom = build_basis_transform(p, BasisKind::Momentum);
  const SubspaceSet one({Determinant{0b011, 0b100}});
  CVector a(1);
  a[0] = 1.0;
  const auto [mid, b] = change_basis(one, a, site, mom);
  EXPECT_GT(mid.size(), 1u);
  const auto [back, c] = change_basis(mid, b, mom, site);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0], one[0]);
  EXPECT_NEAR(std::abs(c[0] - cplx{1.0}), 0.0, 1e-12);
  EXPECT_THROW(change_basis(one, CVector(2), site, mom), Error);
}

}  // namespace
}  // namespace lsqd
