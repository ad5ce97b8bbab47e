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
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "ladder_sqd/determinant_space.hpp"

namespace lsqd {
namespace {

TEST(Bitstring, RightHalfIsSpinUp) {
  const auto d = from_bitstring("0110", 2);
  EXPECT_EQ(d.beta, 0b01U);
  EXPECT_EQ(d.alpha, 0b10U);
  const auto e = from_bitstring("0000", 2);
  EXPECT_EQ(e.alpha, 0U);
  EXPECT_EQ(e.beta, 0U);
  const auto f = from_bitstring("101011", 3);
  EXPECT_EQ(f.alpha, 0b011U);
  EXPECT_EQ(f.beta, 0b101U);
}

TEST(Bitstring, ParseErrors) {
  for (const char* bad : {"011", "01100", "01a0", "01 0"}) {
    try {
      from_bitstring(bad, 2);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::Parse);
    }
  }
}

TEST(Bitstring, RoundTrip) {
  std::mt19937_64 rng(11);
  for (int m : {1, 5, 16, 32, 64}) {
    for (int rep = 0; rep < 200; ++rep) {
      Determinant d{rng() & orbital_mask(m), rng() & orbital_mask(m)};
      EXPECT_EQ(from_bitstring(to_bitstring(d, m), m), d);
    }
  }
}

TEST(FilterSector, KeepsMatchingAndDeduplicates) {
  const std::vector<Determinant> in = {{0b0011, 0b1}, {0b0111, 0b1}, {0b1010, 0b1},
                                       {0b0011, 0b1}};
  const auto s = filter_sector(in, 2, 1);
  ASSERT_EQ(s.size(), 2U);
  EXPECT_EQ(s[0], (Determinant{0b0011, 0b1}));
  EXPECT_EQ(s[1], (Determinant{0b1010, 0b1}));
  EXPECT_TRUE(filter_sector(in, 4, 0).empty());
}

TEST(SubspaceSet, LexicographicOrderAndLookup) {
  std::mt19937_64 rng(5);
  std::vector<Determinant> dets;
  for (int i = 0; i < 300; ++i) dets.push_back({rng() & 0xFF, rng() & 0xFF});
  const SubspaceSet s(dets);
  EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
  EXPECT_EQ(std::adjacent_find(s.begin(), s.end()), s.end());
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(s.find(s[i]), i);
  EXPECT_FALSE(s.find({0x100, 0}).has_value());
  std::shuffle(dets.begin(), dets.end(), rng);
  EXPECT_TRUE(SubspaceSet(dets) == s);
}

TEST(ClosedShellExpand, TwoConfigs) {
  const std::vector<Determinant> in = {{0b01, 0b10}};
  const auto [u, s] = closed_shell_expand(in);
  EXPECT_EQ(u.configs, (std::vector<u64>{0b01, 0b10}));
  ASSERT_EQ(s.size(), 4U);
  for (u64 a : u.configs)
    for (u64 b : u.configs) EXPECT_TRUE(s.contains({a, b}));
  EXPECT_TRUE(s.is_product());
}

TEST(ClosedShellExpand, DimensionIsSquareAndIdempotent) {
  const auto configs = combinations(12, 3);  // 220 configs
  std::vector<Determinant> in;
  for (std::size_t i = 0; i + 1 < 110; i += 2) in.push_back({configs[i], configs[i + 1]});
  const auto [u, s] = closed_shell_expand(in);
  ASSERT_EQ(u.size(), 110U);
  EXPECT_EQ(s.size(), 12100U);
  const auto again = closed_shell_expand(s.dets());
  EXPECT_TRUE(again.second == s);
}

TEST(ClosedShellExpand, LargeConfigSetDimensionIsSquare) {
  // dimension bookkeeping only: 2181 configs -> 4,756,761 determinants
  const auto configs = combinations(16, 6);
  SpinlessConfigSet u = make_config_set({configs.begin(), configs.begin() + 2181});
  EXPECT_EQ(u.size() * u.size(), 4756761U);
}

TEST(ClosedShellExpand, OpenShellUnsupported) {
  const std::vector<Determinant> in = {{0b011, 0b1}};
  try {
    closed_shell_expand(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Unsupported);
  }
}

TEST(Combinations, CountsAndPopcounts) {
  EXPECT_EQ(combinations(8, 4).size(), 70U);
  EXPECT_EQ(combinations(12, 4).size(), 495U);
  EXPECT_EQ(combinations(5, 0), std::vector<u64>{0});
  EXPECT_TRUE(combinations(3, 4).empty());
  for (u64 c : combinations(10, 3)) EXPECT_EQ(std::popcount(c), 3);
  const auto c = combinations(10, 3);
  EXPECT_TRUE(std::is_sorted(c.begin(), c.end()));
  EXPECT_EQ(full_sector(8, 2, 2).size(), 784U);
}

LadderParams model(int n) {
  LadderParams p;
  p.n_rungs = n;
  p.n_up = 1;
  p.n_down = 1;
  p.t_perp = 0.7076;
  return p;
}

int column_with(const BasisTransform& bt, int k, Branch b) {
  for (int c = 0; c < bt.n_orbitals(); ++c) {
    const auto& l = bt.labels[static_cast<std::size_t>(c)];
    if (l.momentum == k && l.branch == b) return c;
  }
  return -1;
}

TEST(TotalMomentum, Examples) {
  const auto bt = build_basis_transform(model(8), BasisKind::Momentum);
  const int k1 = column_with(bt, 1, Branch::Bonding);
  const int km1 = column_with(bt, 7, Branch::Bonding);
  EXPECT_NEAR(total_momentum({u64{1} << k1, 0}, bt), kPi / 4, 1e-15);
  EXPECT_EQ(total_momentum_index({(u64{1} << k1) | (u64{1} << km1), 0}, bt), 0);
  EXPECT_EQ(total_momentum_index({u64{1} << k1, u64{1} << km1}, bt), 0);
  const int k3 = column_with(bt, 3, Branch::Antibonding);
  EXPECT_EQ(total_momentum_index({(u64{1} << k1) | (u64{1} << k3), u64{1} << k3}, bt), 7);
}

TEST(TotalMomentum, RhfDeterminantOfEightRungModelIsZero) {
  auto p = model(8);
  const auto bt = build_basis_transform(p, BasisKind::Momentum);
  const auto ints = build_hamiltonian(p, bt);
  std::vector<int> order(16);
  for (int i = 0; i < 16; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return ints.h1(a, a).real() < ints.h1(b, b).real(); });
  u64 occ = 0;
  for (int i = 0; i < 6; ++i) occ |= u64{1} << order[static_cast<std::size_t>(i)];
  EXPECT_EQ(total_momentum_index({occ, occ}, bt), 0);
  EXPECT_EQ(total_momentum({occ, occ}, bt), 0.0);
}

TEST(TotalMomentum, RequiresMomentumBasis) {
  const auto bt = build_basis_transform(model(4), BasisKind::MolecularOrbital);
  try {
    total_momentum({1, 1}, bt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
}

TEST(SubspaceIo, RoundTripExact) {
  const auto s = full_sector(6, 2, 3);
  std::stringstream ss;
  ss << "# header comment\n";
  write_subspace(ss, s, 6);
  EXPECT_TRUE(read_subspace(ss, 6) == s);
}

TEST(SubspaceSet, ProductDetection) {
  EXPECT_TRUE(full_sector(6, 2, 1).is_product());
  const std::vector<Determinant> dets = {{0b011, 0b001}, {0b101, 0b010}};
  EXPECT_FALSE(SubspaceSet(dets).is_product());
}

}  // namespace
}  // namespace lsqd
