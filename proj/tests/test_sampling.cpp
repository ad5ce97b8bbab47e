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
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "ladder_sqd/sampling.hpp"

namespace lsqd {
namespace {

LadderParams ladder(int n, int nu, int nd, double tp, double u) {
  LadderParams p;
  p.n_rungs = n;
  p.n_up = nu;
  p.n_down = nd;
  p.t_perp = tp;
  p.u = u;
  return p;
}

const ExactResult& four_rung_exact() {
  static const ExactResult r =
      exact_ground_state(ladder(4, 2, 2, 0.75, 1.0), BasisKind::Momentum);
  return r;
}

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Probability that independent flips keep the popcount of an M-bit string
// with n ones: equal numbers of 1->0 and 0->1 flips.
double keep_popcount(int m, int n, double p) {
  double s = 0.0;
  for (int j = 0; j <= std::min(n, m - n); ++j) {
    s += binom(n, j) * binom(m - n, j) * std::pow(p, 2 * j) * std::pow(1 - p, m - 2 * j);
  }
  return s;
}

TEST(BitstringSample, TextRoundTrip) {
  BitstringSample s;
  s.n_orb = 3;
  s.add({0b011, 0b101}, 7);
  s.add({0b110, 0b001}, 2);
  std::stringstream ss;
  write_sample(ss, s);
  EXPECT_EQ(ss.str(), "101011 7\n001110 2\n");
  const auto back = read_sample(ss, 3);
  EXPECT_EQ(back.counts, s.counts);
  EXPECT_EQ(back.shots(), 9U);
}

TEST(BitstringSample, ParsingErrors) {
  for (const char* bad : {"0101 x\n", "0101 1 2\n", "0101 -3\n", "0101\n"}) {
    std::istringstream is(bad);
    try {
      read_sample(is, 2);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::Parse) << bad;
    }
  }
  std::istringstream ok("# header\n0101 3 # trailing\n\n0101 2\n");
  EXPECT_EQ(read_sample(ok, 2).counts.at({0b01, 0b01}), 5U);
}

TEST(NoiseModel, FlipProbabilityBounds) {
  EXPECT_NO_THROW((NoiseModel{0.0, 1}.validate()));
  EXPECT_NO_THROW((NoiseModel{0.4999, 1}.validate()));
  EXPECT_THROW((NoiseModel{0.5, 1}.validate()), Error);
  EXPECT_THROW((NoiseModel{-1e-3, 1}.validate()), Error);
  EXPECT_DOUBLE_EQ(NoiseModel{}.p_flip, 1.44e-2);
}

TEST(SurrogateSample, SingleDeterminantRepeats) {
  const SubspaceSet dets(std::vector<Determinant>{{0b0011, 0b0101}});
  CVector a(1);
  a[0] = cplx(0.0, 1.0);
  const auto s = surrogate_sample(dets, a, 1000, 3, 4);
  ASSERT_EQ(s.distinct(), 1U);
  EXPECT_EQ(s.counts.begin()->second, 1000U);
}

TEST(SurrogateSample, TwoDeterminantFrequencies) {
  const SubspaceSet dets(std::vector<Determinant>{{0b01, 0b01}, {0b10, 0b10}});
  CVector a(2);
  a << cplx(1.0 / std::sqrt(2.0), 0.0), cplx(0.0, -1.0 / std::sqrt(2.0));
  const u64 shots = 1000000;
  const auto s = surrogate_sample(dets, a, shots, 11, 2);
  EXPECT_EQ(s.shots(), shots);
  const double sigma = std::sqrt(0.25 / static_cast<double>(shots));
  for (const auto& [d, c] : s.counts) {
    EXPECT_NEAR(static_cast<double>(c) / static_cast<double>(shots), 0.5, 3 * sigma);
  }
}

TEST(SurrogateSample, RejectsUnnormalizedAmplitudes) {
  const SubspaceSet dets(std::vector<Determinant>{{0b01, 0b01}, {0b10, 0b10}});
  CVector a(2);
  a << 1.0, 1.0;
  EXPECT_THROW(surrogate_sample(dets, a, 10, 1, 2), Error);
  CVector b(1);
  b << 1.0;
  EXPECT_THROW(surrogate_sample(dets, b, 10, 1, 2), Error);
}

TEST(SurrogateSample, DeterministicGivenSeed) {
  const auto& ex = four_rung_exact();
  const auto a = surrogate_sample(ex.subspace, ex.solution.amplitudes, 50000, 5, 8);
  const auto b = surrogate_sample(ex.subspace, ex.solution.amplitudes, 50000, 5, 8);
  const auto c = surrogate_sample(ex.subspace, ex.solution.amplitudes, 50000, 6, 8);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_NE(a.counts, c.counts);
}

TEST(SurrogateSample, EmpiricalDistributionOfExactState) {
  const auto& ex = four_rung_exact();
  const u64 shots = 100000;
  const auto s = surrogate_sample(ex.subspace, ex.solution.amplitudes, shots, 2024, 8);
  double tv = 0.0;
  for (std::size_t i = 0; i < ex.subspace.size(); ++i) {
    const auto it = s.counts.find(ex.subspace[i]);
    const double f = it == s.counts.end() ? 0.0 : static_cast<double>(it->second) / shots;
    tv += std::abs(f - std::norm(ex.solution.amplitudes[static_cast<Eigen::Index>(i)]));
  }
  EXPECT_LT(0.5 * tv, 0.02);
}

TEST(UniformSectorSample, CoversSectorEvenly) {
  const u64 shots = 360000;
  const auto s = uniform_sector_sample(4, 2, 1, shots, 9);
  EXPECT_EQ(s.shots(), shots);
  ASSERT_EQ(s.distinct(), 24U);
  const double expect = 1.0 / 24.0;
  const double sigma = std::sqrt(expect * (1 - expect) / shots);
  for (const auto& [d, c] : s.counts) {
    EXPECT_EQ(d.n_alpha(), 2);
    EXPECT_EQ(d.n_beta(), 1);
    EXPECT_NEAR(static_cast<double>(c) / shots, expect, 4 * sigma);
  }
}

TEST(InjectNoise, ZeroProbabilityIsIdentity) {
  const auto& ex = four_rung_exact();
  const auto s = surrogate_sample(ex.subspace, ex.solution.amplitudes, 2000, 1, 8);
  EXPECT_EQ(inject_noise(s, {0.0, 4}).counts, s.counts);
}

TEST(InjectNoise, SectorLeakageMatchesBinomialOracle) {
  // M = 8, one determinant with 3 up and 5 down electrons
  BitstringSample s;
  s.n_orb = 8;
  const Determinant d{0b00010110, 0b11001011};
  const u64 shots = 100000;
  s.add(d, shots);
  const double p = 0.0144;
  const auto noisy = inject_noise(s, {p, 77});
  EXPECT_EQ(noisy.shots(), shots);
  u64 left = 0;
  u64 flips = 0;
  for (const auto& [x, c] : noisy.counts) {
    if (x.n_alpha() != 3 || x.n_beta() != 5) left += c;
    flips += c * static_cast<u64>(std::popcount(x.alpha ^ d.alpha) + std::popcount(x.beta ^ d.beta));
  }
  const double q = 1.0 - keep_popcount(8, 3, p) * keep_popcount(8, 5, p);
  const double sigma = std::sqrt(q * (1 - q) / shots);
  EXPECT_NEAR(static_cast<double>(left) / shots, q, 3 * sigma);
  const double mean_flips = 16 * p;
  EXPECT_NEAR(static_cast<double>(flips) / shots, mean_flips,
              3 * std::sqrt(16 * p * (1 - p) / shots));
  EXPECT_EQ(inject_noise(s, {p, 77}).counts, noisy.counts);
}

TEST(ConfigurationRecovery, InSectorPassesThrough) {
  const auto& ex = four_rung_exact();
  const auto s = surrogate_sample(ex.subspace, ex.solution.amplitudes, 3000, 8, 8);
  const OccupationVector ref{8, std::vector<double>(16, 0.25)};
  EXPECT_EQ(configuration_recovery(s, ref, 2, 2, 1).counts, s.counts);
}

TEST(ConfigurationRecovery, ForcedFlipOfExcessElectron) {
  // reference determinant up = {0, 2}, down = {1, 3}; measured up = {0, 1, 2}
  OccupationVector ref{4, std::vector<double>(8, 0.0)};
  ref.n[0] = ref.n[2] = 1.0;
  ref.n[4 + 1] = ref.n[4 + 3] = 1.0;
  BitstringSample s;
  s.n_orb = 4;
  s.add({0b0111, 0b1010}, 500);
  // alpha orbital 1 is the only occupied bit with n_ref = 0
  for (u64 seed = 0; seed < 5; ++seed) {
    const auto r = configuration_recovery(s, ref, 2, 2, seed);
    ASSERT_EQ(r.distinct(), 1U);
    EXPECT_EQ(r.counts.begin()->first, (Determinant{0b0101, 0b1010}));
    EXPECT_EQ(r.counts.begin()->second, 500U);
  }
}

TEST(ConfigurationRecovery, DeficitFilledByWeights) {
  OccupationVector ref{4, std::vector<double>(8, 0.0)};
  ref.n[4 + 2] = 0.75;
  ref.n[4 + 3] = 0.25;
  BitstringSample s;
  s.n_orb = 4;
  const u64 shots = 40000;
  s.add({0b0011, 0b0001}, shots);
  const auto r = configuration_recovery(s, ref, 2, 2, 12);
  ASSERT_EQ(r.distinct(), 2U);
  const double f = static_cast<double>(r.counts.at({0b0011, 0b0101})) / shots;
  EXPECT_NEAR(f, 0.75, 4 * std::sqrt(0.75 * 0.25 / shots));
}

TEST(ConfigurationRecovery, DegenerateWeights) {
  const OccupationVector zero{4, std::vector<double>(8, 0.0)};
  BitstringSample s;
  s.n_orb = 4;
  s.add({0b0001, 0b0011}, 100);
  try {
    configuration_recovery(s, zero, 2, 2, 1, false);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
  const auto r = configuration_recovery(s, zero, 2, 2, 1, true);
  EXPECT_EQ(r.shots(), 100U);
  EXPECT_EQ(r.distinct(), 3U);
}

TEST(ConfigurationRecovery, RejectsBadReference) {
  BitstringSample s;
  s.n_orb = 2;
  s.add({0b01, 0b01});
  EXPECT_THROW(configuration_recovery(s, {2, {0, 0, 1.5, 0}}, 1, 1, 0), Error);
  EXPECT_THROW(configuration_recovery(s, {3, std::vector<double>(6, 0.5)}, 1, 1, 0), Error);
}

TEST(ConfigurationRecovery, OutputAlwaysInSector) {
  const auto& ex = four_rung_exact();
  const auto occ = occupations(ex.solution, ex.subspace, 8);
  for (u64 seed = 0; seed < 10; ++seed) {
    const auto s = surrogate_sample(ex.subspace, ex.solution.amplitudes, 2000, seed, 8);
    const auto noisy = inject_noise(s, {0.1, seed + 100});
    const auto r = configuration_recovery(noisy, occ, 2, 2, seed);
    EXPECT_EQ(r.shots(), noisy.shots());
    for (const auto& [d, c] : r.counts) {
      EXPECT_EQ(d.n_alpha(), 2);
      EXPECT_EQ(d.n_beta(), 2);
    }
    EXPECT_EQ(configuration_recovery(noisy, occ, 2, 2, seed).counts, r.counts);
  }
}

TEST(Frequencies, RankingAndTies) {
  BitstringSample s;
  s.n_orb = 3;
  s.add({0b011, 0b101}, 3);
  s.add({0b101, 0b101}, 1);
  s.add({0b110, 0b011}, 4);
  const auto f = config_frequencies(s);
  ASSERT_EQ(f.size(), 3U);
  EXPECT_EQ(f[0], (std::pair<u64, u64>{0b011, 7}));
  EXPECT_EQ(f[1], (std::pair<u64, u64>{0b101, 5}));
  EXPECT_EQ(f[2], (std::pair<u64, u64>{0b110, 4}));
  const auto g = determinant_frequencies(s);
  EXPECT_EQ(g[0].first, (Determinant{0b110, 0b011}));
  EXPECT_EQ(g[2].first, (Determinant{0b101, 0b101}));
}

TEST(BuildSubspace, ClosedShellTruncationAndOpenShellUnion) {
  BitstringSample s;
  s.n_orb = 3;
  s.add({0b011, 0b101}, 3);
  s.add({0b101, 0b101}, 1);
  s.add({0b110, 0b011}, 4);
  SubspaceOptions o;
  auto b = build_subspace(s, 2, 2, o);
  EXPECT_EQ(b.n_configs, 3U);
  EXPECT_EQ(b.subspace.size(), 9U);
  EXPECT_TRUE(b.subspace.is_product());
  o.max_configs = 2;
  b = build_subspace(s, 2, 2, o);
  EXPECT_EQ(b.subspace, product_subspace(std::vector<u64>{0b011, 0b101},
                                         std::vector<u64>{0b011, 0b101}));
  EXPECT_EQ(b.closed_shell_dim, 4U);
  EXPECT_EQ(b.symmetrized_dim, 4U);
  o.closed_shell = false;
  b = build_subspace(s, 2, 2, o);
  EXPECT_EQ(b.subspace.size(), 2U);
  EXPECT_TRUE(b.subspace.contains({0b110, 0b011}));
  EXPECT_TRUE(b.subspace.contains({0b011, 0b101}));
  BitstringSample bad = s;
  bad.add({0b001, 0b011});
  EXPECT_THROW(build_subspace(bad, 2, 2, {}), Error);
  EXPECT_THROW(build_subspace(BitstringSample{3, {}}, 2, 2, {}), Error);
}

TEST(BuildSubspace, SymmetrizationModes) {
  const auto p = ladder(4, 2, 2, 0.75, 1.0);
  const auto mo = build_basis_transform(p, BasisKind::MolecularOrbital);
  const auto group = make_group(mo, group_preset("translation", 4, mo.kind));
  BitstringSample s;
  s.n_orb = 8;
  s.add({0b00000011, 0b00000011}, 5);
  s.add({0b00000101, 0b00000011}, 2);
  SubspaceOptions o;
  o.group = &group;
  o.symmetrize = SymmetrizeMode::Determinant;
  const auto det = build_subspace(s, 2, 2, o);
  o.symmetrize = SymmetrizeMode::Config;
  const auto cfg = build_subspace(s, 2, 2, o);
  EXPECT_GE(det.symmetrized_dim, det.closed_shell_dim);
  EXPECT_TRUE(cfg.subspace.is_product());
  for (const auto& d : det.subspace) EXPECT_TRUE(cfg.subspace.contains(d));
  for (const auto& op : group.ops) {
    EXPECT_TRUE(check_closure(det.subspace, op));
    EXPECT_TRUE(check_closure(cfg.subspace, op));
  }
  o.closed_shell = false;
  EXPECT_THROW(build_subspace(s, 2, 2, o), Error);
  o.symmetrize = SymmetrizeMode::Determinant;
  o.group = nullptr;
  EXPECT_THROW(build_subspace(s, 2, 2, o), Error);
}

TEST(RecoveryLoop, NoiselessSampleIsFixedPoint) {
  const auto& ex = four_rung_exact();
  const auto s = surrogate_sample(ex.subspace, ex.solution.amplitudes, 300, 31, 8);
  RecoveryLoopOptions o;
  o.seed = 4;
  const auto r = recovery_loop(s, ex.integrals, 2, 2, o);
  ASSERT_EQ(r.iterations.size(), 5U);
  EXPECT_TRUE(std::isnan(r.iterations[0].drift));
  for (std::size_t i = 1; i < r.iterations.size(); ++i) {
    EXPECT_EQ(r.iterations[i].drift, 0.0);
    EXPECT_EQ(r.iterations[i].energy, r.iterations[0].energy);
  }
  const auto direct = build_subspace(filter_sample(s, 2, 2), 2, 2, {});
  const auto sol = solve_lowest(direct.subspace, ex.integrals);
  EXPECT_EQ(r.solution.energy, sol.energy);
  EXPECT_EQ(r.subspace, direct.subspace);
  EXPECT_EQ(r.sampled_dim, s.distinct());
}

TEST(RecoveryLoop, FreshStreamsChangeRecoveryButKeepSector) {
  const auto& ex = four_rung_exact();
  const auto noisy = inject_noise(
      surrogate_sample(ex.subspace, ex.solution.amplitudes, 400, 5, 8), {0.05, 6});
  RecoveryLoopOptions o;
  o.seed = 1;
  const auto a = recovery_loop(noisy, ex.integrals, 2, 2, o);
  o.fresh_stream_per_iteration = true;
  const auto b = recovery_loop(noisy, ex.integrals, 2, 2, o);
  const auto c = recovery_loop(noisy, ex.integrals, 2, 2, o);
  EXPECT_EQ(b.solution.energy, c.solution.energy);
  EXPECT_EQ(a.iterations[0].energy, b.iterations[0].energy);
  for (const auto& d : b.subspace) {
    EXPECT_EQ(d.n_alpha(), 2);
    EXPECT_EQ(d.n_beta(), 2);
  }
}

TEST(RecoveryLoop, RejectsZeroIterations) {
  const auto& ex = four_rung_exact();
  const auto s = surrogate_sample(ex.subspace, ex.solution.amplitudes, 10, 1, 8);
  RecoveryLoopOptions o;
  o.iterations = 0;
  EXPECT_THROW(recovery_loop(s, ex.integrals, 2, 2, o), Error);
}

TEST(RecoveryLoop, InitialReferenceGivesFirstDrift) {
  const auto& ex = four_rung_exact();
  const auto s = inject_noise(surrogate_sample(ex.subspace, ex.solution.amplitudes, 300, 2, 8),
                              {0.0144, 3});
  RecoveryLoopOptions o;
  o.iterations = 2;
  o.initial_reference = occupations(ex.solution, ex.subspace, 8);
  const auto r = recovery_loop(s, ex.integrals, 2, 2, o);
  EXPECT_FALSE(std::isnan(r.iterations[0].drift));
  for (const auto& d : r.subspace) {
    EXPECT_EQ(d.n_alpha(), 2);
    EXPECT_EQ(d.n_beta(), 2);
  }
}

TEST(RecoveryLoop, RecoveredEnergyNotAboveFilteredEnergy) {
  const auto& ex = four_rung_exact();
  int wins = 0;
  int monotone = 0;
  for (u64 seed = 0; seed < 20; ++seed) {
    const auto clean = surrogate_sample(ex.subspace, ex.solution.amplitudes, 200, seed, 8);
    const auto noisy = inject_noise(clean, {1.44e-2, seed + 1000});
    const auto naive = build_subspace(filter_sample(noisy, 2, 2), 2, 2, {});
    const double e_naive = solve_lowest(naive.subspace, ex.integrals).energy;
    RecoveryLoopOptions o;
    o.seed = seed;
    const auto r = recovery_loop(noisy, ex.integrals, 2, 2, o);
    wins += r.solution.energy <= e_naive + 1e-10 ? 1 : 0;
    bool ok = true;
    for (std::size_t i = 2; i < r.iterations.size(); ++i) {
      ok = ok && r.iterations[i].drift <= r.iterations[i - 1].drift + 1e-12;
    }
    monotone += ok ? 1 : 0;
    EXPECT_GE(r.solution.energy, ex.solution.energy - 1e-9);
  }
  EXPECT_GE(wins, 18);
  EXPECT_GE(monotone, 16);
}

}  // namespace
}  // namespace lsqd
