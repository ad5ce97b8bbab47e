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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "ladder_sqd/pipeline.hpp"

namespace lsqd {
namespace {

RunConfig small_config() {
  RunConfig c;
  c.model = {4, 2, 2, 1.0, 0.75, 1.0};
  c.sampler.shots = 2000;
  c.sampler.tolerance = 1e-10;
  return c;
}

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("lsqd_pipeline_" + name);
  std::filesystem::remove_all(p);
  return p;
}

TEST(Config, DumpParsesBackToSameConfig) {
  RunConfig c = small_config();
  c.sweep.schedule = {3, 7};
  c.tune.rows = {{8, 12, 0.7076}, {6, 8, std::nullopt}};
  c.symmetry.mode = SymmetrizeMode::Config;
  std::istringstream in(dump_config(c));
  const RunConfig back = parse_config(in);
  EXPECT_EQ(dump_config(back), dump_config(c));
  EXPECT_EQ(config_hash(back), config_hash(c));
  EXPECT_EQ(back.tune.rows.size(), 2u);
  EXPECT_FALSE(back.tune.rows[1].reference.has_value());
}

TEST(Config, HashChangesWithAnyValue) {
  RunConfig a = small_config();
  RunConfig b = a;
  b.p_flip = 0.01;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(Config, UnknownKeysAndBadValuesAreParseErrors) {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return parse_config(in);
  };
  EXPECT_NO_THROW(parse("[model]\nn_rungs = 6\n"));
  for (const std::string bad :
       {"[model]\nrungs = 6\n", "[nosuch]\nx = 1\n", "[model]\nn_rungs = six\n",
        "[recovery]\nfresh_stream = maybe\n", "[basis]\nkind = fourier\n",
        "[sweep]\nseries = momentum\n", "[tune]\nrows = 8\n", "seed = 3\n"}) {
    try {
      parse(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::Parse) << bad;
    }
  }
}

TEST(Config, SetValueAndValidation) {
  RunConfig c = small_config();
  set_config_value(c, "model.u", "2.5");
  set_config_value(c, "sweep.series", "mo:off, momentum:determinant");
  EXPECT_DOUBLE_EQ(c.model.u, 2.5);
  ASSERT_EQ(c.sweep.series.size(), 2u);
  EXPECT_EQ(c.sweep.series[0].basis, BasisKind::MolecularOrbital);
  EXPECT_THROW(set_config_value(c, "u", "1"), Error);

  c.sampler.kind = SamplerKind::File;
  c.sampler.file = "/nonexistent/sample.txt";
  try {
    c.validate();
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotFound);
  }
  RunConfig d = small_config();
  d.p_flip = 0.5;
  EXPECT_THROW(d.validate(), Error);
}

TEST(TuneGap, TableRowsAndEmptyList) {
  RunConfig c;
  const auto rows = tune_gap(c);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.error.empty()) << r.error;
    EXPECT_LT(r.gap, 1e-3);
    ASSERT_TRUE(r.row.reference.has_value());
    EXPECT_NEAR(r.t_perp, *r.row.reference, 1e-3);
  }
  EXPECT_LT(*rows[0].reference_gap, 1e-3);

  c.tune.rows.clear();
  std::ostringstream csv;
  write_tune_csv(csv, tune_gap(c));
  EXPECT_EQ(csv.str(),
            "n_rungs,n_electrons,filling,t_perp,crossing,gap,reference_t_perp,reference_gap,error\n");
}

TEST(TuneGap, FailingRowIsReportedAndRunContinues) {
  RunConfig c;
  c.tune.rows = {{1, 2, std::nullopt}, {8, 12, std::nullopt}};
  const auto rows = tune_gap(c);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_FALSE(rows[0].error.empty());
  EXPECT_TRUE(rows[1].error.empty());
}

TEST(RunSqd, FullSectorMatchesExactInEveryBasis) {
  RunConfig c = small_config();
  c.sampler.kind = SamplerKind::Full;
  const double exact = exact_ground_state(c.model, BasisKind::Site).solution.energy;
  for (auto k : {BasisKind::Site, BasisKind::Momentum, BasisKind::MolecularOrbital}) {
    c.basis = k;
    const RunReport r = run_sqd(c);
    EXPECT_NEAR(r.energy, exact, 1e-9) << to_string(k);
    EXPECT_EQ(r.dim, 784u);
  }
}

TEST(RunSqd, SymmetrizationNeverShrinksTheSubspace) {
  RunConfig c = small_config();
  c.subspace.max_configs = 6;
  TrialCache cache;
  const RunReport off = run_sqd(c, &cache);
  c.symmetry.mode = SymmetrizeMode::Determinant;
  const RunReport on = run_sqd(c, &cache);
  EXPECT_GE(on.dim, off.dim);
  EXPECT_EQ(on.closed_shell_dim, off.closed_shell_dim);
  EXPECT_LE(on.energy, off.energy + 1e-10);
  ASSERT_TRUE(on.reference_energy.has_value());
  EXPECT_GE(on.energy, *on.reference_energy - 1e-8);
}

TEST(RunSqd, NoninteractingRhfSamplerGivesRhfEnergy) {
  RunConfig c;
  c.model = {8, 6, 6, 1.0, 0.7076, 0.0};
  c.sampler.kind = SamplerKind::Rhf;
  c.sampler.shots = 100;
  c.p_flip = 0.0;
  const RunReport r = run_sqd(c);
  const auto levels = band_levels(c.model);
  double sum = 0.0;
  for (int i = 0; i < 6; ++i) sum += levels[static_cast<std::size_t>(i)].energy;
  EXPECT_NEAR(r.energy, 2.0 * sum, 1e-9);
  EXPECT_EQ(r.dim, 1u);
}

TEST(RunSqd, ReportsEveryDimensionAndIteration) {
  RunConfig c = small_config();
  const RunReport r = run_sqd(c);
  EXPECT_GT(r.sampled_dim, 0u);
  EXPECT_GT(r.recovered_dim, 0u);
  EXPECT_EQ(r.closed_shell_dim, r.symmetrized_dim);
  EXPECT_EQ(r.dim, r.subspace.size());
  EXPECT_EQ(r.iterations.size(), 5u);
  EXPECT_TRUE(std::isnan(r.iterations[0].drift));
  const std::string json = to_json(r);
  for (const char* key : {"\"sampled\"", "\"recovered\"", "\"closed_shell\"", "\"symmetrized\"",
                          "\"drift\"", "\"D\""})
    EXPECT_NE(json.find(key), std::string::npos) << key;
}

TEST(RunSqd, ReproducibleFromConfigAndSeed) {
  RunConfig c = small_config();
  c.subspace.max_configs = 8;
  const RunReport a = run_sqd(c);
  const RunReport b = run_sqd(c);
  EXPECT_EQ(a.energy, b.energy);
  EXPECT_EQ(a.subspace.size(), b.subspace.size());
  c.seed = 2;
  const RunReport d = run_sqd(c);
  EXPECT_TRUE(d.energy != a.energy || d.sampled_dim != a.sampled_dim);
}

TEST(RunSqd, FileSamplerReadsBitstrings) {
  const auto dir = scratch("file");
  std::filesystem::create_directories(dir);
  RunConfig c = small_config();
  c.sampler.kind = SamplerKind::File;
  c.sampler.file = (dir / "sample.txt").string();
  c.p_flip = 0.0;
  {
    std::ofstream out(c.sampler.file);
    out << "# two determinants\n0000001100000011 5\n0000010100000011 3\n";
  }
  const RunReport r = run_sqd(c);
  EXPECT_EQ(r.sampled_dim, 2u);
  EXPECT_EQ(r.shots, 8u);
}

TEST(Sweep, GridSharesSamplesAndTagsDimensions) {
  RunConfig c = small_config();
  c.sweep.schedule = {3, 6, 12};
  TrialCache cache;
  const SweepReport r = sweep(c, &cache);
  ASSERT_EQ(r.points.size(), 12u);
  for (const auto& p : r.points) {
    EXPECT_TRUE(p.error.empty()) << p.error;
    if (p.series.symmetrize == SymmetrizeMode::Off) {
      EXPECT_EQ(p.dim, p.closed_shell_dim);
      EXPECT_DOUBLE_EQ(p.expansion_ratio, 1.0);
    } else {
      EXPECT_GE(p.expansion_ratio, 1.0);
    }
  }
  std::ostringstream csv;
  write_sweep_csv(csv, r);
  EXPECT_EQ(csv.str().substr(0, 9), "basis,sym");
  c.sweep.parallel = true;
  const SweepReport par = sweep(c, &cache);
  for (std::size_t i = 0; i < r.points.size(); ++i) EXPECT_EQ(par.points[i].energy, r.points[i].energy);
}

TEST(Correlations, FullSectorMatchesDirectOracle) {
  RunConfig c = small_config();
  c.sampler.kind = SamplerKind::Full;
  const CorrelationReport rep = correlations(c);
  ASSERT_EQ(rep.series.size(), 2u);
  EXPECT_EQ(rep.series[0].label, "rhf");
  EXPECT_EQ(rep.series[1].label, "sqd");
  const auto ex = exact_ground_state(c.model, c.basis);
  const auto o0 = order_parameter_matrix(ex.basis, 0);
  for (const auto& [r, p] : rep.series[1].values) {
    const auto orr = order_parameter_matrix(ex.basis, r);
    const cplx direct =
        pair_correlation_direct(ex.solution, ex.subspace, 8, orr.o_tilde, o0.o_tilde);
    EXPECT_LT(std::abs(p - direct), 1e-10) << r;
  }
  EXPECT_EQ(rep.fits.size(), 2u);
}

TEST(OracleCheck, DefaultSuitePassesAndCorruptionIsNamed) {
  RunConfig c = small_config();
  const OracleReport ok = oracle_check(c);
  for (const auto& chk : ok.checks) EXPECT_TRUE(chk.passed) << chk.name << " " << chk.value;
  EXPECT_TRUE(ok.passed());

  c.seed = 99;
  EXPECT_TRUE(oracle_check(c).passed());

  c.oracle.corrupt_hermiticity = true;
  const OracleReport bad = oracle_check(c);
  EXPECT_FALSE(bad.passed());
  bool named = false;
  for (const auto& chk : bad.checks)
    if (chk.name == "integral_hermiticity") named = !chk.passed;
  EXPECT_TRUE(named);
}

TEST(RunCommand, WritesArtifactsAndManifest) {
  const auto dir = scratch("cmd");
  RunConfig c = small_config();
  c.output_dir = dir.string();
  c.subspace.max_configs = 5;
  bool ok = false;
  const std::string json = run_command(c, "run-sqd", &ok);
  EXPECT_TRUE(ok);
  EXPECT_NE(json.find("\"energy\""), std::string::npos);
  for (const char* f : {"run-sqd.json", "manifest.json", "subspace.txt", "solution.txt"})
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  std::ifstream in(dir / "manifest.json");
  const std::string manifest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_NE(manifest.find("config_hash"), std::string::npos);
  EXPECT_NE(manifest.find(version()), std::string::npos);
  EXPECT_THROW(run_command(c, "bogus"), Error);
}

}  // namespace
}  // namespace lsqd
