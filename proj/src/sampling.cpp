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

#include "ladder_sqd/sampling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "ladder_sqd/random.hpp"

namespace lsqd {

namespace {

constexpr u64 kShotsPerShard = u64{1} << 14;

using Entries = std::vector<std::pair<Determinant, u64>>;

Entries entries_of(const BitstringSample& s) { return {s.counts.begin(), s.counts.end()}; }

// Runs body(shard, out) for every shard and merges the per-shard samples in
// shard order.
template <typename Body>
BitstringSample run_shards(int n_orb, std::size_t n_shards, Body body) {
  std::vector<std::vector<Determinant>> parts(n_shards);
  std::vector<std::exception_ptr> errors(n_shards);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(n_shards); ++s) {
    try {
      body(static_cast<std::size_t>(s), parts[static_cast<std::size_t>(s)]);
    } catch (...) {
      errors[static_cast<std::size_t>(s)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  BitstringSample out;
  out.n_orb = n_orb;
  for (const auto& part : parts) {
    for (const auto& d : part) out.add(d);
  }
  return out;
}

int pick_weighted(const std::vector<int>& bits, const std::vector<double>& w, Rng& rng,
                  bool uniform_fallback) {
  double total = 0.0;
  for (double x : w) total += x;
  if (!(total > 0.0)) {
    require(uniform_fallback, ErrorCode::InvalidArgument,
            "degenerate recovery weights: every eligible bit has zero weight");
    return bits[static_cast<std::size_t>(rng.below(bits.size()))];
  }
  const double target = rng.uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    acc += w[i];
    if (target < acc) return bits[i];
  }
  // rounding can leave target == total; take the last positive weight
  for (std::size_t i = bits.size(); i-- > 0;) {
    if (w[i] > 0.0) return bits[i];
  }
  return bits.back();
}

u64 recover_string(u64 x, int target, int n_orb, const double* ref, Rng& rng,
                   bool uniform_fallback) {
  std::vector<int> bits;
  std::vector<double> w;
  while (std::popcount(x) != target) {
    const bool surplus = std::popcount(x) > target;
    bits.clear();
    w.clear();
    for (int i = 0; i < n_orb; ++i) {
      const bool occ = (x >> i) & 1U;
      if (occ != surplus) continue;
      bits.push_back(i);
      w.push_back(std::abs((occ ? 1.0 : 0.0) - ref[i]));
    }
    x ^= u64{1} << pick_weighted(bits, w, rng, uniform_fallback);
  }
  return x;
}

}  // namespace

u64 BitstringSample::shots() const {
  u64 n = 0;
  for (const auto& [d, c] : counts) n += c;
  return n;
}

void BitstringSample::add(const Determinant& d, u64 n) {
  if (n > 0) counts[d] += n;
}

void write_sample(std::ostream& os, const BitstringSample& s) {
  for (const auto& [d, c] : s.counts) os << to_bitstring(d, s.n_orb) << ' ' << c << '\n';
}

BitstringSample read_sample(std::istream& is, int n_orb) {
  BitstringSample s;
  s.n_orb = n_orb;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string bits;
    if (!(ls >> bits)) continue;
    long long count = 0;
    std::string extra;
    if (!(ls >> count) || count < 0 || (ls >> extra)) {
      fail(ErrorCode::Parse, "sample line " + std::to_string(lineno) +
                                 ": expected '<bitstring> <count>'");
    }
    s.add(from_bitstring(bits, n_orb), static_cast<u64>(count));
  }
  return s;
}

void NoiseModel::validate() const {
  require(p_flip >= 0.0 && p_flip < 0.5, ErrorCode::InvalidArgument,
          "p_flip must lie in [0, 0.5)");
}

BitstringSample surrogate_sample(const SubspaceSet& dets, const CVector& amplitudes, u64 shots,
                                 u64 seed, int n_orb) {
  require(static_cast<std::size_t>(amplitudes.size()) == dets.size() && !dets.empty(),
          ErrorCode::InvalidArgument, "amplitude count does not match determinant count");
  std::vector<double> cum(dets.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    acc += std::norm(amplitudes[static_cast<Eigen::Index>(i)]);
    cum[i] = acc;
  }
  require(std::abs(acc - 1.0) <= 1e-8, ErrorCode::InvalidArgument,
          "amplitudes are not normalized (norm^2 = " + std::to_string(acc) + ")");
  const std::size_t n_shards = static_cast<std::size_t>((shots + kShotsPerShard - 1) / kShotsPerShard);
  return run_shards(n_orb, n_shards, [&](std::size_t s, std::vector<Determinant>& out) {
    Rng rng(shard_seed(seed, s));
    const u64 n = std::min<u64>(kShotsPerShard, shots - s * kShotsPerShard);
    out.reserve(n);
    for (u64 k = 0; k < n; ++k) {
      const double u = rng.uniform() * acc;
      auto it = std::upper_bound(cum.begin(), cum.end(), u);
      if (it == cum.end()) --it;
      out.push_back(dets[static_cast<std::size_t>(it - cum.begin())]);
    }
  });
}

BitstringSample uniform_sector_sample(int n_orb, int n_up, int n_down, u64 shots, u64 seed) {
  require(n_orb > 0 && n_orb <= 32, ErrorCode::InvalidArgument, "orbital count out of range");
  require(n_up >= 0 && n_down >= 0 && n_up <= n_orb && n_down <= n_orb,
          ErrorCode::InvalidArgument, "electron count outside the orbital space");
  auto draw = [n_orb](int n, Rng& rng) {
    // Floyd's algorithm for a uniform n-subset
    u64 mask = 0;
    for (int j = n_orb - n; j < n_orb; ++j) {
      const int t = static_cast<int>(rng.below(static_cast<u64>(j) + 1));
      mask |= ((mask >> t) & 1U) ? (u64{1} << j) : (u64{1} << t);
    }
    return mask;
  };
  const std::size_t n_shards = static_cast<std::size_t>((shots + kShotsPerShard - 1) / kShotsPerShard);
  return run_shards(n_orb, n_shards, [&](std::size_t s, std::vector<Determinant>& out) {
    Rng rng(shard_seed(seed, s));
    const u64 n = std::min<u64>(kShotsPerShard, shots - s * kShotsPerShard);
    for (u64 k = 0; k < n; ++k) {
      const u64 a = draw(n_up, rng);
      out.push_back({a, draw(n_down, rng)});
    }
  });
}

BitstringSample inject_noise(const BitstringSample& sample, const NoiseModel& noise) {
  noise.validate();
  if (noise.p_flip == 0.0) return sample;
  const int m = sample.n_orb;
  const int n_bits = 2 * m;
  const double log_keep = std::log1p(-noise.p_flip);
  const Entries entries = entries_of(sample);
  return run_shards(m, entries.size(), [&](std::size_t e, std::vector<Determinant>& out) {
    Rng rng(shard_seed(noise.seed, e));
    const auto [d, c] = entries[e];
    for (u64 k = 0; k < c; ++k) {
      Determinant x = d;
      // geometric gaps between flipped bits
      long long pos = -1;
      for (;;) {
        pos += static_cast<long long>(std::floor(std::log1p(-rng.uniform()) / log_keep)) + 1;
        if (pos >= n_bits) break;
        if (pos < m) {
          x.alpha ^= u64{1} << pos;
        } else {
          x.beta ^= u64{1} << (pos - m);
        }
      }
      out.push_back(x);
    }
  });
}

BitstringSample filter_sample(const BitstringSample& sample, int n_up, int n_down) {
  BitstringSample out;
  out.n_orb = sample.n_orb;
  for (const auto& [d, c] : sample.counts) {
    if (d.n_alpha() == n_up && d.n_beta() == n_down) out.counts.emplace_hint(out.counts.end(), d, c);
  }
  return out;
}

BitstringSample configuration_recovery(const BitstringSample& sample,
                                       const OccupationVector& n_ref, int n_up, int n_down,
                                       u64 seed, bool uniform_fallback) {
  const int m = sample.n_orb;
  require(n_ref.n_orb == m && n_ref.n.size() == static_cast<std::size_t>(2 * m),
          ErrorCode::InvalidArgument, "reference occupations do not match the orbital count");
  for (double x : n_ref.n) {
    require(x >= 0.0 && x <= 1.0, ErrorCode::InvalidArgument,
            "reference occupations must lie in [0, 1]");
  }
  require(n_up >= 0 && n_down >= 0 && n_up <= m && n_down <= m, ErrorCode::InvalidArgument,
          "target sector outside the orbital space");
  const Entries entries = entries_of(sample);
  const double* ref_up = n_ref.n.data();
  const double* ref_down = n_ref.n.data() + m;
  return run_shards(m, entries.size(), [&](std::size_t e, std::vector<Determinant>& out) {
    const auto [d, c] = entries[e];
    if (d.n_alpha() == n_up && d.n_beta() == n_down) {
      out.assign(c, d);
      return;
    }
    Rng rng(shard_seed(seed, e));
    out.reserve(c);
    for (u64 k = 0; k < c; ++k) {
      const u64 a = recover_string(d.alpha, n_up, m, ref_up, rng, uniform_fallback);
      const u64 b = recover_string(d.beta, n_down, m, ref_down, rng, uniform_fallback);
      out.push_back({a, b});
    }
  });
}

SubspaceSet sample_subspace(const BitstringSample& sample) {
  std::vector<Determinant> dets;
  dets.reserve(sample.counts.size());
  for (const auto& [d, c] : sample.counts) dets.push_back(d);
  return SubspaceSet(std::move(dets));
}

std::vector<std::pair<u64, u64>> config_frequencies(const BitstringSample& sample) {
  std::map<u64, u64> freq;
  for (const auto& [d, c] : sample.counts) {
    freq[d.alpha] += c;
    freq[d.beta] += c;
  }
  std::vector<std::pair<u64, u64>> out(freq.begin(), freq.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

std::vector<std::pair<Determinant, u64>> determinant_frequencies(const BitstringSample& sample) {
  Entries out = entries_of(sample);
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

SubspaceBuild build_subspace(const BitstringSample& in_sector, int n_up, int n_down,
                             const SubspaceOptions& opts) {
  require(!in_sector.counts.empty(), ErrorCode::InvalidArgument, "no in-sector bitstrings");
  for (const auto& [d, c] : in_sector.counts) {
    require(d.n_alpha() == n_up && d.n_beta() == n_down, ErrorCode::InvalidArgument,
            "sample contains a bitstring outside the target sector");
  }
  require(opts.symmetrize == SymmetrizeMode::Off || opts.group != nullptr,
          ErrorCode::InvalidArgument, "symmetrization requested without a group");
  SubspaceBuild b;
  auto keep = [&](std::size_t n) {
    return opts.max_configs == 0 ? n : std::min(n, opts.max_configs);
  };

  if (opts.closed_shell && n_up == n_down) {
    const auto ranked = config_frequencies(in_sector);
    std::vector<u64> top;
    for (std::size_t i = 0; i < keep(ranked.size()); ++i) top.push_back(ranked[i].first);
    SpinlessConfigSet u = make_config_set(std::move(top));
    b.n_configs = u.size();
    b.closed_shell_dim = u.size() * u.size();
    if (opts.symmetrize == SymmetrizeMode::Config) {
      auto r = symmetrize_configs(u, *opts.group, opts.coeff_threshold);
      b.one_pass_dim = r.one_pass_size * r.one_pass_size;
      b.symmetrize_passes = r.passes;
      b.n_configs = r.configs.size();
      b.subspace = product_subspace(r.configs);
    } else {
      b.subspace = product_subspace(u);
    }
  } else {
    require(opts.symmetrize != SymmetrizeMode::Config, ErrorCode::Unsupported,
            "configuration-level symmetrization needs a closed-shell subspace");
    const auto ranked = determinant_frequencies(in_sector);
    std::vector<Determinant> top;
    for (std::size_t i = 0; i < keep(ranked.size()); ++i) top.push_back(ranked[i].first);
    b.subspace = SubspaceSet(std::move(top));
    b.n_configs = b.subspace.alpha_strings().size();
    b.closed_shell_dim = b.subspace.size();
  }

  if (opts.symmetrize == SymmetrizeMode::Determinant) {
    auto r = symmetrize_subspace(b.subspace, *opts.group, opts.coeff_threshold);
    b.one_pass_dim = r.one_pass_dim;
    b.symmetrize_passes = r.passes;
    b.subspace = std::move(r.subspace);
  } else if (opts.symmetrize == SymmetrizeMode::Off) {
    b.one_pass_dim = b.subspace.size();
  }
  b.symmetrized_dim = b.subspace.size();
  return b;
}

RecoveryLoopResult recovery_loop(const BitstringSample& sample, const IntegralTensors& ints,
                                 int n_up, int n_down, const RecoveryLoopOptions& opts) {
  require(opts.iterations >= 1, ErrorCode::InvalidArgument, "iterations must be at least 1");
  require(sample.n_orb == ints.n_orb, ErrorCode::InvalidArgument,
          "sample and integrals have different orbital counts");
  const int m = sample.n_orb;
  RecoveryLoopResult res;
  res.sampled_dim = sample.distinct();
  std::optional<OccupationVector> ref = opts.initial_reference;

  for (int it = 0; it < opts.iterations; ++it) {
    const u64 seed = shard_seed(opts.seed, opts.fresh_stream_per_iteration ? static_cast<u64>(it) : 0);
    BitstringSample rec;
    if (ref) {
      rec = configuration_recovery(sample, *ref, n_up, n_down, seed, opts.uniform_fallback);
    } else {
      rec = filter_sample(sample, n_up, n_down);
      if (rec.counts.empty()) {
        OccupationVector half{m, std::vector<double>(static_cast<std::size_t>(2 * m), 0.5)};
        rec = configuration_recovery(sample, half, n_up, n_down, seed, opts.uniform_fallback);
      }
    }
    RecoveryIteration step;
    step.recovered_dim = rec.distinct();
    step.build = build_subspace(rec, n_up, n_down, opts.subspace);
    EigenSolution sol = solve_lowest(step.build.subspace, ints, opts.solver);
    OccupationVector occ = occupations(sol, step.build.subspace, m);
    step.energy = sol.energy;
    step.drift = ref ? max_abs_diff(occ, *ref) : std::numeric_limits<double>::quiet_NaN();

    res.subspace = std::move(step.build.subspace);
    step.build.subspace = SubspaceSet();
    res.solution = std::move(sol);
    res.occupations = occ;
    const bool fixed_point = !opts.fresh_stream_per_iteration && step.drift == 0.0;
    res.iterations.push_back(std::move(step));
    ref = std::move(occ);
    if (fixed_point) {
      // Same reference and stream: every later iteration repeats this one.
      while (static_cast<int>(res.iterations.size()) < opts.iterations) {
        res.iterations.push_back(res.iterations.back());
      }
      break;
    }
  }
  return res;
}

}  // namespace lsqd
