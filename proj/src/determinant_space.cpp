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

#include "ladder_sqd/determinant_space.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

namespace lsqd {

Determinant from_bitstring(std::string_view s, int n_orb) {
  require(n_orb >= 1 && n_orb <= 64, ErrorCode::InvalidArgument, "orbital count out of range");
  require(s.size() == static_cast<std::size_t>(2 * n_orb), ErrorCode::Parse,
          "bitstring length " + std::to_string(s.size()) + " != " + std::to_string(2 * n_orb));
  Determinant d;
  for (int i = 0; i < n_orb; ++i) {
    const char a = s[s.size() - 1 - i];
    const char b = s[static_cast<std::size_t>(n_orb) - 1 - i];
    require((a == '0' || a == '1') && (b == '0' || b == '1'), ErrorCode::Parse,
            "bitstring contains a character other than 0/1");
    if (a == '1') d.alpha |= u64{1} << i;
    if (b == '1') d.beta |= u64{1} << i;
  }
  return d;
}

std::string to_bitstring(const Determinant& d, int n_orb) {
  std::string s(static_cast<std::size_t>(2 * n_orb), '0');
  for (int i = 0; i < n_orb; ++i) {
    if ((d.alpha >> i) & 1U) s[s.size() - 1 - i] = '1';
    if ((d.beta >> i) & 1U) s[static_cast<std::size_t>(n_orb) - 1 - i] = '1';
  }
  return s;
}

SubspaceSet::SubspaceSet(std::vector<Determinant> dets) : dets_(std::move(dets)) {
  std::sort(dets_.begin(), dets_.end());
  dets_.erase(std::unique(dets_.begin(), dets_.end()), dets_.end());
  index_.reserve(dets_.size());
  for (std::size_t i = 0; i < dets_.size(); ++i) index_.emplace(dets_[i], i);
}

std::optional<std::size_t> SubspaceSet::find(const Determinant& d) const {
  const auto it = index_.find(d);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<u64> SubspaceSet::alpha_strings() const {
  std::vector<u64> out;
  for (const auto& d : dets_) {
    if (out.empty() || out.back() != d.alpha) out.push_back(d.alpha);
  }
  return out;
}

std::vector<u64> SubspaceSet::beta_strings() const {
  std::vector<u64> out;
  out.reserve(dets_.size());
  for (const auto& d : dets_) out.push_back(d.beta);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool SubspaceSet::is_product() const {
  if (dets_.empty()) return true;
  const auto a = alpha_strings();
  const auto b = beta_strings();
  if (a.size() * b.size() != dets_.size()) return false;
  // Sorted order makes a product set row-major in (alpha, beta).
  for (std::size_t i = 0; i < dets_.size(); ++i) {
    if (dets_[i].alpha != a[i / b.size()] || dets_[i].beta != b[i % b.size()]) return false;
  }
  return true;
}

std::optional<std::size_t> SpinlessConfigSet::find(u64 c) const {
  const auto it = std::lower_bound(configs.begin(), configs.end(), c);
  if (it == configs.end() || *it != c) return std::nullopt;
  return static_cast<std::size_t>(it - configs.begin());
}

SpinlessConfigSet make_config_set(std::vector<u64> configs) {
  std::sort(configs.begin(), configs.end());
  configs.erase(std::unique(configs.begin(), configs.end()), configs.end());
  return SpinlessConfigSet{std::move(configs)};
}

SubspaceSet filter_sector(std::span<const Determinant> dets, int n_up, int n_down) {
  std::vector<Determinant> kept;
  for (const auto& d : dets) {
    if (d.n_alpha() == n_up && d.n_beta() == n_down) kept.push_back(d);
  }
  return SubspaceSet(std::move(kept));
}

std::pair<SpinlessConfigSet, SubspaceSet> closed_shell_expand(
    std::span<const Determinant> dets) {
  std::vector<u64> u;
  u.reserve(2 * dets.size());
  for (const auto& d : dets) {
    require(d.n_alpha() == d.n_beta(), ErrorCode::Unsupported,
            "closed-shell expansion requires n_up == n_down");
    u.push_back(d.alpha);
    u.push_back(d.beta);
  }
  auto set = make_config_set(std::move(u));
  auto sub = product_subspace(set);
  return {std::move(set), std::move(sub)};
}

SubspaceSet product_subspace(const SpinlessConfigSet& u) {
  return product_subspace(u.configs, u.configs);
}

SubspaceSet product_subspace(std::span<const u64> alphas, std::span<const u64> betas) {
  std::vector<Determinant> dets;
  dets.reserve(alphas.size() * betas.size());
  for (u64 a : alphas)
    for (u64 b : betas) dets.push_back({a, b});
  return SubspaceSet(std::move(dets));
}

std::vector<u64> combinations(int n_orb, int n) {
  std::vector<u64> out;
  if (n < 0 || n > n_orb) return out;
  if (n == 0) return {0};
  u64 x = (u64{1} << n) - 1;
  const u64 limit = n_orb >= 64 ? ~u64{0} : (u64{1} << n_orb);
  while (true) {
    out.push_back(x);
    // Gosper's hack: next mask with the same popcount
    const u64 c = x & (~x + 1);
    const u64 r = x + c;
    if (r == 0 || (n_orb < 64 && r >= limit)) break;
    x = (((r ^ x) >> 2) / c) | r;
    if (n_orb < 64 && x >= limit) break;
  }
  return out;
}

SubspaceSet full_sector(int n_orb, int n_up, int n_down) {
  return product_subspace(combinations(n_orb, n_up), combinations(n_orb, n_down));
}

int total_momentum_index(const Determinant& d, const BasisTransform& basis) {
  require(basis.kind == BasisKind::Momentum, ErrorCode::InvalidArgument,
          "total momentum is only defined in the momentum basis");
  const int n = basis.n_rungs;
  long total = 0;
  for (u64 mask : {d.alpha, d.beta}) {
    while (mask) {
      const int i = std::countr_zero(mask);
      mask &= mask - 1;
      total += basis.labels.at(i).momentum;
    }
  }
  return static_cast<int>(total % n);
}

double total_momentum(const Determinant& d, const BasisTransform& basis) {
  return 2.0 * kPi * total_momentum_index(d, basis) / basis.n_rungs;
}

void write_subspace(std::ostream& os, const SubspaceSet& s, int n_orb) {
  for (const auto& d : s) os << to_bitstring(d, n_orb) << '\n';
}

SubspaceSet read_subspace(std::istream& is, int n_orb) {
  std::vector<Determinant> dets;
  std::string line;
  while (std::getline(is, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    dets.push_back(from_bitstring(line, n_orb));
  }
  return SubspaceSet(std::move(dets));
}

}  // namespace lsqd
