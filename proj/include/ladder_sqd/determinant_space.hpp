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

/**
 * @file determinant_space.hpp
 * @brief Bitmask Slater determinants and ordered determinant collections.
 *
 * A determinant is the state
 *
 *   prod_{i in alpha, ascending} c^dag_{i,up} prod_{j in beta, ascending} c^dag_{j,down} |0>
 *
 * i.e. all spin-up operators stand to the left of the spin-down ones. Bit i of
 * a mask is spatial orbital i of the active basis.
 */

#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ladder_sqd/common.hpp"
#include "ladder_sqd/lattice_model.hpp"

namespace lsqd {

struct Determinant {
  u64 alpha = 0;
  u64 beta = 0;

  constexpr auto operator<=>(const Determinant&) const = default;

  int n_alpha() const { return std::popcount(alpha); }
  int n_beta() const { return std::popcount(beta); }
};

struct DeterminantHash {
  std::size_t operator()(const Determinant& d) const noexcept {
    // splitmix64 finalizer over both words
    u64 x = d.alpha * 0x9E3779B97F4A7C15ULL ^ (d.beta + 0x632BE59BD9B4E019ULL);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return static_cast<std::size_t>(x);
  }
};

inline u64 orbital_mask(int n_orb) {
  return n_orb >= 64 ? ~u64{0} : ((u64{1} << n_orb) - 1);
}

/// Parses 2M characters: the left half is spin-down, the right half spin-up,
/// and the rightmost character of each half is orbital 0.
Determinant from_bitstring(std::string_view s, int n_orb);
std::string to_bitstring(const Determinant& d, int n_orb);

/// Ordered, duplicate-free determinant collection (lexicographic on
/// (alpha, beta)) with reverse lookup.
class SubspaceSet {
 public:
  SubspaceSet() = default;
  /// Sorts and deduplicates.
  explicit SubspaceSet(std::vector<Determinant> dets);

  std::size_t size() const { return dets_.size(); }
  bool empty() const { return dets_.empty(); }
  const Determinant& operator[](std::size_t i) const { return dets_[i]; }
  std::span<const Determinant> dets() const { return dets_; }
  auto begin() const { return dets_.begin(); }
  auto end() const { return dets_.end(); }

  std::optional<std::size_t> find(const Determinant& d) const;
  bool contains(const Determinant& d) const { return index_.count(d) != 0; }

  /// Sorted distinct alpha and beta strings.
  std::vector<u64> alpha_strings() const;
  std::vector<u64> beta_strings() const;
  /// True when the set equals alpha_strings() x beta_strings().
  bool is_product() const;

  friend bool operator==(const SubspaceSet& a, const SubspaceSet& b) {
    return a.dets_ == b.dets_;
  }

 private:
  std::vector<Determinant> dets_;
  std::unordered_map<Determinant, std::size_t, DeterminantHash> index_;
};

/// Ordered unique spinless configurations U.
struct SpinlessConfigSet {
  std::vector<u64> configs;

  std::size_t size() const { return configs.size(); }
  std::optional<std::size_t> find(u64 c) const;
};

SpinlessConfigSet make_config_set(std::vector<u64> configs);

SubspaceSet filter_sector(std::span<const Determinant> dets, int n_up, int n_down);

/// U = all alpha and beta strings of `dets`; subspace = U x U. Requires every
/// determinant to satisfy n_up == n_down.
std::pair<SpinlessConfigSet, SubspaceSet> closed_shell_expand(std::span<const Determinant> dets);

/// Direct product U x U.
SubspaceSet product_subspace(const SpinlessConfigSet& u);
SubspaceSet product_subspace(std::span<const u64> alphas, std::span<const u64> betas);

/// Every determinant of the (n_up, n_down) sector over n_orb orbitals.
SubspaceSet full_sector(int n_orb, int n_up, int n_down);
/// All n_orb-bit masks with popcount n, ascending.
std::vector<u64> combinations(int n_orb, int n);

/// Total crystal momentum (grid index, reduced mod N) of a momentum-basis
/// determinant. Throws InvalidArgument in any other basis.
int total_momentum_index(const Determinant& d, const BasisTransform& basis);
/// Same as above, in radians in [0, 2 pi).
double total_momentum(const Determinant& d, const BasisTransform& basis);

/// Line-per-bitstring text format.
void write_subspace(std::ostream& os, const SubspaceSet& s, int n_orb);
SubspaceSet read_subspace(std::istream& is, int n_orb);

}  // namespace lsqd
