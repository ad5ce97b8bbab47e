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

#include "ladder_sqd/symmetry.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <tuple>
#include <unordered_set>

#include <Eigen/LU>

namespace lsqd {

namespace {

constexpr double kZero = 1e-14;

const std::vector<std::string> kPointLabels = {"E",        "C2x",      "C2y",     "C2z",
                                               "I",        "sigma_xy", "sigma_xz", "sigma_yz"};

bool flips_momentum(const std::string& l) {
  return l == "C2y" || l == "sigma_yz" || l == "C2z" || l == "I";
}
bool swaps_legs(const std::string& l) {
  return l == "C2x" || l == "sigma_xz" || l == "C2z" || l == "I";
}

// (cos, sin) of 2 pi m / n, exact at multiples of a quarter turn.
std::pair<double, double> grid_angle(long m, int n) {
  m = ((m % n) + n) % n;
  if ((4 * m) % n == 0) {
    switch ((4 * m) / n) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double a = 2.0 * kPi * static_cast<double>(m) / n;
  return {std::cos(a), std::sin(a)};
}

std::vector<u64> connected_blocks(const CMatrix& d) {
  const int m = static_cast<int>(d.rows());
  std::vector<int> parent(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) parent[static_cast<std::size_t>(i)] = i;
  auto root = [&](int i) {
    while (parent[static_cast<std::size_t>(i)] != i) {
      parent[static_cast<std::size_t>(i)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
      i = parent[static_cast<std::size_t>(i)];
    }
    return i;
  };
  for (int c = 0; c < m; ++c)
    for (int r = 0; r < m; ++r)
      if (d(r, c) != cplx{0.0, 0.0}) parent[static_cast<std::size_t>(root(r))] = root(c);
  std::vector<u64> masks(static_cast<std::size_t>(m), 0);
  for (int i = 0; i < m; ++i) masks[static_cast<std::size_t>(root(i))] |= u64{1} << i;
  std::vector<u64> out;
  for (u64 b : masks)
    if (b) out.push_back(b);
  return out;
}

int permutation_parity(std::vector<int>& seq) {
  int swaps = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    while (seq[i] != static_cast<int>(i)) {
      std::swap(seq[i], seq[static_cast<std::size_t>(seq[i])]);
      ++swaps;
    }
  }
  return swaps & 1;
}

std::vector<int> bits_of(u64 mask) {
  std::vector<int> out;
  while (mask) {
    out.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

// All k-subsets of the set bits of `mask`.
void for_each_subset(u64 mask, int k, const std::function<void(u64)>& f) {
  const auto pos = bits_of(mask);
  const int n = static_cast<int>(pos.size());
  if (k > n) return;
  for (u64 c : combinations(n, k)) {
    u64 out = 0;
    while (c) {
      out |= u64{1} << pos[static_cast<std::size_t>(std::countr_zero(c))];
      c &= c - 1;
    }
    f(out);
  }
}

}  // namespace

double SymmetryOperation::unitarity_error() const {
  return (d.adjoint() * d - CMatrix::Identity(d.rows(), d.cols())).cwiseAbs().maxCoeff();
}

SymmetryOperation make_operation(std::string label, CMatrix d) {
  require(d.rows() == d.cols() && d.rows() >= 1 && d.rows() <= 64, ErrorCode::InvalidArgument,
          "representation matrix must be square with at most 64 orbitals");
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    cplx& x = d.data()[i];
    if (std::abs(x.real()) < kZero) x.real(0.0);
    if (std::abs(x.imag()) < kZero) x.imag(0.0);
  }
  SymmetryOperation op;
  op.label = std::move(label);
  op.d = std::move(d);
  op.blocks = connected_blocks(op.d);
  const int m = op.n_orb();
  FastPath fp;
  bool ok = true;
  for (int c = 0; c < m && ok; ++c) {
    int row = -1;
    for (int r = 0; r < m; ++r) {
      if (op.d(r, c) == cplx{0.0, 0.0}) continue;
      if (row >= 0) {
        ok = false;
        break;
      }
      row = r;
    }
    if (row < 0) ok = false;
    if (!ok) break;
    fp.perm.push_back(row);
    fp.phase.push_back(op.d(row, c));
  }
  if (ok) op.fast_path = std::move(fp);
  return op;
}

std::string canonical_label(const std::string& label, int n_rungs) {
  std::string s;
  for (char ch : label)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  // accept the Greek spelling
  const std::string greek = "\xCF\x83";
  if (s.rfind(greek, 0) == 0) s = "sigma" + s.substr(greek.size());
  if (s == "identity" || s == "e") s = "E";
  if (s == "inversion" || s == "i") s = "I";
  if (s.rfind("sigma", 0) == 0 && s.size() > 5 && s[5] != '_') s.insert(5, "_");
  for (const auto& p : kPointLabels)
    if (s == p) return s;
  if (!s.empty() && (s[0] == 'T' || s[0] == 't')) {
    std::string num = s.substr(1);
    if (!num.empty() && num[0] == '_') num = num.substr(1);
    if (!num.empty() && std::all_of(num.begin(), num.end(), [](char c) {
          return std::isdigit(static_cast<unsigned char>(c)) || c == '-';
        })) {
      const int r = std::stoi(num);
      require(n_rungs > 0, ErrorCode::InvalidArgument, "translation needs a rung count");
      return "T" + std::to_string(((r % n_rungs) + n_rungs) % n_rungs);
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown symmetry operation '" + label + "'");
}

std::vector<int> site_permutation(const std::string& label, int n_rungs) {
  const std::string l = canonical_label(label, n_rungs);
  std::vector<int> out(static_cast<std::size_t>(2 * n_rungs));
  int shift = 0;
  bool flip = false, swap = false;
  if (l[0] == 'T') {
    shift = std::stoi(l.substr(1));
  } else {
    flip = flips_momentum(l);
    swap = swaps_legs(l);
  }
  for (int i = 0; i < n_rungs; ++i) {
    for (int leg = 0; leg < 2; ++leg) {
      int j = flip ? -i : i;
      j = ((j + shift) % n_rungs + n_rungs) % n_rungs;
      const int leg2 = swap ? 1 - leg : leg;
      out[static_cast<std::size_t>(2 * i + leg)] = 2 * j + leg2;
    }
  }
  return out;
}

SymmetryOperation site_operation(const BasisTransform& basis, const std::string& label) {
  const std::string l = canonical_label(label, basis.n_rungs);
  const auto perm = site_permutation(l, basis.n_rungs);
  const int m = basis.n_orbitals();
  CMatrix p = CMatrix::Zero(m, m);
  for (int i = 0; i < m; ++i) p(perm[static_cast<std::size_t>(i)], i) = 1.0;
  return make_operation(l, basis.v.adjoint() * p * basis.v);
}

SymmetryOperation momentum_pointgroup_rep(const BasisTransform& basis, const std::string& label) {
  require(basis.kind == BasisKind::Momentum, ErrorCode::InvalidArgument,
          "momentum_pointgroup_rep requires the momentum basis");
  const std::string l = canonical_label(label, basis.n_rungs);
  require(l[0] != 'T', ErrorCode::InvalidArgument, "'" + label + "' is not a point operation");
  const int m = basis.n_orbitals();
  CMatrix d = CMatrix::Zero(m, m);
  const bool flip = flips_momentum(l);
  const bool swap = swaps_legs(l);
  for (int c = 0; c < m; ++c) {
    const auto& lab = basis.labels[static_cast<std::size_t>(c)];
    const double s = (swap && lab.branch == Branch::Antibonding) ? -1.0 : 1.0;
    const int row = (flip && lab.partner >= 0) ? lab.partner : c;
    d(row, c) = s;
  }
  return make_operation(l, std::move(d));
}

SymmetryOperation molecular_translation_rep(const BasisTransform& basis, int r) {
  require(basis.kind == BasisKind::MolecularOrbital, ErrorCode::InvalidArgument,
          "molecular_translation_rep requires the molecular-orbital basis");
  const int n = basis.n_rungs;
  require(r >= 0 && r < n, ErrorCode::InvalidArgument,
          "translation " + std::to_string(r) + " outside [0, " + std::to_string(n) + ")");
  const int m = basis.n_orbitals();
  CMatrix d = CMatrix::Zero(m, m);
  for (int c = 0; c < m; ++c) {
    const auto& lab = basis.labels[static_cast<std::size_t>(c)];
    const auto [cs, sn] = grid_angle(static_cast<long>(lab.momentum) * r, n);
    if (lab.partner < 0) {
      d(c, c) = cs;  // k in {0, pi}
    } else if (lab.parity == Parity::Even) {
      const int u = lab.partner;
      d(c, c) = cs;
      d(u, c) = sn;
      d(c, u) = -sn;
      d(u, u) = cs;
    }
  }
  return make_operation("T" + std::to_string(r), std::move(d));
}

cplx momentum_translation_phase(const Determinant& det, const BasisTransform& basis, int r) {
  const int k = total_momentum_index(det, basis);
  const auto [cs, sn] = grid_angle(static_cast<long>(k) * r, basis.n_rungs);
  return {cs, -sn};
}

double DeterminantImage::norm2() const {
  double s = 0.0;
  for (const auto& t : terms) s += std::norm(t.second);
  return s;
}

ConfigImage apply_to_config(const SymmetryOperation& op, u64 mask, double thr) {
  require(thr < 1.0, ErrorCode::InvalidArgument,
          "coefficient threshold >= 1 drops every image term");
  ConfigImage img;
  if (op.fast_path) {
    const auto& fp = *op.fast_path;
    u64 target = 0;
    cplx coeff{1.0, 0.0};
    std::vector<int> seq;
    for (int i : bits_of(mask)) {
      const int j = fp.perm[static_cast<std::size_t>(i)];
      target |= u64{1} << j;
      coeff *= fp.phase[static_cast<std::size_t>(i)];
      seq.push_back(j);
    }
    // rank of each image orbital among the targets
    std::vector<int> rank(seq.size());
    for (std::size_t a = 0; a < seq.size(); ++a)
      rank[a] = std::popcount(target & ((u64{1} << seq[a]) - 1));
    if (permutation_parity(rank)) coeff = -coeff;
    if (std::abs(coeff) > thr) img.terms.emplace_back(target, coeff);
    return img;
  }

  const auto cols = bits_of(mask);
  const auto n = static_cast<Eigen::Index>(cols.size());
  if (n == 0) {
    img.terms.emplace_back(0, cplx{1.0, 0.0});
    return img;
  }
  // Targets: within each block, any subset of its orbitals of the size of
  // the source occupation inside that block.
  std::vector<std::pair<u64, int>> parts;
  for (u64 b : op.blocks) {
    const int k = std::popcount(mask & b);
    if (k > 0) parts.emplace_back(b, k);
  }
  CMatrix minor(n, n);
  std::function<void(std::size_t, u64)> rec = [&](std::size_t bi, u64 acc) {
    if (bi == parts.size()) {
      const auto rows = bits_of(acc);
      for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b)
          minor(a, b) = op.d(rows[static_cast<std::size_t>(a)], cols[static_cast<std::size_t>(b)]);
      const cplx c = n == 1 ? minor(0, 0) : minor.partialPivLu().determinant();
      if (std::abs(c) > thr) img.terms.emplace_back(acc, c);
      return;
    }
    for_each_subset(parts[bi].first, parts[bi].second,
                    [&](u64 sub) { rec(bi + 1, acc | sub); });
  };
  rec(0, 0);
  std::sort(img.terms.begin(), img.terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return img;
}

DeterminantImage apply_to_determinant(const SymmetryOperation& op, const Determinant& det,
                                      double thr) {
  require(thr < 1.0, ErrorCode::InvalidArgument,
          "coefficient threshold >= 1 drops every image term");
  // Per-spin terms are kept at threshold 0 so the product is thresholded once.
  const auto a = apply_to_config(op, det.alpha, 0.0);
  const auto b = apply_to_config(op, det.beta, 0.0);
  DeterminantImage img;
  img.terms.reserve(a.terms.size() * b.terms.size());
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      const cplx c = ca * cb;
      if (std::abs(c) > thr) img.terms.push_back({Determinant{ma, mb}, c});
    }
  return img;
}

void SymmetryGroup::build_closure_table(double tol) {
  const std::size_t n = ops.size();
  closure_table.assign(n, std::vector<int>(n, -1));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const CMatrix p = ops[a].d * ops[b].d;
      for (std::size_t c = 0; c < n; ++c) {
        if ((p - ops[c].d).cwiseAbs().maxCoeff() < tol) {
          closure_table[a][b] = static_cast<int>(c);
          break;
        }
      }
    }
}

bool SymmetryGroup::is_closed() const {
  if (closure_table.size() != ops.size()) return false;
  for (const auto& row : closure_table)
    for (int c : row)
      if (c < 0) return false;
  return true;
}

SymmetryGroup make_group(const BasisTransform& basis, const std::vector<std::string>& labels) {
  SymmetryGroup g;
  g.n_rungs = basis.n_rungs;
  g.basis = basis.kind;
  for (const auto& raw : labels) {
    const std::string l = canonical_label(raw, basis.n_rungs);
    const bool translation = l[0] == 'T';
    if (basis.kind == BasisKind::Momentum && !translation) {
      g.ops.push_back(momentum_pointgroup_rep(basis, l));
    } else if (basis.kind == BasisKind::MolecularOrbital && translation) {
      g.ops.push_back(molecular_translation_rep(basis, std::stoi(l.substr(1))));
    } else {
      g.ops.push_back(site_operation(basis, l));
    }
  }
  return g;
}

std::vector<std::string> group_preset(const std::string& name, int n_rungs, BasisKind basis) {
  std::vector<std::string> point(kPointLabels.begin() + 1, kPointLabels.end());
  std::vector<std::string> trans;
  for (int r = 1; r < n_rungs; ++r) trans.push_back("T" + std::to_string(r));
  if (name == "none") return {};
  if (name == "point") return point;
  if (name == "translation") return trans;
  if (name == "space" || (name == "auto" && basis == BasisKind::Site)) {
    point.insert(point.end(), trans.begin(), trans.end());
    return point;
  }
  if (name == "auto") return basis == BasisKind::Momentum ? point : trans;
  fail(ErrorCode::InvalidArgument, "unknown symmetry group preset '" + name + "'");
}

std::vector<std::string> parse_group_definition(std::istream& is) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string compact;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
    if (!compact.empty()) out.push_back(compact);
  }
  return out;
}

namespace {

template <typename Key, typename Hash, typename Expand>
std::tuple<std::vector<Key>, std::size_t, int> close_set(const std::vector<Key>& input,
                                                         int max_passes, Expand&& expand) {
  std::unordered_set<Key, Hash> seen(input.begin(), input.end());
  std::vector<Key> all(input.begin(), input.end());
  std::vector<Key> frontier = all;
  std::size_t one_pass = 0;
  int passes = 0;
  for (bool first = true; !frontier.empty(); first = false) {
    std::vector<Key> fresh;
#pragma omp parallel
    {
      std::vector<Key> local;
#pragma omp for schedule(dynamic, 64) nowait
      for (std::size_t i = 0; i < frontier.size(); ++i) expand(frontier[i], local);
#pragma omp critical
      fresh.insert(fresh.end(), local.begin(), local.end());
    }
    std::sort(fresh.begin(), fresh.end());
    frontier.clear();
    for (const auto& k : fresh) {
      if (seen.insert(k).second) {
        frontier.push_back(k);
        all.push_back(k);
      }
    }
    if (first) one_pass = all.size();
    if (frontier.empty()) break;
    ++passes;
    require(passes <= max_passes, ErrorCode::NotConverged,
            "symmetrization did not close within " + std::to_string(max_passes) + " passes");
  }
  if (input.empty()) one_pass = 0;
  return {std::move(all), one_pass, passes};
}

struct U64Hash {
  std::size_t operator()(u64 x) const { return DeterminantHash{}(Determinant{x, 0}); }
};

}  // namespace

SymmetrizeResult symmetrize_subspace(const SubspaceSet& subspace, const SymmetryGroup& group,
                                     double thr, int max_passes) {
  if (max_passes <= 0) max_passes = std::max(1, 4 * group.n_rungs);
  std::vector<Determinant> input(subspace.begin(), subspace.end());
  auto [all, one_pass, passes] = close_set<Determinant, DeterminantHash>(
      input, max_passes, [&](const Determinant& d, std::vector<Determinant>& out) {
        for (const auto& op : group.ops)
          for (const auto& t : apply_to_determinant(op, d, thr).terms) out.push_back(t.first);
      });
  SymmetrizeResult r;
  r.input_dim = subspace.size();
  r.one_pass_dim = one_pass;
  r.passes = passes;
  r.subspace = SubspaceSet(std::move(all));
  return r;
}

ConfigSymmetrizeResult symmetrize_configs(const SpinlessConfigSet& configs,
                                          const SymmetryGroup& group, double thr,
                                          int max_passes) {
  if (max_passes <= 0) max_passes = std::max(1, 4 * group.n_rungs);
  auto [all, one_pass, passes] = close_set<u64, U64Hash>(
      configs.configs, max_passes, [&](u64 c, std::vector<u64>& out) {
        for (const auto& op : group.ops)
          for (const auto& t : apply_to_config(op, c, thr).terms) out.push_back(t.first);
      });
  ConfigSymmetrizeResult r;
  r.input_size = configs.size();
  r.one_pass_size = one_pass;
  r.passes = passes;
  r.configs = make_config_set(std::move(all));
  return r;
}

std::pair<SubspaceSet, CVector> change_basis(const SubspaceSet& dets, const CVector& amplitudes,
                                             const BasisTransform& from,
                                             const BasisTransform& to, double coeff_threshold) {
  require(static_cast<std::size_t>(amplitudes.size()) == dets.size(), ErrorCode::InvalidArgument,
          "amplitude count does not match determinant count");
  require(from.v.rows() == to.v.rows() && from.v.cols() == to.v.cols(),
          ErrorCode::InvalidArgument, "bases span different orbital spaces");
  const SymmetryOperation w = make_operation("basis", to.v.adjoint() * from.v);
  std::unordered_map<Determinant, cplx, DeterminantHash> acc;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const cplx a = amplitudes[static_cast<Eigen::Index>(i)];
    if (a == cplx{}) continue;
    for (const auto& [d, c] : apply_to_determinant(w, dets[i], coeff_threshold).terms) {
      acc[d] += c * a;
    }
  }
  std::vector<Determinant> out;
  out.reserve(acc.size());
  for (const auto& [d, c] : acc) {
    if (std::abs(c) > coeff_threshold) out.push_back(d);
  }
  SubspaceSet s(std::move(out));
  CVector v(static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) v[static_cast<Eigen::Index>(i)] = acc.at(s[i]);
  return {std::move(s), std::move(v)};
}

bool check_closure(const SubspaceSet& subspace, const SymmetryOperation& op, double thr) {
  for (const auto& d : subspace)
    for (const auto& t : apply_to_determinant(op, d, thr).terms)
      if (!subspace.contains(t.first)) return false;
  return true;
}

void write_operation(std::ostream& os, const SymmetryOperation& op) {
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  os << "# " << op.label << '\n' << op.d.rows() << ' ' << op.d.cols() << '\n';
  for (Eigen::Index c = 0; c < op.d.cols(); ++c)
    for (Eigen::Index r = 0; r < op.d.rows(); ++r)
      if (op.d(r, c) != cplx{0.0, 0.0})
        os << r << ' ' << c << ' ' << op.d(r, c).real() << ' ' << op.d(r, c).imag() << '\n';
  os.precision(old);
}

}  // namespace lsqd
