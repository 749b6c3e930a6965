// Decision procedures: orthoalgebra, the Riesz decomposition property in its
// three equivalent forms, Booleanness, and the common-refinement builder.
#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ea/core.hpp"

namespace ea {

struct OrthoalgebraResult {
  bool ok = true;
  Elem witness = kUndef;  // a != 0 with a+a defined, when !ok
};

inline OrthoalgebraResult is_orthoalgebra(const EffectAlgebra& A) {
  for (Elem a = 0; a < A.size(); ++a)
    if (a != A.zero() && A.defined(a, a)) return {false, a};
  return {};
}

/// 2x2 interpolation: a matrix (z11 z12 / z21 z22) with row sums x1,x2 and
/// column sums y1,y2. Requires x1+x2 = y1+y2. Scans z11 in descending
/// element order, so a family refines itself by the diagonal matrix.
inline std::optional<std::array<Elem, 4>> interpolate22(const EffectAlgebra& A,
                                                        Elem x1, Elem x2,
                                                        Elem y1, Elem y2) {
  for (Elem z11 = A.size() - 1; z11 >= 0; --z11) {
    if (!A.leq(z11, x1) || !A.leq(z11, y1)) continue;
    const Elem z12 = A.diff(x1, z11);
    const Elem z21 = A.diff(y1, z11);
    if (!A.leq(z21, x2)) continue;
    const Elem z22 = A.diff(x2, z21);
    if (A.sum(z12, z22) == y2) return std::array<Elem, 4>{z11, z12, z21, z22};
  }
  return std::nullopt;
}

/// General row/column-sum matrix solver by backtracking, cells row-major,
/// candidates ascending; the cell closing a row or column is forced.
inline std::optional<std::vector<Elem>> find_refinement_matrix(
    const EffectAlgebra& A, std::span<const Elem> rows,
    std::span<const Elem> cols) {
  const int n = static_cast<int>(rows.size());
  const int m = static_cast<int>(cols.size());
  if (n == 0 || m == 0) {
    for (Elem r : rows)
      if (r != A.zero()) return std::nullopt;
    for (Elem c : cols)
      if (c != A.zero()) return std::nullopt;
    return std::vector<Elem>{};
  }
  std::vector<Elem> rowRem(rows.begin(), rows.end());
  std::vector<Elem> colRem(cols.begin(), cols.end());
  std::vector<Elem> cell(static_cast<std::size_t>(n) * m, A.zero());
  std::function<bool(int)> rec = [&](int pos) -> bool {
    if (pos == n * m) return true;
    const int i = pos / m, j = pos % m;
    auto attempt = [&](Elem v) -> bool {
      if (!A.leq(v, rowRem[i]) || !A.leq(v, colRem[j])) return false;
      const Elem ri = rowRem[i], cj = colRem[j];
      rowRem[i] = A.diff(ri, v);
      colRem[j] = A.diff(cj, v);
      cell[pos] = v;
      const bool ok = rec(pos + 1);
      if (!ok) {
        rowRem[i] = ri;
        colRem[j] = cj;
      }
      return ok;
    };
    const bool lastInRow = (j == m - 1), lastInCol = (i == n - 1);
    if (lastInRow && lastInCol)
      return rowRem[i] == colRem[j] && attempt(rowRem[i]);
    if (lastInRow) return attempt(rowRem[i]);
    if (lastInCol) return attempt(colRem[j]);
    for (Elem v = 0; v < A.size(); ++v)
      if (attempt(v)) return true;
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return cell;
}

enum class RdpMethod { Definition, Matrix22, Refinement };

struct RdpResult {
  bool ok = true;
  std::vector<Elem> witness;  // method-specific failing instance
  std::string note;
};

/// All decompositions of `target` into at most `max_len` nonzero parts,
/// parts nondecreasing in element order.
inline std::vector<std::vector<Elem>> enumerate_decompositions(
    const EffectAlgebra& A, Elem target, int max_len) {
  std::vector<std::vector<Elem>> out;
  std::vector<Elem> parts;
  std::function<void(Elem, Elem)> rec = [&](Elem acc, Elem minPart) {
    if (acc == target) out.push_back(parts);
    if (static_cast<int>(parts.size()) == max_len) return;
    for (Elem e = minPart; e < A.size(); ++e) {
      if (e == A.zero()) continue;
      Elem next = A.sum(acc, e);
      if (next < 0 || !A.leq(next, target)) continue;
      parts.push_back(e);
      rec(next, e);
      parts.pop_back();
    }
  };
  rec(A.zero(), 0);
  return out;
}

inline RdpResult has_rdp(const EffectAlgebra& A, RdpMethod method) {
  switch (method) {
    case RdpMethod::Definition: {
      for (Elem v1 = 0; v1 < A.size(); ++v1)
        for (Elem v2 : A.orth_list(v1)) {
          const Elem s = A.sum(v1, v2);
          for (Elem u = 0; u < A.size(); ++u) {
            if (!A.leq(u, s)) continue;
            bool split = false;
            for (Elem u1 = 0; u1 < A.size() && !split; ++u1)
              if (A.leq(u1, v1) && A.leq(u1, u) && A.leq(A.diff(u, u1), v2))
                split = true;
            if (!split)
              return {false, {u, v1, v2}, "no splitting of u below v1+v2"};
          }
        }
      return {};
    }
    case RdpMethod::Matrix22: {
      // Group ordered summable pairs by their sum.
      std::vector<std::vector<std::pair<Elem, Elem>>> by_sum(A.size());
      for (Elem a = 0; a < A.size(); ++a)
        for (Elem b : A.orth_list(a)) by_sum[A.sum(a, b)].push_back({a, b});
      for (Elem s = 0; s < A.size(); ++s)
        for (auto [x1, x2] : by_sum[s])
          for (auto [y1, y2] : by_sum[s])
            if (!interpolate22(A, x1, x2, y1, y2))
              return {false, {x1, x2, y1, y2}, "no 2x2 interpolation matrix"};
      return {};
    }
    case RdpMethod::Refinement: {
      // Families longer than the poset height only pad zeros, and zero
      // entries refine trivially; the bound is enforced here and the padding
      // claim is a tested property.
      const int bound = std::max(1, A.height());
      for (Elem a = 0; a < A.size(); ++a) {
        auto decomps = enumerate_decompositions(A, a, bound);
        for (std::size_t i = 0; i < decomps.size(); ++i)
          for (std::size_t j = i; j < decomps.size(); ++j)
            if (!find_refinement_matrix(A, decomps[i], decomps[j])) {
              RdpResult r;
              r.ok = false;
              r.witness = {a};
              r.note = "decompositions of " + A.name(a) +
                       " admit no common refinement";
              return r;
            }
      }
      return {};
    }
  }
  throw std::invalid_argument("has_rdp: unknown method");
}

struct CommonRefinement {
  int rows = 0, cols = 0;
  std::vector<Elem> cells;  // row-major, rows*cols
  SummableFamily fine;      // the cells as a family
  FinMap row_proj, col_proj;
};

namespace detail {
// Recursive interpolation step: peel the first row and first column with a
// 2x2 interpolation, then refine the two leftover strips.
inline std::optional<std::vector<Elem>> refine_rec(const EffectAlgebra& A,
                                                   std::vector<Elem> xs,
                                                   std::vector<Elem> ys) {
  const int n = static_cast<int>(xs.size());
  const int m = static_cast<int>(ys.size());
  if (n == 0 || m == 0) return std::vector<Elem>{};
  if (n == 1) return ys;
  if (m == 1) return xs;
  std::vector<Elem> xr(xs.begin() + 1, xs.end());
  std::vector<Elem> yr(ys.begin() + 1, ys.end());
  const Elem X = *A.sum_family(xr);
  const Elem Y = *A.sum_family(yr);
  auto q = interpolate22(A, xs[0], X, ys[0], Y);
  if (!q) return std::nullopt;
  const auto [z11, z12, z21, z22] = *q;
  auto b = refine_rec(A, xr, {z21, z22});  // (n-1) x 2
  if (!b) return std::nullopt;
  std::vector<Elem> crows{z12};
  for (int i = 0; i < n - 1; ++i) crows.push_back((*b)[2 * i + 1]);
  auto c = refine_rec(A, crows, yr);  // n x (m-1)
  if (!c) return std::nullopt;
  std::vector<Elem> z(static_cast<std::size_t>(n) * m);
  z[0] = z11;
  for (int i = 1; i < n; ++i) z[static_cast<std::size_t>(i) * m] = (*b)[2 * (i - 1)];
  for (int i = 0; i < n; ++i)
    for (int j = 1; j < m; ++j)
      z[static_cast<std::size_t>(i) * m + j] = (*c)[static_cast<std::size_t>(i) * (m - 1) + j - 1];
  return z;
}
}  // namespace detail

/// Common refinement of two summable families with equal sums, built by
/// iterated 2x2 interpolation. May be empty-handed when the algebra lacks
/// the Riesz decomposition property.
inline std::optional<CommonRefinement> common_refinement(
    const SummableFamily& f1, const SummableFamily& f2) {
  if (f1.alg == nullptr || f1.alg != f2.alg)
    throw std::invalid_argument("common_refinement: algebra mismatch");
  if (!f1.total || !f2.total || *f1.total != *f2.total)
    throw std::invalid_argument("common_refinement: sums differ");
  const EffectAlgebra& A = *f1.alg;
  auto z = detail::refine_rec(A, f1.entries, f2.entries);
  if (!z) return std::nullopt;
  CommonRefinement r;
  r.rows = static_cast<int>(f1.entries.size());
  r.cols = static_cast<int>(f2.entries.size());
  r.cells = *z;
  r.fine = make_family(A, r.cells);
  r.row_proj = FinMap{r.rows * r.cols, r.rows, {}};
  r.col_proj = FinMap{r.rows * r.cols, r.cols, {}};
  for (int i = 0; i < r.rows; ++i)
    for (int j = 0; j < r.cols; ++j) {
      r.row_proj.img.push_back(i);
      r.col_proj.img.push_back(j);
    }
  return r;
}

namespace detail {
inline Elem lattice_meet(const EffectAlgebra& A, Elem a, Elem b) {
  Elem best = kUndef;
  for (Elem c = 0; c < A.size(); ++c) {
    if (!A.leq(c, a) || !A.leq(c, b)) continue;
    if (best < 0 || A.leq(best, c)) best = c;
  }
  if (best < 0) return kUndef;
  for (Elem c = 0; c < A.size(); ++c)
    if (A.leq(c, a) && A.leq(c, b) && !A.leq(c, best)) return kUndef;
  return best;
}
inline Elem lattice_join(const EffectAlgebra& A, Elem a, Elem b) {
  Elem best = kUndef;
  for (Elem c = 0; c < A.size(); ++c) {
    if (!A.leq(a, c) || !A.leq(b, c)) continue;
    if (best < 0 || A.leq(c, best)) best = c;
  }
  if (best < 0) return kUndef;
  for (Elem c = 0; c < A.size(); ++c)
    if (A.leq(a, c) && A.leq(b, c) && !A.leq(best, c)) return kUndef;
  return best;
}
}  // namespace detail

/// Structural Boolean-algebra test: the derived order is a distributive
/// complemented lattice, complementation is perp, and + is exactly
/// "disjoint join".
inline bool is_boolean(const EffectAlgebra& A) {
  const int n = A.size();
  std::vector<Elem> meet(static_cast<std::size_t>(n) * n);
  std::vector<Elem> join(static_cast<std::size_t>(n) * n);
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b) {
      meet[static_cast<std::size_t>(a) * n + b] = detail::lattice_meet(A, a, b);
      join[static_cast<std::size_t>(a) * n + b] = detail::lattice_join(A, a, b);
      if (meet[static_cast<std::size_t>(a) * n + b] < 0 ||
          join[static_cast<std::size_t>(a) * n + b] < 0)
        return false;
    }
  auto mt = [&](Elem a, Elem b) { return meet[static_cast<std::size_t>(a) * n + b]; };
  auto jn = [&](Elem a, Elem b) { return join[static_cast<std::size_t>(a) * n + b]; };
  for (Elem a = 0; a < n; ++a) {
    if (mt(a, A.perp(a)) != A.zero() || jn(a, A.perp(a)) != A.one()) return false;
    for (Elem b = 0; b < n; ++b) {
      if (A.defined(a, b) != (mt(a, b) == A.zero())) return false;
      if (A.defined(a, b) && A.sum(a, b) != jn(a, b)) return false;
      for (Elem c = 0; c < n; ++c)
        if (mt(a, jn(b, c)) != jn(mt(a, b), mt(a, c))) return false;
    }
  }
  return true;
}

struct PropertyReport {
  bool orthoalgebra = false;
  bool rdp = false;
  bool boolean = false;
  std::string orthoalgebra_witness;  // element name, when not an orthoalgebra
  std::string rdp_witness;
};

inline PropertyReport property_report(const EffectAlgebra& A) {
  PropertyReport r;
  auto oa = is_orthoalgebra(A);
  r.orthoalgebra = oa.ok;
  if (!oa.ok) r.orthoalgebra_witness = A.name(oa.witness);
  auto rdp = has_rdp(A, RdpMethod::Matrix22);
  r.rdp = rdp.ok;
  if (!rdp.ok) {
    for (Elem e : rdp.witness)
      r.rdp_witness += (r.rdp_witness.empty() ? "" : ",") + A.name(e);
  }
  r.boolean = is_boolean(A);
  return r;
}

}  // namespace ea
