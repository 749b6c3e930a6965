// Isomorphism search between finite effect algebras: invariant screening,
// backtracking on atom images, then unique extension via atom sums.
#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "ea/core.hpp"

namespace ea {

namespace detail {

// Per-element invariant profile; isomorphisms must preserve it.
inline std::vector<std::vector<int>> element_profiles(const EffectAlgebra& A) {
  const int n = A.size();
  std::vector<std::vector<int>> prof(n);
  for (Elem a = 0; a < n; ++a) {
    int below = 0, above = 0, orth = 0, self = A.defined(a, a) ? 1 : 0;
    for (Elem b = 0; b < n; ++b) {
      below += A.leq(b, a);
      above += A.leq(a, b);
      orth += A.defined(a, b);
    }
    prof[a] = {a == A.zero(), a == A.one(), below, above, orth, self,
               A.height(a), A.perp(a) == a};
  }
  return prof;
}

}  // namespace detail

/// An isomorphism A -> B as an image table, or nullopt.
inline std::optional<std::vector<Elem>> find_isomorphism(
    const EffectAlgebra& A, const EffectAlgebra& B) {
  if (A.size() != B.size()) return std::nullopt;
  const int n = A.size();
  auto profA = detail::element_profiles(A);
  auto profB = detail::element_profiles(B);
  {
    auto sa = profA, sb = profB;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;
  }
  const auto& atomsA = A.atoms();
  const auto& atomsB = B.atoms();
  if (atomsA.size() != atomsB.size()) return std::nullopt;

  // Every element of a finite effect algebra is a sum of atoms, so an atom
  // assignment extends in at most one way; verify the extension fully.
  std::vector<Elem> atom_img(atomsA.size(), kUndef);
  std::vector<char> used(n, 0);
  std::vector<Elem> image;

  auto extend_and_check = [&]() -> bool {
    image.assign(n, kUndef);
    std::vector<char> hit(n, 0);
    for (Elem x = 0; x < n; ++x) {
      Elem acc = B.zero();
      for (Elem a : A.atom_decomposition(x)) {
        std::size_t ai = std::lower_bound(atomsA.begin(), atomsA.end(), a) -
                         atomsA.begin();
        acc = B.sum(acc, atom_img[ai]);
        if (acc < 0) return false;
      }
      image[x] = acc;
      if (hit[acc]) return false;
      hit[acc] = 1;
    }
    if (image[A.one()] != B.one()) return false;
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b) {
        Elem s = A.sum(a, b);
        Elem t = B.sum(image[a], image[b]);
        if ((s < 0) != (t < 0)) return false;
        if (s >= 0 && image[s] != t) return false;
      }
    return true;
  };

  std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
    if (k == atomsA.size()) return extend_and_check();
    Elem a = atomsA[k];
    for (Elem b : atomsB) {
      if (used[b] || profA[a] != profB[b]) continue;
      bool ok = true;
      for (std::size_t j = 0; j < k && ok; ++j) {
        Elem aj = atomsA[j];
        if (A.defined(a, aj) != B.defined(b, atom_img[j])) ok = false;
      }
      if (!ok) continue;
      atom_img[k] = b;
      used[b] = 1;
      if (rec(k + 1)) return true;
      used[b] = 0;
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return image;
}

inline bool isomorphic(const EffectAlgebra& A, const EffectAlgebra& B) {
  return find_isomorphism(A, B).has_value();
}

}  // namespace ea
