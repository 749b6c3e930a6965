// Finite Boolean algebras as powersets: morphisms via atom images, Stone
// duality with finite maps, free products and the induced maps.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ea/core.hpp"

namespace ea {

using Mask = uint64_t;
inline constexpr int kMaxArity = 63;

inline Mask full_mask(int n) {
  if (n < 0 || n > kMaxArity) throw std::invalid_argument("arity out of range");
  return (n == 64) ? ~Mask{0} : ((Mask{1} << n) - 1);
}

/// A Boolean-algebra morphism 2^[n] -> 2^[m], stored by its values on the
/// atoms of 2^[n]. Valid iff the atom images partition [m].
struct BoolMorphism {
  int n = 0, m = 0;
  std::vector<Mask> atom_images;  // size n, subsets of [m]

  bool well_formed() const {
    if (static_cast<int>(atom_images.size()) != n) return false;
    Mask seen = 0;
    for (Mask im : atom_images) {
      if (im & ~full_mask(m)) return false;
      if (im & seen) return false;
      seen |= im;
    }
    return seen == full_mask(m);
  }

  Mask apply(Mask x) const {
    Mask out = 0;
    for (int i = 0; i < n; ++i)
      if (x >> i & 1) out |= atom_images[i];
    return out;
  }

  bool operator==(const BoolMorphism& o) const {
    return n == o.n && m == o.m && atom_images == o.atom_images;
  }
};

inline BoolMorphism identity_morphism(int n) {
  BoolMorphism f{n, n, {}};
  f.atom_images.resize(n);
  for (int i = 0; i < n; ++i) f.atom_images[i] = Mask{1} << i;
  return f;
}

/// g after f.
inline BoolMorphism compose(const BoolMorphism& g, const BoolMorphism& f) {
  if (f.m != g.n) throw std::invalid_argument("compose: arity mismatch");
  BoolMorphism h{f.n, g.m, {}};
  h.atom_images.reserve(f.n);
  for (int i = 0; i < f.n; ++i) h.atom_images.push_back(g.apply(f.atom_images[i]));
  return h;
}

/// Stone duality: the preimage morphism of t: [m] -> [n].
inline BoolMorphism dualize(const FinMap& t) {
  if (!t.well_formed()) throw std::invalid_argument("dualize: malformed map");
  BoolMorphism f{t.cod, t.dom, std::vector<Mask>(t.cod, 0)};
  for (int j = 0; j < t.dom; ++j) f.atom_images[t.img[j]] |= Mask{1} << j;
  return f;
}

/// Inverse direction: recover t from the morphism it induced.
inline FinMap dualize_inv(const BoolMorphism& f) {
  if (!f.well_formed())
    throw std::invalid_argument("dualize_inv: atom images are not a partition");
  FinMap t{f.m, f.n, std::vector<int>(f.m, -1)};
  for (int i = 0; i < f.n; ++i)
    for (int j = 0; j < f.m; ++j)
      if (f.atom_images[i] >> j & 1) t.img[j] = i;
  return t;
}

/// 2^[n] * 2^[m] presented as 2^[n x m], pairs flattened (i,j) -> i*m + j
/// (0-based; reports print 1-based indices). Tensor-element names and golden
/// files depend on this layout.
struct FreeProduct {
  int n = 0, m = 0;
  BoolMorphism left;   // 2^[n] -> 2^[n*m]
  BoolMorphism right;  // 2^[m] -> 2^[n*m]
};

inline int flatten_pair(int i, int j, int m) { return i * m + j; }

inline FreeProduct free_product(int n, int m) {
  if (n < 0 || m < 0) throw std::invalid_argument("free_product: negative arity");
  FreeProduct fp;
  fp.n = n;
  fp.m = m;
  fp.left = BoolMorphism{n, n * m, std::vector<Mask>(n, 0)};
  fp.right = BoolMorphism{m, n * m, std::vector<Mask>(m, 0)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      fp.left.atom_images[i] |= Mask{1} << flatten_pair(i, j, m);
      fp.right.atom_images[j] |= Mask{1} << flatten_pair(i, j, m);
    }
  return fp;
}

/// s * t : 2^[n x m] -> 2^[n' x m'], sending the atom (i,j) to the rectangle
/// s({i}) x t({j}). The rectangles over distinct atoms are pairwise disjoint.
inline BoolMorphism star_map(const BoolMorphism& s, const BoolMorphism& t) {
  BoolMorphism h{s.n * t.n, s.m * t.m, {}};
  h.atom_images.reserve(h.n);
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < t.n; ++j) {
      Mask rect = 0;
      for (int k = 0; k < s.m; ++k)
        if (s.atom_images[i] >> k & 1)
          for (int l = 0; l < t.m; ++l)
            if (t.atom_images[j] >> l & 1)
              rect |= Mask{1} << flatten_pair(k, l, t.m);
      h.atom_images.push_back(rect);
    }
  return h;
}

/// All maps [m] -> [n] in lexicographic order; dually, all morphisms
/// 2^[n] -> 2^[m].
inline std::vector<FinMap> enumerate_finmaps(int m, int n) {
  std::vector<FinMap> out;
  if (n == 0) {
    if (m == 0) out.push_back(FinMap{0, 0, {}});
    return out;
  }
  FinMap t{m, n, std::vector<int>(m, 0)};
  for (;;) {
    out.push_back(t);
    int j = m - 1;
    while (j >= 0 && t.img[j] == n - 1) t.img[j--] = 0;
    if (j < 0) break;
    ++t.img[j];
  }
  return out;
}

inline std::vector<BoolMorphism> enumerate_bool_morphisms(int n, int m) {
  std::vector<BoolMorphism> out;
  for (const auto& t : enumerate_finmaps(m, n)) out.push_back(dualize(t));
  return out;
}

}  // namespace ea
