// Finite observables (decompositions of unit), hom-set enumeration, and
// arrows of the category of elements of R(A).
#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ea/core.hpp"
#include "ea/finbool.hpp"

namespace ea {

/// An observable 2^[n] -> A, stored by its parts g({1}),...,g({n}).
struct Observable {
  const EffectAlgebra* alg = nullptr;
  std::vector<Elem> parts;

  int arity() const { return static_cast<int>(parts.size()); }

  /// g(X) by summation over the atoms of X.
  Elem value(Mask x) const {
    Elem acc = alg->zero();
    for (int i = 0; i < arity(); ++i)
      if (x >> i & 1) {
        acc = alg->sum(acc, parts[i]);
        if (acc < 0) throw std::logic_error("observable parts not summable");
      }
    return acc;
  }

  bool operator==(const Observable& o) const {
    return alg == o.alg && parts == o.parts;
  }
};

/// The <a1,...,a_{n-1}> constructor: the omitted last part is forced.
/// <> (empty prefix) is the unique arity-1 observable.
inline Observable make_observable(const EffectAlgebra& A,
                                  std::span<const Elem> prefix) {
  auto s = A.sum_family(prefix);
  if (!s) throw std::invalid_argument("observable: prefix not summable");
  Observable g{&A, std::vector<Elem>(prefix.begin(), prefix.end())};
  g.parts.push_back(A.perp(*s));
  return g;
}

/// All A-valued observables of arity n, parts in lexicographic element
/// order. Zero parts are allowed; <0> and <> are distinct observables.
inline std::vector<Observable> enumerate_observables(const EffectAlgebra& A,
                                                     int n) {
  if (n < 1) throw std::invalid_argument("enumerate_observables: n < 1");
  std::vector<Observable> out;
  std::vector<Elem> parts(n);
  std::function<void(int, Elem)> rec = [&](int depth, Elem acc) {
    if (depth == n - 1) {
      parts[depth] = A.perp(acc);
      out.push_back(Observable{&A, parts});
      return;
    }
    for (Elem e = 0; e < A.size(); ++e) {
      Elem next = A.sum(acc, e);
      if (next < 0) continue;
      parts[depth] = e;
      rec(depth + 1, next);
    }
  };
  rec(0, A.zero());
  return out;
}

/// Morphism test for a total map A -> B given as an image table.
inline bool check_morphism(const EffectAlgebra& A, const EffectAlgebra& B,
                           std::span<const Elem> image) {
  if (static_cast<int>(image.size()) != A.size())
    throw std::invalid_argument("check_morphism: map not total");
  if (image[A.one()] != B.one()) return false;
  for (Elem a = 0; a < A.size(); ++a)
    for (Elem b : A.orth_list(a)) {
      Elem s = B.sum(image[a], image[b]);
      if (s < 0 || s != image[A.sum(a, b)]) return false;
    }
  return true;
}

/// All effect-algebra morphisms A -> B, by backtracking on element images in
/// element order.
inline std::vector<std::vector<Elem>> enumerate_morphisms(
    const EffectAlgebra& A, const EffectAlgebra& B) {
  std::vector<std::vector<Elem>> out;
  std::vector<Elem> img(A.size(), kUndef);
  std::function<void(Elem)> rec = [&](Elem a) {
    if (a == A.size()) {
      out.push_back(img);
      return;
    }
    for (Elem v = 0; v < B.size(); ++v) {
      if (a == A.zero() && v != B.zero()) continue;
      if (a == A.one() && v != B.one()) continue;
      img[a] = v;
      bool ok = true;
      for (Elem b = 0; b <= a && ok; ++b) {
        Elem s = A.sum(a, b);
        if (s < 0) continue;
        Elem sv = B.sum(v, img[b]);
        if (sv < 0 || (s <= a && sv != img[s])) ok = false;
        // s > a: image of s not chosen yet; the constraint is rechecked when
        // it is, via the pair scan below at depth s.
      }
      // also: previously assigned pairs whose sum is a
      for (Elem x = 0; x < a && ok; ++x)
        for (Elem y = x; y < a && ok; ++y)
          if (A.sum(x, y) == a) {
            Elem sv = B.sum(img[x], img[y]);
            if (sv != v) ok = false;
          }
      if (ok) rec(a + 1);
    }
    img[a] = kUndef;
  };
  rec(0);
  return out;
}

// ---------------------------------------------------------------------------
// Arrows of the category of finite observables.

/// An arrow g -> g' is a Boolean morphism f with g' o f = g; on atoms this
/// says the f-fiber of g' parts sums to the matching part of g.
struct ElementsArrow {
  Observable source;
  Observable target;
  BoolMorphism map;  // 2^[arity(source)] -> 2^[arity(target)]
};

inline bool is_elements_arrow(const Observable& g, const Observable& gp,
                              const BoolMorphism& f) {
  if (f.n != g.arity() || f.m != gp.arity()) return false;
  for (int i = 0; i < f.n; ++i) {
    Elem acc = g.alg->zero();
    for (int j = 0; j < f.m; ++j)
      if (f.atom_images[i] >> j & 1) {
        acc = g.alg->sum(acc, gp.parts[j]);
        if (acc < 0) return false;
      }
    if (acc != g.parts[i]) return false;
  }
  return true;
}

/// All arrows g -> g', in lexicographic order of the dual map.
inline std::vector<BoolMorphism> elements_arrows(const Observable& g,
                                                 const Observable& gp) {
  if (g.alg != gp.alg)
    throw std::invalid_argument("elements_arrows: algebra mismatch");
  std::vector<BoolMorphism> out;
  for (const auto& t : enumerate_finmaps(gp.arity(), g.arity())) {
    BoolMorphism f = dualize(t);
    if (is_elements_arrow(g, gp, f)) out.push_back(std::move(f));
  }
  return out;
}

/// Composition of arrows is composition of the underlying morphisms.
inline ElementsArrow compose(const ElementsArrow& second,
                             const ElementsArrow& first) {
  if (!(first.target == second.source))
    throw std::invalid_argument("arrow composition mismatch");
  return ElementsArrow{first.source, second.target,
                       compose(second.map, first.map)};
}

/// The set {g(X) : X subseteq [n]}, if it is a subalgebra; the range of an
/// observable need not be one outside orthoalgebras.
inline std::optional<std::vector<Elem>> range_subalgebra(const Observable& g) {
  std::vector<char> in(g.alg->size(), 0);
  const Mask full = full_mask(g.arity());
  for (Mask x = 0; x <= full; ++x) in[g.value(x)] = 1;
  std::vector<Elem> range;
  for (Elem e = 0; e < g.alg->size(); ++e)
    if (in[e]) range.push_back(e);
  if (!g.alg->is_subalgebra(range)) return std::nullopt;
  return range;
}

}  // namespace ea
