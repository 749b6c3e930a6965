#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "ea/observables.hpp"

using namespace ea;

namespace {

RawAlgebra chain2_raw() {
  RawAlgebra raw;
  raw.elements = {"0", "a", "1"};
  raw.zero = "0";
  raw.one = "1";
  raw.sum = {{"0", "0", "0"}, {"0", "a", "a"}, {"0", "1", "1"}, {"a", "a", "1"}};
  return raw;
}

// Test-only enumeration oracle: every n-tuple, checked by a local fold.
int count_observables_brute(const EffectAlgebra& A, int n) {
  int count = 0;
  std::vector<Elem> tuple(n, 0);
  for (;;) {
    Elem acc = A.zero();
    bool ok = true;
    for (Elem e : tuple) {
      acc = (acc >= 0) ? A.sum(acc, e) : kUndef;
      if (acc < 0) { ok = false; break; }
    }
    if (ok && acc == A.one()) ++count;
    int i = n - 1;
    while (i >= 0 && tuple[i] == A.size() - 1) tuple[i--] = 0;
    if (i < 0) break;
    ++tuple[i];
  }
  return count;
}

}  // namespace

TEST_CASE("the <a> observable over the three-element chain", "[observables]") {
  auto A = EffectAlgebra::must(chain2_raw());
  Elem a = *A.find("a");
  std::vector<Elem> prefix{a};
  auto g = make_observable(A, prefix);
  CHECK(g.parts == std::vector<Elem>{a, a});

  auto empty = make_observable(A, {});
  CHECK(empty.parts == std::vector<Elem>{A.one()});

  std::vector<Elem> zp{A.zero()};
  auto zo = make_observable(A, zp);
  CHECK(zo.parts == std::vector<Elem>{A.zero(), A.one()});
  CHECK(!(zo == empty));

  std::vector<Elem> bad{a, a, a};
  CHECK_THROWS_AS(make_observable(A, bad), std::invalid_argument);
}

TEST_CASE("observable reconstruction by summation", "[observables]") {
  auto A = make_boolean(2);
  for (int n = 1; n <= 3; ++n)
    for (const auto& g : enumerate_observables(A, n)) {
      CHECK(g.value(0) == A.zero());
      CHECK(g.value(full_mask(n)) == A.one());
      for (Mask x = 0; x <= full_mask(n); ++x) {
        Elem acc = A.zero();
        for (int i = 0; i < n; ++i)
          if (x >> i & 1) acc = A.sum(acc, g.parts[i]);
        CHECK(g.value(x) == acc);
      }
    }
}

TEST_CASE("check_morphism on the spec instances", "[observables]") {
  auto b2 = make_boolean(2);
  std::vector<Elem> id(b2.size());
  for (Elem e = 0; e < b2.size(); ++e) id[e] = e;
  CHECK(check_morphism(b2, b2, id));

  auto C = EffectAlgebra::must(chain2_raw());
  auto b1 = make_boolean(1);
  // a |-> 1 forces 1+1 to be defined downstream
  std::vector<Elem> img{b1.zero(), b1.one(), b1.one()};
  CHECK(!check_morphism(C, b1, img));

  for (const auto* Ap : {&b2, &C}) {
    std::vector<Elem> unique_map{Ap->zero(), Ap->one()};
    CHECK(check_morphism(b1, *Ap, unique_map));
    CHECK(enumerate_morphisms(b1, *Ap).size() == 1);
  }
}

TEST_CASE("morphisms are isotone", "[observables]") {
  auto A = make_mo(2);
  auto B = make_boolean(2);
  for (const auto& f : enumerate_morphisms(A, B))
    for (Elem x = 0; x < A.size(); ++x)
      for (Elem y = 0; y < A.size(); ++y)
        if (A.leq(x, y)) CHECK(B.leq(f[x], f[y]));
}

TEST_CASE("enumerate_observables counts against the brute oracle", "[observables]") {
  auto C = EffectAlgebra::must(chain2_raw());
  auto b2 = make_boolean(2);
  auto m2 = make_mo(2);
  for (const auto* Ap : {&C, &b2, &m2}) {
    CHECK(enumerate_observables(*Ap, 1).size() == 1);
    for (int n = 1; n <= 3; ++n) {
      auto got = enumerate_observables(*Ap, n);
      CHECK(static_cast<int>(got.size()) == count_observables_brute(*Ap, n));
      // lexicographic order and uniqueness
      std::set<std::vector<Elem>> seen;
      std::vector<Elem> prev;
      bool first = true;
      for (const auto& g : got) {
        CHECK(seen.insert(g.parts).second);
        if (!first) CHECK(prev < g.parts);
        prev = g.parts;
        first = false;
      }
    }
  }
  CHECK(enumerate_observables(b2, 2).size() == 4);
  CHECK(enumerate_observables(C, 2).size() == 3);
  CHECK(enumerate_observables(C, 3).size() == 6);
}

TEST_CASE("elements_arrows instances from the reflection proof", "[observables]") {
  auto b2 = make_boolean(2);
  Elem x = *b2.find("{1}"), y = *b2.find("{2}");

  // f1 : <x> -> <x,y> with f1({1}) = {1}
  std::vector<Elem> px{x};
  std::vector<Elem> pxy{x, y};
  auto gx = make_observable(b2, px);
  auto gxy = make_observable(b2, pxy);
  auto arrows = elements_arrows(gx, gxy);
  bool has_f1 = false;
  for (const auto& f : arrows)
    if (f.atom_images[0] == 0b001) has_f1 = true;
  CHECK(has_f1);

  // z : <1> -> <> with z({1})={1}, z({2})=empty
  std::vector<Elem> pone{b2.one()};
  auto gone = make_observable(b2, pone);
  auto gempty = make_observable(b2, {});
  auto zs = elements_arrows(gone, gempty);
  bool has_z = false;
  for (const auto& f : zs)
    if (f.atom_images[0] == 0b1 && f.atom_images[1] == 0) has_z = true;
  CHECK(has_z);

  // exactly two arrows from <x> to the arity-3 observable (x,y,0)
  Observable g3{&b2, {x, y, b2.zero()}};
  CHECK(elements_arrows(gx, g3).size() == 2);

  auto m2 = make_mo(2);
  CHECK_THROWS_AS(elements_arrows(gx, make_observable(m2, {})),
                  std::invalid_argument);
}

TEST_CASE("arrow composition is associative and unital", "[observables]") {
  auto A = make_boolean(2);
  auto all2 = enumerate_observables(A, 2);
  auto all3 = enumerate_observables(A, 3);
  int checked = 0;
  for (const auto& g : all2)
    for (const auto& h : all2)
      for (const auto& k : all3) {
        auto fs = elements_arrows(g, h);
        auto gs = elements_arrows(h, k);
        auto ks = elements_arrows(k, k);
        for (const auto& f1 : fs)
          for (const auto& f2 : gs)
            for (const auto& f3 : ks) {
              auto lhs = compose(f3, compose(f2, f1));
              auto rhs = compose(compose(f3, f2), f1);
              CHECK(lhs == rhs);
              ++checked;
            }
        for (const auto& f1 : fs) {
          CHECK(compose(f1, identity_morphism(2)) == f1);
          CHECK(compose(identity_morphism(3), f1) == f1);
          CHECK(is_elements_arrow(g, h, f1));
        }
      }
  CHECK(checked > 0);
}

TEST_CASE("restriction along arrows is functorial", "[observables]") {
  // R(A)(f)(g) = g o f, computed on parts; composing restrictions matches
  // restricting along the composite.
  auto A = make_mo(2);
  auto restrict_along = [&A](const Observable& g, const BoolMorphism& f) {
    Observable out{&A, {}};
    for (int i = 0; i < f.n; ++i) out.parts.push_back(g.value(f.atom_images[i]));
    return out;
  };
  for (int n = 1; n <= 3; ++n)
    for (int m = 1; m <= 3; ++m)
      for (int k = 1; k <= 3; ++k)
        for (const auto& f : enumerate_bool_morphisms(n, m))
          for (const auto& fp : enumerate_bool_morphisms(m, k))
            for (const auto& g : enumerate_observables(A, k)) {
              auto once = restrict_along(g, compose(fp, f));
              auto twice = restrict_along(restrict_along(g, fp), f);
              CHECK(once == twice);
            }
}

TEST_CASE("range_subalgebra on the spec instances", "[observables]") {
  auto b2 = make_boolean(2);
  for (const auto& g : enumerate_observables(b2, 3)) {
    auto r = range_subalgebra(g);
    REQUIRE(r.has_value());
    CHECK(b2.is_subalgebra(*r));
  }

  auto C = EffectAlgebra::must(chain2_raw());
  auto gempty = make_observable(C, {});
  auto r0 = range_subalgebra(gempty);
  REQUIRE(r0.has_value());
  CHECK(*r0 == std::vector<Elem>{C.zero(), C.one()});

  Elem a = *C.find("a");
  std::vector<Elem> pa{a};
  auto ga = make_observable(C, pa);
  auto ra = range_subalgebra(ga);
  REQUIRE(ra.has_value());
  CHECK(ra->size() == 3);
}

TEST_CASE("a range that is not a subalgebra is reported", "[observables]") {
  // In the 9-point square [0,(2,2)] the observable with parts
  // ((1,0),(0,1),(1,1)) has a range missing differences like (2,1)-(0,1).
  auto A = make_interval_vector({2, 2});
  Elem e10 = *A.find("(1,0)"), e01 = *A.find("(0,1)"), e11 = *A.find("(1,1)");
  Observable g{&A, {e10, e01, e11}};
  REQUIRE(A.sum_family(g.parts) == A.one());
  CHECK(!range_subalgebra(g).has_value());
}
