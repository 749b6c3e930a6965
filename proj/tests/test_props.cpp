#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ea/iso.hpp"
#include "ea/props.hpp"

using namespace ea;

namespace {

std::vector<EffectAlgebra> small_corpus() {
  std::vector<EffectAlgebra> v;
  v.push_back(make_one_element());
  v.push_back(make_boolean(1));
  v.push_back(make_boolean(2));
  v.push_back(make_boolean(3));
  v.push_back(make_chain(2));
  v.push_back(make_chain(3));
  v.push_back(make_chain(4));
  v.push_back(make_mo(2));
  v.push_back(make_mo(3));
  v.push_back(make_horizontal_sum(make_chain(2), make_chain(2)));
  v.push_back(make_interval_vector({2, 2}));
  v.push_back(make_product(make_boolean(1), make_boolean(1)));
  return v;
}

bool rdp_all_methods(const EffectAlgebra& A) {
  bool d = has_rdp(A, RdpMethod::Definition).ok;
  bool m = has_rdp(A, RdpMethod::Matrix22).ok;
  bool r = has_rdp(A, RdpMethod::Refinement).ok;
  REQUIRE(d == m);
  REQUIRE(m == r);
  return d;
}

}  // namespace

TEST_CASE("orthoalgebra detection with witnesses", "[props]") {
  CHECK(is_orthoalgebra(make_boolean(3)).ok);
  auto chain = is_orthoalgebra(make_chain(2));
  CHECK(!chain.ok);
  CHECK(chain.witness == 1);  // the atom of [0,2]
  CHECK(is_orthoalgebra(make_mo(2)).ok);
}

TEST_CASE("rdp on booleans, chains and mo(2)", "[props]") {
  for (int n = 0; n <= 3; ++n) CHECK(rdp_all_methods(make_boolean(n)));
  for (int n = 1; n <= 5; ++n) {
    auto A = make_chain(n);
    // integer splitting oracle: u1 = min(u, v1) always works in a chain
    for (Elem v1 = 0; v1 < A.size(); ++v1)
      for (Elem v2 = 0; v2 < A.size(); ++v2) {
        if (v1 + v2 > n) continue;
        for (Elem u = 0; u <= v1 + v2; ++u) {
          Elem u1 = std::min(u, v1);
          CHECK(u - u1 <= v2);
        }
      }
    CHECK(rdp_all_methods(A));
  }
  auto m2 = make_mo(2);
  CHECK(!rdp_all_methods(m2));
  // witness shape: u = a1 <= b1 + b2 admits no splitting; candidates below a
  // block atom are only {0, itself}
  auto res = has_rdp(m2, RdpMethod::Definition);
  REQUIRE(!res.ok);
  REQUIRE(res.witness.size() == 3);
  Elem u = res.witness[0], v1 = res.witness[1], v2 = res.witness[2];
  bool split = false;
  for (Elem u1 = 0; u1 < m2.size(); ++u1)
    if (m2.leq(u1, v1) && m2.leq(u1, u) && m2.leq(m2.diff(u, u1), v2))
      split = true;
  CHECK(!split);
}

TEST_CASE("rdp methods agree across the corpus", "[props]") {
  for (const auto& A : small_corpus()) rdp_all_methods(A);
}

TEST_CASE("common_refinement matrix instances", "[props]") {
  auto b2 = make_boolean(2);
  Elem x = *b2.find("{1}"), y = *b2.find("{2}");
  auto cr = common_refinement(make_family(b2, {x, y}), make_family(b2, {y, x}));
  REQUIRE(cr.has_value());
  CHECK(cr->cells == std::vector<Elem>{b2.zero(), x, y, b2.zero()});

  auto fam = make_family(b2, {x, y});
  auto self = common_refinement(fam, fam);
  REQUIRE(self.has_value());
  CHECK(self->cells == std::vector<Elem>{x, b2.zero(), b2.zero(), y});

  auto c2 = make_chain(2);
  Elem a = 1;
  auto diag = common_refinement(make_family(c2, {a, a}), make_family(c2, {a, a}));
  REQUIRE(diag.has_value());
  CHECK(diag->cells == std::vector<Elem>{a, c2.zero(), c2.zero(), a});

  CHECK_THROWS_AS(
      common_refinement(make_family(b2, {x}), make_family(b2, {y})),
      std::invalid_argument);
}

TEST_CASE("common_refinement projections validate as refinements", "[props]") {
  std::mt19937 rng(314159);
  for (const auto& A : small_corpus()) {
    if (!has_rdp(A, RdpMethod::Matrix22).ok) continue;
    for (int trial = 0; trial < 60; ++trial) {
      int l1 = 1 + rng() % 3, l2 = 1 + rng() % 3;
      std::vector<Elem> e1(l1), e2(l2);
      for (auto& e : e1) e = static_cast<Elem>(rng() % A.size());
      auto f1 = make_family(A, e1);
      if (!f1.total) continue;
      // build a second family with the same total
      bool ok = true;
      Elem rest = *f1.total;
      for (int i = 0; i < l2 - 1; ++i) {
        std::vector<Elem> cands;
        for (Elem c = 0; c < A.size(); ++c)
          if (A.leq(c, rest)) cands.push_back(c);
        Elem pick = cands[rng() % cands.size()];
        e2[i] = pick;
        rest = A.diff(rest, pick);
      }
      e2[l2 - 1] = rest;
      auto f2 = make_family(A, e2);
      if (!f2.total || *f2.total != *f1.total) { CHECK(false); continue; }
      auto cr = common_refinement(f1, f2);
      REQUIRE(cr.has_value());
      CHECK(is_refinement(cr->fine, f1, cr->row_proj));
      CHECK(is_refinement(cr->fine, f2, cr->col_proj));
      (void)ok;
    }
  }
}

TEST_CASE("zero padding never changes matrix solvability", "[props]") {
  std::mt19937 rng(2718);
  for (const auto& A : small_corpus()) {
    for (int trial = 0; trial < 80; ++trial) {
      int l1 = 1 + rng() % 2, l2 = 1 + rng() % 2;
      std::vector<Elem> rows(l1), cols(l2);
      for (auto& e : rows) e = static_cast<Elem>(rng() % A.size());
      for (auto& e : cols) e = static_cast<Elem>(rng() % A.size());
      if (!A.summable(rows) || !A.summable(cols)) continue;
      bool base = find_refinement_matrix(A, rows, cols).has_value();
      auto rows_p = rows;
      rows_p.insert(rows_p.begin() + rng() % (rows_p.size() + 1), A.zero());
      auto cols_p = cols;
      cols_p.push_back(A.zero());
      CHECK(find_refinement_matrix(A, rows_p, cols).has_value() == base);
      CHECK(find_refinement_matrix(A, rows, cols_p).has_value() == base);
      CHECK(find_refinement_matrix(A, rows_p, cols_p).has_value() == base);
    }
  }
}

TEST_CASE("booleanness via the structural test", "[props]") {
  CHECK(is_boolean(make_boolean(3)));
  CHECK(!is_boolean(make_chain(2)));
  auto prod = make_product(make_boolean(1), make_boolean(1));
  CHECK(is_boolean(prod));
  CHECK(isomorphic(prod, make_boolean(2)));
  CHECK(is_boolean(make_one_element()));
  CHECK(!is_boolean(make_mo(2)));
}

TEST_CASE("boolean iff orthoalgebra and rdp", "[props]") {
  for (const auto& A : small_corpus()) {
    bool expected = is_orthoalgebra(A).ok && has_rdp(A, RdpMethod::Matrix22).ok;
    CHECK(is_boolean(A) == expected);
  }
}

TEST_CASE("property_report flags and witnesses", "[props]") {
  auto r = property_report(make_mo(2));
  CHECK(r.orthoalgebra);
  CHECK(!r.rdp);
  CHECK(!r.boolean);
  CHECK(!r.rdp_witness.empty());

  auto rb = property_report(make_boolean(2));
  CHECK(rb.orthoalgebra);
  CHECK(rb.rdp);
  CHECK(rb.boolean);

  auto rc = property_report(make_chain(2));
  CHECK(!rc.orthoalgebra);
  CHECK(rc.orthoalgebra_witness == "1");
  CHECK(rc.rdp);
  CHECK(!rc.boolean);
}

TEST_CASE("interpolate22 and find_refinement_matrix agree", "[props]") {
  std::mt19937 rng(55);
  for (const auto& A : small_corpus()) {
    for (int trial = 0; trial < 120; ++trial) {
      Elem x1 = rng() % A.size(), x2 = rng() % A.size();
      Elem y1 = rng() % A.size(), y2 = rng() % A.size();
      if (!A.defined(x1, x2) || !A.defined(y1, y2)) continue;
      if (A.sum(x1, x2) != A.sum(y1, y2)) continue;
      std::vector<Elem> rows{x1, x2}, cols{y1, y2};
      auto via22 = interpolate22(A, x1, x2, y1, y2);
      auto viaMatrix = find_refinement_matrix(A, rows, cols);
      CHECK(via22.has_value() == viaMatrix.has_value());
      if (via22) {
        CHECK(A.sum((*via22)[0], (*via22)[1]) == x1);
        CHECK(A.sum((*via22)[2], (*via22)[3]) == x2);
        CHECK(A.sum((*via22)[0], (*via22)[2]) == y1);
        CHECK(A.sum((*via22)[1], (*via22)[3]) == y2);
      }
    }
  }
}
