// Finite effect algebras: validated partial-sum tables, derived structure,
// summable families and the standard construction kit.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace ea {

using Elem = int32_t;
inline constexpr Elem kUndef = -1;

inline void hash_combine(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

/// One axiom or structural failure found by the validator.
struct Violation {
  enum class Kind { E1, E2, E3, E4, Cancellativity, ZeroIdentity, Structure };
  Kind kind;
  std::string detail;
};

inline const char* violation_kind_name(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::E1: return "E1";
    case Violation::Kind::E2: return "E2";
    case Violation::Kind::E3: return "E3";
    case Violation::Kind::E4: return "E4";
    case Violation::Kind::Cancellativity: return "cancellativity";
    case Violation::Kind::ZeroIdentity: return "zero-identity";
    case Violation::Kind::Structure: return "structure";
  }
  return "?";
}

/// Unvalidated table data, as read from a file or assembled by hand.
struct RawAlgebra {
  std::vector<std::string> elements;
  std::string zero;
  std::string one;
  std::vector<std::array<std::string, 3>> sum;  // x + y = z
};

class EffectAlgebra;
using ValidationResult = std::variant<EffectAlgebra, std::vector<Violation>>;

/// A finite effect algebra. Instances are produced by `validate` (or the
/// `make_*` constructors) and are immutable afterwards; every query is a
/// pure function, so values can be shared freely across threads.
class EffectAlgebra {
 public:
  static ValidationResult validate(const RawAlgebra& raw);

  /// validate() that throws on failure; used by the built-in constructors.
  static EffectAlgebra must(const RawAlgebra& raw);

  int size() const { return static_cast<int>(names_.size()); }
  Elem zero() const { return zero_; }
  Elem one() const { return one_; }

  bool defined(Elem a, Elem b) const { return sum_[idx(a, b)] >= 0; }
  /// a + b, or kUndef.
  Elem sum(Elem a, Elem b) const { return sum_[idx(a, b)]; }
  /// b - a: the unique c with a + c = b, or kUndef when a is not below b.
  Elem diff(Elem b, Elem a) const { return diff_[idx(b, a)]; }
  bool leq(Elem a, Elem b) const { return diff_[idx(b, a)] >= 0; }
  Elem perp(Elem a) const { return perp_[a]; }
  bool orth(Elem a, Elem b) const { return defined(a, b); }

  /// Elements orthogonal to a, ascending.
  const std::vector<Elem>& orth_list(Elem a) const { return orth_[a]; }

  const std::string& name(Elem a) const { return names_[a]; }
  std::optional<Elem> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Left fold of + over `entries`; empty fold is zero. Returns nullopt as
  /// soon as a step is undefined.
  std::optional<Elem> sum_family(std::span<const Elem> entries) const {
    Elem acc = zero_;
    for (Elem e : entries) {
      Elem s = sum(acc, e);
      if (s < 0) return std::nullopt;
      acc = s;
    }
    return acc;
  }
  bool summable(std::span<const Elem> entries) const {
    return sum_family(entries).has_value();
  }

  /// Subalgebra test: 1 in S and S closed under difference of comparable
  /// pairs.
  bool is_subalgebra(std::span<const Elem> subset) const {
    std::vector<char> in(names_.size(), 0);
    for (Elem e : subset) in[e] = 1;
    if (!in[one_]) return false;
    for (Elem x : subset)
      for (Elem y : subset)
        if (leq(y, x) && !in[diff(x, y)]) return false;
    return true;
  }

  /// Minimal nonzero elements, ascending.
  const std::vector<Elem>& atoms() const { return atoms_; }

  /// Length (in covering steps) of the longest chain from 0 to a.
  int height(Elem a) const { return height_[a]; }
  /// Poset height: longest chain from 0 to 1. Bounds the length of any
  /// decomposition into nonzero parts.
  int height() const { return height_[one_]; }

  /// Greedy decomposition of x into atoms (smallest-index atom first).
  std::vector<Elem> atom_decomposition(Elem x) const {
    std::vector<Elem> out;
    while (x != zero_) {
      Elem picked = kUndef;
      for (Elem a : atoms_)
        if (leq(a, x)) { picked = a; break; }
      if (picked < 0) throw std::logic_error("no atom below nonzero element");
      out.push_back(picked);
      x = diff(x, picked);
    }
    return out;
  }

  RawAlgebra to_raw() const {
    RawAlgebra raw;
    raw.elements = names_;
    raw.zero = names_[zero_];
    raw.one = names_[one_];
    const int n = size();
    for (Elem a = 0; a < n; ++a)
      for (Elem b = a; b < n; ++b)
        if (defined(a, b))
          raw.sum.push_back({names_[a], names_[b], names_[sum(a, b)]});
    return raw;
  }

 private:
  EffectAlgebra() = default;
  std::size_t idx(Elem a, Elem b) const {
    return static_cast<std::size_t>(a) * names_.size() + b;
  }

  std::vector<std::string> names_;
  std::unordered_map<std::string, Elem> index_;
  Elem zero_ = 0, one_ = 0;
  std::vector<Elem> sum_;   // n*n, kUndef where + is not defined
  std::vector<Elem> diff_;  // diff_[idx(b,a)] = b - a
  std::vector<Elem> perp_;
  std::vector<std::vector<Elem>> orth_;
  std::vector<Elem> atoms_;
  std::vector<int> height_;
};

inline ValidationResult EffectAlgebra::validate(const RawAlgebra& raw) {
  std::vector<Violation> bad;
  auto complain = [&bad](Violation::Kind k, std::string detail) {
    if (bad.size() < 10000) bad.push_back({k, std::move(detail)});
  };

  std::unordered_map<std::string, Elem> index;
  for (std::size_t i = 0; i < raw.elements.size(); ++i) {
    if (!index.emplace(raw.elements[i], static_cast<Elem>(i)).second)
      complain(Violation::Kind::Structure,
               "duplicate element id '" + raw.elements[i] + "'");
  }
  if (raw.elements.empty())
    complain(Violation::Kind::Structure, "no elements");
  auto zit = index.find(raw.zero);
  auto oit = index.find(raw.one);
  if (zit == index.end())
    complain(Violation::Kind::Structure, "zero '" + raw.zero + "' not an element");
  if (oit == index.end())
    complain(Violation::Kind::Structure, "one '" + raw.one + "' not an element");
  if (!bad.empty()) return bad;

  const int n = static_cast<int>(raw.elements.size());
  const Elem zero = zit->second, one = oit->second;
  std::vector<Elem> table(static_cast<std::size_t>(n) * n, kUndef);
  auto at = [&table, n](Elem a, Elem b) -> Elem& {
    return table[static_cast<std::size_t>(a) * n + b];
  };

  // Load triples; symmetrize. A conflict with the mirrored entry of an
  // earlier triple is an E1 violation, a conflicting duplicate of the same
  // ordered pair is structural.
  std::vector<char> given(static_cast<std::size_t>(n) * n, 0);
  for (const auto& t : raw.sum) {
    Elem a, b, c;
    {
      auto ia = index.find(t[0]), ib = index.find(t[1]), ic = index.find(t[2]);
      if (ia == index.end() || ib == index.end() || ic == index.end()) {
        complain(Violation::Kind::Structure,
                 "sum triple [" + t[0] + "," + t[1] + "," + t[2] +
                     "] references unknown element");
        continue;
      }
      a = ia->second; b = ib->second; c = ic->second;
    }
    const std::size_t fwd = static_cast<std::size_t>(a) * n + b;
    if (at(a, b) >= 0 && at(a, b) != c) {
      complain(given[fwd] ? Violation::Kind::Structure : Violation::Kind::E1,
               given[fwd]
                   ? "conflicting triples for " + t[0] + "+" + t[1]
                   : t[0] + "+" + t[1] + " and " + t[1] + "+" + t[0] +
                         " disagree");
      continue;
    }
    at(a, b) = c;
    given[fwd] = 1;
    if (at(b, a) < 0) at(b, a) = c;
  }
  if (!bad.empty()) return bad;

  const auto& nm = raw.elements;

  // Zero identity (derivable from E1-E4, asserted as a check of its own).
  for (Elem a = 0; a < n; ++a) {
    if (at(zero, a) != a)
      complain(Violation::Kind::ZeroIdentity,
               at(zero, a) < 0 ? "0+" + nm[a] + " undefined"
                               : "0+" + nm[a] + " = " + nm[at(zero, a)]);
  }

  // E4.
  for (Elem a = 0; a < n; ++a)
    if (a != zero && at(a, one) >= 0)
      complain(Violation::Kind::E4, nm[a] + "+1 defined but " + nm[a] + " != 0");

  // E3: exactly one orthosupplement each.
  for (Elem a = 0; a < n; ++a) {
    std::vector<Elem> sups;
    for (Elem b = 0; b < n; ++b)
      if (at(a, b) == one) sups.push_back(b);
    if (sups.empty()) {
      complain(Violation::Kind::E3, nm[a] + " has no orthosupplement");
    } else if (sups.size() > 1) {
      std::string list;
      for (Elem s : sups) list += (list.empty() ? "" : ",") + nm[s];
      complain(Violation::Kind::E3,
               nm[a] + " has several orthosupplements: " + list);
    }
  }

  // Cancellativity (derivable; kept as a redundant check).
  {
    std::vector<Elem> seen(n);
    for (Elem a = 0; a < n; ++a) {
      std::fill(seen.begin(), seen.end(), kUndef);
      for (Elem b = 0; b < n; ++b) {
        Elem s = at(a, b);
        if (s < 0) continue;
        if (seen[s] >= 0)
          complain(Violation::Kind::Cancellativity,
                   nm[a] + "+" + nm[seen[s]] + " = " + nm[a] + "+" + nm[b] +
                       " = " + nm[s]);
        else
          seen[s] = b;
      }
    }
  }

  // E2, iterating defined pairs only.
  std::vector<std::vector<Elem>> orth(n);
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b)
      if (at(a, b) >= 0) orth[a].push_back(b);
  for (Elem a = 0; a < n; ++a) {
    for (Elem b : orth[a]) {
      const Elem ab = at(a, b);
      for (Elem c : orth[ab]) {
        const Elem abc = at(ab, c);
        const Elem bc = at(b, c);
        if (bc < 0) {
          complain(Violation::Kind::E2,
                   "(" + nm[a] + "+" + nm[b] + ")+" + nm[c] + " defined but " +
                       nm[b] + "+" + nm[c] + " is not");
          continue;
        }
        if (at(a, bc) != abc)
          complain(Violation::Kind::E2,
                   "(" + nm[a] + "+" + nm[b] + ")+" + nm[c] + " != " + nm[a] +
                       "+(" + nm[b] + "+" + nm[c] + ")");
      }
    }
  }
  if (!bad.empty()) return bad;

  EffectAlgebra A;
  A.names_ = raw.elements;
  A.index_ = std::move(index);
  A.zero_ = zero;
  A.one_ = one;
  A.sum_ = std::move(table);
  A.orth_ = std::move(orth);

  // Derived structure: order, difference, orthosupplement.
  A.diff_.assign(static_cast<std::size_t>(n) * n, kUndef);
  for (Elem a = 0; a < n; ++a)
    for (Elem c : A.orth_[a]) A.diff_[A.idx(A.sum(a, c), a)] = c;
  A.perp_.assign(n, kUndef);
  for (Elem a = 0; a < n; ++a) A.perp_[a] = A.diff(one, a);

  // Consistency of the derived structure with the axioms; these cannot fail
  // on a table that passed the checks above.
  for (Elem a = 0; a < n; ++a) {
    if (A.perp_[a] < 0 || A.sum(a, A.perp_[a]) != one)
      throw std::logic_error("perp derivation broken");
    if (!A.leq(zero, a) || !A.leq(a, one))
      throw std::logic_error("bounds derivation broken");
    for (Elem b = 0; b < n; ++b) {
      bool o = A.defined(a, b);
      if (o != A.leq(a, A.perp_[b]) || o != A.leq(b, A.perp_[a]))
        throw std::logic_error("orthogonality/order duality broken");
    }
  }

  A.height_.assign(n, 0);
  {
    // Longest path in the strict order; process by in-order (leq) closure.
    std::vector<Elem> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&A](Elem x, Elem y) {
      if (A.leq(x, y) && x != y) return true;
      if (A.leq(y, x) && x != y) return false;
      return x < y;
    });
    for (Elem x : order)
      for (Elem y = 0; y < n; ++y)
        if (y != x && A.leq(y, x))
          A.height_[x] = std::max(A.height_[x], A.height_[y] + 1);
  }

  for (Elem a = 0; a < n; ++a) {
    if (a == zero) continue;
    bool minimal = true;
    for (Elem b = 0; b < n; ++b)
      if (b != zero && b != a && A.leq(b, a)) { minimal = false; break; }
    if (minimal) A.atoms_.push_back(a);
  }
  return A;
}

inline EffectAlgebra EffectAlgebra::must(const RawAlgebra& raw) {
  auto res = validate(raw);
  if (auto* alg = std::get_if<EffectAlgebra>(&res)) return std::move(*alg);
  const auto& v = std::get<std::vector<Violation>>(res);
  std::string msg = "invalid effect algebra:";
  for (const auto& x : v) {
    msg += std::string(" [") + violation_kind_name(x.kind) + "] " + x.detail;
    if (msg.size() > 500) break;
  }
  throw std::invalid_argument(msg);
}

// ---------------------------------------------------------------------------
// Summable families and refinements.

struct SummableFamily {
  const EffectAlgebra* alg = nullptr;
  std::vector<Elem> entries;
  std::optional<Elem> total;  // present iff the family is summable
};

inline SummableFamily make_family(const EffectAlgebra& A,
                                  std::vector<Elem> entries) {
  SummableFamily f;
  f.alg = &A;
  f.total = A.sum_family(entries);
  f.entries = std::move(entries);
  return f;
}

/// A function [dom] -> [cod]; Stone dual of a Boolean-algebra morphism.
struct FinMap {
  int dom = 0, cod = 0;
  std::vector<int> img;  // 0-based, size dom, values in [0, cod)

  bool well_formed() const {
    if (static_cast<int>(img.size()) != dom) return false;
    for (int v : img)
      if (v < 0 || v >= cod) return false;
    return true;
  }
  bool surjective() const {
    std::vector<char> hit(cod, 0);
    for (int v : img) hit[v] = 1;
    return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
  }
};

/// True iff rho is onto and every rho-fiber of `fine` sums to the matching
/// entry of `coarse`.
inline bool is_refinement(const SummableFamily& fine,
                          const SummableFamily& coarse, const FinMap& rho) {
  if (fine.alg == nullptr || fine.alg != coarse.alg)
    throw std::invalid_argument("families over different algebras");
  if (rho.dom != static_cast<int>(fine.entries.size()) ||
      rho.cod != static_cast<int>(coarse.entries.size()) || !rho.well_formed())
    throw std::invalid_argument("index mismatch in refinement map");
  if (!rho.surjective()) return false;
  const EffectAlgebra& A = *fine.alg;
  for (int i = 0; i < rho.cod; ++i) {
    std::vector<Elem> fiber;
    for (int j = 0; j < rho.dom; ++j)
      if (rho.img[j] == i) fiber.push_back(fine.entries[j]);
    auto s = A.sum_family(fiber);
    if (!s || *s != coarse.entries[i]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Standard constructions.

namespace detail {
inline std::string subset_name(uint64_t mask) {
  std::string s = "{";
  bool first = true;
  for (int i = 0; mask >> i; ++i)
    if (mask >> i & 1) {
      if (!first) s += ",";
      s += std::to_string(i + 1);
      first = false;
    }
  return s + "}";
}
}  // namespace detail

/// [0, n] in Z. chain(0) is the one-element algebra, chain(1) = 2^[1].
inline EffectAlgebra make_chain(int n) {
  if (n < 0) throw std::invalid_argument("chain: n < 0");
  RawAlgebra raw;
  for (int i = 0; i <= n; ++i) raw.elements.push_back(std::to_string(i));
  raw.zero = "0";
  raw.one = std::to_string(n);
  for (int i = 0; i <= n; ++i)
    for (int j = i; i + j <= n; ++j)
      raw.sum.push_back({std::to_string(i), std::to_string(j),
                         std::to_string(i + j)});
  return EffectAlgebra::must(raw);
}

/// The powerset 2^[n]; x + y defined iff the sets are disjoint.
inline EffectAlgebra make_boolean(int n) {
  if (n < 0) throw std::invalid_argument("boolean: n < 0");
  if (n > 20) throw std::invalid_argument("boolean: n too large");
  RawAlgebra raw;
  const uint64_t full = (n == 0) ? 0 : ((uint64_t{1} << n) - 1);
  for (uint64_t m = 0; m <= full; ++m) raw.elements.push_back(detail::subset_name(m));
  raw.zero = detail::subset_name(0);
  raw.one = detail::subset_name(full);
  for (uint64_t a = 0; a <= full; ++a)
    for (uint64_t b = a; b <= full; ++b)
      if ((a & b) == 0)
        raw.sum.push_back({detail::subset_name(a), detail::subset_name(b),
                           detail::subset_name(a | b)});
  return EffectAlgebra::must(raw);
}

inline EffectAlgebra make_one_element() { return make_boolean(0); }

/// Horizontal sum of k copies of 2^[2]: 2k+2 elements, atoms orthogonal only
/// within their own block.
inline EffectAlgebra make_mo(int k) {
  if (k < 1) throw std::invalid_argument("mo: k < 1");
  RawAlgebra raw;
  raw.elements.push_back("0");
  for (int i = 1; i <= k; ++i) {
    raw.elements.push_back("a" + std::to_string(i));
    raw.elements.push_back("b" + std::to_string(i));
  }
  raw.elements.push_back("1");
  raw.zero = "0";
  raw.one = "1";
  for (const auto& e : raw.elements) raw.sum.push_back({"0", e, e});
  for (int i = 1; i <= k; ++i)
    raw.sum.push_back({"a" + std::to_string(i), "b" + std::to_string(i), "1"});
  return EffectAlgebra::must(raw);
}

/// Componentwise product.
inline EffectAlgebra make_product(const EffectAlgebra& A,
                                  const EffectAlgebra& B) {
  RawAlgebra raw;
  auto nm = [&](Elem a, Elem b) {
    return "(" + A.name(a) + "," + B.name(b) + ")";
  };
  for (Elem a = 0; a < A.size(); ++a)
    for (Elem b = 0; b < B.size(); ++b) raw.elements.push_back(nm(a, b));
  raw.zero = nm(A.zero(), B.zero());
  raw.one = nm(A.one(), B.one());
  for (Elem a1 = 0; a1 < A.size(); ++a1)
    for (Elem b1 = 0; b1 < B.size(); ++b1)
      for (Elem a2 = 0; a2 < A.size(); ++a2)
        for (Elem b2 = 0; b2 < B.size(); ++b2)
          if (A.defined(a1, a2) && B.defined(b1, b2))
            raw.sum.push_back(
                {nm(a1, b1), nm(a2, b2), nm(A.sum(a1, a2), B.sum(b1, b2))});
  return EffectAlgebra::must(raw);
}

/// Glue two algebras at 0 and 1. If either side is one-element the gluing
/// identifies 0 with 1 and the result collapses.
inline EffectAlgebra make_horizontal_sum(const EffectAlgebra& A,
                                         const EffectAlgebra& B) {
  if (A.zero() == A.one() || B.zero() == B.one()) return make_one_element();
  RawAlgebra raw;
  raw.elements.push_back("0");
  raw.elements.push_back("1");
  raw.zero = "0";
  raw.one = "1";
  auto side = [&raw](const EffectAlgebra& X, const std::string& prefix) {
    auto nm = [&](Elem x) -> std::string {
      if (x == X.zero()) return "0";
      if (x == X.one()) return "1";
      return prefix + X.name(x);
    };
    for (Elem x = 0; x < X.size(); ++x)
      if (x != X.zero() && x != X.one()) raw.elements.push_back(nm(x));
    for (Elem x = 0; x < X.size(); ++x)
      for (Elem y = x; y < X.size(); ++y)
        if (X.defined(x, y)) raw.sum.push_back({nm(x), nm(y), nm(X.sum(x, y))});
  };
  side(A, "a:");
  side(B, "b:");
  return EffectAlgebra::must(raw);
}

/// [0, u] in Z^k with componentwise order and addition.
inline EffectAlgebra make_interval_vector(const std::vector<int>& u) {
  if (u.empty()) throw std::invalid_argument("interval_vector: empty vector");
  for (int c : u)
    if (c < 0) throw std::invalid_argument("interval_vector: negative bound");
  std::size_t count = 1;
  for (int c : u) {
    count *= static_cast<std::size_t>(c) + 1;
    if (count > 4096) throw std::invalid_argument("interval_vector: too large");
  }
  const int k = static_cast<int>(u.size());
  std::vector<std::vector<int>> pts;
  std::vector<int> cur(k, 0);
  for (;;) {
    pts.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == u[i]) cur[i--] = 0;
    if (i < 0) break;
    ++cur[i];
  }
  auto nm = [](const std::vector<int>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i)
      s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
  };
  RawAlgebra raw;
  for (const auto& p : pts) raw.elements.push_back(nm(p));
  raw.zero = nm(std::vector<int>(k, 0));
  raw.one = nm(u);
  for (const auto& p : pts)
    for (const auto& q : pts) {
      std::vector<int> s(k);
      bool ok = true;
      for (int i = 0; i < k; ++i) {
        s[i] = p[i] + q[i];
        if (s[i] > u[i]) { ok = false; break; }
      }
      if (ok) raw.sum.push_back({nm(p), nm(q), nm(s)});
    }
  return EffectAlgebra::must(raw);
}

}  // namespace ea
