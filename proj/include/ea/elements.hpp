// The category of finite observables of an effect algebra, truncated at a
// maximum arity, and its three structural diagnostics: amalgamation,
// coequalizing pairs, filteredness.
#pragma once

#include <map>
#include <optional>
#include <thread>
#include <vector>

#include "ea/core.hpp"
#include "ea/finbool.hpp"
#include "ea/observables.hpp"
#include "ea/props.hpp"

namespace ea {

struct Arrow {
  int source = -1, target = -1;  // object indices
  BoolMorphism f;
};

/// Objects of the category of elements of R(A) with arity <= max_arity,
/// ordered by arity then enumeration order.
struct TruncatedElements {
  const EffectAlgebra* A = nullptr;
  int max_arity = 0;
  std::vector<Observable> objects;

  static TruncatedElements build(const EffectAlgebra& A, int max_arity) {
    TruncatedElements cat;
    cat.A = &A;
    cat.max_arity = max_arity;
    for (int n = 1; n <= max_arity; ++n)
      for (auto& g : enumerate_observables(A, n))
        cat.objects.push_back(std::move(g));
    return cat;
  }

  std::vector<Arrow> arrows_out(int src) const {
    std::vector<Arrow> out;
    for (int tgt = 0; tgt < static_cast<int>(objects.size()); ++tgt)
      for (auto& f : elements_arrows(objects[src], objects[tgt]))
        out.push_back(Arrow{src, tgt, std::move(f)});
    return out;
  }
};

struct SpanCounterexample {
  Observable source, g1, g2;
  BoolMorphism f1, f2;
};
struct ParallelCounterexample {
  Observable source, target;
  BoolMorphism f1, f2;
};

struct DiagnosticResult {
  std::string property;
  bool pass = true;
  int bound = 0;
  std::optional<SpanCounterexample> span;
  std::optional<ParallelCounterexample> parallel;
};

struct DiagnosticOptions {
  int jobs = 1;
};

namespace detail {

// Existence of a matrix with the given row/column sums depends only on the
// two part multisets, which makes memoisation across spans effective.
class BlockMemo {
 public:
  explicit BlockMemo(const EffectAlgebra& A) : A_(&A) {}

  bool solvable(std::vector<Elem> rows, std::vector<Elem> cols) {
    std::sort(rows.begin(), rows.end());
    std::sort(cols.begin(), cols.end());
    if (cols < rows) rows.swap(cols);  // transpose symmetry
    std::vector<Elem> key = rows;
    key.push_back(kUndef);
    key.insert(key.end(), cols.begin(), cols.end());
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool ok = find_refinement_matrix(*A_, rows, cols).has_value();
    memo_.emplace(std::move(key), ok);
    return ok;
  }

 private:
  struct VecHash {
    std::size_t operator()(const std::vector<Elem>& v) const {
      std::size_t h = v.size();
      for (Elem e : v) hash_combine(h, static_cast<std::size_t>(e + 1));
      return h;
    }
  };
  const EffectAlgebra* A_;
  std::unordered_map<std::vector<Elem>, bool, VecHash> memo_;
};

inline std::vector<Elem> fiber_parts(const Observable& g, Mask atoms) {
  std::vector<Elem> out;
  for (int j = 0; j < g.arity(); ++j)
    if (atoms >> j & 1) out.push_back(g.parts[j]);
  return out;
}

// A span has a completing cospan iff each atom of the common source yields a
// solvable row/column-sum block; the cospan target is assembled blockwise.
inline bool span_solvable(const Observable& g, const BoolMorphism& f1,
                          const Observable& g1, const BoolMorphism& f2,
                          const Observable& g2, BlockMemo& memo) {
  for (int i = 0; i < g.arity(); ++i)
    if (!memo.solvable(fiber_parts(g1, f1.atom_images[i]),
                       fiber_parts(g2, f2.atom_images[i])))
      return false;
  return true;
}

}  // namespace detail

struct Cospan {
  Observable apex;
  BoolMorphism h1, h2;  // g1 -> apex, g2 -> apex
};

/// Cospan completing a span, built at the pullback index set: one apex atom
/// per pair (j,l) with the same image atom under the two dual maps. Complete:
/// any completing cospan of any arity induces one of this shape by merging
/// fibers.
inline std::optional<Cospan> find_cospan(const Observable& g,
                                         const BoolMorphism& f1,
                                         const Observable& g1,
                                         const BoolMorphism& f2,
                                         const Observable& g2) {
  const EffectAlgebra& A = *g.alg;
  std::vector<Elem> w;
  std::vector<int> s1, s2;  // apex atom -> atom of g1 / g2
  for (int i = 0; i < g.arity(); ++i) {
    std::vector<int> rows_idx, cols_idx;
    for (int j = 0; j < g1.arity(); ++j)
      if (f1.atom_images[i] >> j & 1) rows_idx.push_back(j);
    for (int l = 0; l < g2.arity(); ++l)
      if (f2.atom_images[i] >> l & 1) cols_idx.push_back(l);
    std::vector<Elem> rows, cols;
    for (int j : rows_idx) rows.push_back(g1.parts[j]);
    for (int l : cols_idx) cols.push_back(g2.parts[l]);
    auto z = find_refinement_matrix(A, rows, cols);
    if (!z) return std::nullopt;
    for (std::size_t r = 0; r < rows_idx.size(); ++r)
      for (std::size_t c = 0; c < cols_idx.size(); ++c) {
        w.push_back((*z)[r * cols_idx.size() + c]);
        s1.push_back(rows_idx[r]);
        s2.push_back(cols_idx[c]);
      }
  }
  Cospan cs;
  cs.apex = Observable{&A, std::move(w)};
  cs.h1 = dualize(FinMap{static_cast<int>(s1.size()), g1.arity(), s1});
  cs.h2 = dualize(FinMap{static_cast<int>(s2.size()), g2.arity(), s2});
  return cs;
}

/// The Riesz-recipe cospan: per source atom, a common refinement of the two
/// fiber families, concatenated. Available when the algebra has RDP.
inline std::optional<Cospan> find_cospan_rdp(const Observable& g,
                                             const BoolMorphism& f1,
                                             const Observable& g1,
                                             const BoolMorphism& f2,
                                             const Observable& g2) {
  const EffectAlgebra& A = *g.alg;
  std::vector<Elem> w;
  std::vector<int> s1, s2;
  for (int i = 0; i < g.arity(); ++i) {
    auto rows = detail::fiber_parts(g1, f1.atom_images[i]);
    auto cols = detail::fiber_parts(g2, f2.atom_images[i]);
    auto cr = common_refinement(make_family(A, rows), make_family(A, cols));
    if (!cr) return std::nullopt;
    std::vector<int> rows_idx, cols_idx;
    for (int j = 0; j < g1.arity(); ++j)
      if (f1.atom_images[i] >> j & 1) rows_idx.push_back(j);
    for (int l = 0; l < g2.arity(); ++l)
      if (f2.atom_images[i] >> l & 1) cols_idx.push_back(l);
    for (int r = 0; r < cr->rows; ++r)
      for (int c = 0; c < cr->cols; ++c) {
        w.push_back(cr->cells[static_cast<std::size_t>(r) * cr->cols + c]);
        s1.push_back(rows_idx[r]);
        s2.push_back(cols_idx[c]);
      }
  }
  Cospan cs;
  cs.apex = Observable{&A, std::move(w)};
  cs.h1 = dualize(FinMap{static_cast<int>(s1.size()), g1.arity(), s1});
  cs.h2 = dualize(FinMap{static_cast<int>(s2.size()), g2.arity(), s2});
  return cs;
}

namespace detail {

// body(worker, index); each worker sees a strided slice, so per-worker state
// needs no locking.
template <typename Fn>
void parallel_objects(int count, int jobs, Fn&& body) {
  if (jobs <= 1) {
    for (int i = 0; i < count; ++i) body(0, i);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += jobs) body(w, i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace detail

inline DiagnosticResult check_amalgamated(const EffectAlgebra& A, int max_arity,
                                          DiagnosticOptions opts = {}) {
  if (max_arity < 2) throw std::invalid_argument("check_amalgamated: bound < 2");
  auto cat = TruncatedElements::build(A, max_arity);
  const int nobj = static_cast<int>(cat.objects.size());
  // first counterexample in loop order per worker; merged to the global first
  const int workers = std::max(1, opts.jobs);
  std::vector<std::optional<std::pair<int, SpanCounterexample>>> found(workers);
  std::vector<detail::BlockMemo> memos(workers, detail::BlockMemo(A));
  detail::parallel_objects(nobj, opts.jobs, [&](int worker, int gi) {
    auto& slot = found[worker];
    if (slot && slot->first < gi) return;
    detail::BlockMemo& memo = memos[worker];
    auto out = cat.arrows_out(gi);
    const Observable& g = cat.objects[gi];
    for (std::size_t i = 0; i < out.size(); ++i)
      for (std::size_t j = i; j < out.size(); ++j) {
        if (!detail::span_solvable(g, out[i].f, cat.objects[out[i].target],
                                   out[j].f, cat.objects[out[j].target],
                                   memo)) {
          slot = {gi, SpanCounterexample{g, cat.objects[out[i].target],
                                         cat.objects[out[j].target], out[i].f,
                                         out[j].f}};
          return;
        }
      }
  });
  DiagnosticResult res;
  res.property = "amalgamated";
  res.bound = max_arity;
  std::optional<std::pair<int, SpanCounterexample>> best;
  for (auto& slot : found)
    if (slot && (!best || slot->first < best->first)) best = slot;
  if (best) {
    res.pass = false;
    res.span = best->second;
  }
  return res;
}

inline DiagnosticResult check_coequalizing(const EffectAlgebra& A,
                                           int max_arity,
                                           DiagnosticOptions opts = {}) {
  if (max_arity < 2) throw std::invalid_argument("check_coequalizing: bound < 2");
  auto cat = TruncatedElements::build(A, max_arity);
  const int nobj = static_cast<int>(cat.objects.size());

  // The search outcome for a parallel pair depends only on the target
  // observable and the set of atoms on which the dual maps agree.
  struct EqMemo {
    std::map<std::pair<int, Mask>, bool> memo;
  };

  // Bounded witness search: targets by increasing arity, then enumeration
  // order, then dual map order; first hit wins.
  auto search = [&cat, &A](int gpi, const FinMap& t1, const FinMap& t2)
      -> std::optional<std::pair<BoolMorphism, Observable>> {
    const Observable& gp = cat.objects[gpi];
    const int m = gp.arity();
    for (int k = 1; k <= m; ++k)
      for (auto& u : enumerate_observables(A, k))
        for (auto& s : enumerate_finmaps(k, m)) {
          bool eq = true;
          for (int c = 0; c < k && eq; ++c)
            if (t1.img[s.img[c]] != t2.img[s.img[c]]) eq = false;
          if (!eq) continue;
          BoolMorphism q = dualize(s);
          if (is_elements_arrow(gp, u, q))
            return std::make_pair(std::move(q), u);
        }
    return std::nullopt;
  };

  const int workers = std::max(1, opts.jobs);
  std::vector<std::optional<std::pair<int, ParallelCounterexample>>> found(
      workers);
  std::vector<EqMemo> memos(workers);
  detail::parallel_objects(nobj, opts.jobs, [&](int worker, int gi) {
    auto& slot = found[worker];
    if (slot && slot->first < gi) return;
    EqMemo& memo = memos[worker];
    const Observable& g = cat.objects[gi];
    for (int gpi = 0; gpi < nobj; ++gpi) {
      auto homs = elements_arrows(g, cat.objects[gpi]);
      for (std::size_t i = 0; i < homs.size(); ++i)
        for (std::size_t j = i + 1; j < homs.size(); ++j) {
          FinMap t1 = dualize_inv(homs[i]);
          FinMap t2 = dualize_inv(homs[j]);
          Mask agree = 0;
          for (int a = 0; a < t1.dom; ++a)
            if (t1.img[a] == t2.img[a]) agree |= Mask{1} << a;
          auto key = std::make_pair(gpi, agree);
          auto it = memo.memo.find(key);
          bool ok;
          if (it != memo.memo.end()) {
            ok = it->second;
          } else {
            ok = search(gpi, t1, t2).has_value();
            memo.memo.emplace(key, ok);
          }
          if (!ok) {
            slot = {gi, ParallelCounterexample{g, cat.objects[gpi], homs[i],
                                               homs[j]}};
            return;
          }
        }
    }
  });
  DiagnosticResult res;
  res.property = "coequalizing";
  res.bound = max_arity;
  std::optional<std::pair<int, ParallelCounterexample>> best;
  for (auto& slot : found)
    if (slot && (!best || slot->first < best->first)) best = slot;
  if (best) {
    res.pass = false;
    res.parallel = best->second;
  }
  return res;
}

/// Direct coequalizing witness for one parallel pair (first in search
/// order), for witness-soundness checks.
inline std::optional<std::pair<BoolMorphism, Observable>> find_coequalizing(
    const Observable& g, const BoolMorphism& f1, const BoolMorphism& f2,
    const Observable& gp) {
  (void)g;
  const EffectAlgebra& A = *gp.alg;
  FinMap t1 = dualize_inv(f1), t2 = dualize_inv(f2);
  const int m = gp.arity();
  for (int k = 1; k <= m; ++k)
    for (auto& u : enumerate_observables(A, k))
      for (auto& s : enumerate_finmaps(k, m)) {
        bool eq = true;
        for (int c = 0; c < k && eq; ++c)
          if (t1.img[s.img[c]] != t2.img[s.img[c]]) eq = false;
        if (!eq) continue;
        BoolMorphism q = dualize(s);
        if (is_elements_arrow(gp, u, q)) return std::make_pair(std::move(q), u);
      }
  return std::nullopt;
}

/// The orthoalgebra proof recipe: restrict the target observable to the
/// atoms where the dual maps agree (the Boolean coequalizer of the pair).
inline std::optional<std::pair<BoolMorphism, Observable>>
find_coequalizing_orthoalgebra(const Observable& gp, const BoolMorphism& f1,
                               const BoolMorphism& f2) {
  const EffectAlgebra& A = *gp.alg;
  FinMap t1 = dualize_inv(f1), t2 = dualize_inv(f2);
  std::vector<int> keep;
  for (int j = 0; j < gp.arity(); ++j)
    if (t1.img[j] == t2.img[j]) keep.push_back(j);
  if (keep.empty()) return std::nullopt;
  Observable u{&A, {}};
  FinMap s{static_cast<int>(keep.size()), gp.arity(), keep};
  for (int j : keep) u.parts.push_back(gp.parts[j]);
  if (!A.summable(u.parts) || *A.sum_family(u.parts) != A.one())
    return std::nullopt;
  BoolMorphism q = dualize(s);
  if (!is_elements_arrow(gp, u, q)) return std::nullopt;
  return std::make_pair(std::move(q), std::move(u));
}

inline DiagnosticResult check_filtered(const EffectAlgebra& A, int max_arity,
                                       DiagnosticOptions opts = {}) {
  if (max_arity < 2) throw std::invalid_argument("check_filtered: bound < 2");
  // Nonempty: <> always exists. Cospans over pairs reduce to amalgamation of
  // the span from <>, which is initial; the two unique arrows out of it send
  // the single atom to everything.
  auto cat = TruncatedElements::build(A, max_arity);
  const Observable initial = make_observable(A, std::span<const Elem>{});
  detail::BlockMemo memo(A);
  DiagnosticResult res;
  res.property = "filtered";
  res.bound = max_arity;
  for (std::size_t i = 0; i < cat.objects.size(); ++i)
    for (std::size_t j = i; j < cat.objects.size(); ++j) {
      const Observable& g1 = cat.objects[i];
      const Observable& g2 = cat.objects[j];
      if (!memo.solvable(g1.parts, g2.parts)) {
        BoolMorphism to1{1, g1.arity(), {full_mask(g1.arity())}};
        BoolMorphism to2{1, g2.arity(), {full_mask(g2.arity())}};
        res.pass = false;
        res.span = SpanCounterexample{initial, g1, g2, to1, to2};
        return res;
      }
    }
  auto coeq = check_coequalizing(A, max_arity, opts);
  if (!coeq.pass) {
    res.pass = false;
    res.parallel = coeq.parallel;
  }
  return res;
}

}  // namespace ea
