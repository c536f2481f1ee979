#pragma once
// Finite Heyting algebras and the algebraic models of L.
//
// Every finite Heyting algebra is the downset lattice of a finite poset, so
// enumeration up to isomorphism walks finite posets (each new element is
// placed above a downset of the poset built so far), prunes by downset
// count, and deduplicates by a permutation-minimal canonical form.  Models
// add an ultrafilter TRUE and a box operation obeying:
//   (i)   box(m) <= m
//   (ii)  box(m -> m') <= box(m' -> m'') -> box(m -> m'')
//   (iii) box(m \/ m') <= box(m) \/ box(m')
//   (iv)  box(m) in TRUE  iff  m = top

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lmodal/formula.hpp"

namespace lmodal {

// ---------------------------------------------------------------------------
// Posets, as per-element lower-set masks (lower[i] includes i).

struct FinitePoset {
  int n = 0;
  std::vector<uint32_t> lower;

  bool leq(int a, int b) const { return (lower[b] >> a) & 1; }
};

inline std::optional<std::string> validate_poset(const FinitePoset& p) {
  if (p.n < 0 || p.n > 20) return "size out of range";
  if (static_cast<int>(p.lower.size()) != p.n) return "lower size mismatch";
  uint32_t all = p.n >= 32 ? ~uint32_t{0} : (uint32_t{1} << p.n) - 1;
  for (int i = 0; i < p.n; ++i) {
    if (p.lower[i] & ~all) return "lower references missing element";
    if (!((p.lower[i] >> i) & 1)) return "not reflexive";
  }
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < p.n; ++j)
      if (p.leq(i, j)) {
        if ((p.lower[i] & ~p.lower[j]))
          return "not transitive";
        if (i != j && p.leq(j, i)) return "not antisymmetric";
      }
  return std::nullopt;
}

inline std::vector<uint32_t> poset_downsets(const FinitePoset& p) {
  std::vector<uint32_t> out;
  uint32_t limit = uint32_t{1} << p.n;
  for (uint32_t mask = 0; mask < limit; ++mask) {
    bool ok = true;
    for (int i = 0; i < p.n && ok; ++i)
      if ((mask >> i) & 1)
        if ((p.lower[i] & ~mask)) ok = false;
    if (ok) out.push_back(mask);
  }
  return out;
}

namespace detail {

inline FinitePoset apply_perm(const FinitePoset& p,
                              const std::vector<int>& perm) {
  FinitePoset q;
  q.n = p.n;
  q.lower.assign(p.n, 0);
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < p.n; ++j)
      if (p.leq(j, i)) q.lower[perm[i]] |= uint32_t{1} << perm[j];
  return q;
}

inline std::string poset_key(const FinitePoset& p) {
  std::string s;
  s.reserve(p.n * p.n);
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < p.n; ++j) s += p.leq(j, i) ? '1' : '0';
  return s;
}

// Lexicographically minimal relabeling.
inline std::pair<std::string, FinitePoset> poset_canonical(
    const FinitePoset& p) {
  std::vector<int> perm(p.n);
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  FinitePoset bestp = p;
  do {
    FinitePoset q = apply_perm(p, perm);
    std::string key = poset_key(q);
    if (best.empty() || key < best) {
      best = key;
      bestp = q;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {best, bestp};
}

}  // namespace detail

// All posets (up to isomorphism, canonically labeled) whose downset count is
// at most max_downsets.  Ascending by size, then by canonical key.
inline std::vector<FinitePoset> enumerate_posets(int max_downsets) {
  // Canonicalization inspects all n! relabelings, and a poset with at most
  // d downsets has fewer than d elements, so keep the bound desk-sized.
  if (max_downsets < 1 || max_downsets > 12)
    throw DomainError("enumerate_posets: bound out of range [1,12]");
  std::vector<FinitePoset> out;
  std::unordered_set<std::string> seen;

  auto rec = [&](auto&& self, const FinitePoset& p) -> void {
    std::vector<uint32_t> ds = poset_downsets(p);
    if (static_cast<int>(ds.size()) > max_downsets) return;
    auto [key, canon] = detail::poset_canonical(p);
    if (!seen.insert(std::to_string(p.n) + ":" + key).second) return;
    out.push_back(canon);
    for (uint32_t d : ds) {
      FinitePoset q;
      q.n = p.n + 1;
      q.lower = p.lower;
      q.lower.push_back(d | (uint32_t{1} << p.n));
      self(self, q);
    }
  };
  rec(rec, FinitePoset{});

  std::sort(out.begin(), out.end(),
            [](const FinitePoset& a, const FinitePoset& b) {
              if (a.n != b.n) return a.n < b.n;
              return detail::poset_key(a) < detail::poset_key(b);
            });
  return out;
}

// ---------------------------------------------------------------------------
// Heyting algebras as explicit tables.

struct Heyting {
  int n = 0;
  int bot = 0, top = 0;
  std::vector<uint8_t> meet_t, join_t, imp_t;  // row-major n*n

  int meet(int a, int b) const { return meet_t[a * n + b]; }
  int join(int a, int b) const { return join_t[a * n + b]; }
  int imp(int a, int b) const { return imp_t[a * n + b]; }
  int neg(int a) const { return imp(a, bot); }
  bool leq(int a, int b) const { return meet(a, b) == a; }
};

// Downset lattice of a poset; elements are downset masks in ascending order.
inline Heyting heyting_from_poset(const FinitePoset& p) {
  if (auto why = validate_poset(p))
    throw DomainError("heyting_from_poset: " + *why);
  std::vector<uint32_t> ds = poset_downsets(p);
  std::sort(ds.begin(), ds.end());
  int n = static_cast<int>(ds.size());
  if (n > 32) throw LimitError("heyting_from_poset: more than 32 downsets");
  std::unordered_map<uint32_t, int> idx;
  for (int i = 0; i < n; ++i) idx[ds[i]] = i;

  Heyting h;
  h.n = n;
  h.bot = idx.at(0);
  h.top = idx.at(p.n ? (uint32_t{1} << p.n) - 1 : 0);
  h.meet_t.resize(n * n);
  h.join_t.resize(n * n);
  h.imp_t.resize(n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      h.meet_t[a * n + b] = static_cast<uint8_t>(idx.at(ds[a] & ds[b]));
      h.join_t[a * n + b] = static_cast<uint8_t>(idx.at(ds[a] | ds[b]));
      uint32_t im = 0;
      for (int w = 0; w < p.n; ++w)
        if (!(p.lower[w] & ds[a] & ~ds[b])) im |= uint32_t{1} << w;
      h.imp_t[a * n + b] = static_cast<uint8_t>(idx.at(im));
    }
  return h;
}

// Full axiom check: bounded lattice plus residuation.  Distributivity
// follows from the existence of the residual.
inline std::optional<std::string> validate_heyting(const Heyting& h) {
  int n = h.n;
  if (n < 1 || n > 32) return "size out of range [1,32]";
  if (h.bot < 0 || h.bot >= n || h.top < 0 || h.top >= n)
    return "bounds out of range";
  if (static_cast<int>(h.meet_t.size()) != n * n ||
      static_cast<int>(h.join_t.size()) != n * n ||
      static_cast<int>(h.imp_t.size()) != n * n)
    return "table size mismatch";
  for (int i = 0; i < n * n; ++i)
    if (h.meet_t[i] >= n || h.join_t[i] >= n || h.imp_t[i] >= n)
      return "table entry out of range";
  for (int a = 0; a < n; ++a) {
    if (h.meet(a, a) != a || h.join(a, a) != a) return "not idempotent";
    if (h.meet(a, h.bot) != h.bot) return "bot not least";
    if (h.join(a, h.top) != h.top) return "top not greatest";
    if (h.meet(a, h.top) != a) return "top not meet-neutral";
    if (h.join(a, h.bot) != a) return "bot not join-neutral";
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (h.meet(a, b) != h.meet(b, a)) return "meet not commutative";
      if (h.join(a, b) != h.join(b, a)) return "join not commutative";
      if (h.meet(a, h.join(a, b)) != a) return "absorption fails";
      if (h.join(a, h.meet(a, b)) != a) return "absorption fails";
    }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        if (h.meet(a, h.meet(b, c)) != h.meet(h.meet(a, b), c))
          return "meet not associative";
        if (h.join(a, h.join(b, c)) != h.join(h.join(a, b), c))
          return "join not associative";
        // residuation: c /\ a <= b  iff  c <= a -> b
        bool left = h.leq(h.meet(c, a), b);
        bool right = h.leq(c, h.imp(a, b));
        if (left != right) return "residuation fails";
      }
  return std::nullopt;
}

inline bool is_boolean(const Heyting& h) {
  for (int a = 0; a < h.n; ++a)
    if (h.join(a, h.neg(a)) != h.top) return false;
  return true;
}

// A join reaches top only if one of its joinands is top.  (The one-element
// algebra satisfies this trivially.)
inline bool has_disjunction_property(const Heyting& h) {
  for (int a = 0; a < h.n; ++a)
    for (int b = 0; b < h.n; ++b)
      if (h.join(a, b) == h.top && a != h.top && b != h.top) return false;
  return true;
}

// All Heyting algebras with at most max_n elements, up to isomorphism,
// in a deterministic order.  Cached.
inline const std::vector<Heyting>& enumerate_heyting(int max_n = 8) {
  if (max_n < 1 || max_n > 12)
    throw DomainError("enumerate_heyting: bound out of range [1,12]");
  static std::mutex mu;
  static std::map<int, std::shared_ptr<std::vector<Heyting>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(max_n);
  if (it == cache.end()) {
    auto v = std::make_shared<std::vector<Heyting>>();
    for (const FinitePoset& p : enumerate_posets(max_n))
      v->push_back(heyting_from_poset(p));
    it = cache.emplace(max_n, std::move(v)).first;
  }
  return *it->second;
}

// ---------------------------------------------------------------------------
// Filters.

struct Filter {
  uint32_t mask = 0;
  bool prime = false;
  bool ultra = false;
};

inline bool is_filter_mask(const Heyting& h, uint32_t mask) {
  // proper: contains top, not bot, upward closed, meet closed
  if (h.n == 1) return false;  // no proper filter on the trivial algebra
  if (!((mask >> h.top) & 1)) return false;
  if ((mask >> h.bot) & 1) return false;
  for (int a = 0; a < h.n; ++a)
    if ((mask >> a) & 1) {
      for (int b = 0; b < h.n; ++b) {
        if (h.leq(a, b) && !((mask >> b) & 1)) return false;
        if (((mask >> b) & 1) && !((mask >> h.meet(a, b)) & 1)) return false;
      }
    }
  return true;
}

inline bool filter_prime(const Heyting& h, uint32_t mask) {
  for (int a = 0; a < h.n; ++a)
    for (int b = 0; b < h.n; ++b)
      if (((mask >> h.join(a, b)) & 1) && !((mask >> a) & 1) &&
          !((mask >> b) & 1))
        return false;
  return true;
}

// Ultrafilter criterion: m is outside F exactly when ~m is inside.
inline bool filter_ultra(const Heyting& h, uint32_t mask) {
  for (int m = 0; m < h.n; ++m) {
    bool in = (mask >> m) & 1;
    bool nin = (mask >> h.neg(m)) & 1;
    if (in == nin) return false;
  }
  return true;
}

inline std::vector<Filter> enumerate_filters(const Heyting& h) {
  if (h.n > 16) throw LimitError("enumerate_filters: algebra too large");
  std::vector<Filter> out;
  uint32_t limit = uint32_t{1} << h.n;
  for (uint32_t mask = 0; mask < limit; ++mask)
    if (is_filter_mask(h, mask))
      out.push_back(
          {mask, filter_prime(h, mask), filter_ultra(h, mask)});
  return out;
}

inline std::vector<uint32_t> enumerate_ultrafilters(const Heyting& h) {
  std::vector<uint32_t> out;
  if (h.n == 1) return out;
  if (h.n <= 16) {
    for (const Filter& f : enumerate_filters(h))
      if (f.ultra) out.push_back(f.mask);
    return out;
  }
  throw LimitError("enumerate_ultrafilters: algebra too large");
}

// ---------------------------------------------------------------------------
// Models.

struct LModel {
  Heyting H;
  uint32_t true_mask = 0;
  std::vector<uint8_t> box;
};

inline std::vector<uint8_t> trivial_box(const Heyting& h) {
  std::vector<uint8_t> box(h.n);
  for (int m = 0; m < h.n; ++m)
    box[m] = static_cast<uint8_t>(m == h.top ? h.top : h.bot);
  return box;
}

inline bool box_conditions_hold(const Heyting& h, uint32_t true_mask,
                                const std::vector<uint8_t>& box,
                                std::string* why = nullptr) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (static_cast<int>(box.size()) != h.n) return fail("box size mismatch");
  for (int m = 0; m < h.n; ++m)
    if (box[m] >= h.n) return fail("box entry out of range");
  for (int m = 0; m < h.n; ++m)
    if (!h.leq(box[m], m))
      return fail("condition (i) fails at " + std::to_string(m));
  for (int m = 0; m < h.n; ++m)
    for (int m2 = 0; m2 < h.n; ++m2)
      for (int m3 = 0; m3 < h.n; ++m3)
        if (!h.leq(box[h.imp(m, m2)],
                   h.imp(box[h.imp(m2, m3)], box[h.imp(m, m3)])))
          return fail("condition (ii) fails at " + std::to_string(m) + "," +
                      std::to_string(m2) + "," + std::to_string(m3));
  for (int m = 0; m < h.n; ++m)
    for (int m2 = 0; m2 < h.n; ++m2)
      if (!h.leq(box[h.join(m, m2)], h.join(box[m], box[m2])))
        return fail("condition (iii) fails at " + std::to_string(m) + "," +
                    std::to_string(m2));
  for (int m = 0; m < h.n; ++m) {
    bool in_true = (true_mask >> box[m]) & 1;
    if (in_true != (m == h.top))
      return fail("condition (iv) fails at " + std::to_string(m));
  }
  return true;
}

// Exhaustive verification of the full model definition.
inline std::optional<std::string> check_model_conditions(const LModel& m) {
  if (auto why = validate_heyting(m.H)) return "algebra: " + *why;
  if (!is_filter_mask(m.H, m.true_mask)) return "TRUE is not a proper filter";
  if (!filter_ultra(m.H, m.true_mask)) return "TRUE is not an ultrafilter";
  std::string why;
  if (!box_conditions_hold(m.H, m.true_mask, m.box, &why)) return why;
  return std::nullopt;
}

// All box tables for (H, TRUE) satisfying (i)-(iv), deterministic order.
inline std::vector<std::vector<uint8_t>> enumerate_modal_ops(
    const Heyting& h, uint32_t true_mask, long max_products = 20'000'000) {
  std::vector<std::vector<uint8_t>> candidates(h.n);
  for (int m = 0; m < h.n; ++m) {
    for (int v = 0; v < h.n; ++v) {
      bool in_true = (true_mask >> v) & 1;
      if (!h.leq(v, m)) continue;
      if ((m == h.top) != in_true) continue;
      candidates[m].push_back(static_cast<uint8_t>(v));
    }
    if (candidates[m].empty()) return {};
  }
  long total = 1;
  for (int m = 0; m < h.n; ++m) {
    total *= static_cast<long>(candidates[m].size());
    if (total > max_products)
      throw LimitError("enumerate_modal_ops: candidate space too large");
  }

  std::vector<std::vector<uint8_t>> out;
  std::vector<size_t> pick(h.n, 0);
  std::vector<uint8_t> box(h.n);
  for (;;) {
    for (int m = 0; m < h.n; ++m) box[m] = candidates[m][pick[m]];
    if (box_conditions_hold(h, true_mask, box)) out.push_back(box);
    int m = h.n - 1;
    while (m >= 0 && ++pick[m] == candidates[m].size()) pick[m--] = 0;
    if (m < 0) break;
  }
  return out;
}

// All models over all algebras of size <= max_n.  Cached, deterministic.
inline const std::vector<LModel>& enumerate_lmodels(int max_n) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<std::vector<LModel>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(max_n);
  if (it == cache.end()) {
    auto v = std::make_shared<std::vector<LModel>>();
    for (const Heyting& h : enumerate_heyting(max_n))
      for (uint32_t tm : enumerate_ultrafilters(h))
        for (auto& box : enumerate_modal_ops(h, tm))
          v->push_back(LModel{h, tm, box});
    it = cache.emplace(max_n, std::move(v)).first;
  }
  return *it->second;
}

// ---------------------------------------------------------------------------
// Evaluation.

using Assignment = std::map<Var, int>;

inline int eval(const LModel& m, const Assignment& g, Formula f) {
  switch (f.kind()) {
    case Kind::Bot:
      return m.H.bot;
    case Kind::Atom: {
      auto it = g.find(f.var());
      if (it == g.end())
        throw DomainError("eval: unassigned variable " + var_name(f.var()));
      if (it->second < 0 || it->second >= m.H.n)
        throw DomainError("eval: assignment out of range");
      return it->second;
    }
    case Kind::And:
      return m.H.meet(eval(m, g, f.lhs()), eval(m, g, f.rhs()));
    case Kind::Or:
      return m.H.join(eval(m, g, f.lhs()), eval(m, g, f.rhs()));
    case Kind::Imp:
      return m.H.imp(eval(m, g, f.lhs()), eval(m, g, f.rhs()));
    case Kind::Box:
      return m.box[eval(m, g, f.body())];
  }
  throw LmError("unreachable");
}

inline bool satisfies(const LModel& m, const Assignment& g, Formula f) {
  return (m.true_mask >> eval(m, g, f)) & 1;
}

// The two-element model determined by a classical valuation.
inline std::pair<LModel, Assignment> two_element_model_of(
    const std::map<Var, bool>& valuation) {
  FinitePoset p;
  p.n = 1;
  p.lower = {1};
  LModel m;
  m.H = heyting_from_poset(p);  // bot = 0, top = 1
  m.true_mask = uint32_t{1} << m.H.top;
  m.box = trivial_box(m.H);
  Assignment g;
  for (auto& [v, b] : valuation) g[v] = b ? m.H.top : m.H.bot;
  return {m, g};
}

}  // namespace lmodal
