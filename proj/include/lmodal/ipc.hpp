#pragma once
// Decision procedure for intuitionistic propositional logic over finite
// premise sets.  Search uses the contraction-free sequent calculus whose
// left-implication rule is split by the shape of the antecedent, so it
// terminates without loop checking.  Success yields a natural-deduction proof
// term (checked independently by nd_type); failure yields a finite rooted
// Kripke countermodel, rebuilt from the failed branches and re-verified with
// kripke_eval before being returned.

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "lmodal/formula.hpp"
#include "lmodal/kripke.hpp"

namespace lmodal {

struct Sequent {
  std::vector<Formula> premises;
  Formula goal;
};

inline void validate_sequent(const Sequent& s) {
  if (!s.goal.valid()) throw DomainError("sequent: invalid goal");
  if (!s.goal.is_propositional())
    throw DomainError("sequent: goal contains box");
  for (const Formula& p : s.premises) {
    if (!p.valid()) throw DomainError("sequent: invalid premise");
    if (!p.is_propositional())
      throw DomainError("sequent: premise contains box");
  }
}

// ---------------------------------------------------------------------------
// Natural-deduction proof terms.  Hypotheses are integers; terms produced for
// a sequent use ids 0..n-1 for its premises, and every binder id is globally
// fresh within one search, so substitution cannot capture.

struct NdTerm;
using Nd = std::shared_ptr<const NdTerm>;

enum class NdTag : uint8_t {
  Var, Lam, App, Pair, Fst, Snd, Inl, Inr, Case, Abort
};

struct NdTerm {
  NdTag tag;
  int v = -1;   // Var: id; Lam: bound id; Case: left bound id
  int v2 = -1;  // Case: right bound id
  Formula ann;  // Lam: domain; Inl: right disjunct; Inr: left disjunct;
                // Abort: result type
  Nd a, b, c;
};

inline Nd nd_var(int id) {
  return std::make_shared<NdTerm>(NdTerm{NdTag::Var, id, -1, {}, {}, {}, {}});
}
inline Nd nd_lam(int id, Formula dom, Nd body) {
  return std::make_shared<NdTerm>(
      NdTerm{NdTag::Lam, id, -1, dom, std::move(body), {}, {}});
}
inline Nd nd_app(Nd f, Nd x) {
  return std::make_shared<NdTerm>(
      NdTerm{NdTag::App, -1, -1, {}, std::move(f), std::move(x), {}});
}
inline Nd nd_pair(Nd a, Nd b) {
  return std::make_shared<NdTerm>(
      NdTerm{NdTag::Pair, -1, -1, {}, std::move(a), std::move(b), {}});
}
inline Nd nd_fst(Nd p) {
  return std::make_shared<NdTerm>(
      NdTerm{NdTag::Fst, -1, -1, {}, std::move(p), {}, {}});
}
inline Nd nd_snd(Nd p) {
  return std::make_shared<NdTerm>(
      NdTerm{NdTag::Snd, -1, -1, {}, std::move(p), {}, {}});
}
inline Nd nd_inl(Nd t, Formula right) {
  return std::make_shared<NdTerm>(
      NdTerm{NdTag::Inl, -1, -1, right, std::move(t), {}, {}});
}
inline Nd nd_inr(Nd t, Formula left) {
  return std::make_shared<NdTerm>(
      NdTerm{NdTag::Inr, -1, -1, left, std::move(t), {}, {}});
}
inline Nd nd_case(Nd scrut, int xl, Nd tl, int xr, Nd tr) {
  return std::make_shared<NdTerm>(NdTerm{NdTag::Case, xl, xr, {},
                                         std::move(scrut), std::move(tl),
                                         std::move(tr)});
}
inline Nd nd_abort(Nd t, Formula goal) {
  return std::make_shared<NdTerm>(
      NdTerm{NdTag::Abort, -1, -1, goal, std::move(t), {}, {}});
}

// t[id := u]; sound because binder ids are globally unique.
inline Nd nd_subst(const Nd& t, int id, const Nd& u) {
  switch (t->tag) {
    case NdTag::Var:
      return t->v == id ? u : t;
    case NdTag::Lam: {
      Nd b = nd_subst(t->a, id, u);
      return b == t->a ? t : nd_lam(t->v, t->ann, b);
    }
    case NdTag::App: {
      Nd a = nd_subst(t->a, id, u), b = nd_subst(t->b, id, u);
      return (a == t->a && b == t->b) ? t : nd_app(a, b);
    }
    case NdTag::Pair: {
      Nd a = nd_subst(t->a, id, u), b = nd_subst(t->b, id, u);
      return (a == t->a && b == t->b) ? t : nd_pair(a, b);
    }
    case NdTag::Fst: {
      Nd a = nd_subst(t->a, id, u);
      return a == t->a ? t : nd_fst(a);
    }
    case NdTag::Snd: {
      Nd a = nd_subst(t->a, id, u);
      return a == t->a ? t : nd_snd(a);
    }
    case NdTag::Inl: {
      Nd a = nd_subst(t->a, id, u);
      return a == t->a ? t : nd_inl(a, t->ann);
    }
    case NdTag::Inr: {
      Nd a = nd_subst(t->a, id, u);
      return a == t->a ? t : nd_inr(a, t->ann);
    }
    case NdTag::Case: {
      Nd s = nd_subst(t->a, id, u);
      Nd l = nd_subst(t->b, id, u);
      Nd r = nd_subst(t->c, id, u);
      return (s == t->a && l == t->b && r == t->c)
                 ? t
                 : nd_case(s, t->v, l, t->v2, r);
    }
    case NdTag::Abort: {
      Nd a = nd_subst(t->a, id, u);
      return a == t->a ? t : nd_abort(a, t->ann);
    }
  }
  throw LmError("unreachable");
}

// Independent type checker: the certificate that a term proves its sequent.
inline std::optional<Formula> nd_type(const Nd& t,
                                      std::map<int, Formula>& env,
                                      std::string* why = nullptr) {
  auto fail = [&](const std::string& m) -> std::optional<Formula> {
    if (why) *why = m;
    return std::nullopt;
  };
  switch (t->tag) {
    case NdTag::Var: {
      auto it = env.find(t->v);
      if (it == env.end()) return fail("unbound hypothesis");
      return it->second;
    }
    case NdTag::Lam: {
      if (env.count(t->v)) return fail("shadowed binder id");
      env.emplace(t->v, t->ann);
      auto tb = nd_type(t->a, env, why);
      env.erase(t->v);
      if (!tb) return std::nullopt;
      return Formula::imp(t->ann, *tb);
    }
    case NdTag::App: {
      auto tf = nd_type(t->a, env, why);
      if (!tf) return std::nullopt;
      auto ta = nd_type(t->b, env, why);
      if (!ta) return std::nullopt;
      if (tf->kind() != Kind::Imp || tf->lhs() != *ta)
        return fail("application type mismatch");
      return tf->rhs();
    }
    case NdTag::Pair: {
      auto ta = nd_type(t->a, env, why);
      if (!ta) return std::nullopt;
      auto tb = nd_type(t->b, env, why);
      if (!tb) return std::nullopt;
      return Formula::conj(*ta, *tb);
    }
    case NdTag::Fst: {
      auto ta = nd_type(t->a, env, why);
      if (!ta) return std::nullopt;
      if (ta->kind() != Kind::And) return fail("fst of non-pair");
      return ta->lhs();
    }
    case NdTag::Snd: {
      auto ta = nd_type(t->a, env, why);
      if (!ta) return std::nullopt;
      if (ta->kind() != Kind::And) return fail("snd of non-pair");
      return ta->rhs();
    }
    case NdTag::Inl: {
      auto ta = nd_type(t->a, env, why);
      if (!ta) return std::nullopt;
      return Formula::disj(*ta, t->ann);
    }
    case NdTag::Inr: {
      auto ta = nd_type(t->a, env, why);
      if (!ta) return std::nullopt;
      return Formula::disj(t->ann, *ta);
    }
    case NdTag::Case: {
      auto ts = nd_type(t->a, env, why);
      if (!ts) return std::nullopt;
      if (ts->kind() != Kind::Or) return fail("case on non-sum");
      if (env.count(t->v) || env.count(t->v2) || t->v == t->v2)
        return fail("shadowed binder id");
      env.emplace(t->v, ts->lhs());
      auto tl = nd_type(t->b, env, why);
      env.erase(t->v);
      if (!tl) return std::nullopt;
      env.emplace(t->v2, ts->rhs());
      auto tr = nd_type(t->c, env, why);
      env.erase(t->v2);
      if (!tr) return std::nullopt;
      if (*tl != *tr) return fail("case branch types differ");
      return *tl;
    }
    case NdTag::Abort: {
      auto ta = nd_type(t->a, env, why);
      if (!ta) return std::nullopt;
      if (ta->kind() != Kind::Bot) return fail("abort of non-absurd");
      return t->ann;
    }
  }
  throw LmError("unreachable");
}

// Checks that t proves the sequent, with premises bound to ids 0..n-1.
inline bool check_nd(const Sequent& s, const Nd& t,
                     std::string* why = nullptr) {
  std::map<int, Formula> env;
  for (size_t i = 0; i < s.premises.size(); ++i)
    env.emplace(static_cast<int>(i), s.premises[i]);
  auto ty = nd_type(t, env, why);
  if (!ty) return false;
  if (*ty != s.goal) {
    if (why) *why = "term proves a different formula";
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Proof search.

namespace detail {

// Failed-branch tree: a world per failed saturated sequent, children from the
// failed premises explored there.
struct CTree {
  uint64_t atoms = 0;
  std::vector<CTree> kids;
};

struct Hyp {
  int id;
  Formula f;
};

class G4Search {
 public:
  G4Search(int first_fresh_id, long fuel)
      : next_id_(first_fresh_id), fuel_(fuel) {}

  using Result = std::variant<Nd, CTree>;

  Result prove(std::vector<Hyp> ctx, Formula goal) {
    if (--fuel_ < 0) throw LimitError("ipc search: node budget exceeded");

    // Immediate hits.
    for (const Hyp& h : ctx)
      if (h.f == goal) return nd_var(h.id);
    for (const Hyp& h : ctx)
      if (h.f.kind() == Kind::Bot)
        return nd_abort(nd_var(h.id), goal);

    // Invertible left rules.
    for (size_t i = 0; i < ctx.size(); ++i) {
      const Hyp h = ctx[i];
      if (h.f.kind() == Kind::And) {
        Formula A = h.f.lhs(), B = h.f.rhs();
        int x = fresh(), y = fresh();
        std::vector<Hyp> c2 = without(ctx, i);
        c2.push_back({x, A});
        c2.push_back({y, B});
        Result r = prove(std::move(c2), goal);
        if (Nd* t = std::get_if<Nd>(&r)) {
          Nd s = nd_subst(*t, x, nd_fst(nd_var(h.id)));
          return nd_subst(s, y, nd_snd(nd_var(h.id)));
        }
        return r;
      }
      if (h.f.kind() == Kind::Or) {
        Formula A = h.f.lhs(), B = h.f.rhs();
        int x = fresh(), y = fresh();
        std::vector<Hyp> cl = ctx;
        cl[i] = {x, A};
        Result rl = prove(std::move(cl), goal);
        if (std::holds_alternative<CTree>(rl)) return rl;
        std::vector<Hyp> cr = ctx;
        cr[i] = {y, B};
        Result rr = prove(std::move(cr), goal);
        if (std::holds_alternative<CTree>(rr)) return rr;
        return nd_case(nd_var(h.id), x, std::get<Nd>(rl), y,
                       std::get<Nd>(rr));
      }
      if (h.f.kind() == Kind::Imp) {
        Formula C = h.f.lhs(), B = h.f.rhs();
        if (C.kind() == Kind::Bot) {
          return prove(without(ctx, i), goal);
        }
        if (C.kind() == Kind::Atom) {
          int witness = -1;
          for (const Hyp& g : ctx)
            if (g.f == C) {
              witness = g.id;
              break;
            }
          if (witness < 0) continue;  // not invertible yet
          int y = fresh();
          std::vector<Hyp> c2 = ctx;
          c2[i] = {y, B};
          Result r = prove(std::move(c2), goal);
          if (Nd* t = std::get_if<Nd>(&r))
            return nd_subst(*t, y, nd_app(nd_var(h.id), nd_var(witness)));
          return r;
        }
        if (C.kind() == Kind::And) {
          Formula C1 = C.lhs(), C2f = C.rhs();
          int y = fresh();
          std::vector<Hyp> c2 = ctx;
          c2[i] = {y, Formula::imp(C1, Formula::imp(C2f, B))};
          Result r = prove(std::move(c2), goal);
          if (Nd* t = std::get_if<Nd>(&r)) {
            int a = fresh(), b = fresh();
            Nd curried = nd_lam(
                a, C1,
                nd_lam(b, C2f,
                       nd_app(nd_var(h.id), nd_pair(nd_var(a), nd_var(b)))));
            return nd_subst(*t, y, curried);
          }
          return r;
        }
        if (C.kind() == Kind::Or) {
          Formula C1 = C.lhs(), C2f = C.rhs();
          int y = fresh(), z = fresh();
          std::vector<Hyp> c2 = ctx;
          c2[i] = {y, Formula::imp(C1, B)};
          c2.push_back({z, Formula::imp(C2f, B)});
          Result r = prove(std::move(c2), goal);
          if (Nd* t = std::get_if<Nd>(&r)) {
            int a = fresh(), b = fresh();
            Nd fl = nd_lam(
                a, C1, nd_app(nd_var(h.id), nd_inl(nd_var(a), C2f)));
            Nd fr = nd_lam(
                b, C2f, nd_app(nd_var(h.id), nd_inr(nd_var(b), C1)));
            Nd s = nd_subst(*t, y, fl);
            return nd_subst(s, z, fr);
          }
          return r;
        }
        // C is an implication: non-invertible, handled below.
      }
    }

    // Invertible right rules.
    if (goal.kind() == Kind::And) {
      Result ra = prove(ctx, goal.lhs());
      if (std::holds_alternative<CTree>(ra)) return ra;
      Result rb = prove(ctx, goal.rhs());
      if (std::holds_alternative<CTree>(rb)) return rb;
      return nd_pair(std::get<Nd>(ra), std::get<Nd>(rb));
    }
    if (goal.kind() == Kind::Imp) {
      int x = fresh();
      std::vector<Hyp> c2 = ctx;
      c2.push_back({x, goal.lhs()});
      Result r = prove(std::move(c2), goal.rhs());
      if (Nd* t = std::get_if<Nd>(&r))
        return nd_lam(x, goal.lhs(), *t);
      return r;  // root of this model forces goal.lhs()
    }

    // Saturated: goal is an atom, bot, or disjunction; left side holds only
    // atoms, implications from absent atoms, and nested implications.
    std::vector<CTree> kids;

    if (goal.kind() == Kind::Or) {
      Result ra = prove(ctx, goal.lhs());
      if (Nd* t = std::get_if<Nd>(&ra))
        return nd_inl(*t, goal.rhs());
      kids.push_back(std::get<CTree>(std::move(ra)));
      Result rb = prove(ctx, goal.rhs());
      if (Nd* t = std::get_if<Nd>(&rb))
        return nd_inr(*t, goal.lhs());
      kids.push_back(std::get<CTree>(std::move(rb)));
    }

    for (size_t i = 0; i < ctx.size(); ++i) {
      const Hyp h = ctx[i];
      if (h.f.kind() != Kind::Imp || h.f.lhs().kind() != Kind::Imp) continue;
      Formula C = h.f.lhs().lhs(), D = h.f.lhs().rhs(), B = h.f.rhs();
      int y = fresh();
      std::vector<Hyp> c1 = without(ctx, i);
      c1.push_back({y, Formula::imp(D, B)});
      Result r1 = prove(std::move(c1), h.f.lhs());
      if (Nd* t1 = std::get_if<Nd>(&r1)) {
        // From t1 : C->D (under y : D->B) discharge y by
        //   y := \d:D. h (\_:C. d)  : D->B
        int d = fresh(), k = fresh();
        Nd u = nd_lam(
            d, D, nd_app(nd_var(h.id), nd_lam(k, C, nd_var(d))));
        Nd t1p = nd_subst(*t1, y, u);
        int z = fresh();
        std::vector<Hyp> c2 = without(ctx, i);
        c2.push_back({z, B});
        Result r2 = prove(std::move(c2), goal);
        if (Nd* t2 = std::get_if<Nd>(&r2))
          return nd_subst(*t2, z, nd_app(nd_var(h.id), t1p));
        // A world satisfying B persistently also satisfies h; the failed
        // second premise is already a countermodel of the whole sequent.
        return r2;
      }
      kids.push_back(std::get<CTree>(std::move(r1)));
    }

    CTree node;
    for (const Hyp& h : ctx)
      if (h.f.kind() == Kind::Atom && h.f.var() < 64)
        node.atoms |= uint64_t{1} << h.f.var();
    node.kids = std::move(kids);
    return node;
  }

 private:
  int fresh() { return next_id_++; }
  static std::vector<Hyp> without(const std::vector<Hyp>& ctx, size_t i) {
    std::vector<Hyp> out;
    out.reserve(ctx.size() - 1);
    for (size_t j = 0; j < ctx.size(); ++j)
      if (j != i) out.push_back(ctx[j]);
    return out;
  }

  int next_id_;
  long fuel_;
};

inline int ctree_count(const CTree& t) {
  int n = 1;
  for (const CTree& k : t.kids) n += ctree_count(k);
  return n;
}

inline void ctree_flatten(const CTree& t, KripkeModel& m, int self) {
  m.val[self] = t.atoms;
  uint32_t mask = uint32_t{1} << self;
  for (const CTree& k : t.kids) {
    int child = 0;
    for (int w = 0; w < m.size(); ++w)
      if (m.up[w] == 0) {
        child = w;
        break;
      }
    m.up[child] = uint32_t{1} << child;  // reserve
    ctree_flatten(k, m, child);
    mask |= m.up[child];
  }
  m.up[self] = mask;
}

inline std::string ctree_sig(const CTree& t) {
  std::string s = "(" + std::to_string(t.atoms);
  std::vector<std::string> ks;
  for (const CTree& k : t.kids) ks.push_back(ctree_sig(k));
  std::sort(ks.begin(), ks.end());
  for (auto& k : ks) s += k;
  s += ')';
  return s;
}

// Drop duplicate sibling subtrees and leaf children that repeat the parent's
// valuation.  Results are only kept if the verdict still verifies (callers
// re-check and fall back to the unpruned tree).
inline CTree ctree_prune(const CTree& t) {
  CTree out;
  out.atoms = t.atoms;
  std::vector<std::string> seen;
  for (const CTree& k : t.kids) {
    CTree pk = ctree_prune(k);
    if (pk.kids.empty() && pk.atoms == t.atoms) continue;
    std::string sig = ctree_sig(pk);
    if (std::find(seen.begin(), seen.end(), sig) != seen.end()) continue;
    seen.push_back(sig);
    out.kids.push_back(std::move(pk));
  }
  return out;
}

inline KripkeModel ctree_to_kripke(const CTree& t) {
  int n = ctree_count(t);
  if (n > 32) throw LimitError("countermodel exceeds 32 worlds");
  KripkeModel m;
  m.root = 0;
  m.up.assign(n, 0);
  m.val.assign(n, 0);
  m.up[0] = 1;
  ctree_flatten(t, m, 0);
  return m;
}

}  // namespace detail

// Raw search: a proof term or a verified countermodel.
inline std::variant<Nd, KripkeModel> ipc_search(
    const std::vector<Formula>& premises, Formula goal,
    long fuel = 2'000'000) {
  Sequent s{premises, goal};
  validate_sequent(s);
  std::vector<detail::Hyp> ctx;
  for (size_t i = 0; i < premises.size(); ++i)
    ctx.push_back({static_cast<int>(i), premises[i]});
  detail::G4Search search(static_cast<int>(premises.size()), fuel);
  auto r = search.prove(std::move(ctx), goal);

  if (Nd* t = std::get_if<Nd>(&r)) {
    std::string why;
    if (!check_nd(s, *t, &why))
      throw SoundnessError("ipc search produced an ill-typed proof term: " +
                           why);
    return *t;
  }

  const detail::CTree& tree = std::get<detail::CTree>(r);
  auto verifies = [&](const KripkeModel& m) {
    if (validate_kripke(m)) return false;
    for (const Formula& p : premises)
      if (!kripke_eval(m, m.root, p)) return false;
    return !kripke_eval(m, m.root, goal);
  };
  KripkeModel pruned = detail::ctree_to_kripke(detail::ctree_prune(tree));
  if (verifies(pruned)) return pruned;
  KripkeModel full = detail::ctree_to_kripke(tree);
  if (verifies(full)) return full;
  throw SoundnessError("ipc search produced an invalid countermodel");
}

}  // namespace lmodal
