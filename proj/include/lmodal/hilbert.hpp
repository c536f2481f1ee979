#pragma once
// Hilbert-style proofs for the intuitionistic propositional fragment, over
// the fixed nine-scheme basis A1..A9 with modus ponens.  Proof terms from the
// search engine compile down by bracket abstraction (the A1/A2 deduction
// transform); the checker is independent of the search and the compiler.

#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "lmodal/formula.hpp"
#include "lmodal/ipc.hpp"

namespace lmodal {

enum class HAxiom : uint8_t { A1, A2, A3, A4, A5, A6, A7, A8, A9 };

inline int h_axiom_arity(HAxiom ax) {
  switch (ax) {
    case HAxiom::A2:
    case HAxiom::A8:
      return 3;
    case HAxiom::A9:
      return 1;
    default:
      return 2;
  }
}

inline const char* h_axiom_name(HAxiom ax) {
  static const char* names[] = {"a1", "a2", "a3", "a4", "a5",
                                "a6", "a7", "a8", "a9"};
  return names[static_cast<int>(ax)];
}

// The scheme instance with metavariables a, b, c.
inline Formula h_axiom_formula(HAxiom ax, Formula a, Formula b = {},
                               Formula c = {}) {
  using F = Formula;
  switch (ax) {
    case HAxiom::A1:
      return F::imp(a, F::imp(b, a));
    case HAxiom::A2:
      return F::imp(F::imp(a, F::imp(b, c)),
                    F::imp(F::imp(a, b), F::imp(a, c)));
    case HAxiom::A3:
      return F::imp(F::conj(a, b), a);
    case HAxiom::A4:
      return F::imp(F::conj(a, b), b);
    case HAxiom::A5:
      return F::imp(a, F::imp(b, F::conj(a, b)));
    case HAxiom::A6:
      return F::imp(a, F::disj(a, b));
    case HAxiom::A7:
      return F::imp(b, F::disj(a, b));
    case HAxiom::A8:
      return F::imp(F::imp(a, c),
                    F::imp(F::imp(b, c), F::imp(F::disj(a, b), c)));
    case HAxiom::A9:
      return F::imp(F::bot(), a);
  }
  throw LmError("unreachable");
}

struct HJust {
  enum class Tag : uint8_t { Axiom, Hyp, MP };
  Tag tag;
  HAxiom ax = HAxiom::A1;
  Formula a, b, c;  // recorded instantiation for axiom lines
  int i = -1;       // Hyp: premise index; MP: minor line (proves psi)
  int j = -1;       // MP: major line (proves psi -> phi)
};

struct HLine {
  Formula f;
  HJust just;
};

struct HilbertProof {
  std::vector<Formula> premises;
  std::vector<HLine> lines;
  Formula conclusion() const {
    if (lines.empty()) throw DomainError("empty proof");
    return lines.back().f;
  }
};

struct HCheck {
  bool ok = true;
  int bad_line = -1;  // 0-based; printable diagnostics use 1-based
  std::string reason;
  explicit operator bool() const { return ok; }
};

inline HCheck h_fail(int line, const std::string& reason) {
  return HCheck{false, line,
                "line " + std::to_string(line + 1) + ": " + reason};
}

inline HCheck check_hilbert_ipc(const HilbertProof& p, const Sequent& s) {
  if (p.premises != s.premises)
    return HCheck{false, -1, "premises do not match the sequent"};
  if (p.lines.empty()) return HCheck{false, -1, "empty proof"};
  for (size_t k = 0; k < p.lines.size(); ++k) {
    const HLine& ln = p.lines[k];
    if (!ln.f.valid()) return h_fail(k, "invalid formula");
    if (!ln.f.is_propositional()) return h_fail(k, "formula contains box");
    switch (ln.just.tag) {
      case HJust::Tag::Axiom: {
        int ar = h_axiom_arity(ln.just.ax);
        if (!ln.just.a.valid() || (ar >= 2 && !ln.just.b.valid()) ||
            (ar >= 3 && !ln.just.c.valid()))
          return h_fail(k, "missing axiom instantiation");
        Formula want =
            h_axiom_formula(ln.just.ax, ln.just.a, ln.just.b, ln.just.c);
        if (want != ln.f)
          return h_fail(k, std::string("formula is not the recorded ") +
                               h_axiom_name(ln.just.ax) + " instance");
        break;
      }
      case HJust::Tag::Hyp: {
        if (ln.just.i < 0 ||
            ln.just.i >= static_cast<int>(p.premises.size()))
          return h_fail(k, "hypothesis index out of range");
        if (p.premises[ln.just.i] != ln.f)
          return h_fail(k, "formula differs from cited premise");
        break;
      }
      case HJust::Tag::MP: {
        int i = ln.just.i, j = ln.just.j;
        if (i < 0 || j < 0 || i >= static_cast<int>(k) ||
            j >= static_cast<int>(k))
          return h_fail(k, "modus ponens must cite earlier lines");
        Formula major = p.lines[j].f;
        if (major.kind() != Kind::Imp || major.lhs() != p.lines[i].f ||
            major.rhs() != ln.f)
          return h_fail(k, "modus ponens shape mismatch");
        break;
      }
    }
  }
  if (p.lines.back().f != s.goal)
    return h_fail(p.lines.size() - 1, "conclusion differs from the goal");
  return HCheck{};
}

// ---------------------------------------------------------------------------
// Proof construction with line reuse: adding a formula that is already proved
// returns the existing line.

class HilbertBuilder {
 public:
  explicit HilbertBuilder(std::vector<Formula> premises)
      : premises_(std::move(premises)) {}

  int axiom(HAxiom ax, Formula a, Formula b = {}, Formula c = {}) {
    Formula f = h_axiom_formula(ax, a, b, c);
    if (auto it = index_.find(f); it != index_.end()) return it->second;
    HJust j{HJust::Tag::Axiom, ax, a, b, c, -1, -1};
    return push(f, j);
  }

  int hyp(int i) {
    if (i < 0 || i >= static_cast<int>(premises_.size()))
      throw DomainError("hyp index out of range");
    Formula f = premises_[i];
    if (auto it = index_.find(f); it != index_.end()) return it->second;
    HJust j{HJust::Tag::Hyp, HAxiom::A1, {}, {}, {}, i, -1};
    return push(f, j);
  }

  // minor proves psi, major proves psi -> phi.
  int mp(int minor, int major) {
    Formula mf = lines_[major].f;
    if (mf.kind() != Kind::Imp || mf.lhs() != lines_[minor].f)
      throw LmError("builder: modus ponens shape mismatch");
    Formula f = mf.rhs();
    if (auto it = index_.find(f); it != index_.end()) return it->second;
    HJust j{HJust::Tag::MP, HAxiom::A1, {}, {}, {}, minor, major};
    return push(f, j);
  }

  Formula formula_of(int line) const { return lines_[line].f; }
  const std::vector<Formula>& premises() const { return premises_; }

  HilbertProof take() && {
    return HilbertProof{std::move(premises_), std::move(lines_)};
  }
  const std::vector<HLine>& lines() const { return lines_; }

 private:
  int push(Formula f, const HJust& j) {
    lines_.push_back({f, j});
    int idx = static_cast<int>(lines_.size()) - 1;
    index_.emplace(f, idx);
    return idx;
  }

  std::vector<Formula> premises_;
  std::vector<HLine> lines_;
  std::unordered_map<Formula, int, FormulaHash> index_;
};

// ---------------------------------------------------------------------------
// Deduction transform: from a proof of psi over premises G + [A], produce a
// proof of A -> psi over G.  Lines that never use the discharged premise are
// copied unchanged and lifted only where needed.

namespace detail {

class HilbertDeduct {
 public:
  HilbertDeduct(const HilbertProof& in, int concl)
      : in_(in),
        concl_(concl),
        discharged_(static_cast<int>(in.premises.size()) - 1),
        a_(in.premises.back()),
        out_(std::vector<Formula>(in.premises.begin(),
                                  in.premises.end() - 1)) {
    dep_.resize(in_.lines.size());
    plain_.assign(in_.lines.size(), -1);
    lifted_.assign(in_.lines.size(), -1);
    for (size_t k = 0; k < in_.lines.size(); ++k) {
      const HJust& j = in_.lines[k].just;
      if (j.tag == HJust::Tag::Hyp)
        dep_[k] = j.i == discharged_;
      else if (j.tag == HJust::Tag::MP)
        dep_[k] = dep_[j.i] || dep_[j.j];
      else
        dep_[k] = false;
    }
  }

  std::pair<HilbertProof, int> run() {
    int line = lifted(concl_);
    return {std::move(out_).take(), line};
  }

 private:
  int plain(int k) {
    if (plain_[k] >= 0) return plain_[k];
    const HLine& ln = in_.lines[k];
    int r;
    switch (ln.just.tag) {
      case HJust::Tag::Axiom:
        r = out_.axiom(ln.just.ax, ln.just.a, ln.just.b, ln.just.c);
        break;
      case HJust::Tag::Hyp:
        r = out_.hyp(ln.just.i);
        break;
      case HJust::Tag::MP:
        r = out_.mp(plain(ln.just.i), plain(ln.just.j));
        break;
      default:
        throw LmError("unreachable");
    }
    return plain_[k] = r;
  }

  // Line proving a_ -> f(k).
  int lifted(int k) {
    if (lifted_[k] >= 0) return lifted_[k];
    const HLine& ln = in_.lines[k];
    int r;
    if (!dep_[k]) {
      int base = plain(k);
      int a1 = out_.axiom(HAxiom::A1, ln.f, a_);
      r = out_.mp(base, a1);
    } else if (ln.just.tag == HJust::Tag::Hyp) {
      r = identity();  // a_ -> a_
    } else {
      // MP over chi and chi -> psi, both lifted.
      Formula chi = in_.lines[ln.just.i].f;
      Formula psi = ln.f;
      int lj = lifted(ln.just.j);  // a -> (chi -> psi)
      int li = lifted(ln.just.i);  // a -> chi
      int a2 = out_.axiom(HAxiom::A2, a_, chi, psi);
      int step = out_.mp(lj, a2);
      r = out_.mp(li, step);
    }
    return lifted_[k] = r;
  }

  int identity() {
    Formula aa = Formula::imp(a_, a_);
    int s1 = out_.axiom(HAxiom::A1, a_, aa);
    int s2 = out_.axiom(HAxiom::A2, a_, aa, a_);
    int s3 = out_.mp(s1, s2);
    int s4 = out_.axiom(HAxiom::A1, a_, a_);
    return out_.mp(s4, s3);
  }

  const HilbertProof& in_;
  int concl_;
  int discharged_;
  Formula a_;
  HilbertBuilder out_;
  std::vector<bool> dep_;
  std::vector<int> plain_, lifted_;
};

}  // namespace detail

inline std::pair<HilbertProof, int> hilbert_deduct(const HilbertProof& p,
                                                   int concl_line) {
  if (p.premises.empty())
    throw DomainError("deduct: no premise to discharge");
  if (concl_line < 0 || concl_line >= static_cast<int>(p.lines.size()))
    throw DomainError("deduct: conclusion line out of range");
  return detail::HilbertDeduct(p, concl_line).run();
}

// ---------------------------------------------------------------------------
// Bracket abstraction: compile a proof term into a Hilbert derivation.

namespace detail {

class HilbertCompiler {
 public:
  // env maps free hypothesis ids to premise indices of b.
  static int emit(HilbertBuilder& b, const std::unordered_map<int, int>& env,
                  const Nd& t) {
    switch (t->tag) {
      case NdTag::Var: {
        auto it = env.find(t->v);
        if (it == env.end()) throw LmError("compile: unbound hypothesis");
        return b.hyp(it->second);
      }
      case NdTag::App: {
        int major = emit(b, env, t->a);
        int minor = emit(b, env, t->b);
        return b.mp(minor, major);
      }
      case NdTag::Pair: {
        int la = emit(b, env, t->a);
        int lb = emit(b, env, t->b);
        Formula fa = b.formula_of(la), fb = b.formula_of(lb);
        int a5 = b.axiom(HAxiom::A5, fa, fb);
        return b.mp(lb, b.mp(la, a5));
      }
      case NdTag::Fst: {
        int lp = emit(b, env, t->a);
        Formula fp = b.formula_of(lp);
        if (fp.kind() != Kind::And) throw LmError("compile: fst of non-pair");
        return b.mp(lp, b.axiom(HAxiom::A3, fp.lhs(), fp.rhs()));
      }
      case NdTag::Snd: {
        int lp = emit(b, env, t->a);
        Formula fp = b.formula_of(lp);
        if (fp.kind() != Kind::And) throw LmError("compile: snd of non-pair");
        return b.mp(lp, b.axiom(HAxiom::A4, fp.lhs(), fp.rhs()));
      }
      case NdTag::Inl: {
        int lt = emit(b, env, t->a);
        return b.mp(lt, b.axiom(HAxiom::A6, b.formula_of(lt), t->ann));
      }
      case NdTag::Inr: {
        int lt = emit(b, env, t->a);
        return b.mp(lt, b.axiom(HAxiom::A7, t->ann, b.formula_of(lt)));
      }
      case NdTag::Abort: {
        int lt = emit(b, env, t->a);
        return b.mp(lt, b.axiom(HAxiom::A9, t->ann));
      }
      case NdTag::Case: {
        int ls = emit(b, env, t->a);
        Formula fs = b.formula_of(ls);
        if (fs.kind() != Kind::Or) throw LmError("compile: case on non-sum");
        int lu = emit_lam(b, env, t->v, fs.lhs(), t->b);
        int lv = emit_lam(b, env, t->v2, fs.rhs(), t->c);
        Formula goal = b.formula_of(lu).rhs();
        int a8 = b.axiom(HAxiom::A8, fs.lhs(), fs.rhs(), goal);
        return b.mp(ls, b.mp(lv, b.mp(lu, a8)));
      }
      case NdTag::Lam:
        return emit_lam(b, env, t->v, t->ann, t->a);
    }
    throw LmError("unreachable");
  }

 private:
  static int emit_lam(HilbertBuilder& b,
                      const std::unordered_map<int, int>& env, int bound,
                      Formula dom, const Nd& body) {
    std::vector<Formula> sub_prem = b.premises();
    sub_prem.push_back(dom);
    int bound_idx = static_cast<int>(sub_prem.size()) - 1;
    HilbertBuilder sub(sub_prem);
    auto env2 = env;
    env2[bound] = bound_idx;
    int concl = emit(sub, env2, body);
    auto [ded, dline] = hilbert_deduct(std::move(sub).take(), concl);
    // Splice the discharged subproof into b.
    std::vector<int> remap(ded.lines.size());
    for (size_t k = 0; k < ded.lines.size(); ++k) {
      const HLine& ln = ded.lines[k];
      switch (ln.just.tag) {
        case HJust::Tag::Axiom:
          remap[k] = b.axiom(ln.just.ax, ln.just.a, ln.just.b, ln.just.c);
          break;
        case HJust::Tag::Hyp:
          remap[k] = b.hyp(ln.just.i);
          break;
        case HJust::Tag::MP:
          remap[k] = b.mp(remap[ln.just.i], remap[ln.just.j]);
          break;
      }
    }
    return remap[dline];
  }
};

}  // namespace detail

// Compile a proof term for s into a Hilbert derivation of s.goal.
inline HilbertProof compile_to_hilbert(const Sequent& s, const Nd& term) {
  validate_sequent(s);
  std::string why;
  if (!check_nd(s, term, &why))
    throw DomainError("compile_to_hilbert: term does not prove sequent: " +
                      why);
  HilbertBuilder b(s.premises);
  std::unordered_map<int, int> env;
  for (size_t i = 0; i < s.premises.size(); ++i)
    env[static_cast<int>(i)] = static_cast<int>(i);
  int concl = detail::HilbertCompiler::emit(b, env, term);
  if (b.formula_of(concl) != s.goal)
    throw SoundnessError("compile_to_hilbert: wrong conclusion");
  // The conclusion must sit on the last line; re-deriving it is free when it
  // is already there (the builder reuses it only for earlier lines).
  HilbertProof p = std::move(b).take();
  if (p.lines.back().f != s.goal) {
    // Move a copy of the conclusion to the end via a tiny detour:
    // A1 gives goal -> (goal -> goal); two MPs put goal on the last line.
    HJust j1{HJust::Tag::Axiom, HAxiom::A1, s.goal, s.goal, {}, -1, -1};
    p.lines.push_back({h_axiom_formula(HAxiom::A1, s.goal, s.goal), j1});
    HJust j2{HJust::Tag::MP, HAxiom::A1, {}, {}, {}, concl,
             static_cast<int>(p.lines.size()) - 1};
    p.lines.push_back({Formula::imp(s.goal, s.goal), j2});
    HJust j3{HJust::Tag::MP, HAxiom::A1, {}, {}, {}, concl,
             static_cast<int>(p.lines.size()) - 1};
    p.lines.push_back({s.goal, j3});
  }
  return p;
}

// ---------------------------------------------------------------------------
// Classical validity and the excluded-middle reduction.

inline bool cpc_eval(Formula f, uint64_t truth) {
  switch (f.kind()) {
    case Kind::Bot:
      return false;
    case Kind::Atom:
      return (truth >> f.var()) & 1;
    case Kind::And:
      return cpc_eval(f.lhs(), truth) && cpc_eval(f.rhs(), truth);
    case Kind::Or:
      return cpc_eval(f.lhs(), truth) || cpc_eval(f.rhs(), truth);
    case Kind::Imp:
      return !cpc_eval(f.lhs(), truth) || cpc_eval(f.rhs(), truth);
    case Kind::Box:
      throw DomainError("cpc_eval: formula contains box");
  }
  throw LmError("unreachable");
}

inline bool cpc_valid(Formula f) {
  if (!f.is_propositional()) throw DomainError("cpc_valid: formula has box");
  std::vector<Var> vs = vars_of(f);
  if (vs.size() > 20) throw LimitError("cpc_valid: too many variables");
  uint64_t count = uint64_t{1} << vs.size();
  for (uint64_t m = 0; m < count; ++m) {
    uint64_t truth = 0;
    for (size_t i = 0; i < vs.size(); ++i)
      if ((m >> i) & 1) truth |= uint64_t{1} << vs[i];
    if (!cpc_eval(f, truth)) return false;
  }
  return true;
}

// (/\_{x in vars(f)} (x \/ ~x)) -> f, the intuitionistically provable residue
// of a classical tautology.  Variables ascending; conjunction nested to the
// right; a variable-free tautology reduces to itself.
inline Formula atom_em_reduction(Formula f) {
  if (!cpc_valid(f))
    throw DomainError("atom_em_reduction: not a classical tautology");
  std::vector<Var> vs = vars_of(f);
  if (vs.empty()) return f;
  Formula em;
  for (size_t i = vs.size(); i-- > 0;) {
    Formula x = Formula::atom(vs[i]);
    Formula e = Formula::disj(x, Formula::neg(x));
    em = em.valid() ? Formula::conj(e, em) : e;
  }
  return Formula::imp(em, f);
}

// ---------------------------------------------------------------------------
// Full decision pipeline.

struct IpcVerdict {
  bool provable = false;
  HilbertProof proof;  // provable: checks against the sequent
  Nd term;             // provable: the raw witness
  KripkeModel model;   // refutable: root forces premises, refutes goal
};

inline IpcVerdict ipc_prove(const std::vector<Formula>& premises,
                            Formula goal, long fuel = 2'000'000) {
  auto r = ipc_search(premises, goal, fuel);
  IpcVerdict v;
  if (Nd* t = std::get_if<Nd>(&r)) {
    v.provable = true;
    v.term = *t;
    Sequent s{premises, goal};
    v.proof = compile_to_hilbert(s, *t);
    HCheck c = check_hilbert_ipc(v.proof, s);
    if (!c) throw SoundnessError("compiled proof rejected: " + c.reason);
  } else {
    v.provable = false;
    v.model = std::get<KripkeModel>(r);
  }
  return v;
}

namespace detail {

// Abstract every outermost repeated non-atomic subformula by a fresh atom.
// The input is a substitution instance of the result, so provability of the
// result implies provability of the input; the converse can fail, so callers
// may only use an accepting answer.  Returns the input unchanged when there
// is nothing to abstract or a safety cap is hit.
inline Formula generalize_repeats(Formula f) {
  if (!f.is_propositional()) return f;
  std::unordered_map<Formula, int, FormulaHash> cnt;
  long visits = 0;
  auto count = [&](auto&& self, Formula t) -> bool {
    if (++visits > 200'000) return false;  // interning can share subtrees
    if (t.kind() == Kind::Bot || t.kind() == Kind::Atom) return true;
    ++cnt[t];
    return self(self, t.lhs()) && self(self, t.rhs());
  };
  if (!count(count, f)) return f;

  int candidates = 0;
  for (const auto& [t, c] : cnt)
    if (c >= 2 && t != f) ++candidates;
  if (candidates == 0 || f.max_var() + candidates >= 64) return f;

  std::unordered_map<Formula, Formula, FormulaHash> fresh;
  Var next = f.max_var() + 1;
  auto rewrite = [&](auto&& self, Formula t) -> Formula {
    if (t.kind() == Kind::Bot || t.kind() == Kind::Atom) return t;
    if (auto it = cnt.find(t); it != cnt.end() && it->second >= 2 && t != f) {
      auto [fit, inserted] = fresh.try_emplace(t, Formula{});
      if (inserted) fit->second = Formula::atom(next++);
      return fit->second;
    }
    Formula l = self(self, t.lhs());
    Formula r = self(self, t.rhs());
    switch (t.kind()) {
      case Kind::Imp: return Formula::imp(l, r);
      case Kind::Or: return Formula::disj(l, r);
      default: return Formula::conj(l, r);
    }
  };
  return rewrite(rewrite, f);
}

}  // namespace detail

// Memoized empty-premise provability.  Two shortcuts keep pathological
// search spaces out of the common paths: a provable generalization (with
// repeated subformulas abstracted) certifies provability by substitution,
// and a classical countermodel certifies unprovability.
inline bool ipc_tautology(Formula f) {
  static std::mutex mu;
  static std::unordered_map<Formula, bool, FormulaHash> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(f); it != cache.end()) return it->second;
  }
  bool r;
  Formula g = detail::generalize_repeats(f);
  if (g != f && ipc_tautology(g)) {
    r = true;
  } else if (f.is_propositional() && vars_of(f).size() <= 16 &&
             !cpc_valid(f)) {
    r = false;
  } else {
    r = std::holds_alternative<Nd>(ipc_search({}, f));
  }
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(f, r);
  return r;
}

}  // namespace lmodal
