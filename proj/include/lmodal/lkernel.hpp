#pragma once
// Trusted checker and proof construction for the modal logic L.
//
// Axiom schemes:
//   (I)   substitution instances of intuitionistic tautologies (recognized
//         via the box-free skeleton),
//   (II)  []a -> a,
//   (III) [](a->b) -> ([](b->c) -> [](a->c)),
//   (IV)  [](a\/b) -> ([]a \/ []b).
// Rules: modus ponens, and necessitation restricted to lines justified as
// axioms.  Two theorem schemes are built in: excluded middle a \/ ~a, and
// the substitution principle (a == b) -> (c[x:=a] == c[x:=b]) where == is
// strict equivalence.

#include <string>
#include <unordered_map>
#include <vector>

#include "lmodal/formula.hpp"
#include "lmodal/hilbert.hpp"

namespace lmodal {

inline Formula em_formula(Formula a) { return Formula::disj(a, Formula::neg(a)); }

inline Formula sp_formula(Formula a, Formula b, Formula c, Var x) {
  return Formula::imp(
      Formula::equiv(a, b),
      Formula::equiv(substitute(c, x, a), substitute(c, x, b)));
}

enum class LTag : uint8_t { AxI, AxII, AxIII, AxIV, Hyp, MP, AN, ThmEM, ThmSP };

inline const char* l_tag_name(LTag t) {
  static const char* names[] = {"axI", "axII", "axIII", "axIV", "hyp",
                                "mp",  "an",   "em",    "sp"};
  return names[static_cast<int>(t)];
}

inline bool l_tag_is_axiom(LTag t) {
  return t == LTag::AxI || t == LTag::AxII || t == LTag::AxIII ||
         t == LTag::AxIV;
}

struct LJust {
  LTag tag;
  int i = -1, j = -1;  // Hyp: premise; MP: minor, major; AN: cited line
  Formula a, b, c;     // ThmSP payload (a == phi, b == psi, c == chi)
  Var x = -1;          // ThmSP payload
};

struct LLine {
  Formula f;
  LJust just;
};

struct LProof {
  std::vector<Formula> premises;
  std::vector<LLine> lines;
  Formula conclusion() const {
    if (lines.empty()) throw DomainError("empty proof");
    return lines.back().f;
  }
};

// ---------------------------------------------------------------------------
// Axiom recognition.

inline bool ax_i_matches(Formula f) { return ipc_tautology(skeleton(f).body); }

inline bool ax_ii_matches(Formula f) {
  return f.kind() == Kind::Imp && f.lhs().kind() == Kind::Box &&
         f.lhs().body() == f.rhs();
}

inline bool ax_iii_matches(Formula f) {
  if (f.kind() != Kind::Imp) return false;
  Formula l = f.lhs(), r = f.rhs();
  if (l.kind() != Kind::Box || l.body().kind() != Kind::Imp) return false;
  Formula a = l.body().lhs(), b = l.body().rhs();
  if (r.kind() != Kind::Imp) return false;
  Formula m = r.lhs(), o = r.rhs();
  if (m.kind() != Kind::Box || m.body().kind() != Kind::Imp) return false;
  if (o.kind() != Kind::Box || o.body().kind() != Kind::Imp) return false;
  Formula b2 = m.body().lhs(), cc = m.body().rhs();
  Formula a2 = o.body().lhs(), c2 = o.body().rhs();
  return b2 == b && a2 == a && c2 == cc;
}

inline bool ax_iv_matches(Formula f) {
  if (f.kind() != Kind::Imp) return false;
  Formula l = f.lhs(), r = f.rhs();
  if (l.kind() != Kind::Box || l.body().kind() != Kind::Or) return false;
  if (r.kind() != Kind::Or) return false;
  return r.lhs().kind() == Kind::Box && r.rhs().kind() == Kind::Box &&
         r.lhs().body() == l.body().lhs() && r.rhs().body() == l.body().rhs();
}

// Lowest-numbered matching scheme (1..4), or 0 if none.
inline int match_axiom(Formula f) {
  if (ax_i_matches(f)) return 1;
  if (ax_ii_matches(f)) return 2;
  if (ax_iii_matches(f)) return 3;
  if (ax_iv_matches(f)) return 4;
  return 0;
}

// ---------------------------------------------------------------------------
// Checking.

struct LCheck {
  bool ok = true;
  int bad_line = -1;  // 0-based; diagnostics print 1-based
  std::string reason;
  explicit operator bool() const { return ok; }
};

inline LCheck l_fail(int line, const std::string& reason) {
  return LCheck{false, line,
                "line " + std::to_string(line + 1) + ": " + reason};
}

inline LCheck check_lproof(const LProof& p) {
  if (p.lines.empty()) return LCheck{false, -1, "empty proof"};
  for (const Formula& f : p.premises)
    if (!f.valid()) return LCheck{false, -1, "invalid premise"};
  for (size_t k = 0; k < p.lines.size(); ++k) {
    const LLine& ln = p.lines[k];
    if (!ln.f.valid()) return l_fail(k, "invalid formula");
    switch (ln.just.tag) {
      case LTag::AxI:
        if (!ax_i_matches(ln.f))
          return l_fail(k,
                        "not an axiom (I) instance: the box-free skeleton is "
                        "not an intuitionistic tautology");
        break;
      case LTag::AxII:
        if (!ax_ii_matches(ln.f))
          return l_fail(k, "not an axiom (II) instance");
        break;
      case LTag::AxIII:
        if (!ax_iii_matches(ln.f))
          return l_fail(k, "not an axiom (III) instance");
        break;
      case LTag::AxIV:
        if (!ax_iv_matches(ln.f))
          return l_fail(k, "not an axiom (IV) instance");
        break;
      case LTag::Hyp:
        if (ln.just.i < 0 ||
            ln.just.i >= static_cast<int>(p.premises.size()))
          return l_fail(k, "hypothesis index out of range");
        if (p.premises[ln.just.i] != ln.f)
          return l_fail(k, "formula differs from cited premise");
        break;
      case LTag::MP: {
        int i = ln.just.i, j = ln.just.j;
        if (i < 0 || j < 0 || i >= static_cast<int>(k) ||
            j >= static_cast<int>(k))
          return l_fail(k, "modus ponens must cite earlier lines");
        Formula major = p.lines[j].f;
        if (major.kind() != Kind::Imp || major.lhs() != p.lines[i].f ||
            major.rhs() != ln.f)
          return l_fail(k, "modus ponens shape mismatch");
        break;
      }
      case LTag::AN: {
        int i = ln.just.i;
        if (i < 0 || i >= static_cast<int>(k))
          return l_fail(k, "necessitation must cite an earlier line");
        if (!l_tag_is_axiom(p.lines[i].just.tag))
          return l_fail(
              k, "necessitation may only cite an axiom line, but line " +
                     std::to_string(i + 1) + " is justified by " +
                     l_tag_name(p.lines[i].just.tag));
        if (ln.f != Formula::box(p.lines[i].f))
          return l_fail(k, "necessitation result is not the boxed premise");
        break;
      }
      case LTag::ThmEM: {
        Formula f = ln.f;
        bool ok = f.kind() == Kind::Or && f.rhs().kind() == Kind::Imp &&
                  f.rhs().rhs().kind() == Kind::Bot &&
                  f.rhs().lhs() == f.lhs();
        if (!ok) return l_fail(k, "not an excluded-middle instance");
        break;
      }
      case LTag::ThmSP: {
        if (!ln.just.a.valid() || !ln.just.b.valid() || !ln.just.c.valid() ||
            ln.just.x < 0)
          return l_fail(k, "missing substitution-principle payload");
        if (ln.f != sp_formula(ln.just.a, ln.just.b, ln.just.c, ln.just.x))
          return l_fail(
              k, "formula is not the recorded substitution-principle "
                 "instance");
        break;
      }
    }
  }
  return LCheck{};
}

// ---------------------------------------------------------------------------
// Builder with formula-level line reuse.  Necessitation must cite a line
// justified as an axiom, so axiom-justified lines are indexed separately.

class LProofBuilder {
 public:
  explicit LProofBuilder(std::vector<Formula> premises = {})
      : premises_(std::move(premises)) {}

  int ax_i(Formula f) {
    if (!ax_i_matches(f))
      throw DomainError("ax_i: skeleton body is not an IPC tautology: " +
                        print(f));
    return push_axiom(f, LJust{LTag::AxI, -1, -1, {}, {}, {}, -1});
  }
  int ax_ii(Formula a) {
    Formula f = Formula::imp(Formula::box(a), a);
    return push_axiom(f, LJust{LTag::AxII, -1, -1, {}, {}, {}, -1});
  }
  int ax_iii(Formula a, Formula b, Formula c) {
    Formula f = Formula::imp(
        Formula::box(Formula::imp(a, b)),
        Formula::imp(Formula::box(Formula::imp(b, c)),
                     Formula::box(Formula::imp(a, c))));
    return push_axiom(f, LJust{LTag::AxIII, -1, -1, {}, {}, {}, -1});
  }
  int ax_iv(Formula a, Formula b) {
    Formula f = Formula::imp(
        Formula::box(Formula::disj(a, b)),
        Formula::disj(Formula::box(a), Formula::box(b)));
    return push_axiom(f, LJust{LTag::AxIV, -1, -1, {}, {}, {}, -1});
  }

  int hyp(int i) {
    if (i < 0 || i >= static_cast<int>(premises_.size()))
      throw DomainError("hyp index out of range");
    Formula f = premises_[i];
    if (auto it = index_.find(f); it != index_.end()) return it->second;
    return push(f, LJust{LTag::Hyp, i, -1, {}, {}, {}, -1});
  }

  int mp(int minor, int major) {
    check_line(minor);
    check_line(major);
    Formula mf = lines_[major].f;
    if (mf.kind() != Kind::Imp || mf.lhs() != lines_[minor].f)
      throw LmError("builder: modus ponens shape mismatch");
    Formula f = mf.rhs();
    if (auto it = index_.find(f); it != index_.end()) return it->second;
    return push(f, LJust{LTag::MP, minor, major, {}, {}, {}, -1});
  }

  int an(int axline) {
    check_line(axline);
    if (!l_tag_is_axiom(lines_[axline].just.tag))
      throw LmError("builder: necessitation of a non-axiom line");
    Formula f = Formula::box(lines_[axline].f);
    if (auto it = index_.find(f); it != index_.end()) return it->second;
    return push(f, LJust{LTag::AN, axline, -1, {}, {}, {}, -1});
  }

  int em(Formula a) {
    Formula f = em_formula(a);
    if (auto it = index_.find(f); it != index_.end()) return it->second;
    return push(f, LJust{LTag::ThmEM, -1, -1, {}, {}, {}, -1});
  }

  int sp(Formula a, Formula b, Formula c, Var x) {
    Formula f = sp_formula(a, b, c, x);
    if (auto it = index_.find(f); it != index_.end()) return it->second;
    return push(f, LJust{LTag::ThmSP, -1, -1, a, b, c, x});
  }

  Formula formula_of(int line) const {
    check_line(line);
    return lines_[line].f;
  }
  const std::vector<Formula>& premises() const { return premises_; }

  // Finish so that the conclusion sits on the last line.
  LProof finish(int concl) && {
    check_line(concl);
    if (static_cast<size_t>(concl) + 1 != lines_.size()) {
      Formula f = lines_[concl].f;
      int taut = ax_i(Formula::imp(f, f));
      push(f, LJust{LTag::MP, concl, taut, {}, {}, {}, -1});
    }
    return LProof{std::move(premises_), std::move(lines_)};
  }

 private:
  void check_line(int i) const {
    if (i < 0 || static_cast<size_t>(i) >= lines_.size())
      throw DomainError("builder: line index out of range");
  }

  int push(Formula f, const LJust& j) {
    lines_.push_back({f, j});
    int idx = static_cast<int>(lines_.size()) - 1;
    index_.emplace(f, idx);
    return idx;
  }
  int push_axiom(Formula f, const LJust& j) {
    if (auto it = axiom_index_.find(f); it != axiom_index_.end())
      return it->second;
    lines_.push_back({f, j});
    int idx = static_cast<int>(lines_.size()) - 1;
    axiom_index_.emplace(f, idx);
    index_.emplace(f, idx);  // keeps the first line; fine either way
    return idx;
  }

  std::vector<Formula> premises_;
  std::vector<LLine> lines_;
  std::unordered_map<Formula, int, FormulaHash> index_;
  std::unordered_map<Formula, int, FormulaHash> axiom_index_;
};

// ---------------------------------------------------------------------------
// Derived theorems.

namespace detail {

// Lines proving  []a -> [](T -> a)  and  [](T -> a) -> []a.
inline std::pair<int, int> derive_box_mono_pair(LProofBuilder& b, Formula a) {
  using F = Formula;
  F top = F::top();
  F ta = F::imp(top, a);

  int l1 = b.ax_i(F::imp(a, ta));
  int l2 = b.an(l1);  // [](a -> (T -> a))
  int l3 = b.ax_i(F::imp(ta, a));
  int l4 = b.an(l3);  // []((T -> a) -> a)

  F bx1 = F::box(F::imp(a, ta)), bx2 = F::box(F::imp(ta, a));
  int glue = b.ax_i(F::imp(bx1, F::imp(bx2, F::conj(bx1, bx2))));
  int e1 = b.mp(l4, b.mp(l2, glue));  // a == (T -> a)

  Var x = a.max_var() + 1;
  int lsp = b.sp(a, ta, F::box(F::atom(x)), x);
  int le = b.mp(e1, lsp);  // []a == [](T -> a)

  F big1 = F::box(F::imp(F::box(a), F::box(ta)));
  F big2 = F::box(F::imp(F::box(ta), F::box(a)));
  int p1 = b.ax_i(F::imp(F::conj(big1, big2), big1));
  int m1 = b.mp(le, p1);
  int u1 = b.ax_ii(F::imp(F::box(a), F::box(ta)));
  int fwd = b.mp(m1, u1);  // []a -> [](T -> a)

  int p2 = b.ax_i(F::imp(F::conj(big1, big2), big2));
  int m2 = b.mp(le, p2);
  int u2 = b.ax_ii(F::imp(F::box(ta), F::box(a)));
  int bwd = b.mp(m2, u2);  // [](T -> a) -> []a
  return {fwd, bwd};
}

}  // namespace detail

// Line proving the distribution law  [](a -> b) -> ([]a -> []b).
inline int derive_K_line(LProofBuilder& b, Formula a, Formula bb) {
  using F = Formula;
  F top = F::top();
  int x1 = detail::derive_box_mono_pair(b, a).first;    // []a -> [](T->a)
  int x2 = detail::derive_box_mono_pair(b, bb).second;  // [](T->b) -> []b
  int l3 = b.ax_iii(top, a, bb);
  // [](T->a) -> ([](a->b) -> [](T->b))

  F A = F::box(a), B = F::box(F::imp(top, a)), K = F::box(F::imp(a, bb));
  F C = F::box(F::imp(top, bb)), D = F::box(bb);
  int glue = b.ax_i(F::imp(
      F::imp(A, B),
      F::imp(F::imp(B, F::imp(K, C)),
             F::imp(F::imp(C, D), F::imp(K, F::imp(A, D))))));
  return b.mp(x2, b.mp(l3, b.mp(x1, glue)));
}

inline LProof derive_K(Formula a, Formula b) {
  LProofBuilder bld;
  int l = derive_K_line(bld, a, b);
  return std::move(bld).finish(l);
}

// Line proving  []a <-> (a == T).
inline int derive_box_top_equiv_line(LProofBuilder& b, Formula a) {
  using F = Formula;
  F top = F::top();
  auto [x1, x2] = detail::derive_box_mono_pair(b, a);
  int bt = b.an(b.ax_i(F::imp(a, top)));  // [](a -> T)

  F P = F::box(F::imp(a, top)), A = F::box(a), C = F::box(F::imp(top, a));
  int glue1 = b.ax_i(
      F::imp(P, F::imp(F::imp(A, C), F::imp(A, F::conj(P, C)))));
  int dir1 = b.mp(x1, b.mp(bt, glue1));  // []a -> (a == T)

  int glue2 = b.ax_i(F::imp(F::imp(C, A), F::imp(F::conj(P, C), A)));
  int dir2 = b.mp(x2, glue2);  // (a == T) -> []a

  F f1 = b.formula_of(dir1), f2 = b.formula_of(dir2);
  int glue3 = b.ax_i(F::imp(f1, F::imp(f2, F::conj(f1, f2))));
  return b.mp(dir2, b.mp(dir1, glue3));
}

inline LProof derive_box_top_equiv(Formula a) {
  LProofBuilder bld;
  int l = derive_box_top_equiv_line(bld, a);
  return std::move(bld).finish(l);
}

// Line proving  [](a /\ b) <-> ([]a /\ []b).
inline int derive_box_conj_line(LProofBuilder& b, Formula a, Formula bb) {
  using F = Formula;
  F ab = F::conj(a, bb);

  int c1 = b.an(b.ax_i(F::imp(ab, a)));
  int m1 = b.mp(c1, derive_K_line(b, ab, a));  // [](a/\b) -> []a
  int c2 = b.an(b.ax_i(F::imp(ab, bb)));
  int m2 = b.mp(c2, derive_K_line(b, ab, bb));  // [](a/\b) -> []b

  F BA = F::box(ab), X = F::box(a), Y = F::box(bb);
  int glueA = b.ax_i(F::imp(F::imp(BA, X),
                            F::imp(F::imp(BA, Y),
                                   F::imp(BA, F::conj(X, Y)))));
  int dirA = b.mp(m2, b.mp(m1, glueA));

  int c3 = b.an(b.ax_i(F::imp(a, F::imp(bb, ab))));
  int m3 = b.mp(c3, derive_K_line(b, a, F::imp(bb, ab)));
  // []a -> [](b -> (a/\b))
  int k4 = derive_K_line(b, bb, ab);  // [](b -> (a/\b)) -> ([]b -> [](a/\b))

  F B2 = F::box(F::imp(bb, ab));
  int glueB = b.ax_i(
      F::imp(F::imp(X, B2),
             F::imp(F::imp(B2, F::imp(Y, BA)), F::imp(F::conj(X, Y), BA))));
  int dirB = b.mp(k4, b.mp(m3, glueB));

  F f1 = b.formula_of(dirA), f2 = b.formula_of(dirB);
  int glue3 = b.ax_i(F::imp(f1, F::imp(f2, F::conj(f1, f2))));
  return b.mp(dirB, b.mp(dirA, glue3));
}

inline LProof derive_box_conj(Formula a, Formula b) {
  LProofBuilder bld;
  int l = derive_box_conj_line(bld, a, b);
  return std::move(bld).finish(l);
}

// ---------------------------------------------------------------------------
// Embedding: from an intuitionistic Hilbert proof of G |- f, a proof of
// []G |- []f.

inline LProof embed_ipc(const HilbertProof& hp) {
  Sequent s{hp.premises, hp.conclusion()};
  HCheck hc = check_hilbert_ipc(hp, s);
  if (!hc) throw DomainError("embed_ipc: input proof invalid: " + hc.reason);

  std::vector<Formula> boxed;
  boxed.reserve(hp.premises.size());
  for (Formula f : hp.premises) boxed.push_back(Formula::box(f));
  LProofBuilder b(boxed);

  std::vector<int> map(hp.lines.size());
  for (size_t k = 0; k < hp.lines.size(); ++k) {
    const HLine& ln = hp.lines[k];
    switch (ln.just.tag) {
      case HJust::Tag::Axiom:
        map[k] = b.an(b.ax_i(ln.f));
        break;
      case HJust::Tag::Hyp:
        map[k] = b.hyp(ln.just.i);
        break;
      case HJust::Tag::MP: {
        Formula chi = hp.lines[ln.just.i].f;
        int kline = derive_K_line(b, chi, ln.f);
        int step = b.mp(map[ln.just.j], kline);  // []chi -> []f
        map[k] = b.mp(map[ln.just.i], step);
        break;
      }
    }
  }
  return std::move(b).finish(map.back());
}

// ---------------------------------------------------------------------------
// Deduction transform for L: from a checked proof of G + occurrences of a,
// conclude G |- a -> conclusion, with necessitation lines left untouched.

namespace detail {

class LDeduct {
 public:
  LDeduct(const LProof& in, Formula a) : in_(in), a_(a) {
    std::vector<Formula> keep;
    prem_map_.assign(in.premises.size(), -1);
    for (size_t i = 0; i < in.premises.size(); ++i)
      if (in.premises[i] != a) {
        prem_map_[i] = static_cast<int>(keep.size());
        keep.push_back(in.premises[i]);
      }
    out_ = std::make_unique<LProofBuilder>(std::move(keep));
    dep_.resize(in.lines.size());
    plain_.assign(in.lines.size(), -1);
    lifted_.assign(in.lines.size(), -1);
    for (size_t k = 0; k < in.lines.size(); ++k) {
      const LJust& j = in.lines[k].just;
      if (j.tag == LTag::Hyp)
        dep_[k] = in.premises[j.i] == a;
      else if (j.tag == LTag::MP)
        dep_[k] = dep_[j.i] || dep_[j.j];
      else
        dep_[k] = false;
    }
  }

  LProof run() {
    int concl = lifted(static_cast<int>(in_.lines.size()) - 1);
    return std::move(*out_).finish(concl);
  }

 private:
  int plain(int k) {
    if (plain_[k] >= 0) return plain_[k];
    const LLine& ln = in_.lines[k];
    int r;
    switch (ln.just.tag) {
      case LTag::AxI:
        r = out_->ax_i(ln.f);
        break;
      case LTag::AxII:
        r = out_->ax_ii(ln.f.rhs());
        break;
      case LTag::AxIII:
        r = out_->ax_iii(ln.f.lhs().body().lhs(), ln.f.lhs().body().rhs(),
                         ln.f.rhs().lhs().body().rhs());
        break;
      case LTag::AxIV:
        r = out_->ax_iv(ln.f.lhs().body().lhs(), ln.f.lhs().body().rhs());
        break;
      case LTag::Hyp:
        r = out_->hyp(prem_map_[ln.just.i]);
        break;
      case LTag::MP:
        r = out_->mp(plain(ln.just.i), plain(ln.just.j));
        break;
      case LTag::AN:
        r = out_->an(plain(ln.just.i));
        break;
      case LTag::ThmEM:
        r = out_->em(ln.f.lhs());
        break;
      case LTag::ThmSP:
        r = out_->sp(ln.just.a, ln.just.b, ln.just.c, ln.just.x);
        break;
      default:
        throw LmError("unreachable");
    }
    return plain_[k] = r;
  }

  int lifted(int k) {
    if (lifted_[k] >= 0) return lifted_[k];
    const LLine& ln = in_.lines[k];
    int r;
    if (!dep_[k]) {
      int base = plain(k);
      int w = out_->ax_i(Formula::imp(ln.f, Formula::imp(a_, ln.f)));
      r = out_->mp(base, w);
    } else if (ln.just.tag == LTag::Hyp) {
      r = out_->ax_i(Formula::imp(a_, a_));
    } else {
      Formula chi = in_.lines[ln.just.i].f;
      Formula psi = ln.f;
      int lj = lifted(ln.just.j);
      int li = lifted(ln.just.i);
      int a2 = out_->ax_i(
          Formula::imp(Formula::imp(a_, Formula::imp(chi, psi)),
                       Formula::imp(Formula::imp(a_, chi),
                                    Formula::imp(a_, psi))));
      r = out_->mp(li, out_->mp(lj, a2));
    }
    return lifted_[k] = r;
  }

  const LProof& in_;
  Formula a_;
  std::unique_ptr<LProofBuilder> out_;
  std::vector<int> prem_map_;
  std::vector<bool> dep_;
  std::vector<int> plain_, lifted_;
};

}  // namespace detail

inline LProof deduction_transform(const LProof& p, Formula a) {
  LCheck c = check_lproof(p);
  if (!c) throw DomainError("deduction_transform: input invalid: " + c.reason);
  return detail::LDeduct(p, a).run();
}

// ---------------------------------------------------------------------------
// Classical tautologies are theorems of L: discharge the excluded-middle
// conjunction of atom_em_reduction with the built-in theorem scheme.

inline LProof classical_proof(Formula f) {
  if (!f.is_propositional())
    throw DomainError("classical_proof: formula contains box");
  Formula red = atom_em_reduction(f);  // throws unless cpc_valid
  LProofBuilder b;
  int lred = b.ax_i(red);
  std::vector<Var> vs = vars_of(f);
  if (vs.empty()) return std::move(b).finish(lred);

  // Right-nested conjunction of the excluded-middle instances.
  int cur = b.em(Formula::atom(vs.back()));
  Formula cur_f = b.formula_of(cur);
  for (size_t i = vs.size() - 1; i-- > 0;) {
    int e = b.em(Formula::atom(vs[i]));
    Formula ef = b.formula_of(e);
    int glue = b.ax_i(
        Formula::imp(ef, Formula::imp(cur_f, Formula::conj(ef, cur_f))));
    cur = b.mp(cur, b.mp(e, glue));
    cur_f = Formula::conj(ef, cur_f);
  }
  return std::move(b).finish(b.mp(cur, lred));
}

}  // namespace lmodal
