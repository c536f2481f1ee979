#pragma once
// Semantic laboratory: the Kripke-to-algebra transfer, batch verification of
// the provability/refutability dichotomy, countermodel search over enumerated
// models, the identity/substitution/truth-predicate property suites, and the
// exhaustive fragment sweep.

#include <filesystem>
#include <iomanip>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lmodal/algebra.hpp"
#include "lmodal/hilbert.hpp"
#include "lmodal/ipc.hpp"
#include "lmodal/kripke.hpp"
#include "lmodal/lkernel.hpp"
#include "lmodal/rng.hpp"
#include "lmodal/serialize.hpp"

namespace lmodal {

// ---------------------------------------------------------------------------
// Transfer: from a rooted intuitionistic Kripke model to an algebraic model.
//
// The algebra consists of upward-closed world sets: the subalgebra of the
// upset lattice generated by the valuation upsets under intersection, union,
// and the standard implication (the largest upset whose intersection with A
// lies in B).  The full upset lattice grows multiplicatively with branching
// and quickly exceeds desk scale, while the generated subalgebra contains
// eval of every formula over the model's variables, which is all the
// evidence needs; order, the operations, and the conditions below are all
// inherited, so nothing else changes.  Because the frame is rooted, the full
// set is the only upset containing the root, so the algebra has the
// disjunction property and the trivial box is a legal modal operation.  TRUE
// is the ultrafilter of upsets containing a fixed maximal world.  The
// assignment sends every variable to the upset of worlds where it holds,
// which makes eval(f) the upset of worlds forcing f; in particular box(f)
// lands in TRUE exactly when the root forces f.

inline std::pair<LModel, Assignment> kripke_to_lmodel(const KripkeModel& k) {
  if (auto why = validate_kripke(k))
    throw DomainError("kripke_to_lmodel: " + *why);
  int n = k.size();
  uint32_t full = n == 32 ? ~uint32_t{0} : (uint32_t{1} << n) - 1;

  auto upset_imp = [&](uint32_t a, uint32_t b) {
    uint32_t im = 0;
    for (int w = 0; w < n; ++w)
      if (!(k.up[w] & a & ~b)) im |= uint32_t{1} << w;
    return im;
  };

  std::set<uint32_t> elems = {0, full};
  for (Var x = 0; x < 64; ++x) {
    uint32_t mask = 0;
    for (int w = 0; w < n; ++w)
      if ((k.val[w] >> x) & 1) mask |= uint32_t{1} << w;
    elems.insert(mask);
  }
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<uint32_t> cur(elems.begin(), elems.end());
    for (uint32_t a : cur)
      for (uint32_t b : cur) {
        grew |= elems.insert(a & b).second;
        grew |= elems.insert(a | b).second;
        grew |= elems.insert(upset_imp(a, b)).second;
      }
    if (elems.size() > 32)
      throw LimitError("kripke_to_lmodel: generated algebra above 32 elements");
  }

  std::vector<uint32_t> ups(elems.begin(), elems.end());
  std::unordered_map<uint32_t, int> idx;
  for (size_t i = 0; i < ups.size(); ++i) idx[ups[i]] = static_cast<int>(i);

  Heyting h;
  h.n = static_cast<int>(ups.size());
  h.bot = idx.at(0);
  h.top = idx.at(full);
  h.meet_t.resize(h.n * h.n);
  h.join_t.resize(h.n * h.n);
  h.imp_t.resize(h.n * h.n);
  for (int a = 0; a < h.n; ++a)
    for (int b = 0; b < h.n; ++b) {
      h.meet_t[a * h.n + b] = static_cast<uint8_t>(idx.at(ups[a] & ups[b]));
      h.join_t[a * h.n + b] = static_cast<uint8_t>(idx.at(ups[a] | ups[b]));
      h.imp_t[a * h.n + b] =
          static_cast<uint8_t>(idx.at(upset_imp(ups[a], ups[b])));
    }

  int wstar = -1;
  for (int w = 0; w < n; ++w)
    if (k.up[w] == (uint32_t{1} << w)) {
      wstar = w;
      break;
    }
  if (wstar < 0) throw SoundnessError("kripke_to_lmodel: no maximal world");

  LModel m;
  m.H = h;
  m.box = trivial_box(h);
  for (int i = 0; i < h.n; ++i)
    if ((ups[i] >> wstar) & 1) m.true_mask |= uint32_t{1} << i;

  Assignment g;
  for (Var x = 0; x < 64; ++x) {
    uint32_t mask = 0;
    for (int w = 0; w < n; ++w)
      if ((k.val[w] >> x) & 1) mask |= uint32_t{1} << w;
    auto it = idx.find(mask);
    if (it == idx.end())
      throw SoundnessError("kripke_to_lmodel: valuation not monotone");
    g[x] = it->second;
  }

  if (auto why = check_model_conditions(m))
    throw SoundnessError("kripke_to_lmodel: produced invalid model: " + *why);
  return {m, g};
}

// ---------------------------------------------------------------------------
// Batch verification: a goal is either provable, with a kernel-checked proof
// of the boxed sequent, or refutable, with a transferred model as evidence.

struct Verdict {
  std::vector<Formula> premises;
  Formula formula;
  bool provable = false;
  HilbertProof hproof;  // provable: the intermediate implicational proof
  LProof lproof;        // provable: box(premises) |- box(formula), checked
  KripkeModel kripke;   // refutable: the search countermodel
  LModel model;         // refutable: transferred from kripke
  Assignment gamma;     // refutable: transferred assignment
};

inline Verdict verify_main_theorem(const std::vector<Formula>& premises,
                                   Formula goal, long fuel = 2'000'000) {
  Verdict v;
  v.premises = premises;
  v.formula = goal;
  IpcVerdict iv = ipc_prove(premises, goal, fuel);
  if (iv.provable) {
    v.provable = true;
    v.hproof = iv.proof;
    v.lproof = embed_ipc(iv.proof);
    LCheck c = check_lproof(v.lproof);
    if (!c)
      throw SoundnessError("verify_main_theorem: embedded proof rejected: " +
                           c.reason);
    if (v.lproof.conclusion() != Formula::box(goal))
      throw SoundnessError("verify_main_theorem: wrong embedded conclusion");
    std::vector<Formula> boxed;
    for (Formula f : premises) boxed.push_back(Formula::box(f));
    if (v.lproof.premises != boxed)
      throw SoundnessError("verify_main_theorem: wrong embedded premises");
  } else {
    v.kripke = iv.model;
    auto [m, g] = kripke_to_lmodel(iv.model);
    v.model = m;
    v.gamma = g;
    for (Formula f : premises)
      if (!satisfies(v.model, v.gamma, Formula::box(f)))
        throw SoundnessError(
            "verify_main_theorem: transferred model fails a boxed premise");
    if (satisfies(v.model, v.gamma, Formula::box(goal)))
      throw SoundnessError(
          "verify_main_theorem: transferred model satisfies the boxed goal");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Assignment iteration.  Calls fn for every assignment of vars into
// [0, n); fn returning true stops early.  Returns whether it was stopped.

template <class F>
inline bool for_each_assignment(std::vector<Var> vars, int n, F&& fn) {
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  Assignment g;
  for (Var v : vars) g[v] = 0;
  if (n <= 0) return false;
  std::vector<int> pick(vars.size(), 0);
  for (;;) {
    if (fn(g)) return true;
    size_t i = 0;
    while (i < vars.size()) {
      if (++pick[i] < n) {
        g[vars[i]] = pick[i];
        break;
      }
      pick[i] = 0;
      g[vars[i]] = 0;
      ++i;
    }
    if (i == vars.size()) return false;
  }
}

// ---------------------------------------------------------------------------
// Countermodel search over all enumerated models.  Best effort: a not-found
// answer carries no completeness claim, only the reason the search ended.

struct SearchBounds {
  int max_algebra = 4;
  long max_checks = 5'000'000;
};

struct SearchResult {
  bool found = false;
  LModel model;
  Assignment gamma;
  std::string reason;  // when not found
};

inline SearchResult countermodel_search(const std::vector<Formula>& premises,
                                        Formula goal,
                                        const SearchBounds& b = {}) {
  std::set<Var> vs;
  for (Formula f : premises)
    for (Var v : vars_of(f)) vs.insert(v);
  for (Var v : vars_of(goal)) vs.insert(v);
  std::vector<Var> vars(vs.begin(), vs.end());

  long checks = 0;
  bool truncated = false;
  for (const LModel& m : enumerate_lmodels(b.max_algebra)) {
    long tot = 1;
    for (size_t i = 0; i < vars.size(); ++i) {
      tot *= m.H.n;
      if (tot > b.max_checks) break;
    }
    if (checks + tot > b.max_checks) {
      truncated = true;
      continue;
    }
    SearchResult r;
    bool stopped = for_each_assignment(vars, m.H.n, [&](const Assignment& g) {
      ++checks;
      for (Formula f : premises)
        if (!satisfies(m, g, f)) return false;
      if (satisfies(m, g, goal)) return false;
      r.found = true;
      r.model = m;
      r.gamma = g;
      return true;
    });
    if (stopped) return r;
  }
  SearchResult r;
  r.found = false;
  r.reason = truncated
                 ? "check budget exceeded after " + std::to_string(checks) +
                       " evaluations"
                 : "exhausted all models with at most " +
                       std::to_string(b.max_algebra) + " elements";
  return r;
}

// ---------------------------------------------------------------------------
// Property suites.

// The identity connective means evaluation equality: satisfies(a === b)
// exactly when eval(a) == eval(b).  Returns that biconditional.
inline bool check_identity_theorem(const LModel& m, const Assignment& g,
                                   Formula a, Formula b) {
  bool semantic = satisfies(m, g, Formula::equiv(a, b));
  bool algebraic = eval(m, g, a) == eval(m, g, b);
  return semantic == algebraic;
}

// The substitution principle instance (a === b) -> (c[x:=a] === c[x:=b])
// must be satisfied.  Returns whether it is.
inline bool check_sp_validity(const LModel& m, const Assignment& g, Formula a,
                              Formula b, Formula c, Var x) {
  return satisfies(m, g, sp_formula(a, b, c, x));
}

// ---------------------------------------------------------------------------
// Bounded truth predicate: all propositional formulas over the given
// variables, within the size bound, that evaluate to top.

struct BoundedPrimeTheory {
  LModel model;
  Assignment gamma;
  int size_bound = 0;
  std::vector<Formula> members;  // enumeration order
};

namespace detail {

inline Formula rename_vars(Formula f, const std::vector<Var>& to) {
  switch (f.kind()) {
    case Kind::Bot:
      return f;
    case Kind::Atom: {
      Var v = f.var();
      if (v < 0 || v >= static_cast<int>(to.size()))
        throw DomainError("rename_vars: variable out of range");
      return Formula::atom(to[v]);
    }
    case Kind::Imp:
      return Formula::imp(rename_vars(f.lhs(), to), rename_vars(f.rhs(), to));
    case Kind::Or:
      return Formula::disj(rename_vars(f.lhs(), to),
                           rename_vars(f.rhs(), to));
    case Kind::And:
      return Formula::conj(rename_vars(f.lhs(), to),
                           rename_vars(f.rhs(), to));
    case Kind::Box:
      return Formula::box(rename_vars(f.body(), to));
  }
  throw LmError("unreachable");
}

}  // namespace detail

inline BoundedPrimeTheory bounded_prime_theory(const LModel& m,
                                               const Assignment& g, int k,
                                               const std::vector<Var>& vars) {
  if (auto why = check_model_conditions(m))
    throw DomainError("bounded_prime_theory: invalid model: " + *why);
  EnumOptions opt;
  opt.num_vars = static_cast<int>(vars.size());
  opt.max_size = k;
  opt.with_neg = true;
  opt.with_box = false;

  bool identity = true;
  for (size_t i = 0; i < vars.size(); ++i)
    if (vars[i] != static_cast<Var>(i)) identity = false;

  BoundedPrimeTheory out;
  out.model = m;
  out.gamma = g;
  out.size_bound = k;
  std::unordered_set<Formula, FormulaHash> in;
  for (Formula f0 : enumerate_formulas(opt)) {
    Formula f = identity ? f0 : detail::rename_vars(f0, vars);
    if (eval(m, g, f) == m.H.top) {
      out.members.push_back(f);
      in.insert(f);
    }
  }

  // Bounded invariants; violations indicate a broken model or evaluator.
  if (in.count(Formula::bot()))
    throw SoundnessError("bounded_prime_theory: contains bottom");
  for (Formula f : out.members) {
    if (f.kind() == Kind::Imp && in.count(f.lhs()) && !in.count(f.rhs()))
      throw SoundnessError("bounded_prime_theory: not closed under detachment");
    if (f.kind() == Kind::Or && !in.count(f.lhs()) && !in.count(f.rhs()))
      throw SoundnessError("bounded_prime_theory: not prime");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Conservativity over classical propositional logic: truth-table validity,
// the classical proof constructor, and two-element countermodels must agree.

inline bool conservativity_check(Formula f) {
  if (!f.is_propositional())
    throw DomainError("conservativity_check: formula contains box");
  bool valid = cpc_valid(f);

  bool proved = false;
  try {
    LProof p = classical_proof(f);
    LCheck c = check_lproof(p);
    proved = c.ok && p.premises.empty() && p.conclusion() == f;
  } catch (DomainError&) {
    proved = false;
  }
  if (valid != proved) return false;

  if (!valid) {
    std::vector<Var> vars = vars_of(f);
    uint64_t found = 0;
    bool have = false;
    for (uint64_t t = 0; t < (uint64_t{1} << vars.size()) && !have; ++t) {
      uint64_t truth = 0;
      for (size_t i = 0; i < vars.size(); ++i)
        if ((t >> i) & 1) truth |= uint64_t{1} << vars[i];
      if (!cpc_eval(f, truth)) {
        found = truth;
        have = true;
      }
    }
    if (!have) return false;  // contradicts cpc_valid
    std::map<Var, bool> valuation;
    for (Var v : vars) valuation[v] = (found >> v) & 1;
    auto [m, g] = two_element_model_of(valuation);
    if (satisfies(m, g, f)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Soundness hook: every line of a premise-free accepted proof must evaluate
// into TRUE on every enumerated model under every assignment.

inline bool proof_lines_valid(const LProof& p, int max_algebra = 4) {
  if (!p.premises.empty())
    throw DomainError("proof_lines_valid: premises must be empty");
  LCheck c = check_lproof(p);
  if (!c) throw DomainError("proof_lines_valid: proof rejected: " + c.reason);
  for (const LModel& m : enumerate_lmodels(max_algebra))
    for (const LLine& ln : p.lines) {
      std::vector<Var> vars = vars_of(ln.f);
      if (vars.size() > 6)
        throw LimitError("proof_lines_valid: too many variables in a line");
      bool bad = for_each_assignment(vars, m.H.n, [&](const Assignment& g) {
        return !satisfies(m, g, ln.f);
      });
      if (bad) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Sweep: classify every propositional formula of the fragment, validate all
// evidence, cross-check the transfer, spot-check equivalence pairs, and
// record the non-normality separation.

struct SweepItem {
  Formula f;
  int cls = 0;  // 0 = ipc-provable, 1 = cpc-only, 2 = neither
  std::string evidence;
};

struct SweepReport {
  int num_vars = 2;
  int max_size = 7;
  uint64_t seed = 0;
  long count_ipc = 0, count_cpc_only = 0, count_neither = 0;
  long evidence_failures = 0;
  long transfer_checks = 0, transfer_failures = 0;
  long pair_checks = 0, pair_failures = 0;
  bool nonnormal_witness = false;
  std::vector<SweepItem> items;  // sorted by formula text
};

inline std::string write_sweep_report(const SweepReport& r) {
  std::string out = "sweep-report\n";
  out += "vars " + std::to_string(r.num_vars) + "\n";
  out += "size " + std::to_string(r.max_size) + "\n";
  out += "seed " + std::to_string(r.seed) + "\n";
  out += "count-ipc " + std::to_string(r.count_ipc) + "\n";
  out += "count-cpc-only " + std::to_string(r.count_cpc_only) + "\n";
  out += "count-neither " + std::to_string(r.count_neither) + "\n";
  out += "evidence-failures " + std::to_string(r.evidence_failures) + "\n";
  out += "transfer-checks " + std::to_string(r.transfer_checks) + "\n";
  out += "transfer-failures " + std::to_string(r.transfer_failures) + "\n";
  out += "pair-checks " + std::to_string(r.pair_checks) + "\n";
  out += "pair-failures " + std::to_string(r.pair_failures) + "\n";
  out += std::string("nonnormal-witness ") +
         (r.nonnormal_witness ? "yes" : "no") + "\n";
  for (const SweepItem& it : r.items) {
    const char* cls = it.cls == 0 ? "ipc" : it.cls == 1 ? "cpc-only" : "neither";
    out += "item ; " + print(it.f) + " ; " + cls + " ; " +
           (it.evidence.empty() ? "-" : it.evidence) + "\n";
  }
  out += "end\n";
  return out;
}

inline SweepReport sweep(int num_vars, int max_size, uint64_t seed = 0,
                         const std::string& out_dir = "") {
  if (num_vars < 1 || num_vars > 4)
    throw DomainError("sweep: vars out of range [1,4]");
  if (max_size < 1 || max_size > 9)
    throw DomainError("sweep: size out of range [1,9]");
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

  SweepReport rep;
  rep.num_vars = num_vars;
  rep.max_size = max_size;
  rep.seed = seed;

  EnumOptions opt;
  opt.num_vars = num_vars;
  opt.max_size = max_size;
  opt.with_neg = true;
  opt.with_box = false;
  std::vector<Formula> fragment = enumerate_formulas(opt);
  std::sort(fragment.begin(), fragment.end(), [](Formula a, Formula b) {
    return print(a) < print(b);
  });

  // Distinct countermodels met along the way, keyed by serialized text.
  std::map<std::string, KripkeModel> kripkes;
  std::vector<std::pair<LModel, Assignment>> transfers;

  for (size_t i = 0; i < fragment.size(); ++i) {
    Formula f = fragment[i];
    SweepItem item;
    item.f = f;
    bool cv = cpc_valid(f);
    try {
      Verdict v = verify_main_theorem({}, f);
      item.cls = v.provable ? 0 : cv ? 1 : 2;
      if (v.provable && !cv) ++rep.evidence_failures;  // IPC must be in CPC
      if (!v.provable) kripkes.emplace(write_kripke(v.kripke), v.kripke);
      if (!out_dir.empty()) {
        std::ostringstream name;
        name << "ev_" << std::setw(4) << std::setfill('0') << i << ".txt";
        item.evidence = name.str();
        std::string content;
        if (v.provable) {
          content = write_lproof(v.lproof);
        } else {
          Assignment restricted;
          for (Var x : vars_of(f)) restricted[x] = v.gamma.at(x);
          content = write_lmodel(v.model, restricted);
        }
        save_file(out_dir + "/" + item.evidence, content);
      }
    } catch (SoundnessError&) {
      ++rep.evidence_failures;
      item.cls = cv ? 1 : 2;
    }
    if (!conservativity_check(f)) ++rep.evidence_failures;
    if (item.cls == 0)
      ++rep.count_ipc;
    else if (item.cls == 1)
      ++rep.count_cpc_only;
    else
      ++rep.count_neither;
    rep.items.push_back(item);
  }

  // Transfer correctness: root forcing must agree with boxed satisfaction
  // on the whole fragment, for every distinct countermodel seen.
  for (auto& [key, k] : kripkes) {
    auto [m, g] = kripke_to_lmodel(k);
    transfers.emplace_back(m, g);
    for (Formula f : fragment) {
      ++rep.transfer_checks;
      bool at_root = kripke_eval(k, k.root, f);
      bool boxed = satisfies(m, g, Formula::box(f));
      if (at_root != boxed) ++rep.transfer_failures;
    }
  }

  // Equivalence spot checks: a === b holds semantically exactly when a and b
  // are interprovable.  Interprovable pairs must satisfy a === b on every
  // transferred model; for the rest, the refutation of the biconditional
  // transfers to a model refuting a === b.
  Rng rng(seed);
  const int pair_budget = 200;
  for (int t = 0; t < pair_budget && fragment.size() >= 2; ++t) {
    Formula a = fragment[rng.below(fragment.size())];
    Formula b = fragment[rng.below(fragment.size())];
    ++rep.pair_checks;
    IpcVerdict pv = ipc_prove({}, Formula::iff(a, b));
    if (pv.provable) {
      for (auto& [m, g] : transfers)
        if (!satisfies(m, g, Formula::equiv(a, b))) {
          ++rep.pair_failures;
          break;
        }
    } else {
      auto [m, g] = kripke_to_lmodel(pv.model);
      if (satisfies(m, g, Formula::equiv(a, b))) ++rep.pair_failures;
    }
  }

  // Non-normality: excluded middle is valid everywhere, yet its boxed form
  // has a countermodel.
  bool em_everywhere = true;
  for (const LModel& m : enumerate_lmodels(3))
    for (Formula f : fragment) {
      Formula em = em_formula(f);
      bool bad = for_each_assignment(vars_of(em), m.H.n,
                                     [&](const Assignment& g) {
                                       return !satisfies(m, g, em);
                                     });
      if (bad) {
        em_everywhere = false;
        ++rep.evidence_failures;
      }
    }
  SearchBounds sb;
  sb.max_algebra = 3;
  SearchResult sr =
      countermodel_search({}, Formula::box(em_formula(Formula::atom(0))), sb);
  rep.nonnormal_witness = em_everywhere && sr.found;

  if (!out_dir.empty())
    save_file(out_dir + "/report.txt", write_sweep_report(rep));
  return rep;
}

}  // namespace lmodal
