#pragma once
// Seeded random generators for formulas, derivations, and sequents.  Used by
// the randomized suites; everything is driven by Rng so runs are repeatable.

#include <utility>
#include <vector>

#include "lmodal/formula.hpp"
#include "lmodal/hilbert.hpp"
#include "lmodal/ipc.hpp"
#include "lmodal/lkernel.hpp"
#include "lmodal/rng.hpp"

namespace lmodal {

inline Formula random_formula(Rng& r, int num_vars, int depth,
                              bool with_box = true) {
  if (num_vars < 1) num_vars = 1;
  if (depth <= 0) {
    if (r.range(0, 4) == 0) return Formula::bot();
    return Formula::atom(r.range(0, num_vars - 1));
  }
  switch (r.range(0, with_box ? 6 : 5)) {
    case 0:
      return Formula::bot();
    case 1:
      return Formula::atom(r.range(0, num_vars - 1));
    case 2:
      return Formula::imp(random_formula(r, num_vars, depth - 1, with_box),
                          random_formula(r, num_vars, depth - 1, with_box));
    case 3:
      return Formula::disj(random_formula(r, num_vars, depth - 1, with_box),
                           random_formula(r, num_vars, depth - 1, with_box));
    case 4:
      return Formula::conj(random_formula(r, num_vars, depth - 1, with_box),
                           random_formula(r, num_vars, depth - 1, with_box));
    case 5:
      return Formula::neg(random_formula(r, num_vars, depth - 1, with_box));
    default:
      return Formula::box(random_formula(r, num_vars, depth - 1, with_box));
  }
}

// A random instance of axiom scheme 1..4.  Scheme 1 instances come from the
// implicational basis, so recognizing them exercises the skeleton check.
inline Formula random_axiom_instance(Rng& r, int scheme, int num_vars = 3,
                                     int depth = 2) {
  auto rf = [&] { return random_formula(r, num_vars, depth, true); };
  switch (scheme) {
    case 1: {
      HAxiom ax = static_cast<HAxiom>(r.range(0, 8));
      Formula a = rf(), b = rf(), c = rf();
      return h_axiom_formula(ax, a, b, c);
    }
    case 2: {
      Formula a = rf();
      return Formula::imp(Formula::box(a), a);
    }
    case 3: {
      Formula a = rf(), b = rf(), c = rf();
      return Formula::imp(
          Formula::box(Formula::imp(a, b)),
          Formula::imp(Formula::box(Formula::imp(b, c)),
                       Formula::box(Formula::imp(a, c))));
    }
    case 4: {
      Formula a = rf(), b = rf();
      return Formula::imp(Formula::box(Formula::disj(a, b)),
                          Formula::disj(Formula::box(a), Formula::box(b)));
    }
    default:
      throw DomainError("random_axiom_instance: scheme out of range");
  }
}

// A random well-formed derivation in L: axiom lines, theorem schemes,
// necessitation of axiom lines, hypotheses, and guaranteed-applicable
// detachments (lifting an existing line through an instance of a -> (b -> a)).
inline LProof random_lproof(Rng& r, int num_vars, int npremises, int steps) {
  std::vector<Formula> prem;
  for (int i = 0; i < npremises; ++i)
    prem.push_back(random_formula(r, num_vars, 2, true));
  LProofBuilder b(prem);
  auto rf = [&] { return random_formula(r, num_vars, 2, true); };

  std::vector<int> axlines;
  axlines.push_back(b.ax_ii(rf()));
  int last = axlines.back();
  for (int s = 0; s < steps; ++s) {
    switch (r.range(0, 8)) {
      case 0: {
        HAxiom ax = static_cast<HAxiom>(r.range(0, 8));
        Formula a = rf(), bb = rf(), c = rf();
        last = b.ax_i(h_axiom_formula(ax, a, bb, c));
        axlines.push_back(last);
        break;
      }
      case 1:
        last = b.ax_ii(rf());
        axlines.push_back(last);
        break;
      case 2:
        last = b.ax_iii(rf(), rf(), rf());
        axlines.push_back(last);
        break;
      case 3:
        last = b.ax_iv(rf(), rf());
        axlines.push_back(last);
        break;
      case 4:
        last = b.em(rf());
        break;
      case 5: {
        Formula a = rf(), bb = rf(), c = rf();
        last = b.sp(a, bb, c, r.range(0, num_vars - 1));
        break;
      }
      case 6:
        last = b.an(axlines[r.below(axlines.size())]);
        break;
      case 7:
        if (npremises > 0) {
          last = b.hyp(r.range(0, npremises - 1));
          break;
        }
        [[fallthrough]];
      default: {
        Formula f = b.formula_of(last);
        Formula t = rf();
        int a1 = b.ax_i(Formula::imp(f, Formula::imp(t, f)));
        axlines.push_back(a1);
        last = b.mp(last, a1);
        break;
      }
    }
  }
  return std::move(b).finish(last);
}

// A random box-free Hilbert-style derivation, suitable for embedding.
inline HilbertProof random_hilbert(Rng& r, int num_vars, int npremises,
                                   int steps) {
  std::vector<Formula> prem;
  for (int i = 0; i < npremises; ++i)
    prem.push_back(random_formula(r, num_vars, 2, false));
  HilbertBuilder b(prem);
  auto rf = [&] { return random_formula(r, num_vars, 2, false); };

  int last = b.axiom(HAxiom::A1, rf(), rf());
  for (int s = 0; s < steps; ++s) {
    switch (r.range(0, 2)) {
      case 0: {
        HAxiom ax = static_cast<HAxiom>(r.range(0, 8));
        int ar = h_axiom_arity(ax);
        Formula a = rf();
        Formula bb = ar >= 2 ? rf() : Formula{};
        Formula c = ar >= 3 ? rf() : Formula{};
        last = b.axiom(ax, a, bb, c);
        break;
      }
      case 1:
        if (npremises > 0) {
          last = b.hyp(r.range(0, npremises - 1));
          break;
        }
        [[fallthrough]];
      default: {
        Formula f = b.formula_of(last);
        Formula t = rf();
        int a1 = b.axiom(HAxiom::A1, f, t);
        last = b.mp(last, a1);
        break;
      }
    }
  }
  return std::move(b).take();
}

// A sequent that is provable by construction, for pipeline self-checks.
inline Sequent random_provable_sequent(Rng& r, int num_vars = 2) {
  auto rf = [&] { return random_formula(r, num_vars, 2, false); };
  Formula a = rf(), b = rf();
  switch (r.range(0, 4)) {
    case 0:
      return {{a, b}, a};
    case 1:
      return {{a, b}, Formula::conj(a, b)};
    case 2:
      return {{a}, Formula::disj(a, b)};
    case 3:
      return {{a}, Formula::imp(b, a)};
    default: {
      HAxiom ax = static_cast<HAxiom>(r.range(0, 8));
      int ar = h_axiom_arity(ax);
      Formula c = ar >= 3 ? rf() : Formula{};
      Formula bb = ar >= 2 ? rf() : Formula{};
      return {{}, h_axiom_formula(ax, a, bb, c)};
    }
  }
}

}  // namespace lmodal
