#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>

#include "lmodal/algebra.hpp"
#include "lmodal/rng.hpp"
#include "lmodal/testgen.hpp"

using namespace lmodal;

namespace {

Formula p = Formula::atom(0);
Formula q = Formula::atom(1);

// independently recompute relative pseudo-complement as the largest c with
// c /\ a <= b
int brute_imp(const Heyting& h, int a, int b) {
  int best = -1;
  for (int c = 0; c < h.n; ++c)
    if (h.leq(h.meet(c, a), b) && (best < 0 || h.leq(best, c))) best = c;
  return best;
}

const Heyting& chain3() {
  static Heyting h = [] {
    FinitePoset pos;
    pos.n = 2;
    pos.lower = {1u, 3u};  // 2-chain poset: downsets {}, {0}, {0,1}
    return heyting_from_poset(pos);
  }();
  return h;
}

const Heyting& bool4() {
  static Heyting h = [] {
    FinitePoset pos;
    pos.n = 2;
    pos.lower = {1u, 2u};  // 2-antichain: downsets {}, {0}, {1}, {0,1}
    return heyting_from_poset(pos);
  }();
  return h;
}

}  // namespace

TEST_CASE("poset validation") {
  FinitePoset good;
  good.n = 2;
  good.lower = {1u, 3u};
  CHECK_FALSE(validate_poset(good).has_value());
  FinitePoset irr;
  irr.n = 1;
  irr.lower = {0u};  // not reflexive
  CHECK(validate_poset(irr).has_value());
  FinitePoset cyc;
  cyc.n = 2;
  cyc.lower = {3u, 3u};  // 0 <= 1 and 1 <= 0
  CHECK(validate_poset(cyc).has_value());
}

TEST_CASE("poset enumeration is canonical and complete at small sizes") {
  auto ps = enumerate_posets(4);
  // downset counts up to 4: empty poset (1 downset), point (2), 2-chain (3),
  // 2-antichain (4), 3-chain (4)
  CHECK(ps.size() == 5);
  for (const auto& pos : ps) {
    CHECK_FALSE(validate_poset(pos).has_value());
    CHECK(poset_downsets(pos).size() <= 4u);
  }
  CHECK_THROWS_AS(enumerate_posets(0), DomainError);
  CHECK_THROWS_AS(enumerate_posets(13), DomainError);
}

TEST_CASE("algebras from posets: frozen shapes") {
  const Heyting& c3 = chain3();
  REQUIRE(c3.n == 3);
  CHECK(c3.bot == 0);
  CHECK(c3.top == 2);
  CHECK_FALSE(validate_heyting(c3).has_value());
  // linear order: meet = min, join = max
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      CHECK(c3.meet(a, b) == std::min(a, b));
      CHECK(c3.join(a, b) == std::max(a, b));
    }
  // a -> bot is bot for a > bot (dense negation)
  CHECK(c3.neg(1) == 0);
  CHECK(c3.neg(0) == 2);

  const Heyting& b4 = bool4();
  REQUIRE(b4.n == 4);
  CHECK_FALSE(validate_heyting(b4).has_value());
  CHECK(is_boolean(b4));
  CHECK_FALSE(is_boolean(c3));
  CHECK(is_boolean(enumerate_heyting(2).front()));
}

TEST_CASE("residuation against brute force on every enumerated algebra") {
  for (const Heyting& h : enumerate_heyting(8)) {
    CHECK_FALSE(validate_heyting(h).has_value());
    for (int a = 0; a < h.n; ++a)
      for (int b = 0; b < h.n; ++b)
        CHECK(h.imp(a, b) == brute_imp(h, a, b));
  }
}

TEST_CASE("enumeration counts by size are the known ones") {
  const auto& all = enumerate_heyting(8);
  std::map<int, int> by_size;
  for (const Heyting& h : all) by_size[h.n]++;
  CHECK(by_size == std::map<int, int>{
                       {1, 1}, {2, 1}, {3, 1}, {4, 2}, {5, 3}, {6, 5},
                       {7, 8}, {8, 15}});
  // exactly two 4-element algebras: the 4-chain and the diamond
  int chains = 0, diamonds = 0;
  for (const Heyting& h : all)
    if (h.n == 4) (is_boolean(h) ? diamonds : chains)++;
  CHECK(chains == 1);
  CHECK(diamonds == 1);
}

TEST_CASE("tampered tables are rejected") {
  Heyting h = chain3();
  h.meet_t[1 * h.n + 2] = 2;  // meet(1, top) must be 1
  CHECK(validate_heyting(h).has_value());
  Heyting h2 = chain3();
  h2.imp_t[2 * h2.n + 1] = 2;  // breaks residuation
  CHECK(validate_heyting(h2).has_value());
  Heyting h3 = chain3();
  h3.top = 1;
  CHECK(validate_heyting(h3).has_value());
}

TEST_CASE("disjunction property holds exactly off the large Boolean algebras") {
  // every chain splits joins trivially
  for (const Heyting& h : enumerate_heyting(8)) {
    bool chain = true;
    for (int a = 0; a < h.n && chain; ++a)
      for (int b = 0; b < h.n && chain; ++b)
        if (!h.leq(a, b) && !h.leq(b, a)) chain = false;
    if (chain) CHECK(has_disjunction_property(h));
  }
  CHECK(has_disjunction_property(enumerate_heyting(1).front()));
  CHECK_FALSE(has_disjunction_property(bool4()));
  // independent definition: join reaches top only through a top operand
  for (const Heyting& h : enumerate_heyting(6)) {
    bool dp = true;
    for (int a = 0; a < h.n; ++a)
      for (int b = 0; b < h.n; ++b)
        if (h.join(a, b) == h.top && a != h.top && b != h.top) dp = false;
    CHECK(dp == has_disjunction_property(h));
  }
}

TEST_CASE("filters, prime filters, ultrafilters") {
  const Heyting& c3 = chain3();
  auto fs = enumerate_filters(c3);
  // proper filters of the 3-chain: {top} and {a, top}
  CHECK(fs.size() == 2);
  auto ultras = enumerate_ultrafilters(c3);
  REQUIRE(ultras.size() == 1);
  CHECK(ultras[0] == ((1u << 1) | (1u << 2)));  // {a, top}

  // 4-element Boolean algebra: the two atoms' principal filters
  auto ub = enumerate_ultrafilters(bool4());
  CHECK(ub.size() == 2);

  // the degenerate algebra has no proper filter at all
  CHECK(enumerate_filters(enumerate_heyting(1).front()).empty());

  // malformed masks
  CHECK_FALSE(is_filter_mask(c3, 0u));                  // missing top
  CHECK_FALSE(is_filter_mask(c3, 0b111u));              // contains bot
  CHECK_FALSE(is_filter_mask(c3, 0b010u));              // not upward closed
}

TEST_CASE("ultrafilter characterizations, exhaustively") {
  for (const Heyting& h : enumerate_heyting(8)) {
    auto fs = enumerate_filters(h);
    for (const Filter& f : fs) {
      // ultra iff maximal proper by inclusion
      bool maximal = true;
      for (const Filter& g : fs)
        if (g.mask != f.mask && (g.mask & f.mask) == f.mask) maximal = false;
      CHECK(f.ultra == maximal);
      // ultra iff the complement characterization: m notin F <=> ~m in F
      bool compl_ok = true;
      for (int m = 0; m < h.n; ++m) {
        bool in = (f.mask >> m) & 1;
        bool nin = (f.mask >> h.neg(m)) & 1;
        if (in == nin) compl_ok = false;
      }
      CHECK(f.ultra == compl_ok);
      // every ultrafilter is prime
      if (f.ultra) CHECK(f.prime);
      // prime means join-splitting
      bool split = true;
      for (int a = 0; a < h.n; ++a)
        for (int b = 0; b < h.n; ++b)
          if (((f.mask >> h.join(a, b)) & 1) &&
              !((f.mask >> a) & 1) && !((f.mask >> b) & 1))
            split = false;
      CHECK(f.prime == split);
    }
    // on Boolean algebras, prime implies ultra
    if (is_boolean(h))
      for (const Filter& f : fs)
        if (f.prime) CHECK(f.ultra);
  }
}

TEST_CASE("trivial box meets the interiority conditions exactly on DP algebras") {
  for (const Heyting& h : enumerate_heyting(6)) {
    auto box = trivial_box(h);
    CHECK(box[h.top] == h.top);
    for (int m = 0; m < h.n; ++m)
      if (m != h.top) CHECK(box[m] == h.bot);
    for (uint32_t tm : enumerate_ultrafilters(h)) {
      std::string why;
      bool ok = box_conditions_hold(h, tm, box, &why);
      CHECK(ok == has_disjunction_property(h));
      if (!ok) CHECK(why.find("(iii)") != std::string::npos);
    }
  }
}

TEST_CASE("modal-operation enumeration matches the disjunction property") {
  const Heyting& c3 = chain3();
  auto u3 = enumerate_ultrafilters(c3);
  REQUIRE(u3.size() == 1);
  auto ops3 = enumerate_modal_ops(c3, u3[0]);
  CHECK_FALSE(ops3.empty());
  CHECK(std::find(ops3.begin(), ops3.end(), trivial_box(c3)) != ops3.end());
  for (const auto& box : ops3) {
    std::string why;
    CHECK(box_conditions_hold(c3, u3[0], box, &why));
  }

  for (uint32_t tm : enumerate_ultrafilters(bool4()))
    CHECK(enumerate_modal_ops(bool4(), tm).empty());
}

TEST_CASE("model enumeration is validated and has frozen counts") {
  CHECK(enumerate_lmodels(4).size() == 6);
  CHECK(enumerate_lmodels(5).size() == 24);
  for (const LModel& m : enumerate_lmodels(5)) {
    CHECK_FALSE(check_model_conditions(m).has_value());
    CHECK(m.H.n >= 2);
  }
}

TEST_CASE("evaluation in the two-element model") {
  auto [m, g] = two_element_model_of({{0, true}, {1, false}});
  CHECK(eval(m, g, p) == m.H.top);
  CHECK(eval(m, g, q) == m.H.bot);
  CHECK(satisfies(m, g, Formula::equiv(p, Formula::top())));
  CHECK(satisfies(m, g, Formula::disj(p, Formula::neg(p))));
  CHECK(satisfies(m, g, Formula::disj(q, Formula::neg(q))));
  CHECK_FALSE(satisfies(m, g, q));
  // truth-table row for the classical implication chain
  auto [m2, g2] = two_element_model_of({{0, false}, {1, false}});
  Formula peirce = Formula::imp(Formula::imp(Formula::imp(p, q), p), p);
  CHECK(satisfies(m2, g2, peirce));
  CHECK_FALSE(satisfies(m2, g2, p));
}

TEST_CASE("evaluation is undefined on unassigned variables") {
  auto [m, g] = two_element_model_of({{0, true}});
  CHECK_THROWS_AS(eval(m, g, q), DomainError);
}

TEST_CASE("evaluation distributes over every constructor") {
  Rng rng{61};
  const auto& models = enumerate_lmodels(5);
  for (int iter = 0; iter < 1500; ++iter) {
    const LModel& m = models[rng.below(models.size())];
    Assignment g;
    for (Var v = 0; v < 3; ++v) g[v] = static_cast<int>(rng.below(m.H.n));
    Formula a = random_formula(rng, 3, 3);
    Formula b = random_formula(rng, 3, 3);
    int ea = eval(m, g, a), eb = eval(m, g, b);
    CHECK(eval(m, g, Formula::conj(a, b)) == m.H.meet(ea, eb));
    CHECK(eval(m, g, Formula::disj(a, b)) == m.H.join(ea, eb));
    CHECK(eval(m, g, Formula::imp(a, b)) == m.H.imp(ea, eb));
    CHECK(eval(m, g, Formula::box(a)) == m.box[ea]);
    CHECK(eval(m, g, Formula::bot()) == m.H.bot);
    CHECK(satisfies(m, g, a) == (((m.true_mask >> ea) & 1) != 0));
  }
}

TEST_CASE("enumeration bounds are enforced") {
  CHECK_THROWS_AS(enumerate_heyting(0), DomainError);
  CHECK_THROWS_AS(enumerate_heyting(13), DomainError);
}
