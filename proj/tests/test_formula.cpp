#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "lmodal/formula.hpp"
#include "lmodal/rng.hpp"
#include "lmodal/testgen.hpp"

using namespace lmodal;

namespace {
Formula p = Formula::atom(0);
Formula q = Formula::atom(1);
Formula r = Formula::atom(2);

Formula em_of(Formula a) { return Formula::disj(a, Formula::neg(a)); }
}  // namespace

TEST_CASE("constructors and observers") {
  Formula f = Formula::imp(Formula::conj(p, q), Formula::box(r));
  CHECK(f.kind() == Kind::Imp);
  CHECK(f.lhs().kind() == Kind::And);
  CHECK(f.rhs().kind() == Kind::Box);
  CHECK(f.rhs().body() == r);
  CHECK(f.has_box());
  CHECK_FALSE(f.is_propositional());
  CHECK(f.max_var() == 2);
  CHECK(f.var_mask() == 0b111u);
  CHECK(Formula::bot().size() == 1);
  CHECK(p.size() == 1);
  CHECK(Formula::imp(p, q).size() == 3);
  // size() counts nodes of the primitive tree: ~p is p -> bot
  CHECK(Formula::neg(p).size() == 3);
  CHECK(Formula::box(p).size() == 2);
  CHECK(Formula::top().size() == 3);
}

TEST_CASE("interning gives pointer equality for equal structure") {
  Formula a = Formula::imp(p, Formula::disj(q, p));
  Formula b = Formula::imp(Formula::atom(0),
                           Formula::disj(Formula::atom(1), Formula::atom(0)));
  CHECK(a == b);
  CHECK(a.hash() == b.hash());
  CHECK_FALSE(a == Formula::imp(p, Formula::disj(p, q)));
}

TEST_CASE("atom range is enforced") {
  CHECK_THROWS_AS(Formula::atom(-1), DomainError);
  CHECK_THROWS_AS(Formula::atom(64), DomainError);
  CHECK(Formula::atom(63).var() == 63);
}

TEST_CASE("derived forms expand by definition") {
  CHECK(Formula::neg(p) == Formula::imp(p, Formula::bot()));
  CHECK(Formula::top() == Formula::imp(Formula::bot(), Formula::bot()));
  CHECK(Formula::iff(p, q) ==
        Formula::conj(Formula::imp(p, q), Formula::imp(q, p)));
  CHECK(Formula::equiv(p, q) ==
        Formula::conj(Formula::box(Formula::imp(p, q)),
                      Formula::box(Formula::imp(q, p))));
}

TEST_CASE("printing uses minimal parentheses") {
  CHECK(print(Formula::imp(Formula::bot(), Formula::bot())) == "bot -> bot");
  CHECK(print(Formula::box(p)) == "[]p");
  CHECK(print(Formula::conj(p, Formula::disj(q, r))) == "p /\\ (q \\/ r)");
  // implication is right-associative: no parens on the right, parens left
  CHECK(print(Formula::imp(p, Formula::imp(q, r))) == "p -> q -> r");
  CHECK(print(Formula::imp(Formula::imp(p, q), r)) == "(p -> q) -> r");
  // the printer emits primitives only; sugar does not survive construction
  CHECK(print(Formula::neg(Formula::neg(p))) == "(p -> bot) -> bot");
}

TEST_CASE("parse handles names, operators, and whitespace") {
  CHECK(parse("p") == p);
  CHECK(parse("x17") == Formula::atom(17));
  CHECK(parse("~~p -> p") == Formula::imp(Formula::neg(Formula::neg(p)), p));
  CHECK(parse("((p -> q) -> p) -> p") ==
        Formula::imp(Formula::imp(Formula::imp(p, q), p), p));
  CHECK(parse("[] (p \\/ ~p)") == Formula::box(em_of(p)));
}

TEST_CASE("parse errors carry a position") {
  using Catch::Matchers::ContainsSubstring;
  CHECK_THROWS_WITH(parse("p ->"), ContainsSubstring("at position"));
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("p q"), ParseError);
  CHECK_THROWS_AS(parse("(p -> q"), ParseError);
  CHECK_THROWS_AS(parse("x64"), ParseError);
}

TEST_CASE("print/parse roundtrip over the whole small fragment") {
  EnumOptions opt;
  opt.num_vars = 3;
  opt.max_size = 6;
  auto all = enumerate_formulas(opt);
  for (Formula f : all) CHECK(parse(print(f)) == f);
}

TEST_CASE("print/parse roundtrip on random deep formulas") {
  Rng rng{2024};
  for (int i = 0; i < 2000; ++i) {
    Formula f = random_formula(rng, 5, 6);
    REQUIRE(parse(print(f)) == f);
  }
}

TEST_CASE("substitute replaces exactly the named atom") {
  CHECK(substitute(p, 0, Formula::bot()) == Formula::bot());
  CHECK(substitute(Formula::imp(p, q), 0, Formula::box(q)) ==
        Formula::imp(Formula::box(q), q));
  // substitution under box reaches every occurrence
  Formula f = Formula::box(Formula::conj(p, Formula::box(p)));
  CHECK(substitute(f, 0, q) == Formula::box(Formula::conj(q, Formula::box(q))));
  // untouched variable
  CHECK(substitute(q, 0, Formula::bot()) == q);
}

TEST_CASE("identity substitution is the identity everywhere") {
  EnumOptions opt;
  opt.num_vars = 2;
  opt.max_size = 6;
  for (Formula f : enumerate_formulas(opt))
    for (Var x : {0, 1}) CHECK(substitute(f, x, Formula::atom(x)) == f);
}

TEST_CASE("skeleton abstracts maximal boxed subformulas") {
  Formula f = Formula::imp(Formula::box(Formula::box(p)), Formula::box(p));
  Skeleton sk = skeleton(f);
  CHECK(sk.body.is_propositional());
  REQUIRE(sk.mapping.size() == 2);
  CHECK(sk.body == Formula::imp(Formula::atom(sk.mapping[0].first),
                                Formula::atom(sk.mapping[1].first)));
  CHECK(sk.mapping[0].second == Formula::box(Formula::box(p)));
  CHECK(sk.mapping[1].second == Formula::box(p));
  // a box-free formula is its own skeleton
  Skeleton sk2 = skeleton(Formula::imp(p, q));
  CHECK(sk2.body == Formula::imp(p, q));
  CHECK(sk2.mapping.empty());
  // equal boxed subformulas share one fresh variable
  Formula g = Formula::imp(Formula::box(p), Formula::box(p));
  Skeleton sk3 = skeleton(g);
  CHECK(sk3.mapping.size() == 1);
  CHECK(sk3.body == Formula::imp(Formula::atom(sk3.mapping[0].first),
                                 Formula::atom(sk3.mapping[0].first)));
}

TEST_CASE("skeleton re-substitution reproduces the input") {
  Rng rng{7};
  for (int i = 0; i < 2000; ++i) {
    Formula f = random_formula(rng, 4, 5);
    Skeleton sk = skeleton(f);
    CHECK(sk.body.is_propositional());
    Formula back = sk.body;
    for (auto [v, g] : sk.mapping) back = substitute(back, v, g);
    REQUIRE(back == f);
  }
}

TEST_CASE("vars_of lists variables in ascending order") {
  Formula f = Formula::imp(r, Formula::conj(p, r));
  auto vs = vars_of(f);
  CHECK(vs == std::vector<Var>{0, 2});
  CHECK(vars_of(Formula::bot()).empty());
}

namespace {
// Minimal generator cost: ~ and [] count one step, so imp(a, bot) is
// reachable at 1 + cost(a).  Independent of the enumerator's bookkeeping.
int gen_cost(Formula f) {
  switch (f.kind()) {
    case Kind::Bot:
    case Kind::Atom:
      return 1;
    case Kind::Box:
      return 1 + gen_cost(f.body());
    case Kind::Imp: {
      int c = 1 + gen_cost(f.lhs()) + gen_cost(f.rhs());
      if (f.rhs() == Formula::bot()) c = std::min(c, 1 + gen_cost(f.lhs()));
      return c;
    }
    default:
      return 1 + gen_cost(f.lhs()) + gen_cost(f.rhs());
  }
}
}  // namespace

TEST_CASE("enumeration is duplicate-free, size-bounded, and complete") {
  EnumOptions opt;
  opt.num_vars = 2;
  opt.max_size = 5;
  auto all = enumerate_formulas(opt);
  std::set<Formula> seen;
  for (Formula f : all) {
    CHECK(gen_cost(f) <= 5);
    CHECK(f.max_var() <= 1);
    CHECK(seen.insert(f).second);
  }
  // spot completeness: known members of the fragment
  CHECK(seen.count(parse("p \\/ ~p")));
  CHECK(seen.count(parse("~~p -> p")));
  CHECK(seen.count(parse("[](p -> q)")));
  // and a formula of generator cost 7 must be absent
  CHECK_FALSE(seen.count(parse("((p -> q) -> p) -> p")));
}

TEST_CASE("enumeration respects the box and negation switches") {
  EnumOptions opt;
  opt.num_vars = 1;
  opt.max_size = 4;
  opt.with_box = false;
  for (Formula f : enumerate_formulas(opt)) CHECK(f.is_propositional());

  // Without the ~ generator, ~p costs 3 (p -> bot via binary ->), not 2.
  opt.with_box = true;
  opt.with_neg = false;
  opt.max_size = 2;
  auto no_neg = enumerate_formulas(opt);
  CHECK(std::find(no_neg.begin(), no_neg.end(), Formula::neg(p)) ==
        no_neg.end());
  opt.with_neg = true;
  auto with_neg = enumerate_formulas(opt);
  CHECK(std::find(with_neg.begin(), with_neg.end(), Formula::neg(p)) !=
        with_neg.end());
  opt.max_size = 3;
  opt.with_neg = false;
  auto no_neg3 = enumerate_formulas(opt);
  CHECK(std::find(no_neg3.begin(), no_neg3.end(), Formula::neg(p)) !=
        no_neg3.end());
}

TEST_CASE("fragment sizes match frozen counts") {
  EnumOptions opt;
  opt.num_vars = 2;
  opt.max_size = 5;
  opt.with_box = false;
  opt.with_neg = true;
  CHECK(enumerate_formulas(opt).size() == 675);
  opt.max_size = 7;
  CHECK(enumerate_formulas(opt).size() == 18606);
}

TEST_CASE("variable names") {
  CHECK(var_name(0) == "p");
  CHECK(var_name(1) == "q");
  CHECK(var_name(2) == "r");
  CHECK(var_name(3) == "x3");
  CHECK(var_name(63) == "x63");
}
