#include <catch2/catch_amalgamated.hpp>

#include "kam/deduction.hpp"
#include "kam/parse.hpp"
#include "kam/stdlib.hpp"

using namespace kam;

namespace {
Judgement check_script(const char* src) {
  return check(parse_script(src), {});
}
}  // namespace

TEST_CASE("identity derivation") {
  Judgement j = check_script("(lam x (A) (hyp x))");
  CHECK(to_string(j.term) == "\\x. x");
  CHECK(alpha_equal(j.formula,
                    Formula::arrow(Formula::pred("A", {}),
                                   Formula::pred("A", {}))));
  CHECK(equal(eliminate(j.term), parse_term("I")));
}

TEST_CASE("weakening derivation compiles to (E K) and runs") {
  Judgement j = check_script("(lam x (A) (lam y (B) (hyp x)))");
  CHECK(to_string(j.term) == "\\x. \\y. x");
  Term t = eliminate(j.term);
  CHECK(equal(t, parse_term("(E K)")));
  CHECK(reaches(Process{t, parse_stack("@a . @b . #0")},
                Process{Term::atom("a"), Stack::constant(0)}, 10));
}

TEST_CASE("declared constants type as axioms") {
  // the continuation instruction may be declared at any implication type
  Judgement j = check_script(
      "(Gen X 0 (Gen Y 0 (const cc (-> (-> (-> (X) (Y)) (X)) (X)))))");
  CHECK(is_comb(eliminate(j.term), Comb::CC));
  Formula peirce = Formula::all_pred(
      "X", 0,
      Formula::all_pred(
          "Y", 0,
          Formula::arrow(
              Formula::arrow(Formula::arrow(Formula::pred("X", {}),
                                            Formula::pred("Y", {})),
                             Formula::pred("X", {})),
              Formula::pred("X", {}))));
  CHECK(alpha_equal(j.formula, peirce));
}

TEST_CASE("application requires matching formulas") {
  CHECK_THROWS_AS(
      check_script("(app (lam x (A) (hyp x)) (const c (B)))"), CheckError);
  CHECK_THROWS_AS(check_script("(app (const c (A)) (const d (A)))"),
                  CheckError);
}

TEST_CASE("unknown hypothesis") {
  CHECK_THROWS_AS(check_script("(hyp nope)"), CheckError);
}

TEST_CASE("eigenvariable conditions") {
  // x free in the open hypothesis: individual generalization is rejected
  CHECK_THROWS_AS(check(parse_script("(lam h (X x) (gen x (hyp h)))"),
                        {}),
                  CheckError);
  // same for predicate variables
  CHECK_THROWS_AS(check(parse_script("(lam h (X) (Gen X 0 (hyp h)))"), {}),
                  CheckError);
  // fine once the hypothesis is discharged
  CHECK_NOTHROW(check_script("(Gen X 0 (lam h (X) (hyp h)))"));
}

TEST_CASE("individual instantiation substitutes the term") {
  Judgement j = check_script(
      "(fun 0 0)"
      "(inst (gen x (Gen X 1 (lam h (X x) (hyp h)))) 0)");
  Formula want = Formula::all_pred(
      "X", 1,
      Formula::arrow(Formula::pred("X", {FoTerm::fn("0", {})}),
                     Formula::pred("X", {FoTerm::fn("0", {})})));
  CHECK(alpha_equal(j.formula, want));
  // instantiation of a non-quantified judgement is rejected
  CHECK_THROWS_AS(
      check_script("(fun 0 0)(inst (lam h (A) (hyp h)) 0)"), CheckError);
}

TEST_CASE("predicate instantiation performs the schema substitution") {
  // from forall X (X -> X) derive (-> (Y) (Y)) -> (-> (Y) (Y))
  Judgement j = check_script(
      "(Inst (Gen X 0 (lam h (X) (hyp h))) () (-> (Y) (Y)))");
  Formula yy = Formula::arrow(Formula::pred("Y", {}), Formula::pred("Y", {}));
  CHECK(alpha_equal(j.formula, Formula::arrow(yy, yy)));
  // extraction unchanged by the quantifier rules
  CHECK(to_string(j.term) == "\\h. h");
}

TEST_CASE("predicate instantiation is capture avoiding") {
  // forall X forall x (X x -> X x), instantiate X y := (P y x) with x free
  Judgement j = check_script(
      "(Inst (Gen X 1 (gen x (lam h (X x) (hyp h)))) (y) (P y x))");
  // the bound x must have been renamed: formula is
  // (all x' ((P x' x) -> (P x' x)))
  auto* all = std::get_if<ForallInd>(&j.formula);
  REQUIRE(all != nullptr);
  CHECK(all->var != "x");
  auto [fi, fp] = formula_free_vars(j.formula);
  CHECK(fi.count("x") == 1);  // the free x of the replacement survives
}

TEST_CASE("quantifier rules do not change the extracted term") {
  Judgement plain = check_script("(lam h (X) (hyp h))");
  Judgement wrapped = check_script("(Gen X 0 (lam h (X) (hyp h)))");
  Judgement inst = check_script(
      "(Inst (Gen X 0 (lam h (X) (hyp h))) () (Y))");
  CHECK(equal(eliminate(plain.term), eliminate(wrapped.term)));
  CHECK(equal(eliminate(plain.term), eliminate(inst.term)));
}

TEST_CASE("arity consistency is enforced") {
  CHECK_THROWS_AS(
      check_script("(lam h (-> (X) (X y)) (hyp h))"), CheckError);
  CHECK_THROWS_AS(check_script("(fun 0 0)(lam h (X 0 0) (lam g (X 0) (hyp h)))"),
                  CheckError);
}

TEST_CASE("function symbols must be declared with the right arity") {
  CHECK_THROWS_AS(check_script("(inst (Gen X 1 (gen x (lam h (X x) (hyp h)))) (s 0))"),
                  CheckError);
  CHECK_NOTHROW(check_script(
      "(fun s 1)(fun 0 0)"
      "(inst (gen x (Gen X 1 (lam h (X x) (hyp h)))) (s 0))"));
}

// ---------------------------------------------------------------------------
// The extraction examples

TEST_CASE("first projection of a two-hypothesis statement") {
  // forall X (X (s 0), X 0 -> X (s 0)): the extracted program keeps the
  // first argument
  const char* src =
      "(fun 0 0)(fun s 1)"
      "(Gen X 1 (lam k (X (s 0)) (lam k2 (X 0) (hyp k))))";
  ExtractionRun r = extract_and_run(parse_script(src), {},
                                    parse_stack("@k . @k2 . #0"), 100);
  CHECK(equal(r.compiled, parse_term("(E K)")));
  REQUIRE(r.trace.halt.has_value());
  CHECK(equal(r.trace.last(),
              Process{Term::atom("k"), Stack::constant(0)}));
}

TEST_CASE("propositional first projection") {
  const char* src = "(Gen X 0 (lam k (X) (lam k2 (X) (hyp k))))";
  ExtractionRun r = extract_and_run(parse_script(src), {},
                                    parse_stack("@k . @k2 . #0"), 100);
  REQUIRE(r.trace.halt.has_value());
  CHECK(equal(r.trace.last(), Process{Term::atom("k"), Stack::constant(0)}));
}

TEST_CASE("identity proof runs") {
  ExtractionRun r = extract_and_run(parse_script("(lam x (A) (hyp x))"), {},
                                    parse_stack("@a . #0"), 10);
  REQUIRE(r.trace.halt.has_value());
  CHECK(equal(r.trace.last(), Process{Term::atom("a"), Stack::constant(0)}));
}

// ---------------------------------------------------------------------------
// The six pair witnesses: scripts reproduce the library terms

namespace {
// conjunction encoding used throughout: A ^ B := (A -> B -> bot) -> bot,
// with bot := (All Z 0 (Z)) and top := (All Z 0 (-> (Z) (Z)))
std::string wedge(const std::string& a, const std::string& b) {
  return "(-> (-> " + a + " (-> " + b + " (All Z 0 (Z)))) (All Z 0 (Z)))";
}
const std::string bot = "(All Z 0 (Z))";
const std::string top = "(All Z 0 (-> (Z) (Z)))";
}  // namespace

TEST_CASE("swap witness script matches the library term") {
  std::string xy = wedge("(X)", "(Y)");
  std::string src =
      "(Gen X 0 (Gen Y 0 (lam p " + xy +
      " (lam k (-> (Y) (-> (X) " + bot + ")) " +
      "(app (hyp p) (lam x (X) (lam y (Y) (app (app (hyp k) (hyp y)) (hyp "
      "x)))))))))";
  Judgement j = check(parse_script(src), {});
  const NamedTerm* w = catalogue_find("swap_pair");
  REQUIRE(w != nullptr);
  CHECK(equal(eliminate(j.term), w->term));
}

TEST_CASE("duplication witness script matches the library term") {
  std::string src =
      "(Gen X 0 (lam x (X) (lam k (-> (X) (-> (X) " + bot + ")) "
      "(app (app (hyp k) (hyp x)) (hyp x)))))";
  Judgement j = check(parse_script(src), {});
  const NamedTerm* w = catalogue_find("dup_pair");
  REQUIRE(w != nullptr);
  CHECK(equal(eliminate(j.term), w->term));
}

TEST_CASE("drop witness script matches the library term") {
  // classical: capture a continuation at Y, feed the pair a consumer that
  // throws the second component to it, and instantiate the bottom at Y
  std::string xy = wedge("(X)", "(Y)");
  std::string src =
      "(Gen X 0 (Gen Y 0 (lam p " + xy +
      " (app (const cc (-> (-> (-> (Y) " + bot + ") (Y)) (Y)))"
      "      (lam k (-> (Y) " + bot + ")"
      "        (Inst (app (hyp p)"
      "                   (lam x (X) (lam y (Y) (app (hyp k) (hyp y)))))"
      "              () (Y)))))))";
  Judgement j = check(parse_script(src), {});
  const NamedTerm* w = catalogue_find("drop_pair");
  REQUIRE(w != nullptr);
  CHECK(equal(eliminate(j.term), w->term));
}

TEST_CASE("unit witness script matches the library term") {
  std::string src =
      "(Gen X 0 (lam x (X) (lam k (-> (X) (-> " + top + " " + bot + ")) "
      "(app (app (hyp k) (hyp x)) (Gen Z 0 (lam y (Z) (hyp y)))))))";
  Judgement j = check(parse_script(src), {});
  const NamedTerm* w = catalogue_find("unit_pair");
  REQUIRE(w != nullptr);
  CHECK(equal(eliminate(j.term), w->term));
}

TEST_CASE("associativity witness derivation matches the library term") {
  // built programmatically: the nesting is deep enough that a script
  // string is error prone
  auto P = [](const char* x) { return Formula::pred(x, {}); };
  Formula Bot = Formula::all_pred("Z0", 0, Formula::pred("Z0", {}));
  auto Wedge = [&](Formula a, Formula b) {
    return Formula::arrow(
        Formula::arrow(a, Formula::arrow(std::move(b), Bot)), Bot);
  };
  Formula XY = Wedge(P("X"), P("Y"));
  Formula XY_Z = Wedge(XY, P("Z"));
  Formula YZ = Wedge(P("Y"), P("Z"));
  using D = Derivation;
  D inner_pair =  // \k2. (k2 y z) : Y^Z
      D::lam("k2", Formula::arrow(P("Y"), Formula::arrow(P("Z"), Bot)),
             D::apply(D::apply(D::hyp("k2"), D::hyp("y")), D::hyp("z")));
  D body = D::apply(D::apply(D::hyp("k"), D::hyp("x")), std::move(inner_pair));
  D use_xy = D::apply(
      D::hyp("xy"),
      D::lam("x", P("X"), D::lam("y", P("Y"), std::move(body))));
  D use_p = D::apply(
      D::hyp("p"),
      D::lam("xy", XY, D::lam("z", P("Z"), std::move(use_xy))));
  D d = D::gen_pred(
      "X", 0,
      D::gen_pred(
          "Y", 0,
          D::gen_pred(
              "Z", 0,
              D::lam("p", XY_Z,
                     D::lam("k",
                            Formula::arrow(P("X"), Formula::arrow(YZ, Bot)),
                            std::move(use_p))))));
  Judgement j = check(d, {});
  const NamedTerm* w = catalogue_find("assoc_pair");
  REQUIRE(w != nullptr);
  CHECK(equal(eliminate(j.term), w->term));
}

TEST_CASE("shift witness derivation matches the library term") {
  auto P = [](const char* x) { return Formula::pred(x, {}); };
  Formula Bot = Formula::all_pred("Z0", 0, Formula::pred("Z0", {}));
  auto Wedge = [&](Formula a, Formula b) {
    return Formula::arrow(
        Formula::arrow(a, Formula::arrow(std::move(b), Bot)), Bot);
  };
  Formula XY = Wedge(P("X"), P("Y"));
  Formula XYZ = Wedge(XY, P("Z"));
  Formula XYZU = Wedge(XYZ, P("U"));
  Formula YZ = Wedge(P("Y"), P("Z"));
  Formula X_YZ = Wedge(P("X"), YZ);
  using D = Derivation;
  D pair_yz =  // \k2. (k2 y z) : Y^Z
      D::lam("k2", Formula::arrow(P("Y"), Formula::arrow(P("Z"), Bot)),
             D::apply(D::apply(D::hyp("k2"), D::hyp("y")), D::hyp("z")));
  D pair_x_yz =  // \k1. (k1 x (\k2. (k2 y z))) : X^(Y^Z)
      D::lam("k1", Formula::arrow(P("X"), Formula::arrow(YZ, Bot)),
             D::apply(D::apply(D::hyp("k1"), D::hyp("x")),
                      std::move(pair_yz)));
  D body = D::apply(D::apply(D::hyp("k"), std::move(pair_x_yz)),
                    D::hyp("u"));
  D use_xy = D::apply(
      D::hyp("xy"),
      D::lam("x", P("X"), D::lam("y", P("Y"), std::move(body))));
  D use_xyz = D::apply(
      D::hyp("xyz"),
      D::lam("xy", XY, D::lam("z", P("Z"), std::move(use_xy))));
  D use_p = D::apply(
      D::hyp("p"),
      D::lam("xyz", XYZ, D::lam("u", P("U"), std::move(use_xyz))));
  D d = D::lam("p", XYZU,
               D::lam("k", Formula::arrow(X_YZ, Formula::arrow(P("U"), Bot)),
                      std::move(use_p)));
  for (const char* v : {"U", "Z", "Y", "X"})
    d = D::gen_pred(v, 0, std::move(d));
  Judgement j = check(d, {});
  const NamedTerm* w = catalogue_find("shift_pair");
  REQUIRE(w != nullptr);
  CHECK(equal(eliminate(j.term), w->term));
}

TEST_CASE("swap witness behaves as a pair swapper on the machine") {
  // feed a pair encoded as \k.(k a b) and a consumer @c
  const NamedTerm* w = catalogue_find("swap_pair");
  REQUIRE(w != nullptr);
  Term pair_ab = eliminate(parse_lambda("\\k. (k @a @b)"));
  Process start{w->term,
                Stack::push(pair_ab, Stack::push(Term::atom("c"),
                                                 Stack::constant(0)))};
  // the swapped pair applies the consumer as (c b a)
  Process want{parse_term("(@c @b @a)"), Stack::constant(0)};
  CHECK(reaches(start, want, 2000));
}
