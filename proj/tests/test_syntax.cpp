#include <catch2/catch_amalgamated.hpp>

#include "kam/machine.hpp"
#include "kam/parse.hpp"
#include "kam/term.hpp"

#include <random>

using namespace kam;

TEST_CASE("parse leaves") {
  CHECK(is_comb(parse_term("I"), Comb::I));
  CHECK(is_comb(parse_term("cc"), Comb::CC));
  CHECK(is_comb(parse_term("read"), Comb::Read));
  CHECK(equal(parse_term("@foo"), Term::atom("foo")));
  CHECK(equal(parse_term("x'"), Term::variable("x'")));
  CHECK(equal(parse_term("%42"), Term::num(42)));
}

TEST_CASE("parse application is left associated") {
  Term t = parse_term("(K x)");
  REQUIRE(is<Apply>(t));
  CHECK(is_comb(as<Apply>(t).fn, Comb::K));
  CHECK(equal(as<Apply>(t).arg, Term::variable("x")));

  CHECK(equal(parse_term("(K x y)"),
              app(Term::comb(Comb::K), Term::variable("x"),
                  Term::variable("y"))));
  CHECK(equal(parse_term("(K (x y))"),
              app(Term::comb(Comb::K),
                  app(Term::variable("x"), Term::variable("y")))));
}

TEST_CASE("parse continuation") {
  Term t = parse_term("k[@t . #0]");
  REQUIRE(is<Continuation>(t));
  Stack expected = Stack::push(Term::atom("t"), Stack::constant(0));
  CHECK(equal(as<Continuation>(t).saved, expected));
}

TEST_CASE("parse stack and process, unicode aliases") {
  Stack s = parse_stack("@a . @b . #2");
  CHECK(stack_depth(s) == 2);
  Process p = parse_process("K * @x . @y . #0");
  CHECK(is_comb(p.head, Comb::K));
  Process q = parse_process("K \xe2\x8b\x86 @x \xc2\xb7 @y \xc2\xb7 #0");
  CHECK(equal(p, q));
}

TEST_CASE("comments and whitespace") {
  Term t = parse_term("( K ; this is K\n  x )");
  CHECK(equal(t, app(Term::comb(Comb::K), Term::variable("x"))));
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(parse_term("(K"), ParseError);
  CHECK_THROWS_AS(parse_term("Qx"), ParseError);  // unknown combinator
  CHECK_THROWS_AS(parse_process("K @x . #0"), ParseError);
}

TEST_CASE("printing follows the left association convention") {
  Term t = app(app(Term::comb(Comb::K), Term::variable("x")),
               Term::variable("y"));
  CHECK(to_string(t) == "(K x y)");
  CHECK(to_string(Term::num(0)) == "%0");
  CHECK(to_string(Term::comb(Comb::Read)) == "read");
  CHECK(to_string(Term::cont(Stack::push(Term::atom("t"),
                                         Stack::constant(0)))) ==
        "k[@t . #0]");
}

TEST_CASE("substitution replaces variables, not atoms") {
  Bindings b{{"x", Term::comb(Comb::I)}};
  CHECK(equal(substitute(parse_term("(x y)"), b), parse_term("(I y)")));
  CHECK(equal(substitute(parse_term("I"), b), parse_term("I")));
  CHECK(equal(substitute(parse_term("@x"), b), parse_term("@x")));
}

TEST_CASE("substitution descends into continuations") {
  Bindings b{{"x", Term::comb(Comb::K)}};
  Term t = substitute(parse_term("k[x . #0]"), b);
  CHECK(equal(t, parse_term("k[K . #0]")));

  // and the substituted continuation behaves like the substituted stack:
  // k[K . #0] * @z . #1  ->  @z * K . #0
  Process start{t, Stack::push(Term::atom("z"), Stack::constant(1))};
  Process want{Term::atom("z"),
               Stack::push(Term::comb(Comb::K), Stack::constant(0))};
  CHECK(reaches(start, want, 2));
}

TEST_CASE("free variables") {
  CHECK(free_variables(parse_term("(x (K y))")) ==
        std::set<std::string>{"x", "y"});
  CHECK(free_variables(parse_term("(W (E E))")).empty());
  CHECK(free_variables(parse_term("(@a x)")) == std::set<std::string>{"x"});
  CHECK(free_variables(parse_term("k[x . #0]")) ==
        std::set<std::string>{"x"});
}

// ---------------------------------------------------------------------------
// Random term generator for the property tests.

namespace {

Term random_term(std::mt19937& rng, int depth,
                 const std::vector<std::string>& vars) {
  std::uniform_int_distribution<int> pick(0, 99);
  int roll = pick(rng);
  if (depth <= 0 || roll < 35) {
    // leaf
    int leaf = pick(rng);
    if (leaf < 30 && !vars.empty()) {
      std::uniform_int_distribution<size_t> iv(0, vars.size() - 1);
      return Term::variable(vars[iv(rng)]);
    }
    if (leaf < 50) {
      static const char* atoms[] = {"a", "b", "c"};
      return Term::atom(atoms[pick(rng) % 3]);
    }
    if (leaf < 60) return Term::num(pick(rng) % 4);
    if (leaf < 70) {
      // closed continuation leaf
      Stack s = Stack::constant(pick(rng) % 3);
      if (pick(rng) < 50) s = Stack::push(Term::atom("c"), s);
      return Term::cont(s);
    }
    std::uniform_int_distribution<int> ic(0, 9);
    return Term::comb(static_cast<Comb>(ic(rng)));
  }
  return Term::apply(random_term(rng, depth - 1, vars),
                     random_term(rng, depth - 1, vars));
}

}  // namespace

TEST_CASE("parse . print is the identity on random terms") {
  std::mt19937 rng(20240814);
  std::vector<std::string> vars = {"x", "y", "z"};
  for (int i = 0; i < 10000; ++i) {
    Term t = random_term(rng, 12, vars);
    Term back = parse_term(to_string(t));
    REQUIRE(equal(t, back));
  }
}

TEST_CASE("substitution is compositional") {
  std::mt19937 rng(7);
  std::vector<std::string> vars = {"x", "y"};
  for (int i = 0; i < 500; ++i) {
    Term t = random_term(rng, 5, vars);
    Term u = random_term(rng, 3, {});  // closed replacement for x
    Term v = random_term(rng, 3, {});  // closed replacement for y
    // x != y and x not free in v, so sequential == simultaneous
    Term seq = substitute(substitute(t, {{"x", u}}), {{"y", v}});
    Term sim = substitute(t, {{"x", u}, {"y", v}});
    REQUIRE(equal(seq, sim));
  }
}

TEST_CASE("free variables of a substitution") {
  std::mt19937 rng(8);
  std::vector<std::string> vars = {"x", "y"};
  for (int i = 0; i < 500; ++i) {
    Term t = random_term(rng, 5, vars);
    Term u = random_term(rng, 3, {"y", "z"});
    if (!free_variables(t).count("x")) continue;
    auto got = free_variables(substitute(t, {{"x", u}}));
    auto want = free_variables(t);
    want.erase("x");
    for (const auto& n : free_variables(u)) want.insert(n);
    REQUIRE(got == want);
  }
}

TEST_CASE("numeral literals compare equal to their expansion") {
  CHECK(equal_canonical(Term::num(0), zero_term()));
  CHECK(equal_canonical(Term::num(2),
                        app(sigma_term(), app(sigma_term(), zero_term()))));
  CHECK(equal_canonical(Term::num(2), app(sigma_term(), Term::num(1))));
  CHECK_FALSE(equal_canonical(Term::num(2), Term::num(3)));
  CHECK(equal(canonicalize(Term::num(1)), app(sigma_term(), zero_term())));
}
