#include <catch2/catch_amalgamated.hpp>

#include "kam/forcing.hpp"
#include "kam/parse.hpp"

#include <random>

using namespace kam;

namespace {
const Stack k_base = Stack::push(Term::atom("p"), Stack::constant(0));
const Term k_tau = Term::atom("t");
}

TEST_CASE("bar wrapper rewrites the slot: single primitive") {
  Term g = cbar(CExpr::single(Prim::A2));
  // g * @x . put_slot(@y . #0, @t)  ->*  @x * put_slot(@y . #0, (@a2 @t))
  Stack pi = parse_stack("@y . #0");
  Process start{g, Stack::push(Term::atom("x"), put_slot(pi, k_tau))};
  Process want{Term::atom("x"),
               put_slot(pi, app(Term::atom("a2"), k_tau))};
  CHECK(reaches(start, want, 100));
}

TEST_CASE("bar wrapper with the empty composition is slot identity") {
  Term g = cbar(CExpr::identity());
  Process start{g, Stack::push(Term::atom("x"), put_slot(k_base, k_tau))};
  Process want{Term::atom("x"), put_slot(k_base, k_tau)};
  CHECK(reaches(start, want, 100));
}

TEST_CASE("bar wrapper respects composition order") {
  // application order [B1, A2]: b1 applied first, so it sits innermost
  Term g = cbar(CExpr{{Prim::B1, Prim::A2}});
  Process start{g, Stack::push(Term::atom("x"), put_slot(k_base, k_tau))};
  Term image = app(Term::atom("a2"), app(Term::atom("b1"), k_tau));
  CHECK(equal(image, cexpr_image(CExpr{{Prim::B1, Prim::A2}}, k_tau)));
  Process want{Term::atom("x"), put_slot(k_base, image)};
  CHECK(reaches(start, want, 100));
}

TEST_CASE("bar wrapper law on 200 random compositions") {
  std::mt19937 rng(2718);
  std::uniform_int_distribution<int> len(0, 6), ip(0, 5), d(0, 3);
  for (int i = 0; i < 200; ++i) {
    CExpr g;
    for (int j = 0, n = len(rng); j < n; ++j)
      g.prims.push_back(static_cast<Prim>(ip(rng)));

    Stack pi = Stack::constant(d(rng));
    for (int j = 0, n = d(rng); j < n; ++j)
      pi = Stack::push(Term::atom("s" + std::to_string(j)), pi);

    Term wrapper = cbar(g);
    Process start{wrapper, Stack::push(Term::atom("xi"), put_slot(pi, k_tau))};
    Process want{Term::atom("xi"), put_slot(pi, cexpr_image(g, k_tau))};
    size_t fuel = 200 + 60 * g.size();
    REQUIRE(reaches(start, want, fuel));
  }
}

TEST_CASE("bar of an arbitrary payload applies it to the slot") {
  Term g = bar_of(Term::atom("gam"));
  Process start{g, Stack::push(Term::atom("x"), put_slot(k_base, k_tau))};
  Process want{Term::atom("x"),
               put_slot(k_base, app(Term::atom("gam"), k_tau))};
  CHECK(reaches(start, want, 100));
}

// ---------------------------------------------------------------------------
// Star translation

TEST_CASE("star of the elementary combinators") {
  const StandardCExprs& g = standard_cexprs();
  ForcedTerm i = star_compile(Term::comb(Comb::I));
  CHECK(equal(i.star, app(cbar(g.gI), Term::comb(Comb::I))));
  CHECK(std::holds_alternative<WOne>(i.one));

  ForcedTerm k = star_compile(Term::comb(Comb::K));
  CHECK(equal(k.star, app(cbar(g.gK), Term::comb(Comb::K))));

  for (Comb c : {Comb::B, Comb::C, Comb::E, Comb::I, Comb::K, Comb::W,
                 Comb::CC})
    CHECK(is_closed(star_compile(Term::comb(c)).star));
}

TEST_CASE("star of an application") {
  ForcedTerm zero = star_compile(parse_term("(K I)"));
  Term ks = star_compile(Term::comb(Comb::K)).star;
  Term is = star_compile(Term::comb(Comb::I)).star;
  CHECK(equal(zero.star, app(alpha0_bar(), ks, is)));
  CHECK(equal(zero.one, meet(wone(), wone())));
}

TEST_CASE("atoms star to themselves under the unit condition") {
  ForcedTerm a = star_compile(Term::atom("a"));
  CHECK(equal(a.star, Term::atom("a")));
  CHECK(std::holds_alternative<WOne>(a.one));
}

TEST_CASE("star rejects open terms, continuations and instructions") {
  CHECK_THROWS_AS(star_compile(Term::variable("x")), ForcingError);
  CHECK_THROWS_AS(star_compile(Term::cont(Stack::constant(0))), ForcingError);
  CHECK_THROWS_AS(star_compile(Term::comb(Comb::Quote)), ForcingError);
  CHECK_THROWS_AS(star_compile(Term::comb(Comb::Read)), ForcingError);
}

TEST_CASE("condition tree mirrors the application tree") {
  std::mt19937 rng(55);
  std::uniform_int_distribution<int> pick(0, 99);
  std::function<Term(int)> gen = [&](int depth) -> Term {
    if (depth <= 0 || pick(rng) < 45) {
      int leaf = pick(rng);
      if (leaf < 25) return Term::atom("a");
      static const Comb cs[] = {Comb::B, Comb::C, Comb::E, Comb::I,
                                Comb::K, Comb::W, Comb::CC};
      return Term::comb(cs[pick(rng) % 7]);
    }
    return Term::apply(gen(depth - 1), gen(depth - 1));
  };
  for (int i = 0; i < 100; ++i) {
    Term t = gen(4);
    Term u = gen(4);
    ForcedTerm whole = star_compile(Term::apply(t, u));
    ForcedTerm left = star_compile(t);
    ForcedTerm right = star_compile(u);
    REQUIRE(equal(whole.one, meet(left.one, right.one)));
    REQUIRE(equal(whole.star, app(alpha0_bar(), left.star, right.star)));
    REQUIRE(is_closed(whole.star));
  }
}

// ---------------------------------------------------------------------------
// Executable reduction fragments of the starred combinators

TEST_CASE("fragment: starred W") {
  const StandardCExprs& g = standard_cexprs();
  Term star_w = star_compile(Term::comb(Comb::W)).star;
  Stack pi = parse_stack("@p . #0");
  Process start{star_w,
                Stack::push(Term::atom("xi"),
                            Stack::push(Term::atom("eta"), put_slot(pi, k_tau)))};
  Process want{Term::atom("xi"),
               Stack::push(Term::atom("eta"),
                           Stack::push(Term::atom("eta"),
                                       put_slot(pi, cexpr_image(g.gW, k_tau))))};
  CHECK(reaches(start, want, 20000));
}

TEST_CASE("fragment: starred B") {
  const StandardCExprs& g = standard_cexprs();
  Term star_b = star_compile(Term::comb(Comb::B)).star;
  Stack pi = parse_stack("@p . #0");
  Stack start_stack = Stack::push(
      Term::atom("xi"),
      Stack::push(Term::atom("eta"),
                  Stack::push(Term::atom("zeta"), put_slot(pi, k_tau))));
  Term want_head =
      app(app(alpha0_bar(), Term::atom("xi")),
          app(app(alpha0_bar(), Term::atom("eta")), Term::atom("zeta")));
  Process want{want_head, put_slot(pi, cexpr_image(g.gB, k_tau))};
  CHECK(reaches(Process{star_b, start_stack}, want, 20000));
}

TEST_CASE("fragment: starred continuation") {
  const StandardCExprs& g = standard_cexprs();
  Stack pi = parse_stack("@p . #0");
  Stack w = parse_stack("@w . #1");
  Term ks = cont_star(pi);
  CHECK(is_closed(ks));  // no variables...
  CHECK(contains_continuation(ks));  // ...but carries the saved stack
  CHECK(equal(parse_term(to_string(ks)), ks));  // prints and reparses

  Process start{ks, Stack::push(Term::atom("xi"), put_slot(w, k_tau))};
  Process want{Term::atom("xi"), put_slot(pi, cexpr_image(g.gk, k_tau))};
  CHECK(reaches(start, want, 20000));
}

TEST_CASE("fragment: starred cc captures a starred continuation") {
  const StandardCExprs& g = standard_cexprs();
  Term star_cc = star_compile(Term::comb(Comb::CC)).star;
  Stack pi = parse_stack("@p . #0");
  Process start{star_cc, Stack::push(Term::atom("xi"), put_slot(pi, k_tau))};
  Process want{Term::atom("xi"),
               Stack::push(cont_star(pi),
                           put_slot(pi, cexpr_image(g.gcc, k_tau)))};
  CHECK(reaches(start, want, 20000));
}

// ---------------------------------------------------------------------------
// Adapters

TEST_CASE("adapter for an atomic shape is the instruction pair") {
  AdapterPair a = adapter_chi(Shape::atom());
  CHECK(is_comb(a.into, Comb::Read));
  CHECK(is_comb(a.outof, Comb::Write));
}

TEST_CASE("adapter for an arrow shape: machine law") {
  AdapterPair a = adapter_chi(Shape::arrow(Shape::atom(), Shape::atom()));
  CHECK(is_closed(a.into));
  CHECK(is_closed(a.outof));

  // into * xi . eta . pi^t  ->*  (read (xi (write eta))) * pi^(g0 t)
  CExpr g0 = derive_to(parse_wedge("(p ^ (q ^ r))"),
                       parse_wedge("((p ^ q) ^ r)"));
  Stack pi = parse_stack("@p . #0");
  Process start{a.into,
                Stack::push(Term::atom("xi"),
                            Stack::push(Term::atom("eta"), put_slot(pi, k_tau)))};
  Process want{app(Term::comb(Comb::Read),
                   app(Term::atom("xi"),
                       app(Term::comb(Comb::Write), Term::atom("eta")))),
               put_slot(pi, cexpr_image(g0, k_tau))};
  CHECK(reaches(start, want, 20000));

  // outof * xi . eta . pi  ->*  (write ((a0bar xi) (read eta))) * pi
  Process start2{a.outof, parse_stack("@xi . @eta . @p . #0")};
  Process want2{app(Term::comb(Comb::Write),
                    app(app(alpha0_bar(), Term::atom("xi")),
                        app(Term::comb(Comb::Read), Term::atom("eta")))),
                parse_stack("@p . #0")};
  CHECK(reaches(start2, want2, 20000));
}

TEST_CASE("adapters are closed for every shape up to depth 3, and samples of depth 5") {
  std::vector<Shape> shapes = {Shape::atom()};
  for (int d = 0; d < 2; ++d) {
    std::vector<Shape> next = shapes;
    for (const auto& a : shapes)
      for (const auto& b : shapes) next.push_back(Shape::arrow(a, b));
    shapes = next;
  }
  for (const auto& s : shapes) {
    AdapterPair a = adapter_chi(s);
    REQUIRE(is_closed(a.into));
    REQUIRE(is_closed(a.outof));
  }

  std::mt19937 rng(7);
  std::uniform_int_distribution<int> pick(0, 99);
  std::function<Shape(int)> gen = [&](int depth) -> Shape {
    if (depth <= 0 || pick(rng) < 40) return Shape::atom();
    return Shape::arrow(gen(depth - 1), gen(depth - 1));
  };
  for (int i = 0; i < 50; ++i) {
    AdapterPair a = adapter_chi(gen(5));
    REQUIRE(is_closed(a.into));
    REQUIRE(is_closed(a.outof));
  }
}

TEST_CASE("first-order adapter: bottom shape machine law") {
  AdapterPair d = adapter_delta(FoShape::bot());
  CHECK(is_closed(d.into));
  CHECK(is_closed(d.outof));

  // into * xi . pi^t  ->*  xi * (a t) . pi     with a :: p^q => p
  CExpr a = derive_to(parse_wedge("(p ^ q)"), parse_wedge("p"));
  Stack pi = parse_stack("@p . #0");
  Process start{d.into, Stack::push(Term::atom("xi"), put_slot(pi, k_tau))};
  Process want{Term::atom("xi"),
               Stack::push(cexpr_image(a, k_tau), pi)};
  CHECK(reaches(start, want, 5000));

  // outof * xi . y . pi  ->*  xi * pi^(a' y)   with a' :: p => p^1
  CExpr ap = derive_to(parse_wedge("p"), parse_wedge("(p ^ 1)"));
  Process start2{d.outof, parse_stack("@xi . @y0 . @p . #0")};
  Process want2{Term::atom("xi"),
                put_slot(parse_stack("@p . #0"),
                         cexpr_image(ap, Term::atom("y0")))};
  CHECK(reaches(start2, want2, 5000));
}

TEST_CASE("first-order adapter: equality guard is transparent") {
  AdapterPair d1 = adapter_delta(FoShape::bot());
  AdapterPair d2 = adapter_delta(FoShape::eq_guard(FoShape::bot()));
  CHECK(equal(d1.into, d2.into));
  CHECK(equal(d1.outof, d2.outof));
}

TEST_CASE("first-order adapter: remaining shapes build closed") {
  for (const FoShape& s :
       {FoShape::arrow(FoShape::bot(), FoShape::bot()),
        FoShape::pred_guard(FoShape::bot()),
        FoShape::eps_guard(FoShape::bot()),
        FoShape::arrow(FoShape::pred_guard(FoShape::bot()),
                       FoShape::arrow(FoShape::bot(), FoShape::bot())),
        FoShape::arrow(FoShape::eps_guard(FoShape::bot()),
                       FoShape::eq_guard(FoShape::bot()))}) {
    AdapterPair d = adapter_delta(s);
    REQUIRE(is_closed(d.into));
    REQUIRE(is_closed(d.outof));
  }
}

TEST_CASE("membership-guard adapter uses the unit-dropping rewrite") {
  AdapterPair d = adapter_delta(FoShape::eps_guard(FoShape::bot()));
  // into * xi . pi^t  ->*  xi * (a t) . pi   with a :: p^1 => p
  CExpr a = derive_to(parse_wedge("(p ^ 1)"), parse_wedge("p"));
  Stack pi = parse_stack("@p . #0");
  Process start{d.into, Stack::push(Term::atom("xi"), put_slot(pi, k_tau))};
  Process want{Term::atom("xi"), Stack::push(cexpr_image(a, k_tau), pi)};
  CHECK(reaches(start, want, 5000));
}
