#include <catch2/catch_amalgamated.hpp>

#include "kam/wedge.hpp"

#include <random>

using namespace kam;

namespace {
Wedge w(const char* s) { return parse_wedge(s); }
}

TEST_CASE("wedge parse and print") {
  CHECK(to_string(w("(p ^ (q ^ 1))")) == "(p ^ (q ^ 1))");
  CHECK(equal(w("((p^q)^r)"), meet(meet(wvar("p"), wvar("q")), wvar("r"))));
  CHECK_THROWS(parse_wedge("(p ^"));
}

TEST_CASE("primitive schemas") {
  CHECK(equal(apply_prim(Prim::A2, w("(p ^ q)")), w("q")));
  // schema variables bind subterms
  CHECK(equal(apply_prim(Prim::B1, w("((p ^ q) ^ r)")), w("(r ^ (p ^ q))")));
  CHECK(equal(apply_prim(Prim::A0, w("((p ^ q) ^ r)")), w("(p ^ (q ^ r))")));
  CHECK(equal(apply_prim(Prim::A1, w("p")), w("(p ^ 1)")));
  CHECK(equal(apply_prim(Prim::B0, w("(p ^ 1)")), w("((p ^ 1) ^ (p ^ 1))")));
  CHECK(equal(apply_prim(Prim::B2, w("(((p ^ q) ^ r) ^ s)")),
              w("((p ^ (q ^ r)) ^ s)")));

  CHECK_THROWS_AS(apply_prim(Prim::A0, w("(p ^ q)")), ShapeMismatch);
  CHECK_THROWS_AS(apply_prim(Prim::A2, w("p")), ShapeMismatch);
  CHECK_THROWS_AS(apply_prim(Prim::B2, w("((p ^ q) ^ r)")), ShapeMismatch);
}

TEST_CASE("apply_cexpr folds in application order") {
  CHECK(equal(apply_cexpr(CExpr::identity(), w("(p ^ q)")), w("(p ^ q)")));
  CExpr g{{Prim::B1, Prim::A2}};  // swap, then drop the left part
  CHECK(equal(apply_cexpr(g, w("(p ^ q)")), w("p")));
  CHECK_THROWS_AS(apply_cexpr(CExpr{{Prim::A1, Prim::A0}}, w("p")),
                  ShapeMismatch);
}

TEST_CASE("cexpr text round trip keeps order") {
  CExpr g{{Prim::B0, Prim::A0, Prim::A2, Prim::B1}};
  std::string s = to_string(g);
  CHECK(s == "b1 a2 a0 b0");  // printed last-applied first
  CExpr back = parse_cexpr(s);
  CHECK(back.prims == g.prims);
}

TEST_CASE("the five derived rewrites act as stated") {
  const DerivedCExprs& d = derived_cexprs();
  CHECK(d.b0p.prims ==
        std::vector<Prim>{Prim::B0, Prim::A0, Prim::A2, Prim::B1});
  CHECK(equal(apply_cexpr(d.b0p, w("(p ^ q)")), w("((p ^ q) ^ q)")));
  CHECK(equal(apply_cexpr(d.b1p, w("((p ^ q) ^ r)")), w("((q ^ p) ^ r)")));
  CHECK(equal(apply_cexpr(d.b2p, w("(p ^ (q ^ r))")), w("((p ^ q) ^ r)")));
  CHECK(equal(apply_cexpr(d.b3, w("(p ^ (q ^ r))")), w("(p ^ (r ^ q))")));
  CHECK(equal(apply_cexpr(d.b3p, w("((p ^ (q ^ r)) ^ s)")),
              w("((p ^ (r ^ q)) ^ s)")));
}

TEST_CASE("adjoin_var base cases") {
  CHECK(adjoin_var(w("p"), "p").prims == std::vector<Prim>{Prim::B0});
  CHECK(equal(apply_cexpr(adjoin_var(w("p"), "p"), w("p")), w("(p ^ p)")));

  CExpr g = adjoin_var(w("(u ^ p)"), "p");
  CHECK(g.prims == derived_cexprs().b0p.prims);
  CHECK(equal(apply_cexpr(g, w("(u ^ p)")), w("((u ^ p) ^ p)")));
}

TEST_CASE("adjoin_var recursive cases verified by the rewriting oracle") {
  auto check = [](const char* t, const char* p) {
    Wedge wt = w(t);
    CExpr g = adjoin_var(wt, p);
    REQUIRE(equal(apply_cexpr(g, wt), meet(wt, wvar(p))));
  };
  check("((p ^ q) ^ r)", "q");
  check("((p ^ q) ^ r)", "p");
  check("(p ^ (q ^ r))", "q");
  check("(p ^ (q ^ r))", "r");
  check("((1 ^ p) ^ (q ^ (r ^ 1)))", "r");

  CHECK_THROWS_AS(adjoin_var(w("(p ^ q)"), "z"), VariableAbsent);
}

TEST_CASE("adjoin_term") {
  CHECK(adjoin_term(w("p"), wone()).prims == std::vector<Prim>{Prim::A1});
  Wedge t = w("(p ^ q)");
  Wedge u = w("(q ^ p)");
  CExpr g = adjoin_term(t, u);
  CHECK(equal(apply_cexpr(g, t), meet(t, u)));
  CHECK_THROWS_AS(adjoin_term(w("p"), w("q")), VariableAbsent);
}

TEST_CASE("derive_to examples") {
  // 1^(p^(q^r)) => p^r
  Wedge s = w("(1 ^ (p ^ (q ^ r)))");
  Wedge t = w("(p ^ r)");
  CHECK(equal(apply_cexpr(derive_to(s, t), s), t));

  // p^(q^r) => q^p
  Wedge s2 = w("(p ^ (q ^ r))");
  Wedge t2 = w("(q ^ p)");
  CHECK(equal(apply_cexpr(derive_to(s2, t2), s2), t2));

  // t => t always derivable
  Wedge t3 = w("((p ^ 1) ^ (q ^ r))");
  CHECK(equal(apply_cexpr(derive_to(t3, t3), t3), t3));

  CHECK_THROWS_AS(derive_to(w("p"), w("(p ^ z)")), VariableAbsent);
}

TEST_CASE("the eight standard schemas") {
  const StandardCExprs& g = standard_cexprs();
  auto check = [](const CExpr& ce, const char* from, const char* to) {
    CAPTURE(from, to);
    REQUIRE(equal(apply_cexpr(ce, w(from)), w(to)));
  };
  check(g.gI, "(p ^ q)", "q");
  check(g.gK, "(1 ^ (p ^ (q ^ r)))", "(p ^ r)");
  check(g.gE, "(1 ^ (p ^ (q ^ r)))", "((p ^ q) ^ r)");
  check(g.gW, "(1 ^ (p ^ (q ^ r)))", "(p ^ (q ^ (q ^ r)))");
  check(g.gC, "(1 ^ (p ^ (q ^ (r ^ s))))", "(p ^ (r ^ (q ^ s)))");
  check(g.gB, "(1 ^ (p ^ (q ^ (r ^ s))))", "((p ^ (q ^ r)) ^ s)");
  check(g.gcc, "(1 ^ (p ^ q))", "(p ^ (q ^ q))");
  check(g.gk, "(p ^ (q ^ r))", "(q ^ p)");
}

// ---------------------------------------------------------------------------
// Properties

namespace {

Wedge random_wedge(std::mt19937& rng, int depth,
                   const std::vector<std::string>& vars, bool allow_one) {
  std::uniform_int_distribution<int> pick(0, 99);
  if (depth <= 0 || pick(rng) < 40) {
    if (allow_one && pick(rng) < 20) return wone();
    std::uniform_int_distribution<size_t> iv(0, vars.size() - 1);
    return wvar(vars[iv(rng)]);
  }
  return meet(random_wedge(rng, depth - 1, vars, allow_one),
              random_wedge(rng, depth - 1, vars, allow_one));
}

}  // namespace

TEST_CASE("derivation soundness on 1000 random pairs") {
  std::mt19937 rng(271828);
  std::vector<std::string> vars = {"p", "q", "r", "s"};
  for (int i = 0; i < 1000; ++i) {
    Wedge t = random_wedge(rng, 6, vars, true);
    // the target draws only from variables of t (plus 1)
    auto tv = wedge_vars(t);
    std::vector<std::string> avail(tv.begin(), tv.end());
    Wedge u = avail.empty() ? wone() : random_wedge(rng, 6, avail, true);
    CExpr g = derive_to(t, u);
    REQUIRE(equal(apply_cexpr(g, t), u));
  }
}

TEST_CASE("primitives commute with variable renaming") {
  std::mt19937 rng(1618);
  std::vector<std::string> vars = {"p", "q", "r"};
  std::map<std::string, std::string> ren = {
      {"p", "u1"}, {"q", "u2"}, {"r", "u3"}};
  int applied = 0;
  for (int i = 0; i < 2000; ++i) {
    Wedge t = random_wedge(rng, 4, vars, true);
    std::uniform_int_distribution<int> ip(0, 5);
    Prim p = static_cast<Prim>(ip(rng));
    try {
      Wedge a = rename_wedge(apply_prim(p, t), ren);
      Wedge b = apply_prim(p, rename_wedge(t, ren));
      REQUIRE(equal(a, b));
      ++applied;
    } catch (const ShapeMismatch&) {
      // must mismatch on the renamed term as well
      CHECK_THROWS_AS(apply_prim(p, rename_wedge(t, ren)), ShapeMismatch);
    }
  }
  CHECK(applied > 500);
}
