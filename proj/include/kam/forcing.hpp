// Programs over the slotted machine: the bar wrapper for C-expressions, the
// star translation of proof-like terms, and the adapter pairs indexed by
// propositional / first-order shape.
//
// A C-expression acts on machine states through its bar wrapper
//     bar(g) = \x. (read \y. ((write x) (g y)))
// which pops the slot value, rewrites it by g, and writes it back:
//     bar(g) * xi.pi^t  ->* xi * pi^(g t).
// In traces the six primitives appear as the atoms @a0 @a1 @a2 @b0 @b1 @b2;
// tests instantiate them as needed.
#pragma once

#include "kam/lambda.hpp"
#include "kam/machine.hpp"
#include "kam/numerals.hpp"
#include "kam/wedge.hpp"

namespace kam {

struct ForcingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Term prim_atom(Prim p) { return Term::atom(prim_name(p)); }

using PrimTerms = std::map<Prim, Term>;

inline const PrimTerms& default_prim_atoms() {
  static const PrimTerms m = {
      {Prim::A0, prim_atom(Prim::A0)}, {Prim::A1, prim_atom(Prim::A1)},
      {Prim::A2, prim_atom(Prim::A2)}, {Prim::B0, prim_atom(Prim::B0)},
      {Prim::B1, prim_atom(Prim::B1)}, {Prim::B2, prim_atom(Prim::B2)}};
  return m;
}

// The image (g t) as a term: primitives applied in application order, the
// first-applied innermost.
inline Term cexpr_image(const CExpr& g, Term t,
                        const PrimTerms& prims = default_prim_atoms()) {
  for (Prim p : g.prims) t = app(prims.at(p), t);
  return t;
}

// bar for an arbitrary payload term d (the image step is a single
// application of d).
inline Term bar_of(const Term& d) {
  return eliminate(lam(
      "x", lapp(le(Term::comb(Comb::Read)),
                lam("y", lapp(lapp(le(Term::comb(Comb::Write)), lv("x")),
                              lapp(le(d), lv("y")))))));
}

// bar for a C-expression.
inline Term cbar(const CExpr& g,
                 const PrimTerms& prims = default_prim_atoms()) {
  // build (g y) as an LTerm: wrap the variable, innermost first
  LTerm img = lv("y");
  for (Prim p : g.prims) img = lapp(le(prims.at(p)), std::move(img));
  return eliminate(
      lam("x", lapp(le(Term::comb(Comb::Read)),
                    lam("y", lapp(lapp(le(Term::comb(Comb::Write)), lv("x")),
                                  std::move(img))))));
}

inline const Term& alpha0_bar() {
  static const Term t = cbar(CExpr::single(Prim::A0));
  return t;
}

// ---------------------------------------------------------------------------
// Star translation: t |-> (t*, 1_t).
//
//   B* = \x\y\z. (bar gB ((a0bar x) ((a0bar y) z)))
//   C* = (bar gC C)       E* = \x\y. (bar gE ((a0bar x) y))
//   I* = (bar gI I)       K* = (bar gK K)      W* = (bar gW W)
//   cc* = (read \x\y. (cc \k. (((write y) (gcc x)) (read \x\y. (k ((write y) (gk x)))))))
//   (t u)* = ((a0bar t*) u*)
//
// 1_t mirrors t's application tree with 1 at the leaves.

struct ForcedTerm {
  Term star;
  Wedge one;
};

inline const Term& star_of_comb(Comb c) {
  const StandardCExprs& g = standard_cexprs();
  switch (c) {
    case Comb::B: {
      static const Term t = eliminate(lam(
          "x",
          lam("y",
              lam("z", lapp(le(cbar(g.gB)),
                            lapp(lapp(le(alpha0_bar()), lv("x")),
                                 lapp(lapp(le(alpha0_bar()), lv("y")),
                                      lv("z"))))))));
      return t;
    }
    case Comb::C: {
      static const Term t = app(cbar(g.gC), Term::comb(Comb::C));
      return t;
    }
    case Comb::E: {
      static const Term t = eliminate(
          lam("x", lam("y", lapp(le(cbar(g.gE)),
                                 lapp(lapp(le(alpha0_bar()), lv("x")),
                                      lv("y"))))));
      return t;
    }
    case Comb::I: {
      static const Term t = app(cbar(g.gI), Term::comb(Comb::I));
      return t;
    }
    case Comb::K: {
      static const Term t = app(cbar(g.gK), Term::comb(Comb::K));
      return t;
    }
    case Comb::W: {
      static const Term t = app(cbar(g.gW), Term::comb(Comb::W));
      return t;
    }
    case Comb::CC: {
      const CExpr& gcc = g.gcc;
      const CExpr& gk = g.gk;
      auto img = [](const CExpr& ce, const char* v) {
        LTerm t = lv(v);
        for (Prim p : ce.prims) t = lapp(le(prim_atom(p)), std::move(t));
        return t;
      };
      // inner continuation wrapper: (read \x\y. (k ((write y) (gk x))))
      LTerm kwrap =
          lapp(le(Term::comb(Comb::Read)),
               lam("x2", lam("y2", lapp(lv("k"),
                                        lapp(lapp(le(Term::comb(Comb::Write)),
                                                  lv("y2")),
                                             img(gk, "x2"))))));
      LTerm body = lapp(
          le(Term::comb(Comb::Read)),
          lam("x",
              lam("y",
                  lapp(le(Term::comb(Comb::CC)),
                       lam("k", lapp(lapp(lapp(le(Term::comb(Comb::Write)),
                                               lv("y")),
                                          img(gcc, "x")),
                                     std::move(kwrap)))))));
      static const Term t = eliminate(body);
      return t;
    }
    default:
      throw ForcingError(std::string("no star form for instruction ") +
                         comb_name(c));
  }
}

inline ForcedTerm star_compile(const Term& t) {
  const TermNode& n = t.node();
  if (std::holds_alternative<Variable>(n))
    throw ForcingError("cannot star-compile an open term");
  if (std::holds_alternative<Continuation>(n))
    throw ForcingError("cannot star-compile a continuation constant");
  if (auto* c = std::get_if<Comb>(&n)) {
    if (*c == Comb::Quote || *c == Comb::Read || *c == Comb::Write)
      throw ForcingError(std::string("no star form for instruction ") +
                         comb_name(*c));
    return {star_of_comb(*c), wone()};
  }
  if (std::holds_alternative<AtomConst>(n)) {
    // atoms model already-compiled realizers: star to themselves under 1
    return {t, wone()};
  }
  if (auto* num = std::get_if<NumLit>(&n)) {
    if (num->value == 0) return star_compile(app(Term::comb(Comb::K), Term::comb(Comb::I)));
    ForcedTerm prev = star_compile(Term::num(num->value - 1));
    ForcedTerm sig = star_compile(sigma_term());
    return {app(alpha0_bar(), sig.star, prev.star), meet(sig.one, prev.one)};
  }
  const Apply& a = std::get<Apply>(n);
  ForcedTerm f = star_compile(a.fn);
  ForcedTerm x = star_compile(a.arg);
  return {app(alpha0_bar(), f.star, x.star), meet(f.one, x.one)};
}

// k*_pi = (read \x\y. (k[pi] ((write y) (gk x))))
inline Term cont_star(const Stack& pi) {
  const CExpr& gk = standard_cexprs().gk;
  LTerm img = lv("x");
  for (Prim p : gk.prims) img = lapp(le(prim_atom(p)), std::move(img));
  return eliminate(
      lapp(le(Term::comb(Comb::Read)),
           lam("x", lam("y", lapp(le(Term::cont(pi)),
                                  lapp(lapp(le(Term::comb(Comb::Write)),
                                            lv("y")),
                                       std::move(img)))))));
}

// ---------------------------------------------------------------------------
// Adapters indexed by propositional shape (atoms and arrows).
//
//   atomic:      (read, write)
//   A -> B:      chi  = \x\y. (bar g0 (chiB (x (chiA' y))))
//                chi' = \x\y. (chiB' ((a0bar x) (chiA y)))
//   with g0 :: p^(q^r) => (p^q)^r.

struct Shape {
  enum class Kind { Atom, Arrow } kind = Kind::Atom;
  std::shared_ptr<const Shape> from, to;

  static Shape atom() { return Shape{}; }
  static Shape arrow(Shape a, Shape b) {
    Shape s;
    s.kind = Kind::Arrow;
    s.from = std::make_shared<const Shape>(std::move(a));
    s.to = std::make_shared<const Shape>(std::move(b));
    return s;
  }
};

struct AdapterPair {
  Term into;   // chi_F: a realizer of the forcing statement into the pair algebra
  Term outof;  // chi'_F: the converse direction
};

inline AdapterPair adapter_chi(const Shape& shape) {
  if (shape.kind == Shape::Kind::Atom)
    return {Term::comb(Comb::Read), Term::comb(Comb::Write)};
  AdapterPair a = adapter_chi(*shape.from);
  AdapterPair b = adapter_chi(*shape.to);
  CExpr g0 = derive_to(meet(wvar("p"), meet(wvar("q"), wvar("r"))),
                       meet(meet(wvar("p"), wvar("q")), wvar("r")));
  Term into = eliminate(lam(
      "x", lam("y", lapp(le(cbar(g0)),
                         lapp(le(b.into),
                              lapp(lv("x"), lapp(le(a.outof), lv("y"))))))));
  Term outof = eliminate(lam(
      "x", lam("y", lapp(le(b.outof),
                         lapp(lapp(le(alpha0_bar()), lv("x")),
                              lapp(le(a.into), lv("y")))))));
  return {into, outof};
}

// First-order shapes.  The adapters depend only on this skeleton:
//
//   bottom:      delta  = \x. (read \y. (x (a y)))        a :: p^q => p
//                delta' = \x\y. ((write x) (a' y))        a' :: p => p^1
//   A -> B:      the two-sided wrapper from the inductive step
//   R-guard:     \x\y. (bar a (deltaB \z. ((x z) y)))     a :: p^(1^r) => p^r
//   =-guard:     transparent (same pair as the body)
//   eps-guard:   like bottom but with a :: p^1 => p (membership is atomic)

struct FoShape {
  enum class Kind { Bot, Arrow, PredGuard, EqGuard, EpsGuard } kind = Kind::Bot;
  std::shared_ptr<const FoShape> a, b;  // Arrow: a -> b; guards: body in b

  static FoShape bot() { return FoShape{}; }
  static FoShape arrow(FoShape x, FoShape y) {
    FoShape s;
    s.kind = Kind::Arrow;
    s.a = std::make_shared<const FoShape>(std::move(x));
    s.b = std::make_shared<const FoShape>(std::move(y));
    return s;
  }
  static FoShape guard(Kind k, FoShape body) {
    FoShape s;
    s.kind = k;
    s.b = std::make_shared<const FoShape>(std::move(body));
    return s;
  }
  static FoShape pred_guard(FoShape body) {
    return guard(Kind::PredGuard, std::move(body));
  }
  static FoShape eq_guard(FoShape body) {
    return guard(Kind::EqGuard, std::move(body));
  }
  static FoShape eps_guard(FoShape body) {
    return guard(Kind::EpsGuard, std::move(body));
  }
};

inline AdapterPair adapter_delta(const FoShape& shape) {
  Wedge p = wvar("p"), q = wvar("q"), r = wvar("r");
  auto imgL = [](const CExpr& ce, LTerm t) {
    for (Prim pr : ce.prims) t = lapp(le(prim_atom(pr)), std::move(t));
    return t;
  };
  switch (shape.kind) {
    case FoShape::Kind::Bot: {
      CExpr a = derive_to(meet(p, q), p);
      CExpr ap = derive_to(p, meet(p, wone()));
      Term into = eliminate(
          lam("x", lapp(le(Term::comb(Comb::Read)),
                        lam("y", lapp(lv("x"), imgL(a, lv("y")))))));
      Term outof = eliminate(
          lam("x", lam("y", lapp(lapp(le(Term::comb(Comb::Write)), lv("x")),
                                 imgL(ap, lv("y"))))));
      return {into, outof};
    }
    case FoShape::Kind::Arrow: {
      AdapterPair da = adapter_delta(*shape.a);
      AdapterPair db = adapter_delta(*shape.b);
      CExpr a = derive_to(meet(p, meet(q, r)), p);
      CExpr b = derive_to(meet(p, meet(q, r)), q);
      CExpr g = derive_to(meet(p, meet(q, r)), meet(wone(), r));
      // \x\y. (read \z. (((write (deltaB \d. ((x (a z)) ((deltaA' y) (b z))))) (g z)))
      LTerm inner = lapp(
          lapp(lv("x"), imgL(a, lv("z"))),
          lapp(lapp(le(da.outof), lv("y")), imgL(b, lv("z"))));
      LTerm into_body = lapp(
          le(Term::comb(Comb::Read)),
          lam("z",
              lapp(lapp(le(Term::comb(Comb::Write)),
                        lapp(le(db.into), lam("d", std::move(inner)))),
                   imgL(g, lv("z")))));
      Term into = eliminate(lam("x", lam("y", std::move(into_body))));
      CExpr ap = derive_to(p, meet(p, wone()));
      // \x\y\z. ((deltaB' ((a0bar x) (deltaA \d. z))) (a' y))
      Term outof = eliminate(lam(
          "x",
          lam("y",
              lam("z", lapp(lapp(le(db.outof),
                                 lapp(lapp(le(alpha0_bar()), lv("x")),
                                      lapp(le(da.into), lam("d", lv("z"))))),
                            imgL(ap, lv("y")))))));
      return {into, outof};
    }
    case FoShape::Kind::PredGuard: {
      AdapterPair db = adapter_delta(*shape.b);
      CExpr a = derive_to(meet(p, meet(wone(), r)), meet(p, r));
      CExpr ap = derive_to(p, meet(p, wone()));
      Term into = eliminate(lam(
          "x", lam("y", lapp(le(cbar(a)),
                             lapp(le(db.into),
                                  lam("z", lapp(lapp(lv("x"), lv("z")),
                                                lv("y"))))))));
      Term outof = eliminate(lam(
          "x", lam("y", lam("z", lapp(lapp(le(db.outof),
                                           lapp(lapp(le(alpha0_bar()),
                                                     lv("x")),
                                                lv("z"))),
                                      imgL(ap, lv("y")))))));
      return {into, outof};
    }
    case FoShape::Kind::EqGuard:
      return adapter_delta(*shape.b);
    case FoShape::Kind::EpsGuard: {
      // membership formulas are atomic; the body shape does not matter
      CExpr a = derive_to(meet(p, wone()), p);
      CExpr ap = derive_to(p, meet(p, wone()));
      Term into = eliminate(
          lam("x", lapp(le(Term::comb(Comb::Read)),
                        lam("y", lapp(lv("x"), imgL(a, lv("y")))))));
      Term outof = eliminate(
          lam("x", lam("y", lapp(lapp(le(Term::comb(Comb::Write)), lv("x")),
                                 imgL(ap, lv("y"))))));
      return {into, outof};
    }
  }
  throw std::logic_error("unreachable shape");
}

}  // namespace kam
