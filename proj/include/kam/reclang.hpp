// Primitive recursive programs: a tiny tree language with a meta-level
// evaluator (the oracle) and a compiler to machine terms.
//
// The compiled term is in continuation style:
//
//     theta * m1 ... mk . f . pi   ->*   f * n . pi
//
// where n is the value of the program on m1..mk.  Recursion is compiled to
// numeral iteration over a state closure carrying the index and the
// accumulator, so arguments are only ever used in applied position; a term
// that merely behaves like a numeral works as an argument too.
#pragma once

#include "kam/lambda.hpp"
#include "kam/numerals.hpp"

namespace kam {

struct RecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Rec;
using RecPtr = std::shared_ptr<const Rec>;

struct RZero {
  unsigned arity;
};
struct RSucc {};
struct RProj {
  unsigned arity;
  unsigned index;
};
struct RCompose {
  RecPtr f;
  std::vector<RecPtr> gs;
};
// phi(0, xs) = base(xs); phi(n+1, xs) = step(n, phi(n, xs), xs)
struct RPrimRec {
  RecPtr base;
  RecPtr step;
};

class Rec : public std::variant<RZero, RSucc, RProj, RCompose, RPrimRec> {
 public:
  using variant::variant;

  static Rec zero(unsigned arity) { return Rec(RZero{arity}); }
  static Rec succ() { return Rec(RSucc{}); }
  static Rec proj(unsigned arity, unsigned index) {
    if (index >= arity) throw RecError("projection index out of range");
    return Rec(RProj{arity, index});
  }
  static Rec compose(Rec f, std::vector<Rec> gs) {
    RCompose c;
    c.f = std::make_shared<const Rec>(std::move(f));
    for (auto& g : gs) c.gs.push_back(std::make_shared<const Rec>(std::move(g)));
    return Rec(std::move(c));
  }
  static Rec prim_rec(Rec base, Rec step) {
    return Rec(RPrimRec{std::make_shared<const Rec>(std::move(base)),
                        std::make_shared<const Rec>(std::move(step))});
  }

  unsigned arity() const {
    if (auto* z = std::get_if<RZero>(this)) return z->arity;
    if (std::holds_alternative<RSucc>(*this)) return 1;
    if (auto* p = std::get_if<RProj>(this)) return p->arity;
    if (auto* c = std::get_if<RCompose>(this)) {
      if (c->gs.empty()) throw RecError("composition needs inner programs");
      return c->gs.front()->arity();
    }
    return std::get<RPrimRec>(*this).base->arity() + 1;
  }

  // arity consistency over the whole tree
  void check() const {
    if (auto* c = std::get_if<RCompose>(this)) {
      if (c->gs.empty()) throw RecError("composition needs inner programs");
      if (c->f->arity() != c->gs.size())
        throw RecError("outer arity does not match inner program count");
      unsigned k = c->gs.front()->arity();
      for (const auto& g : c->gs) {
        if (g->arity() != k) throw RecError("inner arities disagree");
        g->check();
      }
      c->f->check();
    } else if (auto* p = std::get_if<RPrimRec>(this)) {
      if (p->step->arity() != p->base->arity() + 2)
        throw RecError("step arity must be base arity + 2");
      p->base->check();
      p->step->check();
    }
  }
};

// Meta-level oracle.
inline Nat rec_eval(const Rec& r, const std::vector<Nat>& args) {
  if (auto* z = std::get_if<RZero>(&r)) {
    if (args.size() != z->arity) throw RecError("arity mismatch");
    return 0;
  }
  if (std::holds_alternative<RSucc>(r)) {
    if (args.size() != 1) throw RecError("arity mismatch");
    return args[0] + 1;
  }
  if (auto* p = std::get_if<RProj>(&r)) {
    if (args.size() != p->arity) throw RecError("arity mismatch");
    return args[p->index];
  }
  if (auto* c = std::get_if<RCompose>(&r)) {
    std::vector<Nat> ys;
    ys.reserve(c->gs.size());
    for (const auto& g : c->gs) ys.push_back(rec_eval(*g, args));
    return rec_eval(*c->f, ys);
  }
  const RPrimRec& p = std::get<RPrimRec>(r);
  if (args.empty()) throw RecError("arity mismatch");
  Nat n = args[0];
  std::vector<Nat> rest(args.begin() + 1, args.end());
  std::vector<Nat> base_args = rest;
  Nat acc = rec_eval(*p.base, base_args);
  for (Nat i = 0; i < n; ++i) {
    std::vector<Nat> step_args;
    step_args.push_back(i);
    step_args.push_back(acc);
    step_args.insert(step_args.end(), rest.begin(), rest.end());
    acc = rec_eval(*p.step, step_args);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Compilation

namespace detail {
inline std::vector<std::string> arg_names(unsigned k) {
  std::vector<std::string> out;
  for (unsigned i = 0; i < k; ++i) out.push_back("x" + std::to_string(i + 1));
  return out;
}
}  // namespace detail

inline Term compile_rec(const Rec& r) {
  r.check();
  unsigned k = r.arity();
  auto xs = detail::arg_names(k);

  LTerm body = lv("f");
  if (std::holds_alternative<RZero>(r)) {
    body = lapp(lv("f"), le(Term::num(0)));
  } else if (std::holds_alternative<RSucc>(r)) {
    body = lapp(lv("f"), lapp(le(sigma_term()), lv("x1")));
  } else if (auto* p = std::get_if<RProj>(&r)) {
    body = lapp(lv("f"), lv(xs[p->index]));
  } else if (auto* c = std::get_if<RCompose>(&r)) {
    // ((g1 xs) \y1. ((g2 xs) \y2. ... ((f' y1..ym) f)))
    std::vector<Term> inner;
    for (const auto& g : c->gs) inner.push_back(compile_rec(*g));
    Term outer = compile_rec(*c->f);
    size_t m = inner.size();

    LTerm call = le(outer);
    for (size_t i = 0; i < m; ++i)
      call = lapp(std::move(call), lv("y" + std::to_string(i + 1)));
    call = lapp(std::move(call), lv("f"));

    // build from the last inner program outwards
    for (size_t i = m; i-- > 0;) {
      LTerm apply_g = le(inner[i]);
      for (const auto& x : xs) apply_g = lapp(std::move(apply_g), lv(x));
      call = lapp(std::move(apply_g),
                  lam("y" + std::to_string(i + 1), std::move(call)));
    }
    body = std::move(call);
  } else {
    const RPrimRec& pr = std::get<RPrimRec>(r);
    Term base_c = compile_rec(*pr.base);
    Term step_c = compile_rec(*pr.step);
    std::vector<std::string> rest(xs.begin() + 1, xs.end());

    // BASE = \kap. ((base rest) \v. ((kap %0) v))
    LTerm base_call = le(base_c);
    for (const auto& x : rest) base_call = lapp(std::move(base_call), lv(x));
    LTerm base_state = lam(
        "kap", lapp(std::move(base_call),
                    lam("v", lapp(lapp(lv("kap"), le(Term::num(0))), lv("v")))));

    // STEP = \s. \kap. (s \i. \acc. ((step i acc rest) \b. ((kap (sig i)) b)))
    LTerm step_call = lapp(lapp(le(step_c), lv("i")), lv("acc"));
    for (const auto& x : rest) step_call = lapp(std::move(step_call), lv(x));
    step_call =
        lapp(std::move(step_call),
             lam("b", lapp(lapp(lv("kap"),
                               lapp(le(sigma_term()), lv("i"))),
                          lv("b"))));
    LTerm step_state = lam(
        "s", lam("kap", lapp(lv("s"), lam("i", lam("acc", std::move(step_call))))));

    // body = (((x1 STEP) BASE) \i. \acc. (f acc))
    LTerm iter = lapp(lapp(lv("x1"), std::move(step_state)),
                      std::move(base_state));
    body = lapp(std::move(iter),
                lam("i", lam("acc", lapp(lv("f"), lv("acc")))));
  }

  LTerm t = lam("f", std::move(body));
  for (size_t i = xs.size(); i-- > 0;) t = lam(xs[i], std::move(t));
  return eliminate(t);
}

// ---------------------------------------------------------------------------
// A small library of programs used by the dispatchers and tests.

struct RecLibrary {
  Rec add, mul, pred, monus, sign, lt, parity, half, mod4, dbl, dbl1, pairing;
};

inline const RecLibrary& rec_library() {
  static const RecLibrary lib = [] {
    using R = Rec;
    // add(0,n)=n; add(m+1,n) = S(add(m,n))
    R add = R::prim_rec(R::proj(1, 0), R::compose(R::succ(), {R::proj(3, 1)}));
    // mul(0,n)=0; mul(m+1,n) = add(n, mul(m,n))   (recurse on the small side)
    R mul = R::prim_rec(R::zero(1),
                        R::compose(add, {R::proj(3, 2), R::proj(3, 1)}));
    // pred(0)=0; pred(m+1)=m
    R pred = R::prim_rec(R::zero(0), R::proj(2, 0));
    // monus(k,m) = m-k (at least 0): monus(0,m)=m; monus(k+1,m)=pred(monus(k,m))
    R monus =
        R::prim_rec(R::proj(1, 0), R::compose(pred, {R::proj(3, 1)}));
    // sign(0)=0; sign(k+1)=1
    R one2 = R::compose(R::succ(), {R::zero(2)});
    R sign = R::prim_rec(R::zero(0), one2);
    // lt(m,n) = sign(n-m)
    R lt = R::compose(sign, {R::compose(monus, {R::proj(2, 0), R::proj(2, 1)})});
    // parity(0)=0; parity(k+1) = 1 - parity(k)
    R parity = R::prim_rec(
        R::zero(0), R::compose(monus, {R::proj(2, 1), one2}));
    // half(0)=0; half(k+1) = half(k) + parity(k), with parity recovered as
    // k - 2*half(k) so each step costs O(k) instead of rerunning parity
    R dbl_acc = R::compose(add, {R::proj(2, 1), R::proj(2, 1)});
    R par_from_acc = R::compose(monus, {dbl_acc, R::proj(2, 0)});
    R half = R::prim_rec(R::zero(0),
                         R::compose(add, {par_from_acc, R::proj(2, 1)}));
    // mod4(n) = n - 4*half(half(n))
    R q = R::compose(half, {R::compose(half, {R::proj(1, 0)})});
    R q2 = R::compose(add, {q, q});
    R q4 = R::compose(add, {q2, q2});
    R mod4 = R::compose(monus, {q4, R::proj(1, 0)});
    // doubling and 2n+1
    R dbl = R::compose(add, {R::proj(1, 0), R::proj(1, 0)});
    R dbl1 = R::compose(R::succ(), {dbl});
    // pairing (m,n) = m + tri(m+n), tri(s) = sum_{i<=s} i
    R tri = R::prim_rec(
        R::zero(0),
        R::compose(add, {R::compose(R::succ(), {R::proj(2, 0)}), R::proj(2, 1)}));
    R s = R::compose(add, {R::proj(2, 0), R::proj(2, 1)});
    R pairing = R::compose(add, {R::proj(2, 0), R::compose(tri, {s})});

    return RecLibrary{add, mul,   pred, monus,  sign,    lt,
                      parity, half, mod4, dbl, dbl1, pairing};
  }();
  return lib;
}

}  // namespace kam
