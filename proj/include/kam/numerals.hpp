// Iterator numerals and the compressed NumLit representation.
//
// The numeral n is sigma applied n times to the zero term, with
//   zero  = \x.\y. y        and   sigma = \n.\f.\x. (f (n f x)).
// NumLit(n) is a compressed stand-in for that tower; canonicalize() expands
// it and equal_canonical() compares terms as if every NumLit were expanded,
// without materializing large towers on both sides.
#pragma once

#include "kam/lambda.hpp"
#include "kam/term.hpp"

namespace kam {

inline const Term& zero_term() {
  static const Term t = eliminate(lam("x", lam("y", lv("y"))));
  return t;
}

inline const Term& sigma_term() {
  static const Term t = eliminate(
      lam("n", lam("f", lam("x", lapp(lv("f"), lapp(lv("n"), lv("f"), lv("x")))))));
  return t;
}

inline Term numeral(Nat n) { return Term::num(std::move(n)); }

// Literal expansion sigma^n zero.  Only for small n; the machine and the
// comparators below never need to materialize a tower.
inline Term numeral_expanded(const Nat& n) {
  Term t = zero_term();
  for (Nat i = 0; i < n; ++i) t = app(sigma_term(), t);
  return t;
}

inline Stack canonicalize_stack(const Stack& s);

inline Term canonicalize(const Term& t) {
  const TermNode& n = t.node();
  if (auto* num = std::get_if<NumLit>(&n)) return numeral_expanded(num->value);
  if (auto* a = std::get_if<Apply>(&n)) {
    Term fn = canonicalize(a->fn);
    Term arg = canonicalize(a->arg);
    if (fn.raw() == a->fn.raw() && arg.raw() == a->arg.raw()) return t;
    return Term::apply(std::move(fn), std::move(arg));
  }
  if (auto* c = std::get_if<Continuation>(&n)) {
    Stack saved = canonicalize_stack(c->saved);
    if (saved.raw() == c->saved.raw()) return t;
    return Term::cont(std::move(saved));
  }
  return t;
}

inline Stack canonicalize_stack(const Stack& s) {
  const StackNode& n = s.node();
  if (std::holds_alternative<StackBottom>(n)) return s;
  const StackPush& p = std::get<StackPush>(n);
  Term top = canonicalize(p.top);
  Stack rest = canonicalize_stack(p.rest);
  if (top.raw() == p.top.raw() && rest.raw() == p.rest.raw()) return s;
  return Stack::push(std::move(top), std::move(rest));
}

// Equality after numeral canonicalization, computed lazily: comparing
// NumLit(n) against an explicit tower walks the tower instead of expanding
// the literal.
inline bool equal_canonical(const Term& a, const Term& b);
inline bool equal_canonical(const Stack& a, const Stack& b);

namespace detail {
// compare NumLit(n) against arbitrary term b
inline bool numlit_matches(const Nat& n, const Term& b) {
  if (auto* num = std::get_if<NumLit>(&b.node())) return num->value == n;
  if (n == 0) return equal_canonical(zero_term(), b);
  if (auto* a = std::get_if<Apply>(&b.node()))
    return equal_canonical(sigma_term(), a->fn) &&
           numlit_matches(n - 1, a->arg);
  return false;
}
}  // namespace detail

inline bool equal_canonical(const Term& a, const Term& b) {
  if (a.raw() == b.raw()) return true;
  const TermNode& na = a.node();
  const TermNode& nb = b.node();
  if (auto* num = std::get_if<NumLit>(&na))
    return detail::numlit_matches(num->value, b);
  if (auto* num = std::get_if<NumLit>(&nb))
    return detail::numlit_matches(num->value, a);
  if (na.index() != nb.index()) return false;
  if (auto* v = std::get_if<Variable>(&na))
    return v->name == std::get<Variable>(nb).name;
  if (auto* v = std::get_if<AtomConst>(&na))
    return v->name == std::get<AtomConst>(nb).name;
  if (auto* v = std::get_if<Comb>(&na)) return *v == std::get<Comb>(nb);
  if (auto* v = std::get_if<Apply>(&na)) {
    const Apply& w = std::get<Apply>(nb);
    return equal_canonical(v->fn, w.fn) && equal_canonical(v->arg, w.arg);
  }
  return equal_canonical(std::get<Continuation>(na).saved,
                         std::get<Continuation>(nb).saved);
}

inline bool equal_canonical(const Stack& a, const Stack& b) {
  if (a.raw() == b.raw()) return true;
  const StackNode& na = a.node();
  const StackNode& nb = b.node();
  if (na.index() != nb.index()) return false;
  if (auto* v = std::get_if<StackBottom>(&na))
    return v->index == std::get<StackBottom>(nb).index;
  const StackPush& p = std::get<StackPush>(na);
  const StackPush& q = std::get<StackPush>(nb);
  return equal_canonical(p.top, q.top) && equal_canonical(p.rest, q.rest);
}

inline bool equal_canonical(const Process& a, const Process& b) {
  return equal_canonical(a.head, b.head) && equal_canonical(a.stack, b.stack);
}

}  // namespace kam
