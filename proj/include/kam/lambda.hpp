// Lambda notation for combinator terms.
//
// A lambda term here is only a notation: eliminate() translates binders away
// with a six-rule first-match procedure, chosen so that the compiled term
// replays substitution on the machine (see the trace property tests).  The
// usual KS translation does not have that property, which is why the rules
// are applied literally, in order, with no optimization.
#pragma once

#include "kam/term.hpp"

#include <functional>
#include <memory>
#include <utility>

namespace kam {

struct ElimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class LTerm;

struct LVar {
  std::string name;
};
struct LAbs {
  std::string binder;
  std::shared_ptr<const LTerm> body;
};
struct LApp {
  std::shared_ptr<const LTerm> fn;
  std::shared_ptr<const LTerm> arg;
};
struct LEmbed {
  Term leaf;  // binder-free by construction (a c-term has no binders)
};

class LTerm : public std::variant<LVar, LAbs, LApp, LEmbed> {
 public:
  using variant::variant;

  static LTerm var(std::string n) { return LTerm(LVar{std::move(n)}); }
  static LTerm abs(std::string binder, LTerm body) {
    return LTerm(LAbs{std::move(binder),
                      std::make_shared<const LTerm>(std::move(body))});
  }
  static LTerm apply(LTerm fn, LTerm arg) {
    return LTerm(LApp{std::make_shared<const LTerm>(std::move(fn)),
                      std::make_shared<const LTerm>(std::move(arg))});
  }
  static LTerm embed(Term t) { return LTerm(LEmbed{std::move(t)}); }
};

inline LTerm lam(std::string binder, LTerm body) {
  return LTerm::abs(std::move(binder), std::move(body));
}
inline LTerm lapp(LTerm f, LTerm a) {
  return LTerm::apply(std::move(f), std::move(a));
}
template <class... Rest>
inline LTerm lapp(LTerm f, LTerm a, Rest... rest) {
  return lapp(LTerm::apply(std::move(f), std::move(a)), std::move(rest)...);
}
inline LTerm lv(std::string n) { return LTerm::var(std::move(n)); }
inline LTerm le(Term t) { return LTerm::embed(std::move(t)); }

inline void print_lterm(std::ostream& os, const LTerm& t) {
  if (auto* v = std::get_if<LVar>(&t)) {
    os << v->name;
  } else if (auto* a = std::get_if<LAbs>(&t)) {
    os << '\\' << a->binder << ". ";
    print_lterm(os, *a->body);
  } else if (std::holds_alternative<LApp>(t)) {
    std::vector<const LTerm*> args;
    const LTerm* head = &t;
    while (auto* inner = std::get_if<LApp>(head)) {
      args.push_back(inner->arg.get());
      head = inner->fn.get();
    }
    os << '(';
    print_lterm(os, *head);
    for (auto it = args.rbegin(); it != args.rend(); ++it) {
      os << ' ';
      print_lterm(os, **it);
    }
    os << ')';
  } else {
    print_term(os, std::get<LEmbed>(t).leaf);
  }
}

inline std::string to_string(const LTerm& t) {
  std::ostringstream os;
  print_lterm(os, t);
  return os.str();
}

// ---------------------------------------------------------------------------
// Abstraction elimination.
//
// bracket(x, t) applies, at each step, the FIRST matching rule:
//   1. x not in t           ->  (K t)
//   2. t = x                ->  I
//   3. t = (u v), x not in v ->  ((C bracket(x, (E u))) v)
//   4. t = (u x), x not in u ->  (E u)
//   5. t = (u x), x in u     ->  (W bracket(x, (E u)))
//   6. t = (u (v w))         ->  restart on (((B u) v) w)
//
// Rule 6 is a loop, not structural recursion: it can fire several times in a
// row but only finitely often (the argument shrinks each time).

inline Term bracket(const std::string& x, Term t) {
  // Generous bound; the rewriting provably terminates, this asserts it.
  for (size_t steps = 0; steps < 1u << 24; ++steps) {
    if (!contains_variable(t, x)) return app(Term::comb(Comb::K), t);  // 1
    if (auto* v = std::get_if<Variable>(&t.node());
        v != nullptr && v->name == x)
      return Term::comb(Comb::I);  // 2
    if (auto* a = std::get_if<Apply>(&t.node())) {
      const Term& u = a->fn;
      const Term& v = a->arg;
      if (!contains_variable(v, x))
        return app(Term::comb(Comb::C),
                   bracket(x, app(Term::comb(Comb::E), u)), v);  // 3
      if (auto* vv = std::get_if<Variable>(&v.node());
          vv != nullptr && vv->name == x) {
        if (!contains_variable(u, x)) return app(Term::comb(Comb::E), u);  // 4
        return app(Term::comb(Comb::W),
                   bracket(x, app(Term::comb(Comb::E), u)));  // 5
      }
      if (auto* va = std::get_if<Apply>(&v.node())) {
        t = app(Term::comb(Comb::B), u, va->fn, va->arg);  // 6
        continue;
      }
      // v contains x, is not x, is not an application: x must sit inside a
      // continuation constant, which no rule can abstract over.
      throw ElimError("cannot abstract '" + x +
                      "' occurring inside a continuation constant");
    }
    throw ElimError("cannot abstract '" + x +
                    "' occurring inside a continuation constant");
  }
  throw ElimError("abstraction elimination did not terminate");
}

inline Term eliminate(const LTerm& t) {
  if (auto* v = std::get_if<LVar>(&t)) return Term::variable(v->name);
  if (auto* e = std::get_if<LEmbed>(&t)) return e->leaf;
  if (auto* a = std::get_if<LApp>(&t))
    return Term::apply(eliminate(*a->fn), eliminate(*a->arg));
  const LAbs& ab = std::get<LAbs>(t);
  return bracket(ab.binder, eliminate(*ab.body));
}

// Free lambda-level variables (a bound occurrence shadows a definition).
inline void collect_lterm_free(const LTerm& t, std::set<std::string>& bound,
                               std::set<std::string>& out) {
  if (auto* v = std::get_if<LVar>(&t)) {
    if (!bound.count(v->name)) out.insert(v->name);
  } else if (auto* a = std::get_if<LAbs>(&t)) {
    bool fresh = bound.insert(a->binder).second;
    collect_lterm_free(*a->body, bound, out);
    if (fresh) bound.erase(a->binder);
  } else if (auto* ap = std::get_if<LApp>(&t)) {
    collect_lterm_free(*ap->fn, bound, out);
    collect_lterm_free(*ap->arg, bound, out);
  } else {
    // Variables inside an embedded c-term count as occurrences.
    for (const auto& n : free_variables(std::get<LEmbed>(t).leaf))
      if (!bound.count(n)) out.insert(n);
  }
}

inline std::set<std::string> lterm_free_variables(const LTerm& t) {
  std::set<std::string> bound, out;
  collect_lterm_free(t, bound, out);
  return out;
}

// Replace free occurrences of defined names by their (already compiled)
// c-terms, respecting shadowing by binders.
inline LTerm expand_defs(const LTerm& t, const Bindings& defs,
                         std::set<std::string>& bound) {
  if (auto* v = std::get_if<LVar>(&t)) {
    if (!bound.count(v->name)) {
      auto it = defs.find(v->name);
      if (it != defs.end()) return LTerm::embed(it->second);
    }
    return t;
  }
  if (auto* a = std::get_if<LAbs>(&t)) {
    bool fresh = bound.insert(a->binder).second;
    LTerm body = expand_defs(*a->body, defs, bound);
    if (fresh) bound.erase(a->binder);
    return LTerm::abs(a->binder, std::move(body));
  }
  if (auto* ap = std::get_if<LApp>(&t))
    return LTerm::apply(expand_defs(*ap->fn, defs, bound),
                        expand_defs(*ap->arg, defs, bound));
  if (auto* e = std::get_if<LEmbed>(&t)) {
    Bindings visible;
    for (const auto& [k, v] : defs)
      if (!bound.count(k)) visible.emplace(k, v);
    return LTerm::embed(substitute(e->leaf, visible));
  }
  return t;
}

// Compile an ordered list of definitions; later entries see earlier ones
// fully expanded.  A reference to a name not yet defined (including a
// cyclic/self reference) is an error.
inline std::vector<std::pair<std::string, Term>> eliminate_defs(
    const std::vector<std::pair<std::string, LTerm>>& defs) {
  std::vector<std::pair<std::string, Term>> out;
  Bindings env;
  for (const auto& [name, lt] : defs) {
    if (env.count(name))
      throw ElimError("duplicate definition of '" + name + "'");
    std::set<std::string> bound;
    LTerm expanded = expand_defs(lt, env, bound);
    Term compiled = eliminate(expanded);
    auto fv = free_variables(compiled);
    if (!fv.empty())
      throw ElimError("definition of '" + name +
                      "' references undefined name '" + *fv.begin() + "'");
    env.emplace(name, compiled);
    out.emplace_back(name, std::move(compiled));
  }
  return out;
}

}  // namespace kam
