// Second-order natural deduction: formulas, derivations, checking and
// program extraction.
//
// Formulas are built from predicate-variable applications with ->, forall
// over individuals and forall over predicate variables.  Derivations are
// explicit trees; check() returns the extracted lambda term together with
// the proved formula.  Quantifier rules are erased by extraction.
//
// Scripts are s-expressions:
//
//   formula     (X t1 ... tk) | (-> A B) | (all x A) | (All X k A)
//   term        x | (f t1 ... tk)        (function symbols are declared)
//   derivation  (hyp x) | (lam x A d) | (app d e)
//               (gen v d) | (Gen X k d)
//               (inst d t) | (Inst d (y1 ... yk) F)
//               (const name A)
//   file        (fun name arity)* derivation
#pragma once

#include "kam/lambda.hpp"
#include "kam/machine.hpp"

#include <algorithm>

namespace kam {

struct CheckError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// First-order terms

class FoTerm;
using FoTermPtr = std::shared_ptr<const FoTerm>;

struct FoVar {
  std::string name;
};
struct FoApp {
  std::string fn;
  std::vector<FoTermPtr> args;
};

class FoTerm : public std::variant<FoVar, FoApp> {
 public:
  using variant::variant;
  static FoTerm var(std::string n) { return FoTerm(FoVar{std::move(n)}); }
  static FoTerm fn(std::string f, std::vector<FoTerm> args) {
    FoApp a;
    a.fn = std::move(f);
    for (auto& x : args) a.args.push_back(std::make_shared<const FoTerm>(std::move(x)));
    return FoTerm(std::move(a));
  }
};

inline bool equal(const FoTerm& a, const FoTerm& b) {
  if (a.index() != b.index()) return false;
  if (auto* v = std::get_if<FoVar>(&a)) return v->name == std::get<FoVar>(b).name;
  const FoApp& x = std::get<FoApp>(a);
  const FoApp& y = std::get<FoApp>(b);
  if (x.fn != y.fn || x.args.size() != y.args.size()) return false;
  for (size_t i = 0; i < x.args.size(); ++i)
    if (!equal(*x.args[i], *y.args[i])) return false;
  return true;
}

inline void fo_term_vars(const FoTerm& t, std::set<std::string>& out) {
  if (auto* v = std::get_if<FoVar>(&t)) {
    out.insert(v->name);
  } else {
    for (const auto& a : std::get<FoApp>(t).args) fo_term_vars(*a, out);
  }
}

inline FoTerm fo_subst(const FoTerm& t,
                       const std::map<std::string, FoTerm>& sub) {
  if (auto* v = std::get_if<FoVar>(&t)) {
    auto it = sub.find(v->name);
    return it == sub.end() ? t : it->second;
  }
  FoApp out;
  out.fn = std::get<FoApp>(t).fn;
  for (const auto& a : std::get<FoApp>(t).args)
    out.args.push_back(std::make_shared<const FoTerm>(fo_subst(*a, sub)));
  return FoTerm(std::move(out));
}

inline void print_fo_term(std::ostream& os, const FoTerm& t) {
  if (auto* v = std::get_if<FoVar>(&t)) {
    os << v->name;
    return;
  }
  const FoApp& a = std::get<FoApp>(t);
  if (a.args.empty()) {
    os << a.fn;
    return;
  }
  os << '(' << a.fn;
  for (const auto& x : a.args) {
    os << ' ';
    print_fo_term(os, *x);
  }
  os << ')';
}

// ---------------------------------------------------------------------------
// Formulas

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct PredApp {
  std::string pred;
  std::vector<FoTermPtr> args;
};
struct FArrow {
  FormulaPtr from;
  FormulaPtr to;
};
struct ForallInd {
  std::string var;
  FormulaPtr body;
};
struct ForallPred {
  std::string var;
  unsigned arity;
  FormulaPtr body;
};

class Formula : public std::variant<PredApp, FArrow, ForallInd, ForallPred> {
 public:
  using variant::variant;

  static Formula pred(std::string X, std::vector<FoTerm> args) {
    PredApp p;
    p.pred = std::move(X);
    for (auto& a : args)
      p.args.push_back(std::make_shared<const FoTerm>(std::move(a)));
    return Formula(std::move(p));
  }
  static Formula arrow(Formula a, Formula b) {
    return Formula(FArrow{std::make_shared<const Formula>(std::move(a)),
                          std::make_shared<const Formula>(std::move(b))});
  }
  static Formula all_ind(std::string x, Formula a) {
    return Formula(ForallInd{std::move(x),
                             std::make_shared<const Formula>(std::move(a))});
  }
  static Formula all_pred(std::string X, unsigned k, Formula a) {
    return Formula(ForallPred{std::move(X), k,
                              std::make_shared<const Formula>(std::move(a))});
  }
};

inline void print_formula(std::ostream& os, const Formula& f) {
  if (auto* p = std::get_if<PredApp>(&f)) {
    os << '(' << p->pred;
    for (const auto& a : p->args) {
      os << ' ';
      print_fo_term(os, *a);
    }
    os << ')';
  } else if (auto* a = std::get_if<FArrow>(&f)) {
    os << "(-> ";
    print_formula(os, *a->from);
    os << ' ';
    print_formula(os, *a->to);
    os << ')';
  } else if (auto* ai = std::get_if<ForallInd>(&f)) {
    os << "(all " << ai->var << ' ';
    print_formula(os, *ai->body);
    os << ')';
  } else {
    auto& ap = std::get<ForallPred>(f);
    os << "(All " << ap.var << ' ' << ap.arity << ' ';
    print_formula(os, *ap.body);
    os << ')';
  }
}

inline std::string to_string(const Formula& f) {
  std::ostringstream os;
  print_formula(os, f);
  return os.str();
}

// Free individual and predicate variables.
inline void formula_free_vars(const Formula& f, std::set<std::string>& ind,
                              std::set<std::string>& pred,
                              std::set<std::string>& bound_ind,
                              std::set<std::string>& bound_pred) {
  if (auto* p = std::get_if<PredApp>(&f)) {
    if (!bound_pred.count(p->pred)) pred.insert(p->pred);
    for (const auto& a : p->args) {
      std::set<std::string> vs;
      fo_term_vars(*a, vs);
      for (const auto& v : vs)
        if (!bound_ind.count(v)) ind.insert(v);
    }
  } else if (auto* a = std::get_if<FArrow>(&f)) {
    formula_free_vars(*a->from, ind, pred, bound_ind, bound_pred);
    formula_free_vars(*a->to, ind, pred, bound_ind, bound_pred);
  } else if (auto* ai = std::get_if<ForallInd>(&f)) {
    bool fresh = bound_ind.insert(ai->var).second;
    formula_free_vars(*ai->body, ind, pred, bound_ind, bound_pred);
    if (fresh) bound_ind.erase(ai->var);
  } else {
    auto& ap = std::get<ForallPred>(f);
    bool fresh = bound_pred.insert(ap.var).second;
    formula_free_vars(*ap.body, ind, pred, bound_ind, bound_pred);
    if (fresh) bound_pred.erase(ap.var);
  }
}

inline std::pair<std::set<std::string>, std::set<std::string>>
formula_free_vars(const Formula& f) {
  std::set<std::string> ind, pred, bi, bp;
  formula_free_vars(f, ind, pred, bi, bp);
  return {ind, pred};
}

// alpha-equality
inline bool alpha_equal(const Formula& a, const Formula& b,
                        std::map<std::string, std::string>& ra,
                        std::map<std::string, std::string>& rb,
                        int& fresh) {
  if (a.index() != b.index()) return false;
  if (auto* p = std::get_if<PredApp>(&a)) {
    const PredApp& q = std::get<PredApp>(b);
    auto ia = ra.find(p->pred);
    auto ib = rb.find(q.pred);
    // both bound (must map to the same marker) or both free and equal
    if ((ia != ra.end()) != (ib != rb.end())) return false;
    if (ia != ra.end()) {
      if (ia->second != ib->second) return false;
    } else if (p->pred != q.pred) {
      return false;
    }
    if (p->args.size() != q.args.size()) return false;
    auto term_eq = [&](const FoTerm& x, const FoTerm& y) {
      // rename individual variables through ra/rb
      std::function<bool(const FoTerm&, const FoTerm&)> go =
          [&](const FoTerm& s, const FoTerm& t) {
            if (s.index() != t.index()) return false;
            if (auto* v = std::get_if<FoVar>(&s)) {
              const FoVar& w = std::get<FoVar>(t);
              auto ja = ra.find("$i:" + v->name);
              auto jb = rb.find("$i:" + w.name);
              if ((ja != ra.end()) != (jb != rb.end())) return false;
              if (ja != ra.end()) return ja->second == jb->second;
              return v->name == w.name;
            }
            const FoApp& f1 = std::get<FoApp>(s);
            const FoApp& f2 = std::get<FoApp>(t);
            if (f1.fn != f2.fn || f1.args.size() != f2.args.size())
              return false;
            for (size_t i = 0; i < f1.args.size(); ++i)
              if (!go(*f1.args[i], *f2.args[i])) return false;
            return true;
          };
      return go(x, y);
    };
    for (size_t i = 0; i < p->args.size(); ++i)
      if (!term_eq(*p->args[i], *q.args[i])) return false;
    return true;
  }
  if (auto* x = std::get_if<FArrow>(&a)) {
    const FArrow& y = std::get<FArrow>(b);
    return alpha_equal(*x->from, *y.from, ra, rb, fresh) &&
           alpha_equal(*x->to, *y.to, ra, rb, fresh);
  }
  if (auto* x = std::get_if<ForallInd>(&a)) {
    const ForallInd& y = std::get<ForallInd>(b);
    std::string marker = "#" + std::to_string(fresh++);
    auto sa = ra.find("$i:" + x->var);
    auto sb = rb.find("$i:" + y.var);
    std::optional<std::string> olda, oldb;
    if (sa != ra.end()) olda = sa->second;
    if (sb != rb.end()) oldb = sb->second;
    ra["$i:" + x->var] = marker;
    rb["$i:" + y.var] = marker;
    bool ok = alpha_equal(*x->body, *y.body, ra, rb, fresh);
    if (olda) ra["$i:" + x->var] = *olda; else ra.erase("$i:" + x->var);
    if (oldb) rb["$i:" + y.var] = *oldb; else rb.erase("$i:" + y.var);
    return ok;
  }
  const ForallPred& x = std::get<ForallPred>(a);
  const ForallPred& y = std::get<ForallPred>(b);
  if (x.arity != y.arity) return false;
  std::string marker = "#" + std::to_string(fresh++);
  auto sa = ra.find(x.var);
  auto sb = rb.find(y.var);
  std::optional<std::string> olda, oldb;
  if (sa != ra.end()) olda = sa->second;
  if (sb != rb.end()) oldb = sb->second;
  ra[x.var] = marker;
  rb[y.var] = marker;
  bool ok = alpha_equal(*x.body, *y.body, ra, rb, fresh);
  if (olda) ra[x.var] = *olda; else ra.erase(x.var);
  if (oldb) rb[y.var] = *oldb; else rb.erase(y.var);
  return ok;
}

inline bool alpha_equal(const Formula& a, const Formula& b) {
  std::map<std::string, std::string> ra, rb;
  int fresh = 0;
  return alpha_equal(a, b, ra, rb, fresh);
}

// ---------------------------------------------------------------------------
// Substitution in formulas

namespace detail {
inline std::string fresh_name(const std::string& base,
                              const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + "_" + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}
}  // namespace detail

// capture-avoiding A[tau/x] for an individual variable
inline Formula subst_ind(const Formula& f, const std::string& x,
                         const FoTerm& tau) {
  std::set<std::string> tau_vars;
  fo_term_vars(tau, tau_vars);
  if (auto* p = std::get_if<PredApp>(&f)) {
    PredApp out;
    out.pred = p->pred;
    for (const auto& a : p->args)
      out.args.push_back(
          std::make_shared<const FoTerm>(fo_subst(*a, {{x, tau}})));
    return Formula(std::move(out));
  }
  if (auto* a = std::get_if<FArrow>(&f))
    return Formula::arrow(subst_ind(*a->from, x, tau),
                          subst_ind(*a->to, x, tau));
  if (auto* ai = std::get_if<ForallInd>(&f)) {
    if (ai->var == x) return f;
    if (tau_vars.count(ai->var)) {
      // rename the binder away from tau's variables
      auto [fi, fp] = formula_free_vars(*ai->body);
      std::set<std::string> avoid = tau_vars;
      avoid.insert(fi.begin(), fi.end());
      avoid.insert(x);
      std::string nv = detail::fresh_name(ai->var, avoid);
      Formula renamed = subst_ind(*ai->body, ai->var, FoTerm::var(nv));
      return Formula::all_ind(nv, subst_ind(renamed, x, tau));
    }
    return Formula::all_ind(ai->var, subst_ind(*ai->body, x, tau));
  }
  auto& ap = std::get<ForallPred>(f);
  return Formula::all_pred(ap.var, ap.arity, subst_ind(*ap.body, x, tau));
}

// capture-avoiding A[F / X y1..yk]: each atom X(t1..tk) becomes
// F[t1/y1, ..., tk/yk]
inline Formula subst_pred(const Formula& f, const std::string& X,
                          const std::vector<std::string>& ys,
                          const Formula& F) {
  auto [Fi, Fp] = formula_free_vars(F);
  // free variables of F other than the ys can be captured
  std::set<std::string> f_free_ind = Fi;
  for (const auto& y : ys) f_free_ind.erase(y);

  std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
    if (auto* p = std::get_if<PredApp>(&g)) {
      if (p->pred != X) return g;
      if (p->args.size() != ys.size())
        throw CheckError("arity mismatch substituting predicate " + X);
      Formula out = F;
      // simultaneous substitution via temporaries to dodge clashes
      std::vector<std::string> temps;
      for (size_t i = 0; i < ys.size(); ++i) {
        std::string t = "$tmp" + std::to_string(i);
        temps.push_back(t);
        out = subst_ind(out, ys[i], FoTerm::var(t));
      }
      for (size_t i = 0; i < ys.size(); ++i)
        out = subst_ind(out, temps[i], *p->args[i]);
      return out;
    }
    if (auto* a = std::get_if<FArrow>(&g))
      return Formula::arrow(go(*a->from), go(*a->to));
    if (auto* ai = std::get_if<ForallInd>(&g)) {
      // does X actually occur below?  if not, leave alone
      auto [gi, gp] = formula_free_vars(*ai->body);
      if (!gp.count(X)) return g;
      if (f_free_ind.count(ai->var)) {
        auto avoid = f_free_ind;
        avoid.insert(gi.begin(), gi.end());
        std::string nv = detail::fresh_name(ai->var, avoid);
        Formula renamed = subst_ind(*ai->body, ai->var, FoTerm::var(nv));
        return Formula::all_ind(nv, go(renamed));
      }
      return Formula::all_ind(ai->var, go(*ai->body));
    }
    auto& ap = std::get<ForallPred>(g);
    if (ap.var == X) return g;  // shadowed
    auto [gi, gp] = formula_free_vars(*ap.body);
    if (!gp.count(X)) return g;
    if (Fp.count(ap.var)) {
      // rename the bound predicate away from F's free predicates
      auto avoid = Fp;
      avoid.insert(gp.begin(), gp.end());
      std::string nv = detail::fresh_name(ap.var, avoid);
      std::vector<std::string> fresh_ys;
      for (unsigned i = 0; i < ap.arity; ++i)
        fresh_ys.push_back("$y" + std::to_string(i));
      std::vector<FoTerm> args;
      for (const auto& y : fresh_ys) args.push_back(FoTerm::var(y));
      Formula renamed =
          subst_pred(*ap.body, ap.var, fresh_ys, Formula::pred(nv, args));
      return Formula::all_pred(nv, ap.arity, go(renamed));
    }
    return Formula::all_pred(ap.var, ap.arity, go(*ap.body));
  };
  return go(f);
}

// ---------------------------------------------------------------------------
// Derivations

class Derivation;
using DerivationPtr = std::shared_ptr<const Derivation>;

struct DHyp {
  std::string name;
};
struct DLam {
  std::string name;
  Formula hyp;
  DerivationPtr body;
};
struct DApp {
  DerivationPtr fn;
  DerivationPtr arg;
};
struct DGenInd {
  std::string var;
  DerivationPtr body;
};
struct DGenPred {
  std::string var;
  unsigned arity;
  DerivationPtr body;
};
struct DInstInd {
  DerivationPtr body;
  FoTerm term;
};
struct DInstPred {
  DerivationPtr body;
  std::vector<std::string> ys;
  Formula repl;
};
struct DConst {
  std::string name;
  Formula formula;
};

class Derivation
    : public std::variant<DHyp, DLam, DApp, DGenInd, DGenPred, DInstInd,
                          DInstPred, DConst> {
 public:
  using variant::variant;

  static Derivation hyp(std::string n) { return Derivation(DHyp{std::move(n)}); }
  static Derivation lam(std::string n, Formula a, Derivation d) {
    return Derivation(DLam{std::move(n), std::move(a),
                           std::make_shared<const Derivation>(std::move(d))});
  }
  static Derivation apply(Derivation f, Derivation a) {
    return Derivation(DApp{std::make_shared<const Derivation>(std::move(f)),
                           std::make_shared<const Derivation>(std::move(a))});
  }
  static Derivation gen_ind(std::string v, Derivation d) {
    return Derivation(DGenInd{std::move(v),
                              std::make_shared<const Derivation>(std::move(d))});
  }
  static Derivation gen_pred(std::string v, unsigned k, Derivation d) {
    return Derivation(DGenPred{std::move(v), k,
                               std::make_shared<const Derivation>(std::move(d))});
  }
  static Derivation inst_ind(Derivation d, FoTerm t) {
    return Derivation(DInstInd{std::make_shared<const Derivation>(std::move(d)),
                               std::move(t)});
  }
  static Derivation inst_pred(Derivation d, std::vector<std::string> ys,
                              Formula f) {
    return Derivation(DInstPred{std::make_shared<const Derivation>(std::move(d)),
                                std::move(ys), std::move(f)});
  }
  static Derivation constant(std::string n, Formula f) {
    return Derivation(DConst{std::move(n), std::move(f)});
  }
};

using Context = std::vector<std::pair<std::string, Formula>>;

struct Judgement {
  LTerm term;
  Formula formula;
};

// Every occurrence of a predicate variable must use one arity (bound
// occurrences are scoped by their quantifier).
inline void validate_arities(const Formula& f,
                             std::map<std::string, unsigned>& env) {
  if (auto* p = std::get_if<PredApp>(&f)) {
    auto it = env.find(p->pred);
    if (it == env.end()) {
      env.emplace(p->pred, static_cast<unsigned>(p->args.size()));
    } else if (it->second != p->args.size()) {
      throw CheckError("predicate variable '" + p->pred +
                       "' used with arities " + std::to_string(it->second) +
                       " and " + std::to_string(p->args.size()));
    }
    return;
  }
  if (auto* a = std::get_if<FArrow>(&f)) {
    validate_arities(*a->from, env);
    validate_arities(*a->to, env);
    return;
  }
  if (auto* ai = std::get_if<ForallInd>(&f)) {
    validate_arities(*ai->body, env);
    return;
  }
  auto& ap = std::get<ForallPred>(f);
  auto old = env.find(ap.var);
  std::optional<unsigned> saved;
  if (old != env.end()) saved = old->second;
  env[ap.var] = ap.arity;
  validate_arities(*ap.body, env);
  if (saved)
    env[ap.var] = *saved;
  else
    env.erase(ap.var);
}

inline void validate_arities(const Formula& f) {
  std::map<std::string, unsigned> env;
  validate_arities(f, env);
}

// Map a declared constant name onto a term: machine instructions keep their
// names, anything else becomes an uninterpreted atom.
inline Term constant_term(const std::string& name) {
  if (auto c = comb_by_name(name)) return Term::comb(*c);
  return Term::atom(name);
}

inline Judgement check_impl(const Derivation& d, const Context& ctx,
                            std::map<std::string, unsigned>& arities);

inline Judgement check(const Derivation& d, const Context& ctx) {
  std::map<std::string, unsigned> arities;
  for (const auto& [name, f] : ctx) validate_arities(f, arities);
  return check_impl(d, ctx, arities);
}

inline Judgement check_impl(const Derivation& d, const Context& ctx,
                            std::map<std::string, unsigned>& arities) {
  if (auto* h = std::get_if<DHyp>(&d)) {
    for (auto it = ctx.rbegin(); it != ctx.rend(); ++it)
      if (it->first == h->name) return {LTerm::var(h->name), it->second};
    throw CheckError("hypothesis '" + h->name + "' is not in the context");
  }
  if (auto* l = std::get_if<DLam>(&d)) {
    validate_arities(l->hyp, arities);
    Context inner = ctx;
    inner.emplace_back(l->name, l->hyp);
    Judgement body = check_impl(*l->body, inner, arities);
    return {LTerm::abs(l->name, std::move(body.term)),
            Formula::arrow(l->hyp, std::move(body.formula))};
  }
  if (auto* a = std::get_if<DApp>(&d)) {
    Judgement f = check_impl(*a->fn, ctx, arities);
    Judgement x = check_impl(*a->arg, ctx, arities);
    auto* arr = std::get_if<FArrow>(&f.formula);
    if (!arr)
      throw CheckError("application of a non-implication: " +
                       to_string(f.formula));
    if (!alpha_equal(*arr->from, x.formula))
      throw CheckError("argument formula " + to_string(x.formula) +
                       " does not match " + to_string(*arr->from));
    return {LTerm::apply(std::move(f.term), std::move(x.term)), *arr->to};
  }
  if (auto* g = std::get_if<DGenInd>(&d)) {
    Judgement body = check_impl(*g->body, ctx, arities);
    for (const auto& [name, hyp] : ctx) {
      auto [fi, fp] = formula_free_vars(hyp);
      if (fi.count(g->var))
        throw CheckError("variable '" + g->var +
                         "' appears free in hypothesis " + name);
    }
    return {std::move(body.term),
            Formula::all_ind(g->var, std::move(body.formula))};
  }
  if (auto* g = std::get_if<DGenPred>(&d)) {
    Judgement body = check_impl(*g->body, ctx, arities);
    for (const auto& [name, hyp] : ctx) {
      auto [fi, fp] = formula_free_vars(hyp);
      if (fp.count(g->var))
        throw CheckError("predicate variable '" + g->var +
                         "' appears free in hypothesis " + name);
    }
    return {std::move(body.term),
            Formula::all_pred(g->var, g->arity, std::move(body.formula))};
  }
  if (auto* i = std::get_if<DInstInd>(&d)) {
    Judgement body = check_impl(*i->body, ctx, arities);
    auto* all = std::get_if<ForallInd>(&body.formula);
    if (!all)
      throw CheckError("individual instantiation of " +
                       to_string(body.formula));
    return {std::move(body.term), subst_ind(*all->body, all->var, i->term)};
  }
  if (auto* i = std::get_if<DInstPred>(&d)) {
    Judgement body = check_impl(*i->body, ctx, arities);
    validate_arities(i->repl, arities);
    auto* all = std::get_if<ForallPred>(&body.formula);
    if (!all)
      throw CheckError("predicate instantiation of " +
                       to_string(body.formula));
    if (all->arity != i->ys.size())
      throw CheckError("predicate instantiation expects " +
                       std::to_string(all->arity) + " bound variables");
    return {std::move(body.term),
            subst_pred(*all->body, all->var, i->ys, i->repl)};
  }
  const DConst& c = std::get<DConst>(d);
  validate_arities(c.formula, arities);
  return {LTerm::embed(constant_term(c.name)), c.formula};
}

// check -> eliminate -> run with the given stack
struct ExtractionRun {
  Judgement judgement;
  Term compiled;
  Trace trace;
};

inline ExtractionRun extract_and_run(const Derivation& d, const Context& ctx,
                                     const Stack& stack, size_t fuel) {
  Judgement j = check(d, ctx);
  Term compiled = eliminate(j.term);
  Trace tr = run(Process{compiled, stack}, fuel);
  return {std::move(j), std::move(compiled), std::move(tr)};
}

// ---------------------------------------------------------------------------
// Script parsing

class ScriptParser {
 public:
  explicit ScriptParser(std::string_view src) : src_(src) {}

  // file := (fun name arity)* derivation
  Derivation parse_file() {
    for (;;) {
      skip_ws();
      size_t save = pos_;
      if (!eat('(')) break;
      std::string head = symbol();
      if (head == "fun") {
        std::string name = symbol();
        funs_[name] = static_cast<unsigned>(number());
        expect(')');
      } else {
        pos_ = save;
        break;
      }
    }
    Derivation d = parse_derivation();
    skip_ws();
    if (pos_ != src_.size()) fail("trailing input");
    return d;
  }

  Derivation parse_derivation() {
    skip_ws();
    expect('(');
    std::string head = symbol();
    if (head == "hyp") {
      std::string n = symbol();
      expect(')');
      return Derivation::hyp(std::move(n));
    }
    if (head == "lam") {
      std::string n = symbol();
      Formula a = parse_formula();
      Derivation body = parse_derivation();
      expect(')');
      return Derivation::lam(std::move(n), std::move(a), std::move(body));
    }
    if (head == "app") {
      Derivation f = parse_derivation();
      Derivation x = parse_derivation();
      expect(')');
      return Derivation::apply(std::move(f), std::move(x));
    }
    if (head == "gen") {
      std::string v = symbol();
      Derivation body = parse_derivation();
      expect(')');
      return Derivation::gen_ind(std::move(v), std::move(body));
    }
    if (head == "Gen") {
      std::string v = symbol();
      unsigned k = static_cast<unsigned>(number());
      Derivation body = parse_derivation();
      expect(')');
      return Derivation::gen_pred(std::move(v), k, std::move(body));
    }
    if (head == "inst") {
      Derivation body = parse_derivation();
      FoTerm t = parse_fo_term();
      expect(')');
      return Derivation::inst_ind(std::move(body), std::move(t));
    }
    if (head == "Inst") {
      Derivation body = parse_derivation();
      skip_ws();
      expect('(');
      std::vector<std::string> ys;
      while (!peek(')')) ys.push_back(symbol());
      expect(')');
      Formula f = parse_formula();
      expect(')');
      return Derivation::inst_pred(std::move(body), std::move(ys),
                                   std::move(f));
    }
    if (head == "const") {
      std::string n = symbol();
      Formula f = parse_formula();
      expect(')');
      return Derivation::constant(std::move(n), std::move(f));
    }
    fail("unknown derivation form '" + head + "'");
    throw std::logic_error("unreachable");
  }

  Formula parse_formula() {
    skip_ws();
    expect('(');
    std::string head = symbol();
    if (head == "->") {
      Formula a = parse_formula();
      Formula b = parse_formula();
      expect(')');
      return Formula::arrow(std::move(a), std::move(b));
    }
    if (head == "all") {
      std::string v = symbol();
      Formula a = parse_formula();
      expect(')');
      return Formula::all_ind(std::move(v), std::move(a));
    }
    if (head == "All") {
      std::string v = symbol();
      unsigned k = static_cast<unsigned>(number());
      Formula a = parse_formula();
      expect(')');
      return Formula::all_pred(std::move(v), k, std::move(a));
    }
    // predicate application
    std::vector<FoTerm> args;
    while (!peek(')')) args.push_back(parse_fo_term());
    expect(')');
    return Formula::pred(std::move(head), std::move(args));
  }

  FoTerm parse_fo_term() {
    skip_ws();
    if (eat('(')) {
      std::string f = symbol();
      std::vector<FoTerm> args;
      while (!peek(')')) args.push_back(parse_fo_term());
      expect(')');
      check_fun(f, args.size());
      return FoTerm::fn(std::move(f), std::move(args));
    }
    std::string n = symbol();
    if (funs_.count(n)) {
      check_fun(n, 0);
      return FoTerm::fn(std::move(n), {});
    }
    return FoTerm::var(std::move(n));
  }

 private:
  void check_fun(const std::string& f, size_t arity) {
    auto it = funs_.find(f);
    if (it == funs_.end())
      fail("undeclared function symbol '" + f + "'");
    if (it->second != arity)
      fail("function symbol '" + f + "' expects " +
           std::to_string(it->second) + " arguments");
  }

  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ';') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < src_.size() && src_[pos_] == c;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  std::string symbol() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' ||
          c == ')' || c == ';')
        break;
      ++pos_;
    }
    if (pos_ == start) fail("expected symbol");
    return std::string(src_.substr(start, pos_ - start));
  }
  long number() {
    std::string s = symbol();
    try {
      return std::stol(s);
    } catch (...) {
      fail("expected number, got '" + s + "'");
      return 0;
    }
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw CheckError(msg + " at offset " + std::to_string(pos_));
  }

  std::string_view src_;
  size_t pos_ = 0;
  std::map<std::string, unsigned> funs_;
};

inline Derivation parse_script(std::string_view s) {
  return ScriptParser(s).parse_file();
}

}  // namespace kam
