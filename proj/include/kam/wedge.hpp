// Wedge terms (conditions) and C-expressions.
//
// A wedge term is built from condition variables, the constant 1 and a
// binary meet.  A C-expression is a finite composition of the six primitive
// rewrites below; we store it in application order (first element applied
// first) and print it in composition order (last applied first), which is
// how such compositions are conventionally written.
//
//   a0 : (p^q)^r  =>  p^(q^r)
//   a1 : p        =>  p^1
//   a2 : p^q      =>  q
//   b0 : p        =>  p^p
//   b1 : p^q      =>  q^p
//   b2 : ((p^q)^r)^s  =>  (p^(q^r))^s
//
// deriveTo() produces, for any two wedge terms t, u with vars(u) <= vars(t),
// a C-expression rewriting t into u.  Outputs are verified, not minimized.
#pragma once

#include <cctype>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace kam {

class Wedge;

struct WOne {};
struct WVar {
  std::string name;
};
struct WMeet {
  std::shared_ptr<const Wedge> left;
  std::shared_ptr<const Wedge> right;
};

class Wedge : public std::variant<WOne, WVar, WMeet> {
 public:
  using variant::variant;
  static Wedge one() { return Wedge(WOne{}); }
  static Wedge var(std::string n) { return Wedge(WVar{std::move(n)}); }
  static Wedge meet(Wedge l, Wedge r) {
    return Wedge(WMeet{std::make_shared<const Wedge>(std::move(l)),
                       std::make_shared<const Wedge>(std::move(r))});
  }
};

inline Wedge meet(Wedge l, Wedge r) {
  return Wedge::meet(std::move(l), std::move(r));
}
inline Wedge wvar(std::string n) { return Wedge::var(std::move(n)); }
inline Wedge wone() { return Wedge::one(); }

inline bool equal(const Wedge& a, const Wedge& b) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<WOne>(a)) return true;
  if (auto* v = std::get_if<WVar>(&a))
    return v->name == std::get<WVar>(b).name;
  const WMeet& m = std::get<WMeet>(a);
  const WMeet& n = std::get<WMeet>(b);
  return equal(*m.left, *n.left) && equal(*m.right, *n.right);
}

inline void collect_wedge_vars(const Wedge& w, std::set<std::string>& out) {
  if (auto* v = std::get_if<WVar>(&w)) {
    out.insert(v->name);
  } else if (auto* m = std::get_if<WMeet>(&w)) {
    collect_wedge_vars(*m->left, out);
    collect_wedge_vars(*m->right, out);
  }
}
inline std::set<std::string> wedge_vars(const Wedge& w) {
  std::set<std::string> out;
  collect_wedge_vars(w, out);
  return out;
}
inline bool wedge_contains(const Wedge& w, const std::string& name) {
  if (auto* v = std::get_if<WVar>(&w)) return v->name == name;
  if (auto* m = std::get_if<WMeet>(&w))
    return wedge_contains(*m->left, name) || wedge_contains(*m->right, name);
  return false;
}

inline Wedge rename_wedge(const Wedge& w,
                          const std::map<std::string, std::string>& ren) {
  if (auto* v = std::get_if<WVar>(&w)) {
    auto it = ren.find(v->name);
    return it == ren.end() ? w : Wedge::var(it->second);
  }
  if (auto* m = std::get_if<WMeet>(&w))
    return Wedge::meet(rename_wedge(*m->left, ren),
                       rename_wedge(*m->right, ren));
  return w;
}

inline void print_wedge(std::ostream& os, const Wedge& w) {
  if (std::holds_alternative<WOne>(w)) {
    os << '1';
  } else if (auto* v = std::get_if<WVar>(&w)) {
    os << v->name;
  } else {
    const WMeet& m = std::get<WMeet>(w);
    os << '(';
    print_wedge(os, *m.left);
    os << " ^ ";
    print_wedge(os, *m.right);
    os << ')';
  }
}
inline std::string to_string(const Wedge& w) {
  std::ostringstream os;
  print_wedge(os, w);
  return os.str();
}

// Grammar: `1`, identifiers, `(w ^ w)`.
inline Wedge parse_wedge_at(std::string_view s, size_t& pos);

inline Wedge parse_wedge(std::string_view s) {
  size_t pos = 0;
  Wedge w = parse_wedge_at(s, pos);
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
    ++pos;
  if (pos != s.size())
    throw std::runtime_error("trailing input in wedge term");
  return w;
}

inline Wedge parse_wedge_at(std::string_view s, size_t& pos) {
  auto skip = [&] {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  };
  skip();
  if (pos >= s.size()) throw std::runtime_error("unexpected end of wedge term");
  if (s[pos] == '1') {
    ++pos;
    return Wedge::one();
  }
  if (s[pos] == '(') {
    ++pos;
    Wedge l = parse_wedge_at(s, pos);
    skip();
    if (pos >= s.size() || s[pos] != '^')
      throw std::runtime_error("expected '^' in wedge term");
    ++pos;
    Wedge r = parse_wedge_at(s, pos);
    skip();
    if (pos >= s.size() || s[pos] != ')')
      throw std::runtime_error("expected ')' in wedge term");
    ++pos;
    return Wedge::meet(std::move(l), std::move(r));
  }
  size_t start = pos;
  while (pos < s.size() &&
         (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' ||
          s[pos] == '\''))
    ++pos;
  if (pos == start) throw std::runtime_error("expected wedge variable");
  return Wedge::var(std::string(s.substr(start, pos - start)));
}

// ---------------------------------------------------------------------------
// Primitives

enum class Prim : uint8_t { A0, A1, A2, B0, B1, B2 };

inline const char* prim_name(Prim p) {
  switch (p) {
    case Prim::A0: return "a0";
    case Prim::A1: return "a1";
    case Prim::A2: return "a2";
    case Prim::B0: return "b0";
    case Prim::B1: return "b1";
    case Prim::B2: return "b2";
  }
  return "?";
}

inline std::optional<Prim> prim_by_name(std::string_view s) {
  static const std::map<std::string_view, Prim> table = {
      {"a0", Prim::A0}, {"a1", Prim::A1}, {"a2", Prim::A2},
      {"b0", Prim::B0}, {"b1", Prim::B1}, {"b2", Prim::B2}};
  auto it = table.find(s);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

struct ShapeMismatch : std::runtime_error {
  ShapeMismatch(Prim p, const Wedge& w, int index = -1)
      : std::runtime_error(std::string(prim_name(p)) +
                           " does not match shape " + kam::to_string(w) +
                           (index >= 0
                                ? " (element " + std::to_string(index) + ")"
                                : "")) {}
};

struct VariableAbsent : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Wedge apply_prim(Prim p, const Wedge& w) {
  auto as_meet = [&](const Wedge& x) -> const WMeet* {
    return std::get_if<WMeet>(&x);
  };
  switch (p) {
    case Prim::A0: {  // (p^q)^r => p^(q^r)
      const WMeet* outer = as_meet(w);
      if (!outer) throw ShapeMismatch(p, w);
      const WMeet* inner = as_meet(*outer->left);
      if (!inner) throw ShapeMismatch(p, w);
      return meet(*inner->left, meet(*inner->right, *outer->right));
    }
    case Prim::A1:  // p => p^1
      return meet(w, Wedge::one());
    case Prim::A2: {  // p^q => q
      const WMeet* m = as_meet(w);
      if (!m) throw ShapeMismatch(p, w);
      return *m->right;
    }
    case Prim::B0:  // p => p^p
      return meet(w, w);
    case Prim::B1: {  // p^q => q^p
      const WMeet* m = as_meet(w);
      if (!m) throw ShapeMismatch(p, w);
      return meet(*m->right, *m->left);
    }
    case Prim::B2: {  // ((p^q)^r)^s => (p^(q^r))^s
      const WMeet* outer = as_meet(w);
      if (!outer) throw ShapeMismatch(p, w);
      const WMeet* mid = as_meet(*outer->left);
      if (!mid) throw ShapeMismatch(p, w);
      const WMeet* inner = as_meet(*mid->left);
      if (!inner) throw ShapeMismatch(p, w);
      return meet(meet(*inner->left, meet(*inner->right, *mid->right)),
                  *outer->right);
    }
  }
  throw std::logic_error("unreachable primitive");
}

// ---------------------------------------------------------------------------
// C-expressions

struct CExpr {
  std::vector<Prim> prims;  // application order: prims[0] applied first

  static CExpr identity() { return CExpr{}; }
  static CExpr single(Prim p) { return CExpr{{p}}; }

  size_t size() const { return prims.size(); }

  // this followed by next (next applied after this)
  CExpr then(const CExpr& next) const {
    CExpr out = *this;
    out.prims.insert(out.prims.end(), next.prims.begin(), next.prims.end());
    return out;
  }
};

inline Wedge apply_cexpr(const CExpr& g, Wedge w) {
  for (size_t i = 0; i < g.prims.size(); ++i) {
    try {
      w = apply_prim(g.prims[i], w);
    } catch (const ShapeMismatch&) {
      throw ShapeMismatch(g.prims[i], w, static_cast<int>(i));
    }
  }
  return w;
}

// Printed in composition order: the last-applied primitive comes first.
inline std::string to_string(const CExpr& g) {
  std::ostringstream os;
  for (auto it = g.prims.rbegin(); it != g.prims.rend(); ++it) {
    if (it != g.prims.rbegin()) os << ' ';
    os << prim_name(*it);
  }
  return os.str();
}

// Parses what to_string prints (composition order), reversing back into
// application order.
inline CExpr parse_cexpr(std::string_view s) {
  std::vector<Prim> display;
  size_t pos = 0;
  while (pos < s.size()) {
    while (pos < s.size() && (std::isspace(static_cast<unsigned char>(s[pos])) ||
                              s[pos] == ',' || s[pos] == '(' || s[pos] == ')'))
      ++pos;
    if (pos >= s.size()) break;
    size_t start = pos;
    while (pos < s.size() && std::isalnum(static_cast<unsigned char>(s[pos])))
      ++pos;
    auto name = s.substr(start, pos - start);
    auto p = prim_by_name(name);
    if (!p)
      throw std::runtime_error("unknown primitive '" + std::string(name) + "'");
    display.push_back(*p);
  }
  CExpr out;
  out.prims.assign(display.rbegin(), display.rend());
  return out;
}

// ---------------------------------------------------------------------------
// Derived C-expressions:
//
//   b0' : p^q        =>  (p^q)^q
//   b1' : (p^q)^r    =>  (q^p)^r
//   b2' : p^(q^r)    =>  (p^q)^r
//   b3  : p^(q^r)    =>  p^(r^q)
//   b3' : (p^(q^r))^s => (p^(r^q))^s
//
// The fixed compositions below are written in application order.

struct DerivedCExprs {
  CExpr b0p, b1p, b2p, b3, b3p;
};

inline const DerivedCExprs& derived_cexprs() {
  static const DerivedCExprs d = [] {
    DerivedCExprs out;
    using P = Prim;
    out.b0p = CExpr{{P::B0, P::A0, P::A2, P::B1}};
    out.b2p = CExpr{{P::B1, P::A0, P::B1, P::A0, P::B1}};
    out.b1p = CExpr{{P::B1}}
                  .then(out.b0p)
                  .then(out.b2p)
                  .then(CExpr{{P::B1, P::A2, P::A0, P::B1, P::B2, P::A0, P::A2}});
    out.b3 = CExpr{{P::B1}}.then(out.b1p).then(CExpr{{P::B1}});
    out.b3p = out.b1p.then(CExpr{{P::A0}})
                  .then(out.b1p)
                  .then(out.b2p)
                  .then(out.b1p);
    return out;
  }();
  return d;
}

// ---------------------------------------------------------------------------
// Adjoining a variable: gamma :: t => t^p for a variable p occurring in t.
// Case split follows the inductive construction on the number of symbols of
// t standing after the last occurrence of p.

inline CExpr adjoin_var(const Wedge& t, const std::string& p) {
  if (!wedge_contains(t, p))
    throw VariableAbsent("variable '" + p + "' does not occur in " +
                         to_string(t));
  const DerivedCExprs& d = derived_cexprs();

  // base cases: nothing after the last occurrence
  if (auto* v = std::get_if<WVar>(&t); v != nullptr && v->name == p)
    return CExpr::single(Prim::B0);
  const WMeet* m = std::get_if<WMeet>(&t);
  if (!m) throw std::logic_error("adjoin_var: inconsistent shape");
  if (auto* rv = std::get_if<WVar>(&*m->right);
      rv != nullptr && rv->name == p)
    return d.b0p;

  const Wedge& u = *m->left;
  const Wedge& v = *m->right;
  if (!wedge_contains(v, p)) {
    // last occurrence is in u:  b1 ; gamma'(v^u) ; b1'
    CExpr inner = adjoin_var(meet(v, u), p);
    return CExpr::single(Prim::B1).then(inner).then(d.b1p);
  }
  // last occurrence is in v = v0 ^ v1
  const WMeet* vm = std::get_if<WMeet>(&v);
  if (!vm) throw std::logic_error("adjoin_var: inconsistent shape");
  const Wedge& v0 = *vm->left;
  const Wedge& v1 = *vm->right;
  if (!wedge_contains(v1, p)) {
    // occurrence in v0:  b3 ; gamma'(u^(v1^v0)) ; b3'
    CExpr inner = adjoin_var(meet(u, meet(v1, v0)), p);
    return d.b3.then(inner).then(d.b3p);
  }
  // occurrence in v1:  b2' ; gamma'((u^v0)^v1) ; b2
  CExpr inner = adjoin_var(meet(meet(u, v0), v1), p);
  return d.b2p.then(inner).then(CExpr::single(Prim::B2));
}

// gamma :: t => t^u, for every variable of u occurring in t.
inline CExpr adjoin_term(const Wedge& t, const Wedge& u) {
  if (std::holds_alternative<WOne>(u)) return CExpr::single(Prim::A1);
  if (auto* v = std::get_if<WVar>(&u)) return adjoin_var(t, v->name);
  const WMeet& m = std::get<WMeet>(u);
  CExpr g1 = adjoin_term(t, *m.left);                  // t => t^v
  CExpr g2 = adjoin_term(meet(t, *m.left), *m.right);  // t^v => (t^v)^w
  return g1.then(g2).then(CExpr::single(Prim::A0));    // => t^(v^w)
}

// gamma :: t => u.
inline CExpr derive_to(const Wedge& t, const Wedge& u) {
  auto missing = wedge_vars(u);
  for (const auto& v : wedge_vars(t)) missing.erase(v);
  if (!missing.empty()) {
    std::string msg = "variables absent from source:";
    for (const auto& v : missing) msg += " " + v;
    throw VariableAbsent(msg);
  }
  return adjoin_term(t, u).then(CExpr::single(Prim::A2));
}

// ---------------------------------------------------------------------------
// The eight standard schemas used by the star translation.

struct StandardCExprs {
  CExpr gI, gK, gE, gW, gC, gB, gcc, gk;
};

inline const StandardCExprs& standard_cexprs() {
  static const StandardCExprs g = [] {
    Wedge p = wvar("p"), q = wvar("q"), r = wvar("r"), s = wvar("s");
    Wedge one = wone();
    StandardCExprs out;
    out.gI = derive_to(meet(p, q), q);
    out.gK = derive_to(meet(one, meet(p, meet(q, r))), meet(p, r));
    out.gE = derive_to(meet(one, meet(p, meet(q, r))), meet(meet(p, q), r));
    // the target duplicates q: 1^(p^(q^r)) => p^(q^(q^r))
    out.gW = derive_to(meet(one, meet(p, meet(q, r))),
                       meet(p, meet(q, meet(q, r))));
    out.gC = derive_to(meet(one, meet(p, meet(q, meet(r, s)))),
                       meet(p, meet(r, meet(q, s))));
    out.gB = derive_to(meet(one, meet(p, meet(q, meet(r, s)))),
                       meet(meet(p, meet(q, r)), s));
    out.gcc = derive_to(meet(one, meet(p, q)), meet(p, meet(q, q)));
    out.gk = derive_to(meet(p, meet(q, r)), meet(q, p));
    return out;
  }();
  return g;
}

}  // namespace kam
