// Core syntax: combinator terms, stacks and processes.
//
// Terms are immutable trees shared via shared_ptr; every operation in this
// library is a pure function over these values, so they can be copied and
// handed between threads freely.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace kam {

using Nat = boost::multiprecision::cpp_int;

// The ten machine instructions.  Order matters: it is the index used by the
// Goedel coding of runtime terms.
enum class Comb : uint8_t { B, C, E, I, K, W, CC, Quote, Read, Write };

inline const char* comb_name(Comb c) {
  switch (c) {
    case Comb::B: return "B";
    case Comb::C: return "C";
    case Comb::E: return "E";
    case Comb::I: return "I";
    case Comb::K: return "K";
    case Comb::W: return "W";
    case Comb::CC: return "cc";
    case Comb::Quote: return "quote";
    case Comb::Read: return "read";
    case Comb::Write: return "write";
  }
  return "?";
}

inline std::optional<Comb> comb_by_name(std::string_view s) {
  static const std::map<std::string_view, Comb> table = {
      {"B", Comb::B},   {"C", Comb::C},        {"E", Comb::E},
      {"I", Comb::I},   {"K", Comb::K},        {"W", Comb::W},
      {"cc", Comb::CC}, {"quote", Comb::Quote}, {"read", Comb::Read},
      {"write", Comb::Write}};
  auto it = table.find(s);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

struct TermNode;
struct StackNode;

class Term {
 public:
  Term() = default;
  explicit Term(std::shared_ptr<const TermNode> p) : p_(std::move(p)) {}

  static Term variable(std::string name);
  static Term atom(std::string name);
  static Term comb(Comb c);
  static Term apply(Term fn, Term arg);
  static Term cont(class Stack saved);
  static Term num(Nat value);

  const TermNode& node() const { return *p_; }
  const TermNode* raw() const { return p_.get(); }
  explicit operator bool() const { return static_cast<bool>(p_); }

 private:
  std::shared_ptr<const TermNode> p_;
};

class Stack {
 public:
  Stack() = default;
  explicit Stack(std::shared_ptr<const StackNode> p) : p_(std::move(p)) {}

  static Stack constant(unsigned index);
  static Stack push(Term top, Stack rest);

  const StackNode& node() const { return *p_; }
  const StackNode* raw() const { return p_.get(); }
  explicit operator bool() const { return static_cast<bool>(p_); }

 private:
  std::shared_ptr<const StackNode> p_;
};

struct Variable {
  std::string name;
};
struct AtomConst {
  std::string name;
};
struct Apply {
  Term fn;
  Term arg;
};
struct Continuation {
  Stack saved;
};
// Compressed numeral: stands for sigma^n applied to the zero term.  All
// operations treat it as that expansion (see numerals.hpp).
struct NumLit {
  Nat value;
};

struct TermNode
    : std::variant<Variable, AtomConst, Comb, Apply, Continuation, NumLit> {
  using variant::variant;
};

struct StackBottom {
  unsigned index;
};
struct StackPush {
  Term top;
  Stack rest;
};

struct StackNode : std::variant<StackBottom, StackPush> {
  using variant::variant;
};

struct Process {
  Term head;
  Stack stack;
};

inline Term Term::variable(std::string name) {
  return Term(std::make_shared<const TermNode>(Variable{std::move(name)}));
}
inline Term Term::atom(std::string name) {
  return Term(std::make_shared<const TermNode>(AtomConst{std::move(name)}));
}
inline Term Term::comb(Comb c) {
  return Term(std::make_shared<const TermNode>(c));
}
inline Term Term::apply(Term fn, Term arg) {
  return Term(
      std::make_shared<const TermNode>(Apply{std::move(fn), std::move(arg)}));
}
inline Term Term::cont(Stack saved) {
  return Term(std::make_shared<const TermNode>(Continuation{std::move(saved)}));
}
inline Term Term::num(Nat value) {
  return Term(std::make_shared<const TermNode>(NumLit{std::move(value)}));
}

inline Stack Stack::constant(unsigned index) {
  return Stack(std::make_shared<const StackNode>(StackBottom{index}));
}
inline Stack Stack::push(Term top, Stack rest) {
  return Stack(std::make_shared<const StackNode>(
      StackPush{std::move(top), std::move(rest)}));
}

template <class T>
inline bool is(const Term& t) {
  return std::holds_alternative<T>(t.node());
}
template <class T>
inline const T& as(const Term& t) {
  return std::get<T>(t.node());
}
inline bool is_comb(const Term& t, Comb c) {
  return is<Comb>(t) && as<Comb>(t) == c;
}

// Convenience: left-associated application f a b c ...
inline Term app(Term f, Term a) { return Term::apply(std::move(f), std::move(a)); }
template <class... Rest>
inline Term app(Term f, Term a, Rest... rest) {
  return app(Term::apply(std::move(f), std::move(a)), std::move(rest)...);
}

// ---------------------------------------------------------------------------
// Structural equality

inline bool equal(const Term& a, const Term& b);
inline bool equal(const Stack& a, const Stack& b);

inline bool equal(const Term& a, const Term& b) {
  if (a.raw() == b.raw()) return true;
  const TermNode& na = a.node();
  const TermNode& nb = b.node();
  if (na.index() != nb.index()) return false;
  if (auto* v = std::get_if<Variable>(&na))
    return v->name == std::get<Variable>(nb).name;
  if (auto* v = std::get_if<AtomConst>(&na))
    return v->name == std::get<AtomConst>(nb).name;
  if (auto* v = std::get_if<Comb>(&na)) return *v == std::get<Comb>(nb);
  if (auto* v = std::get_if<Apply>(&na)) {
    const Apply& w = std::get<Apply>(nb);
    return equal(v->fn, w.fn) && equal(v->arg, w.arg);
  }
  if (auto* v = std::get_if<Continuation>(&na))
    return equal(v->saved, std::get<Continuation>(nb).saved);
  return std::get<NumLit>(na).value == std::get<NumLit>(nb).value;
}

inline bool equal(const Stack& a, const Stack& b) {
  if (a.raw() == b.raw()) return true;
  const StackNode& na = a.node();
  const StackNode& nb = b.node();
  if (na.index() != nb.index()) return false;
  if (auto* v = std::get_if<StackBottom>(&na))
    return v->index == std::get<StackBottom>(nb).index;
  const StackPush& p = std::get<StackPush>(na);
  const StackPush& q = std::get<StackPush>(nb);
  return equal(p.top, q.top) && equal(p.rest, q.rest);
}

inline bool equal(const Process& a, const Process& b) {
  return equal(a.head, b.head) && equal(a.stack, b.stack);
}

// ---------------------------------------------------------------------------
// Free variables (descends into continuation stacks)

inline void collect_free_variables(const Term& t, std::set<std::string>& out);

inline void collect_free_variables(const Stack& s, std::set<std::string>& out) {
  const StackNode* n = s.raw();
  while (auto* p = std::get_if<StackPush>(n)) {
    collect_free_variables(p->top, out);
    n = p->rest.raw();
  }
}

inline void collect_free_variables(const Term& t, std::set<std::string>& out) {
  const TermNode& n = t.node();
  if (auto* v = std::get_if<Variable>(&n)) {
    out.insert(v->name);
  } else if (auto* a = std::get_if<Apply>(&n)) {
    collect_free_variables(a->fn, out);
    collect_free_variables(a->arg, out);
  } else if (auto* c = std::get_if<Continuation>(&n)) {
    collect_free_variables(c->saved, out);
  }
}

inline std::set<std::string> free_variables(const Term& t) {
  std::set<std::string> out;
  collect_free_variables(t, out);
  return out;
}

inline bool is_closed(const Term& t) { return free_variables(t).empty(); }

inline bool contains_variable(const Term& t, const std::string& name) {
  const TermNode& n = t.node();
  if (auto* v = std::get_if<Variable>(&n)) return v->name == name;
  if (auto* a = std::get_if<Apply>(&n))
    return contains_variable(a->fn, name) || contains_variable(a->arg, name);
  if (auto* c = std::get_if<Continuation>(&n)) {
    const StackNode* s = c->saved.raw();
    while (auto* p = std::get_if<StackPush>(s)) {
      if (contains_variable(p->top, name)) return true;
      s = p->rest.raw();
    }
  }
  return false;
}

inline bool contains_continuation(const Term& t) {
  const TermNode& n = t.node();
  if (std::holds_alternative<Continuation>(n)) return true;
  if (auto* a = std::get_if<Apply>(&n))
    return contains_continuation(a->fn) || contains_continuation(a->arg);
  return false;
}

// ---------------------------------------------------------------------------
// Substitution.  c-terms have no binders, so this is literal simultaneous
// replacement of variables; atoms are never replaced.  Descends into
// continuation stacks to stay total.

using Bindings = std::map<std::string, Term>;

inline Term substitute(const Term& t, const Bindings& bs);

inline Stack substitute(const Stack& s, const Bindings& bs) {
  const StackNode& n = s.node();
  if (std::holds_alternative<StackBottom>(n)) return s;
  const StackPush& p = std::get<StackPush>(n);
  Term top = substitute(p.top, bs);
  Stack rest = substitute(p.rest, bs);
  if (top.raw() == p.top.raw() && rest.raw() == p.rest.raw()) return s;
  return Stack::push(std::move(top), std::move(rest));
}

inline Term substitute(const Term& t, const Bindings& bs) {
  const TermNode& n = t.node();
  if (auto* v = std::get_if<Variable>(&n)) {
    auto it = bs.find(v->name);
    return it == bs.end() ? t : it->second;
  }
  if (auto* a = std::get_if<Apply>(&n)) {
    Term fn = substitute(a->fn, bs);
    Term arg = substitute(a->arg, bs);
    if (fn.raw() == a->fn.raw() && arg.raw() == a->arg.raw()) return t;
    return Term::apply(std::move(fn), std::move(arg));
  }
  if (auto* c = std::get_if<Continuation>(&n)) {
    Stack saved = substitute(c->saved, bs);
    if (saved.raw() == c->saved.raw()) return t;
    return Term::cont(std::move(saved));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Printing.  Application uses the left-association convention: (K x y) means
// ((K x) y).  Numerals print compressed as %n, stacks as "t . u . #k".

inline void print_term(std::ostream& os, const Term& t);

inline void print_stack(std::ostream& os, const Stack& s) {
  const StackNode* n = s.raw();
  while (auto* p = std::get_if<StackPush>(n)) {
    print_term(os, p->top);
    os << " . ";
    n = p->rest.raw();
  }
  os << '#' << std::get<StackBottom>(*n).index;
}

inline void print_term(std::ostream& os, const Term& t) {
  const TermNode& n = t.node();
  if (auto* v = std::get_if<Variable>(&n)) {
    os << v->name;
  } else if (auto* a = std::get_if<AtomConst>(&n)) {
    os << '@' << a->name;
  } else if (auto* c = std::get_if<Comb>(&n)) {
    os << comb_name(*c);
  } else if (std::holds_alternative<Apply>(n)) {
    // Flatten the left spine.
    std::vector<const Term*> args;
    const Term* head = &t;
    while (auto* inner = std::get_if<Apply>(&head->node())) {
      args.push_back(&inner->arg);
      head = &inner->fn;
    }
    os << '(';
    print_term(os, *head);
    for (auto it = args.rbegin(); it != args.rend(); ++it) {
      os << ' ';
      print_term(os, **it);
    }
    os << ')';
  } else if (auto* k = std::get_if<Continuation>(&n)) {
    os << "k[";
    print_stack(os, k->saved);
    os << ']';
  } else {
    os << '%' << std::get<NumLit>(n).value;
  }
}

inline void print_process(std::ostream& os, const Process& p) {
  print_term(os, p.head);
  os << " * ";
  print_stack(os, p.stack);
}

inline std::string to_string(const Term& t) {
  std::ostringstream os;
  print_term(os, t);
  return os.str();
}
inline std::string to_string(const Stack& s) {
  std::ostringstream os;
  print_stack(os, s);
  return os.str();
}
inline std::string to_string(const Process& p) {
  std::ostringstream os;
  print_process(os, p);
  return os.str();
}

inline size_t term_size(const Term& t) {
  const TermNode& n = t.node();
  if (auto* a = std::get_if<Apply>(&n))
    return 1 + term_size(a->fn) + term_size(a->arg);
  if (auto* c = std::get_if<Continuation>(&n)) {
    size_t sz = 1;
    const StackNode* s = c->saved.raw();
    while (auto* p = std::get_if<StackPush>(s)) {
      sz += term_size(p->top);
      s = p->rest.raw();
    }
    return sz;
  }
  return 1;
}

inline size_t stack_depth(const Stack& s) {
  size_t d = 0;
  const StackNode* n = s.raw();
  while (auto* p = std::get_if<StackPush>(n)) {
    ++d;
    n = p->rest.raw();
  }
  return d;
}

}  // namespace kam
