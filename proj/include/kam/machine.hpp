// The abstract machine: deterministic one-step execution of processes.
//
// Rule table (xi, eta, zeta are terms; pi, w stacks; t the slot value):
//
//   (xi eta) * pi            ->  xi * eta.pi          push
//   I  * xi.pi               ->  xi * pi
//   K  * xi.eta.pi           ->  xi * pi
//   E  * xi.eta.pi           ->  (xi eta) * pi
//   W  * xi.eta.pi           ->  xi * eta.eta.pi
//   C  * xi.eta.zeta.pi      ->  xi * zeta.eta.pi
//   B  * xi.eta.zeta.pi      ->  (xi (eta zeta)) * pi
//   cc * xi.pi               ->  xi * k[pi].pi
//   k[pi] * xi.w             ->  xi * pi
//   quote * xi.pi            ->  xi * %code(pi).pi
//   read  * xi.pi^t          ->  xi * t.pi
//   write * xi.t.pi          ->  xi * pi^t
//
// where pi^t is pi with t inserted adjacent to the stack constant (the
// "slot").  NumLit heads unfold exactly like the push rule on the numeral
// tower: %0 behaves as the zero term, %(k+1) * pi -> sigma * %k.pi.
#pragma once

#include "kam/numerals.hpp"
#include "kam/term.hpp"

#include <mutex>
#include <unordered_map>

namespace kam {

// ---------------------------------------------------------------------------
// Slot access

struct NoSlotError : std::runtime_error {
  NoSlotError() : std::runtime_error("stack has no entry above its constant") {}
};

// pi^t: insert t adjacent to the stack constant.
inline Stack put_slot(const Stack& pi, const Term& t) {
  const StackNode& n = pi.node();
  if (std::holds_alternative<StackBottom>(n)) return Stack::push(t, pi);
  const StackPush& p = std::get<StackPush>(n);
  return Stack::push(p.top, put_slot(p.rest, t));
}

// Inverse of put_slot: extract the entry adjacent to the constant.
inline std::pair<Term, Stack> get_slot(const Stack& rho) {
  const StackNode& n = rho.node();
  if (std::holds_alternative<StackBottom>(n)) throw NoSlotError();
  const StackPush& p = std::get<StackPush>(n);
  if (std::holds_alternative<StackBottom>(p.rest.node()))
    return {p.top, p.rest};
  auto [slot, rest] = get_slot(p.rest);
  return {slot, Stack::push(p.top, rest)};
}

// ---------------------------------------------------------------------------
// Goedel coding of runtime terms and stacks.
//
// pair(a,b) = a + (a+b)(a+b+1)/2, the classic diagonal pairing.  Terms:
//   combinator i      -> pair(0, i)        (order B,C,E,I,K,W,cc,quote,read,write)
//   (u v)             -> pair(1, pair(code u, code v))
//   k[pi]             -> pair(2, code pi)
//   atom              -> pair(3, registry index)
//   %n                -> coded as its expansion
// Stacks:
//   #i                -> pair(0, i)
//   t . pi            -> pair(1, pair(code t, code pi))
//
// The coding is injective (decode below inverts it); it is not onto N.
// Codes grow fast, hence the arbitrary-precision Nat.

struct CodingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Nat pair_nat(const Nat& a, const Nat& b) {
  Nat s = a + b;
  return a + s * (s + 1) / 2;
}

inline std::pair<Nat, Nat> unpair_nat(const Nat& n) {
  // find s with s(s+1)/2 <= n < (s+1)(s+2)/2
  Nat two_n = 2 * n;
  Nat s = boost::multiprecision::sqrt(two_n);
  while (s * (s + 1) / 2 > n) --s;
  while ((s + 1) * (s + 2) / 2 <= n) ++s;
  Nat a = n - s * (s + 1) / 2;
  return {a, s - a};
}

// Session-stable atom registry: atoms are coded by first-use index.
class AtomRegistry {
 public:
  static AtomRegistry& instance() {
    static AtomRegistry r;
    return r;
  }
  unsigned index_of(const std::string& name) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = by_name_.find(name);
    if (it != by_name_.end()) return it->second;
    unsigned idx = static_cast<unsigned>(names_.size());
    names_.push_back(name);
    by_name_.emplace(name, idx);
    return idx;
  }
  std::optional<std::string> name_of(unsigned idx) {
    std::lock_guard<std::mutex> lock(mu_);
    if (idx >= names_.size()) return std::nullopt;
    return names_[idx];
  }

 private:
  std::mutex mu_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, unsigned> by_name_;
};

inline Nat code_term(const Term& t);

inline Nat code_stack(const Stack& s) {
  const StackNode& n = s.node();
  if (auto* b = std::get_if<StackBottom>(&n)) return pair_nat(0, b->index);
  const StackPush& p = std::get<StackPush>(n);
  return pair_nat(1, pair_nat(code_term(p.top), code_stack(p.rest)));
}

inline Nat code_term(const Term& t) {
  const TermNode& n = t.node();
  if (auto* c = std::get_if<Comb>(&n))
    return pair_nat(0, static_cast<unsigned>(*c));
  if (auto* a = std::get_if<Apply>(&n))
    return pair_nat(1, pair_nat(code_term(a->fn), code_term(a->arg)));
  if (auto* k = std::get_if<Continuation>(&n))
    return pair_nat(2, code_stack(k->saved));
  if (auto* at = std::get_if<AtomConst>(&n))
    return pair_nat(3, AtomRegistry::instance().index_of(at->name));
  if (auto* num = std::get_if<NumLit>(&n)) {
    // Code of the expansion, computed without building the tower.  The code
    // of sigma is ~20M bits, so codes of numerals >= 1 are huge; they are
    // well defined but only practical at tiny sizes.
    Nat c = pair_nat(
        1, pair_nat(pair_nat(0, static_cast<unsigned>(Comb::K)),
                    pair_nat(0, static_cast<unsigned>(Comb::I))));
    if (num->value > 0) {
      static const Nat sigma_code = code_term(sigma_term());
      for (Nat i = 0; i < num->value; ++i)
        c = pair_nat(1, pair_nat(sigma_code, c));
    }
    return c;
  }
  throw CodingError("cannot code an open term (variable '" +
                    std::get<Variable>(n).name + "')");
}

inline std::optional<Term> decode_term(const Nat& n);

inline std::optional<Stack> decode_stack(const Nat& n) {
  auto [tag, rest] = unpair_nat(n);
  if (tag == 0) {
    if (rest > 1000000) return std::nullopt;
    return Stack::constant(static_cast<unsigned>(rest));
  }
  if (tag != 1) return std::nullopt;
  auto [tc, sc] = unpair_nat(rest);
  auto top = decode_term(tc);
  if (!top) return std::nullopt;
  auto tail = decode_stack(sc);
  if (!tail) return std::nullopt;
  return Stack::push(*top, *tail);
}

inline std::optional<Term> decode_term(const Nat& n) {
  auto [tag, rest] = unpair_nat(n);
  if (tag == 0) {
    if (rest > 9) return std::nullopt;
    return Term::comb(static_cast<Comb>(static_cast<unsigned>(rest)));
  }
  if (tag == 1) {
    auto [fc, ac] = unpair_nat(rest);
    auto fn = decode_term(fc);
    if (!fn) return std::nullopt;
    auto arg = decode_term(ac);
    if (!arg) return std::nullopt;
    return Term::apply(*fn, *arg);
  }
  if (tag == 2) {
    auto s = decode_stack(rest);
    if (!s) return std::nullopt;
    return Term::cont(*s);
  }
  if (tag == 3) {
    if (rest > 1000000) return std::nullopt;
    auto name = AtomRegistry::instance().name_of(static_cast<unsigned>(rest));
    if (!name) return std::nullopt;
    return Term::atom(*name);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// One-step execution

enum class HaltKind {
  StuckAtomHead,
  StuckVariableHead,
  InsufficientArguments,
  NoSlot,
};

struct Halt {
  HaltKind kind;
  std::string head;     // printable description of the stuck head
  unsigned needed = 0;  // for InsufficientArguments
  unsigned available = 0;
};

using StepResult = std::variant<Process, Halt>;  // Process == Next

namespace detail {
inline bool pop(const Stack& s, Term& out, Stack& rest) {
  if (auto* p = std::get_if<StackPush>(&s.node())) {
    out = p->top;
    rest = p->rest;
    return true;
  }
  return false;
}
inline Halt too_few(const Term& head, unsigned needed, unsigned available) {
  return Halt{HaltKind::InsufficientArguments, to_string(head), needed,
              available};
}
}  // namespace detail

inline StepResult step(const Process& proc) {
  const Term& h = proc.head;
  const Stack& pi = proc.stack;
  const TermNode& n = h.node();

  if (auto* a = std::get_if<Apply>(&n))
    return Process{a->fn, Stack::push(a->arg, pi)};

  if (std::holds_alternative<AtomConst>(n))
    return Halt{HaltKind::StuckAtomHead, to_string(h)};
  if (std::holds_alternative<Variable>(n))
    return Halt{HaltKind::StuckVariableHead, to_string(h)};

  if (auto* k = std::get_if<Continuation>(&n)) {
    Term xi;
    Stack w;
    if (!detail::pop(pi, xi, w)) return detail::too_few(h, 1, 0);
    return Process{xi, k->saved};
  }

  if (auto* num = std::get_if<NumLit>(&n)) {
    if (num->value == 0) {
      // %0 stands for (K I); mirror its push step.
      return Process{Term::comb(Comb::K),
                     Stack::push(Term::comb(Comb::I), pi)};
    }
    return Process{sigma_term(), Stack::push(Term::num(num->value - 1), pi)};
  }

  Comb c = std::get<Comb>(n);
  Term x1, x2, x3;
  Stack r1, r2, r3;
  auto have1 = [&] { return detail::pop(pi, x1, r1); };
  auto have2 = [&] { return have1() && detail::pop(r1, x2, r2); };
  auto have3 = [&] { return have2() && detail::pop(r2, x3, r3); };

  switch (c) {
    case Comb::I:
      if (!have1()) return detail::too_few(h, 1, stack_depth(pi));
      return Process{x1, r1};
    case Comb::K:
      if (!have2()) return detail::too_few(h, 2, stack_depth(pi));
      return Process{x1, r2};
    case Comb::E:
      if (!have2()) return detail::too_few(h, 2, stack_depth(pi));
      return Process{Term::apply(x1, x2), r2};
    case Comb::W:
      if (!have2()) return detail::too_few(h, 2, stack_depth(pi));
      return Process{x1, Stack::push(x2, Stack::push(x2, r2))};
    case Comb::C:
      if (!have3()) return detail::too_few(h, 3, stack_depth(pi));
      return Process{x1, Stack::push(x3, Stack::push(x2, r3))};
    case Comb::B:
      if (!have3()) return detail::too_few(h, 3, stack_depth(pi));
      return Process{Term::apply(x1, Term::apply(x2, x3)), r3};
    case Comb::CC:
      if (!have1()) return detail::too_few(h, 1, stack_depth(pi));
      return Process{x1, Stack::push(Term::cont(r1), r1)};
    case Comb::Quote:
      if (!have1()) return detail::too_few(h, 1, stack_depth(pi));
      return Process{x1, Stack::push(Term::num(code_stack(r1)), r1)};
    case Comb::Read: {
      if (!have1()) return detail::too_few(h, 1, stack_depth(pi));
      if (std::holds_alternative<StackBottom>(r1.node()))
        return Halt{HaltKind::NoSlot, to_string(h)};
      auto [tau, rest] = get_slot(r1);
      return Process{x1, Stack::push(tau, rest)};
    }
    case Comb::Write: {
      if (!have2()) return detail::too_few(h, 2, stack_depth(pi));
      return Process{x1, put_slot(r2, x2)};
    }
    default:
      break;
  }
  throw std::logic_error("unreachable combinator in step()");
}

// ---------------------------------------------------------------------------
// Bounded runs

struct Trace {
  std::vector<Process> steps;  // starts with the initial process
  std::optional<Halt> halt;    // empty iff fuel ran out
  size_t fuel_used = 0;

  bool fuel_exhausted() const { return !halt.has_value(); }
  const Process& last() const { return steps.back(); }
};

inline Trace run(Process p, size_t fuel) {
  Trace tr;
  tr.steps.push_back(p);
  for (size_t i = 0; i < fuel; ++i) {
    StepResult r = step(tr.steps.back());
    if (auto* halt = std::get_if<Halt>(&r)) {
      tr.halt = *halt;
      tr.fuel_used = i;
      return tr;
    }
    tr.steps.push_back(std::get<Process>(std::move(r)));
  }
  tr.fuel_used = fuel;
  return tr;
}

// True iff q occurs (up to numeral canonicalization) on the deterministic
// trace from p within fuel steps.  Streams instead of storing the trace.
inline bool reaches(Process p, const Process& q, size_t fuel) {
  for (size_t i = 0;; ++i) {
    if (equal_canonical(p, q)) return true;
    if (i >= fuel) return false;
    StepResult r = step(p);
    if (std::holds_alternative<Halt>(r)) return false;
    p = std::get<Process>(std::move(r));
  }
}

// Number of steps until q first appears, if it does.
inline std::optional<size_t> steps_until(Process p, const Process& q,
                                         size_t fuel) {
  for (size_t i = 0;; ++i) {
    if (equal_canonical(p, q)) return i;
    if (i >= fuel) return std::nullopt;
    StepResult r = step(p);
    if (std::holds_alternative<Halt>(r)) return std::nullopt;
    p = std::get<Process>(std::move(r));
  }
}

}  // namespace kam
