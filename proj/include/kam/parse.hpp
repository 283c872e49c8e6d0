// Text format for terms, stacks, processes and lambda notation.
//
//   combinators   B C E I K W cc quote read write
//   variables     lowercase identifiers
//   atoms         @name
//   application   (t u v)  ==  ((t u) v)
//   continuation  k[stack]
//   numeral       %n
//   stack         t . u . #n      (right-nested, ends in a stack constant)
//   process       t * stack       (also accepts the unicode star and middot)
//   lambda        \x. t
//
// Whitespace-insensitive; ';' starts a line comment.
#pragma once

#include "kam/lambda.hpp"
#include "kam/term.hpp"

namespace kam {

struct ParseError : std::runtime_error {
  size_t position;
  ParseError(std::string msg, size_t pos)
      : std::runtime_error(std::move(msg) + " at offset " +
                           std::to_string(pos)),
        position(pos) {}
};

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Term parse_term_all() {
    Term t = parse_term();
    expect_end();
    return t;
  }
  Stack parse_stack_all() {
    Stack s = parse_stack();
    expect_end();
    return s;
  }
  Process parse_process_all() {
    Process p = parse_process();
    expect_end();
    return p;
  }
  LTerm parse_lambda_all() {
    LTerm t = parse_lambda();
    expect_end();
    return t;
  }

  Term parse_term() {
    skip_ws();
    if (eat('(')) {
      Term t = parse_term();
      skip_ws();
      while (!peek_is(')')) {
        Term arg = parse_term();
        t = Term::apply(std::move(t), std::move(arg));
        skip_ws();
      }
      require(')');
      return t;
    }
    return parse_leaf();
  }

  Stack parse_stack() {
    skip_ws();
    if (eat('#')) return Stack::constant(parse_index());
    Term t = parse_term();
    skip_ws();
    if (!eat_dot())
      fail("expected '.' or stack constant in stack");
    Stack rest = parse_stack();
    return Stack::push(std::move(t), std::move(rest));
  }

  Process parse_process() {
    Term head = parse_term();
    skip_ws();
    if (!eat_star()) fail("expected '*' between head and stack");
    Stack s = parse_stack();
    return Process{std::move(head), std::move(s)};
  }

  LTerm parse_lambda() {
    skip_ws();
    if (eat('\\')) {
      std::string binder = parse_identifier();
      skip_ws();
      require('.');
      LTerm body = parse_lambda();
      return LTerm::abs(std::move(binder), std::move(body));
    }
    if (eat('(')) {
      LTerm t = parse_lambda();
      skip_ws();
      while (!peek_is(')')) {
        LTerm arg = parse_lambda();
        t = LTerm::apply(std::move(t), std::move(arg));
        skip_ws();
      }
      require(')');
      return t;
    }
    // leaf: reuse the c-term leaf forms; a bare identifier becomes a
    // lambda variable so binders can capture it.
    skip_ws();
    if (peek_alpha()) {
      size_t save = pos_;
      std::string id = parse_identifier();
      if (auto c = comb_by_name(id)) {
        // 'k' followed by '[' is continuation syntax, handled below.
        return LTerm::embed(Term::comb(*c));
      }
      if (id == "k" && peek_is('[')) {
        pos_ = save;
        return LTerm::embed(parse_leaf());
      }
      if (!id.empty() && std::isupper(static_cast<unsigned char>(id[0])))
        fail("unknown combinator name '" + id + "'");
      return LTerm::var(std::move(id));
    }
    return LTerm::embed(parse_leaf());
  }

  void expect_end() {
    skip_ws();
    if (pos_ != src_.size()) fail("trailing input");
  }

 private:
  Term parse_leaf() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    char c = src_[pos_];
    if (c == '@') {
      ++pos_;
      return Term::atom(parse_identifier());
    }
    if (c == '%') {
      ++pos_;
      return Term::num(parse_nat());
    }
    if (c == '(') return parse_term();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t save = pos_;
      std::string id = parse_identifier();
      if (id == "k" && peek_is('[')) {
        ++pos_;  // '['
        Stack s = parse_stack();
        skip_ws();
        require(']');
        return Term::cont(std::move(s));
      }
      if (auto comb = comb_by_name(id)) return Term::comb(*comb);
      if (std::isupper(static_cast<unsigned char>(id[0]))) {
        pos_ = save;
        fail("unknown combinator name '" + id + "'");
      }
      return Term::variable(std::move(id));
    }
    fail(std::string("unexpected character '") + c + "'");
    throw std::logic_error("unreachable");
  }

  std::string parse_identifier() {
    skip_ws();
    size_t start = pos_;
    if (pos_ >= src_.size() ||
        !(std::isalpha(static_cast<unsigned char>(src_[pos_])) ||
          src_[pos_] == '_'))
      fail("expected identifier");
    ++pos_;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')
        ++pos_;
      else
        break;
    }
    return std::string(src_.substr(start, pos_ - start));
  }

  Nat parse_nat() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < src_.size() &&
           std::isdigit(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    if (pos_ == start) fail("expected number");
    return Nat(std::string(src_.substr(start, pos_ - start)));
  }

  unsigned parse_index() {
    Nat n = parse_nat();
    if (n > 1000000000u) fail("stack constant index too large");
    return static_cast<unsigned>(n);
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

  bool peek_is(char c) {
    skip_ws();
    return pos_ < src_.size() && src_[pos_] == c;
  }
  bool peek_alpha() {
    skip_ws();
    return pos_ < src_.size() &&
           (std::isalpha(static_cast<unsigned char>(src_[pos_])) ||
            src_[pos_] == '_');
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool eat_utf8(std::string_view seq) {
    skip_ws();
    if (src_.substr(pos_, seq.size()) == seq) {
      pos_ += seq.size();
      return true;
    }
    return false;
  }
  bool eat_dot() { return eat('.') || eat_utf8("\xc2\xb7"); }          // middot
  bool eat_star() { return eat('*') || eat_utf8("\xe2\x8b\x86"); }    // star op
  void require(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg, pos_);
  }

  std::string_view src_;
  size_t pos_ = 0;
};

inline Term parse_term(std::string_view s) { return Parser(s).parse_term_all(); }
inline Stack parse_stack(std::string_view s) {
  return Parser(s).parse_stack_all();
}
inline Process parse_process(std::string_view s) {
  return Parser(s).parse_process_all();
}
inline LTerm parse_lambda(std::string_view s) {
  return Parser(s).parse_lambda_all();
}

}  // namespace kam
