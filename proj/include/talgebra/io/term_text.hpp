#pragma once

#include <cctype>
#include <functional>
#include <string>
#include <vector>

#include "talgebra/errors.hpp"
#include "talgebra/term.hpp"
#include "talgebra/types.hpp"

namespace talgebra::io {

namespace detail {

inline bool name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

inline bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Recursive-descent parser for `name` | `name[t1,t2,...]`. Columns are
// 1-based over the raw text, whitespace skipped outside names.
struct TermParser {
  const std::string& text;
  std::size_t pos = 0;
  std::function<bool(const std::string&)> is_variable;

  [[noreturn]] void err(const std::string& msg, std::size_t at) const {
    fail(ErrorCode::syntax_error,
         "column " + std::to_string(at + 1) + ": " + msg);
  }

  void skip_ws() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  std::string name() {
    skip_ws();
    if (pos >= text.size()) err("expected a name, found end of input", pos);
    if (!name_start(text[pos]))
      err(std::string("expected a name, found '") + text[pos] + "'", pos);
    std::size_t begin = pos;
    while (pos < text.size() && name_char(text[pos])) ++pos;
    return text.substr(begin, pos - begin);
  }

  Term term() {
    std::string head = name();
    skip_ws();
    if (pos >= text.size() || text[pos] != '[')
      return is_variable(head) ? Term::var(head)
                               : Term::apply(std::move(head));
    ++pos;  // consume '['
    std::vector<Term> args;
    args.push_back(term());
    skip_ws();
    while (pos < text.size() && text[pos] == ',') {
      ++pos;
      args.push_back(term());
      skip_ws();
    }
    if (pos >= text.size())
      err("unclosed '[': expected ',' or ']'", pos);
    if (text[pos] != ']')
      err(std::string("expected ',' or ']', found '") + text[pos] + "'", pos);
    ++pos;
    return Term::apply(std::move(head), std::move(args));
  }

  Term parse() {
    Term t = term();
    skip_ws();
    if (pos < text.size())
      err(std::string("unexpected trailing '") + text[pos] + "'", pos);
    return t;
  }
};

}  // namespace detail

// Parses bracket syntax; leaf names for which is_variable holds become
// variables, every other name an application node.
inline Term parse_term(const std::string& text,
                       const std::function<bool(const std::string&)>&
                           is_variable) {
  detail::TermParser p{text, 0, is_variable};
  return p.parse();
}

// Structural type of a term over an alphabet, mirroring evaluation-time
// symbol resolution without an algebra.
inline TypeName typecheck_term(const Term& t, const Alphabet& alphabet,
                               const VariableContext& ctx) {
  if (t.is_variable()) {
    const TypeName* declared = ctx.find(t.head());
    if (!declared)
      fail(ErrorCode::unbound_variable, "undeclared variable: " + t.head());
    return *declared;
  }
  std::vector<TypeName> arg_types;
  arg_types.reserve(t.args().size());
  for (const Term& a : t.args())
    arg_types.push_back(typecheck_term(a, alphabet, ctx));
  if (const TypedSymbol* s = alphabet.lookup_one(t.head(), arg_types))
    return s->result_type;
  auto named = alphabet.lookup(t.head());
  if (named.empty())
    fail(ErrorCode::unknown_symbol, "unknown symbol: " + t.head());
  for (const TypedSymbol* s : named)
    if (s->arity() == arg_types.size())
      fail(ErrorCode::type_mismatch,
           "argument types do not match signature of " + t.head());
  fail(ErrorCode::arity_mismatch,
       "wrong argument count for symbol " + t.head());
}

// Names declared in ctx are variables; the result typechecks against the
// alphabet or the parse fails with the offending symbol.
inline Term parse_term(const std::string& text, const Alphabet& alphabet,
                       const VariableContext& ctx) {
  Term t = parse_term(
      text, [&](const std::string& n) { return ctx.find(n) != nullptr; });
  typecheck_term(t, alphabet, ctx);
  return t;
}

// Canonical surface form: no whitespace, args bracketed and comma-joined.
// parse_term inverts it given the same variable set.
inline std::string term_text(const Term& t) {
  std::string out = t.head();
  if (t.args().empty()) return out;
  out += '[';
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) out += ',';
    out += term_text(t.args()[i]);
  }
  out += ']';
  return out;
}

}  // namespace talgebra::io
