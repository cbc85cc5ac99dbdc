#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "talgebra/errors.hpp"
#include "talgebra/term.hpp"
#include "talgebra/types.hpp"
#include "talgebra/value.hpp"

namespace talgebra {

using Operation = std::function<Value(const std::vector<Value>&)>;

// A parametric family of candidate interpretations for one symbol:
// instantiate turns a parameter vector of length param_count into a host op.
struct CandidateFamily {
  std::size_t param_count = 0;
  std::function<Operation(std::span<const double>)> instantiate;
};

enum class OptMode { min, max };

struct AlgebraSpec {
  Alphabet alphabet;
  // Domain membership per type; every type referenced by a symbol needs one.
  std::map<TypeName, std::function<bool(const Value&)>> domains;
  std::map<TypedSymbol, Operation> interpretations;
  std::map<TypedSymbol, CandidateFamily> candidate_families;
  TypeName eval_type;
  // Strict total order on the evaluation domain.
  std::function<bool(const Value&, const Value&)> eval_less;
  // Aggregator over a nonempty list of example values.
  std::function<Value(const std::vector<Value>&)> combine;
  OptMode opt = OptMode::min;
};

// A signature with domains plus a (possibly partial) interpretation. Each
// uninterpreted symbol carries a candidate family. Immutable; installing an
// interpretation produces a new algebra.
class TemplateAlgebra {
 public:
  explicit TemplateAlgebra(AlgebraSpec spec) : s_(std::move(spec)) {
    require_domain(s_.eval_type);
    for (const TypedSymbol& sym : s_.alphabet.symbols()) {
      for (const TypeName& t : sym.arg_types) require_domain(t);
      require_domain(sym.result_type);
      if (!s_.interpretations.count(sym) && !s_.candidate_families.count(sym))
        fail(ErrorCode::domain_error,
             "uninterpreted symbol without candidate family: " + sym.name);
    }
    if (!s_.eval_less || !s_.combine)
      fail(ErrorCode::domain_error, "algebra needs eval_less and combine");
  }

  const Alphabet& alphabet() const { return s_.alphabet; }
  const TypeName& eval_type() const { return s_.eval_type; }
  OptMode opt() const { return s_.opt; }

  bool value_less(const Value& a, const Value& b) const {
    return s_.eval_less(a, b);
  }

  Value combine(const std::vector<Value>& vs) const { return s_.combine(vs); }

  bool in_domain(const TypeName& t, const Value& v) const {
    auto it = s_.domains.find(t);
    return it != s_.domains.end() && it->second(v);
  }

  bool is_interpreted(const TypedSymbol& sym) const {
    return s_.interpretations.count(sym) != 0;
  }

  bool instance_complete() const {
    for (const TypedSymbol& sym : s_.alphabet.symbols())
      if (!is_interpreted(sym)) return false;
    return true;
  }

  const CandidateFamily& family(const TypedSymbol& sym) const {
    auto it = s_.candidate_families.find(sym);
    if (it == s_.candidate_families.end())
      fail(ErrorCode::domain_error, "no candidate family for " + sym.name);
    return it->second;
  }

  TemplateAlgebra with_interpretation(const TypedSymbol& sym,
                                      Operation op) const {
    if (!s_.alphabet.lookup_one(sym.name, sym.arg_types))
      fail(ErrorCode::unknown_symbol, "symbol not in alphabet: " + sym.name);
    AlgebraSpec copy = s_;
    copy.interpretations[sym] = std::move(op);
    return TemplateAlgebra(std::move(copy));
  }

  // Resolves the symbol at the root of an application node given the
  // already-computed argument types.
  const TypedSymbol& resolve(const Term& t,
                             const std::vector<TypeName>& arg_types) const {
    if (const TypedSymbol* s = s_.alphabet.lookup_one(t.head(), arg_types))
      return *s;
    auto named = s_.alphabet.lookup(t.head());
    if (named.empty())
      fail(ErrorCode::unknown_symbol, "unknown symbol: " + t.head());
    for (const TypedSymbol* s : named)
      if (s->arity() == arg_types.size())
        fail(ErrorCode::type_mismatch,
             "argument types do not match signature of " + t.head());
    fail(ErrorCode::arity_mismatch,
         "wrong argument count for symbol " + t.head());
  }

  TypeName typecheck(const Term& t, const VariableContext& ctx) const {
    if (t.is_variable()) {
      if (const TypeName* ty = ctx.find(t.head())) return *ty;
      fail(ErrorCode::unbound_variable, "unbound variable: " + t.head());
    }
    std::vector<TypeName> arg_types;
    arg_types.reserve(t.args().size());
    for (const Term& a : t.args()) arg_types.push_back(typecheck(a, ctx));
    return resolve(t, arg_types).result_type;
  }

  Value eval_closed(const Term& t) const {
    return eval(t, VariableContext{}, {});
  }

  // Evaluates with variables bound by env. Equals eval_closed on the term
  // obtained by substituting each variable's value.
  Value eval_open(const Term& t, const VariableContext& ctx,
                  const std::map<std::string, Value>& env) const {
    return eval(t, ctx, env);
  }

 private:
  void require_domain(const TypeName& t) const {
    if (!s_.domains.count(t))
      fail(ErrorCode::domain_error, "no domain for type " + t.name);
  }

  Value eval(const Term& t, const VariableContext& ctx,
             const std::map<std::string, Value>& env) const {
    if (t.is_variable()) {
      auto it = env.find(t.head());
      if (it == env.end())
        fail(ErrorCode::unbound_variable, "unbound variable: " + t.head());
      const TypeName* declared = ctx.find(t.head());
      if (declared && !(it->second.type() == *declared))
        fail(ErrorCode::type_mismatch,
             "binding for " + t.head() + " has wrong type");
      return it->second;
    }
    std::vector<Value> args;
    std::vector<TypeName> arg_types;
    args.reserve(t.args().size());
    for (const Term& a : t.args()) {
      args.push_back(eval(a, ctx, env));
      arg_types.push_back(args.back().type());
    }
    const TypedSymbol& sym = resolve(t, arg_types);
    auto it = s_.interpretations.find(sym);
    if (it == s_.interpretations.end())
      fail(ErrorCode::uninterpreted_symbol,
           "symbol has no interpretation: " + sym.name);
    Value out = it->second(args);
    if (!(out.type() == sym.result_type) ||
        !in_domain(sym.result_type, out))
      fail(ErrorCode::domain_error,
           "interpretation of " + sym.name + " left its result domain");
    return out;
  }

  AlgebraSpec s_;
};

}  // namespace talgebra
