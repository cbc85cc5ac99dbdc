#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "talgebra/algebra.hpp"
#include "talgebra/dfa/dfa.hpp"
#include "talgebra/dfa/examples.hpp"
#include "talgebra/grounding.hpp"

namespace talgebra::dfa {

inline const TypeName kStringType{"string"};
inline const TypeName kBoolType{"bool"};

inline TypedSymbol accept_symbol() {
  return {"accept", {kStringType}, kBoolType};
}
inline TypedSymbol equiv_symbol() {
  return {"equiv", {kStringType, kStringType}, kBoolType};
}
inline TypedSymbol not_symbol() { return {"not", {kBoolType}, kBoolType}; }

namespace detail {

inline AlgebraSpec regular_spec(const std::vector<char>& alphabet) {
  AlgebraSpec s;
  s.alphabet.add(accept_symbol());
  s.alphabet.add(equiv_symbol());
  s.alphabet.add(not_symbol());
  std::set<char> chars(alphabet.begin(), alphabet.end());
  s.domains[kStringType] = [chars](const Value& v) {
    const std::string* w = std::get_if<std::string>(&v.payload());
    if (!w) return false;
    for (char x : *w)
      if (!chars.count(x)) return false;
    return true;
  };
  s.domains[kBoolType] = [](const Value& v) {
    return std::holds_alternative<bool>(v.payload());
  };
  s.interpretations[not_symbol()] = [](const std::vector<Value>& a) {
    return Value(kBoolType, !a[0].as_bool());
  };
  s.eval_type = kBoolType;
  // false < true, opt = min, combine = conjunction.
  s.eval_less = [](const Value& a, const Value& b) {
    return !a.as_bool() && b.as_bool();
  };
  s.combine = [](const std::vector<Value>& vs) {
    bool all = true;
    for (const Value& v : vs) all = all && v.as_bool();
    return Value(kBoolType, all);
  };
  s.opt = OptMode::min;
  return s;
}

}  // namespace detail

// Template algebra of the regular engine with accept and equiv left open.
// The candidate family is structural (regular languages), so the parameter
// form is a stub that instantiates the empty-language hypothesis; learned
// interpretations come from infer() + admissible_instance() instead.
inline TemplateAlgebra regular_template(const std::vector<char>& alphabet) {
  AlgebraSpec s = detail::regular_spec(alphabet);
  s.candidate_families[accept_symbol()] =
      CandidateFamily{0, [](std::span<const double>) -> Operation {
                        return [](const std::vector<Value>&) {
                          return Value(kBoolType, false);
                        };
                      }};
  s.candidate_families[equiv_symbol()] =
      CandidateFamily{0, [](std::span<const double>) -> Operation {
                        return [](const std::vector<Value>& a) {
                          return Value(kBoolType,
                                       a[0].as_string() == a[1].as_string());
                        };
                      }};
  return TemplateAlgebra(std::move(s));
}

// Complete instance induced by a DFA: accept is membership in L(m); equiv
// is the Nerode congruence of L(m) (two dead strings are equivalent);
// opt = min and combine = conjunction, so an example set attains true only
// if every example does under every grounding.
inline TemplateAlgebra admissible_instance(const Dfa& m) {
  m.validate();
  AlgebraSpec s = detail::regular_spec(m.alphabet);
  Dfa whole = m;
  Dfa canon = canonical_dfa(m);
  s.interpretations[accept_symbol()] =
      [whole](const std::vector<Value>& a) {
        return Value(kBoolType, whole.accepts(a[0].as_string()));
      };
  s.interpretations[equiv_symbol()] = [canon](const std::vector<Value>& a) {
    auto qu = canon.run(a[0].as_string());
    auto qv = canon.run(a[1].as_string());
    if (!qu && !qv) return Value(kBoolType, true);
    return Value(kBoolType, qu && qv && *qu == *qv);
  };
  return TemplateAlgebra(std::move(s));
}

// Regular examples as generic examples over the string domain: accept[x],
// equiv[x,y], and their negations under `not`. Objects are the example's
// strings, ids assigned by position.
inline Example to_core_example(const RegularExample& e) {
  e.validate();
  Term x = Term::var("x"), y = Term::var("y");
  Term term = Term::apply("accept", {x});
  VariableContext vars;
  switch (e.kind) {
    case RegularExampleKind::accept:
      vars.declare("x", kStringType);
      break;
    case RegularExampleKind::not_accept:
      term = Term::apply("not", {term});
      vars.declare("x", kStringType);
      break;
    case RegularExampleKind::equiv:
      term = Term::apply("equiv", {x, y});
      vars.declare("x", kStringType);
      vars.declare("y", kStringType);
      break;
    case RegularExampleKind::not_equiv:
      term = Term::apply("not", {Term::apply("equiv", {x, y})});
      vars.declare("x", kStringType);
      vars.declare("y", kStringType);
      break;
  }
  Example ex{term, vars, {}};
  for (std::size_t i = 0; i < e.strings.size(); ++i)
    ex.objects.push_back(
        {"o" + std::to_string(i), Value(kStringType, e.strings[i])});
  return ex;
}

inline std::vector<Example> to_core_examples(const RegularExampleSet& s) {
  s.validate();
  std::vector<Example> out;
  out.reserve(s.examples.size());
  for (const RegularExample& e : s.examples)
    out.push_back(to_core_example(e));
  return out;
}

}  // namespace talgebra::dfa
