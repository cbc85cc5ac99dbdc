#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "talgebra/algebra.hpp"
#include "talgebra/errors.hpp"
#include "talgebra/scene/fuzzy.hpp"
#include "talgebra/scene/model.hpp"
#include "talgebra/types.hpp"
#include "talgebra/value.hpp"

namespace talgebra::scene {

inline TypedSymbol connective_symbol(Connective c) {
  std::vector<TypeName> args(arity_of(c), kTruthType);
  return {connective_name(c), std::move(args), kTruthType};
}

inline std::string predicate_name(std::size_t index) {
  return "p" + std::to_string(index + 1);
}

inline TypedSymbol predicate_symbol(std::size_t index) {
  return {predicate_name(index), {kObjectType}, kTruthType};
}

namespace detail {

inline Operation connective_operation(Connective c) {
  return [c](const std::vector<Value>& args) {
    std::vector<double> xs;
    xs.reserve(args.size());
    for (const Value& a : args) xs.push_back(a.as_real());
    return Value(kTruthType, fuzzy_apply(c, xs));
  };
}

inline Operation predicate_operation(PredicateModel model) {
  return [model = std::move(model)](const std::vector<Value>& args) {
    return Value(kTruthType, model.score(args[0].as_vector()));
  };
}

inline AlgebraSpec scene_spec(std::size_t num_predicates) {
  AlgebraSpec spec;
  for (Connective c : {Connective::and_, Connective::or_, Connective::implies,
                       Connective::not_}) {
    spec.alphabet.add(connective_symbol(c));
    spec.interpretations[connective_symbol(c)] = connective_operation(c);
  }
  for (std::size_t i = 0; i < num_predicates; ++i)
    spec.alphabet.add(predicate_symbol(i));
  spec.domains[kObjectType] = [](const Value& v) {
    const auto* o = std::get_if<std::vector<double>>(&v.payload());
    if (!o) return false;
    for (double x : *o)
      if (!std::isfinite(x)) return false;
    return true;
  };
  spec.domains[kTruthType] = [](const Value& v) {
    const double* d = std::get_if<double>(&v.payload());
    return d && *d >= 0.0 && *d <= 1.0;
  };
  spec.eval_type = kTruthType;
  spec.eval_less = [](const Value& a, const Value& b) {
    return a.as_real() < b.as_real();
  };
  spec.combine = [](const std::vector<Value>& vs) {
    double sum = 0;
    for (const Value& v : vs) sum += v.as_real();
    return Value(kTruthType, sum / double(vs.size()));
  };
  spec.opt = OptMode::max;
  return spec;
}

}  // namespace detail

// Template with every predicate left open: a parameter vector of length
// dimension+1 (weights then bias) picks a logistic scorer.
inline TemplateAlgebra scene_template(std::size_t num_predicates,
                                      std::size_t dimension) {
  AlgebraSpec spec = detail::scene_spec(num_predicates);
  for (std::size_t i = 0; i < num_predicates; ++i)
    spec.candidate_families[predicate_symbol(i)] = {
        dimension + 1, [](std::span<const double> params) {
          PredicateModel m;
          m.weights.assign(params.begin(), params.end() - 1);
          m.bias = params.back();
          return detail::predicate_operation(std::move(m));
        }};
  return TemplateAlgebra(std::move(spec));
}

inline TemplateAlgebra scene_algebra(const std::vector<PredicateModel>& models) {
  check_models(models);
  AlgebraSpec spec = detail::scene_spec(models.size());
  for (std::size_t i = 0; i < models.size(); ++i)
    spec.interpretations[predicate_symbol(i)] =
        detail::predicate_operation(models[i]);
  return TemplateAlgebra(std::move(spec));
}

}  // namespace talgebra::scene
