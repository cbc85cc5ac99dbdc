#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <vector>

#include "talgebra/errors.hpp"
#include "talgebra/grounding.hpp"
#include "talgebra/scene/fuzzy.hpp"
#include "talgebra/scene/model.hpp"
#include "talgebra/term.hpp"

namespace talgebra::scene {

namespace detail {

inline bool parse_predicate_index(const std::string& name, std::size_t& out) {
  if (name.size() < 2 || name[0] != 'p') return false;
  std::size_t v = 0;
  for (std::size_t i = 1; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
    v = v * 10 + std::size_t(name[i] - '0');
  }
  if (v == 0) return false;
  out = v - 1;
  return true;
}

// Bottom-up fuzzy evaluation with pluggable predicate leaves:
// leaf(pred_index, var_name) -> score in [0,1].
template <class Leaf>
double eval_formula(const Term& t, std::size_t num_predicates,
                    const Leaf& leaf) {
  if (t.is_variable())
    fail(ErrorCode::type_mismatch,
         "formula reduces to the object variable " + t.head());
  Connective c;
  if (connective_from_name(t.head(), c)) {
    if (t.args().size() != arity_of(c))
      fail(ErrorCode::arity_mismatch,
           "connective " + t.head() + " expects " +
               std::to_string(arity_of(c)) + " arguments");
    std::vector<double> xs;
    xs.reserve(t.args().size());
    for (const Term& a : t.args())
      xs.push_back(eval_formula(a, num_predicates, leaf));
    return fuzzy_apply(c, xs);
  }
  std::size_t pred;
  if (!parse_predicate_index(t.head(), pred))
    fail(ErrorCode::unknown_symbol, "unknown connective: " + t.head());
  if (pred >= num_predicates)
    fail(ErrorCode::unknown_symbol,
         "predicate " + t.head() + " is outside the family");
  if (t.args().size() != 1)
    fail(ErrorCode::arity_mismatch, "predicates are unary");
  if (!t.args()[0].is_variable())
    fail(ErrorCode::type_mismatch,
         "predicate argument must be an object variable");
  return leaf(pred, t.args()[0].head());
}

inline const SceneObject& object_by_id(const Scene& scene,
                                       const std::string& id) {
  for (const SceneObject& o : scene.objects)
    if (o.id == id) return o;
  fail(ErrorCode::domain_error, "grounding names unknown object " + id);
}

}  // namespace detail

// Value of the formula under one fixed grounding.
inline double formula_value(const std::vector<PredicateModel>& models,
                            const SceneExample& ex,
                            const GroundingAssignment& g) {
  check_models(models);
  return detail::eval_formula(
      ex.formula, models.size(),
      [&](std::size_t pred, const std::string& var) {
        for (const auto& [v, id] : g)
          if (v == var)
            return models[pred].score(detail::object_by_id(ex.scene, id).features);
        fail(ErrorCode::unbound_variable,
             "grounding does not cover variable " + var);
      });
}

struct GroundResult {
  double value = 0;
  GroundingAssignment assignment;
};

// Maximizing injective grounding; ties keep the earliest assignment in
// enumeration order (object ids ascending per variable).
inline GroundResult ground_best(const std::vector<PredicateModel>& models,
                                const SceneExample& ex,
                                std::size_t cap = kDefaultGroundingCap) {
  Example core = as_example(ex);
  std::vector<GroundingAssignment> gs =
      enumerate_groundings(ex.vars, core.objects, cap);
  if (gs.empty())
    fail(ErrorCode::no_grounding, "scene example admits no grounding");
  GroundResult best{-1.0, {}};
  for (GroundingAssignment& g : gs) {
    double v = formula_value(models, ex, g);
    if (v > best.value) best = GroundResult{v, std::move(g)};
  }
  return best;
}

inline double corpus_objective(const std::vector<PredicateModel>& models,
                               const std::vector<SceneExample>& corpus,
                               std::size_t cap = kDefaultGroundingCap) {
  if (corpus.empty())
    fail(ErrorCode::empty_corpus, "objective over empty corpus");
  double sum = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    try {
      sum += ground_best(models, corpus[i], cap).value;
    } catch (const Error& e) {
      throw Error(e.code(), "example " + std::to_string(i) + ": " + e.what());
    }
  }
  return sum / double(corpus.size());
}

inline double example_loss(const std::vector<PredicateModel>& models,
                           const SceneExample& ex,
                           std::size_t cap = kDefaultGroundingCap) {
  return 1.0 - ground_best(models, ex, cap).value;
}

}  // namespace talgebra::scene
