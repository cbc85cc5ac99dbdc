#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "talgebra/errors.hpp"
#include "talgebra/grounding.hpp"
#include "talgebra/rtg.hpp"
#include "talgebra/scene/algebra.hpp"
#include "talgebra/scene/ground.hpp"
#include "talgebra/scene/model.hpp"
#include "talgebra/term.hpp"

namespace talgebra::scene {

struct GenConfig {
  std::size_t num_scenes = 200;
  std::size_t min_objects = 3;
  std::size_t max_objects = 6;
  double noise_sigma = 0.05;
  std::size_t dimension = 16;
  int formula_depth = 3;
  std::size_t num_predicates = 4;
  std::uint64_t seed = 0;
};

struct SceneCorpus {
  std::vector<SceneExample> examples;
  // The attribute each predicate was generated to denote.
  std::vector<int> predicate_attributes;
};

namespace detail {

inline double unit_real(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  return std::min(n - 1, std::size_t(unit_real(rng) * double(n)));
}

// Box-Muller; the sine mate is discarded to keep the stream stateless.
inline double gaussian(std::mt19937_64& rng, double sigma) {
  double u1 = 1.0 - unit_real(rng);
  double u2 = unit_real(rng);
  return sigma * std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

inline Scene random_scene(std::mt19937_64& rng, const GenConfig& cfg) {
  Scene scene;
  std::size_t n =
      cfg.min_objects +
      uniform_index(rng, cfg.max_objects - cfg.min_objects + 1);
  for (std::size_t i = 0; i < n; ++i) {
    ObjectTruth truth{int(uniform_index(rng, kNumShapes)),
                      int(uniform_index(rng, kNumColors)),
                      int(uniform_index(rng, kNumSizes)),
                      int(uniform_index(rng, kNumMaterials))};
    std::vector<double> features = truth.one_hot();
    features.resize(cfg.dimension, 0.0);
    for (double& x : features) x += gaussian(rng, cfg.noise_sigma);
    scene.objects.push_back(
        {"o" + std::to_string(i + 1), std::move(features), truth});
  }
  return scene;
}

// Formula grammar. Roots are connectives, conjunction-heavy; bodies are
// conjunctions over literals of either polarity, so every predicate sees
// positive and negative contexts. A dedicated nonterminal D derives
// same-object contrastive pairs and[p_i[x], not[p_j[x]]]: their value under
// any pair of predicates that agree on the object is at most 1/2, which is
// what separates predicates that would otherwise collapse onto one
// attribute. Duplicated rules act as weights under uniform rule choice.
inline Rtg formula_grammar(std::size_t num_predicates, std::size_t num_vars) {
  std::vector<RtgRule> rules;
  Term body = Term::apply("and", {Term::var("B"), Term::var("B")});
  if (num_predicates > 1)
    for (int w = 0; w < 3; ++w)
      rules.push_back(
          {"S", Term::apply("and", {Term::var("D"), Term::var("B")})});
  for (int w = 0; w < 3; ++w) rules.push_back({"S", body});
  rules.push_back({"S", Term::apply("or", {Term::var("B"), Term::var("B")})});
  rules.push_back(
      {"S", Term::apply("implies", {Term::var("B"), Term::var("B")})});
  rules.push_back({"S", Term::apply("not", {Term::var("B")})});
  for (int w = 0; w < 12; ++w) rules.push_back({"B", body});
  for (std::size_t p = 0; p < num_predicates; ++p)
    for (std::size_t v = 0; v < num_vars; ++v) {
      Term lit = Term::apply(predicate_name(p),
                             {Term::var("x" + std::to_string(v + 1))});
      rules.push_back({"B", lit});
      rules.push_back({"B", Term::apply("not", {lit})});
      for (std::size_t q = 0; q < num_predicates; ++q)
        if (q != p)
          rules.push_back(
              {"D", Term::apply(
                        "and",
                        {lit, Term::apply(
                                  "not", {Term::apply(
                                             predicate_name(q),
                                             {Term::var("x" +
                                                        std::to_string(v + 1))})})})});
    }
  return Rtg({"S", "B", "D"}, "S", std::move(rules));
}

inline void collect_variables(const Term& t, std::set<std::string>& out) {
  if (t.is_variable()) {
    out.insert(t.head());
    return;
  }
  for (const Term& a : t.args()) collect_variables(a, out);
}

// Variables used by the formula, declared in index order x1 < x2 < ...
inline VariableContext used_variables(const Term& formula) {
  std::set<std::string> names;
  collect_variables(formula, names);
  std::vector<std::string> ordered(names.begin(), names.end());
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  VariableContext vars;
  for (const std::string& n : ordered) vars.declare(n, kObjectType);
  return vars;
}

// Crisp value of the formula under ground-truth attribute semantics,
// maximized over injective assignments.
inline double truth_best_value(const SceneExample& ex,
                               const std::vector<int>& predicate_attributes) {
  Example core = as_example(ex);
  std::vector<GroundingAssignment> gs =
      enumerate_groundings(ex.vars, core.objects);
  double best = -1.0;
  for (const GroundingAssignment& g : gs) {
    double v = eval_formula(
        ex.formula, predicate_attributes.size(),
        [&](std::size_t pred, const std::string& var) {
          for (const auto& [vn, id] : g)
            if (vn == var)
              return object_by_id(ex.scene, id)
                             .truth->has_attribute(predicate_attributes[pred])
                         ? 1.0
                         : 0.0;
          fail(ErrorCode::unbound_variable, "uncovered variable " + var);
        });
    best = std::max(best, v);
  }
  return best;
}

}  // namespace detail

// Synthetic corpus: every example is faithful, i.e. under the ground-truth
// attribute semantics some injective assignment gives value >= 0.9. Each
// example draws fresh scenes and formulas until one passes; 100 consecutive
// rejections for a single example count as a stalled configuration.
inline SceneCorpus generate_scene_corpus(const GenConfig& cfg) {
  if (cfg.min_objects == 0 || cfg.min_objects > cfg.max_objects)
    fail(ErrorCode::domain_error, "objects-per-scene range is empty");
  if (cfg.noise_sigma < 0 || !std::isfinite(cfg.noise_sigma))
    fail(ErrorCode::domain_error, "noise sigma must be nonnegative");
  if (cfg.dimension < std::size_t(kAttributeCount))
    fail(ErrorCode::domain_error,
         "dimension must hold the " + std::to_string(kAttributeCount) +
             " attribute indicators");
  if (cfg.num_predicates == 0 ||
      cfg.num_predicates > std::size_t(kAttributeCount))
    fail(ErrorCode::domain_error, "predicate count out of range");
  if (cfg.formula_depth < 1)
    fail(ErrorCode::domain_error, "formula depth must be positive");

  std::mt19937_64 rng(cfg.seed);

  // Distinct attribute per predicate: partial Fisher-Yates draw.
  std::vector<int> attrs(kAttributeCount);
  for (int a = 0; a < kAttributeCount; ++a) attrs[std::size_t(a)] = a;
  SceneCorpus corpus;
  for (std::size_t i = 0; i < cfg.num_predicates; ++i) {
    std::size_t j = i + detail::uniform_index(rng, attrs.size() - i);
    std::swap(attrs[i], attrs[j]);
    corpus.predicate_attributes.push_back(attrs[i]);
  }

  constexpr int kMaxAttempts = 100;
  for (std::size_t s = 0; s < cfg.num_scenes; ++s) {
    bool accepted = false;
    for (int attempt = 0; attempt < kMaxAttempts && !accepted; ++attempt) {
      Scene scene = detail::random_scene(rng, cfg);
      // Two variables minimum (when the scene allows) so cross-object
      // patterns like and[p1[x1], not[p1[x2]]] occur routinely.
      std::size_t most = std::min<std::size_t>(3, scene.objects.size());
      std::size_t least = std::min<std::size_t>(2, most);
      std::size_t num_vars =
          least + detail::uniform_index(rng, most - least + 1);
      Rtg grammar = detail::formula_grammar(cfg.num_predicates, num_vars);
      Term formula =
          rtg_generate_random(grammar, 1, rng(), cfg.formula_depth)[0];
      SceneExample ex{formula, detail::used_variables(formula),
                      std::move(scene)};
      if (ex.vars.size() > ex.scene.objects.size()) continue;
      if (detail::truth_best_value(ex, corpus.predicate_attributes) >= 0.9) {
        corpus.examples.push_back(std::move(ex));
        accepted = true;
      }
    }
    if (!accepted)
      fail(ErrorCode::generation_stalled,
           "rejected 100 consecutive candidates for example " +
               std::to_string(s));
  }
  return corpus;
}

}  // namespace talgebra::scene
