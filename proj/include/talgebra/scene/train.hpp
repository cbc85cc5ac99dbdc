#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "talgebra/errors.hpp"
#include "talgebra/grounding.hpp"
#include "talgebra/scene/fuzzy.hpp"
#include "talgebra/scene/ground.hpp"
#include "talgebra/scene/model.hpp"
#include "talgebra/term.hpp"

namespace talgebra::scene {

struct PredicateGrad {
  std::vector<double> weights;
  double bias = 0;
};

struct FrozenEval {
  double loss = 0;
  std::vector<PredicateGrad> grad;
};

namespace detail {

using FeatureEnv = std::map<std::string, const std::vector<double>*>;

template <class Fwd>
void backward(const Term& t, double g,
              const std::vector<PredicateModel>& models, const FeatureEnv& env,
              const Fwd& fwd, std::vector<PredicateGrad>& grads) {
  Connective c;
  if (connective_from_name(t.head(), c)) {
    const std::vector<Term>& a = t.args();
    switch (c) {
      case Connective::not_:
        backward(a[0], -g, models, env, fwd, grads);
        return;
      case Connective::and_:
        backward(fwd(a[0]) <= fwd(a[1]) ? a[0] : a[1], g, models, env, fwd,
                 grads);
        return;
      case Connective::or_:
        backward(fwd(a[0]) >= fwd(a[1]) ? a[0] : a[1], g, models, env, fwd,
                 grads);
        return;
      case Connective::implies:
        if (1.0 - fwd(a[0]) >= fwd(a[1]))
          backward(a[0], -g, models, env, fwd, grads);
        else
          backward(a[1], g, models, env, fwd, grads);
        return;
    }
  }
  std::size_t pred = 0;
  parse_predicate_index(t.head(), pred);
  const std::vector<double>& o = *env.at(t.args()[0].head());
  double s = models[pred].score(o);
  double d = g * s * (1.0 - s);
  grads[pred].bias += d;
  for (std::size_t i = 0; i < o.size(); ++i)
    grads[pred].weights[i] += d * o[i];
}

inline FeatureEnv feature_env(const SceneExample& ex,
                              const GroundingAssignment& g) {
  FeatureEnv env;
  for (const auto& [var, id] : g)
    env.emplace(var, &object_by_id(ex.scene, id).features);
  return env;
}

}  // namespace detail

// Loss 1 - value under a fixed grounding, with its analytic gradient:
// min/max route the gradient through the selected branch (ties toward the
// first argument), logistic scorers differentiate exactly.
inline FrozenEval frozen_loss_grad(const std::vector<PredicateModel>& models,
                                   const SceneExample& ex,
                                   const GroundingAssignment& g) {
  check_models(models);
  detail::FeatureEnv env = detail::feature_env(ex, g);
  auto leaf = [&](std::size_t pred, const std::string& var) {
    auto it = env.find(var);
    if (it == env.end())
      fail(ErrorCode::unbound_variable,
           "grounding does not cover variable " + var);
    return models[pred].score(*it->second);
  };
  auto fwd = [&](const Term& t) {
    return detail::eval_formula(t, models.size(), leaf);
  };

  FrozenEval out;
  out.grad.resize(models.size());
  for (std::size_t i = 0; i < models.size(); ++i)
    out.grad[i].weights.assign(models[i].weights.size(), 0.0);
  out.loss = 1.0 - fwd(ex.formula);
  // d loss = -d value.
  detail::backward(ex.formula, -1.0, models, env, fwd, out.grad);
  return out;
}

struct TrainConfig {
  double learning_rate = 0.5;
  std::size_t epochs = 100;
  // Kept so corpus-level configs round-trip; the alternation itself draws no
  // random numbers and is deterministic for any seed.
  std::uint64_t seed = 0;
  std::size_t grounding_cap = kDefaultGroundingCap;
  std::size_t regrounding_period = 1;
};

struct TrainResult {
  std::vector<PredicateModel> models;
  std::vector<double> trace;
};

// Alternating scheme: refresh the best grounding per example every
// regrounding_period epochs, then take one full-batch gradient step on the
// mean frozen-grounding loss. The trace holds corpus_objective before
// training and after every epoch.
inline TrainResult train(std::vector<PredicateModel> models,
                         const std::vector<SceneExample>& corpus,
                         const TrainConfig& cfg = {}) {
  check_models(models);
  if (corpus.empty()) fail(ErrorCode::empty_corpus, "training corpus is empty");
  if (!(cfg.learning_rate > 0) || !std::isfinite(cfg.learning_rate))
    fail(ErrorCode::domain_error, "learning rate must be positive");
  if (cfg.regrounding_period == 0 || cfg.grounding_cap == 0)
    fail(ErrorCode::domain_error, "regrounding period and cap must be positive");

  std::vector<double> trace{corpus_objective(models, corpus, cfg.grounding_cap)};
  std::vector<GroundingAssignment> frozen(corpus.size());
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (epoch % cfg.regrounding_period == 0)
      for (std::size_t i = 0; i < corpus.size(); ++i)
        frozen[i] = ground_best(models, corpus[i], cfg.grounding_cap).assignment;

    // Sum per-example gradients, then average: order-independent.
    std::vector<PredicateGrad> acc(models.size());
    for (std::size_t i = 0; i < models.size(); ++i)
      acc[i].weights.assign(models[i].weights.size(), 0.0);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      FrozenEval fe = frozen_loss_grad(models, corpus[i], frozen[i]);
      if (!std::isfinite(fe.loss))
        fail(ErrorCode::non_finite_loss, "frozen-grounding loss diverged");
      for (std::size_t p = 0; p < models.size(); ++p) {
        acc[p].bias += fe.grad[p].bias;
        for (std::size_t k = 0; k < acc[p].weights.size(); ++k)
          acc[p].weights[k] += fe.grad[p].weights[k];
      }
    }
    double scale = cfg.learning_rate / double(corpus.size());
    for (std::size_t p = 0; p < models.size(); ++p) {
      models[p].bias -= scale * acc[p].bias;
      for (std::size_t k = 0; k < models[p].weights.size(); ++k)
        models[p].weights[k] -= scale * acc[p].weights[k];
    }
    check_models(models);
    trace.push_back(corpus_objective(models, corpus, cfg.grounding_cap));
  }
  return {std::move(models), std::move(trace)};
}

}  // namespace talgebra::scene
