#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "talgebra/algebra.hpp"
#include "talgebra/collage/algebra.hpp"
#include "talgebra/collage/raster.hpp"
#include "talgebra/errors.hpp"
#include "talgebra/grounding.hpp"

namespace talgebra::collage {

// The symbol a parameter vector instantiates. Exactly one symbol of the
// algebra may be uninterpreted.
inline TypedSymbol sole_uninterpreted(const TemplateAlgebra& alg) {
  const TypedSymbol* found = nullptr;
  for (const TypedSymbol& sym : alg.alphabet().symbols()) {
    if (alg.is_interpreted(sym)) continue;
    if (found)
      fail(ErrorCode::domain_error,
           "algebra has more than one uninterpreted symbol");
    found = &sym;
  }
  if (!found)
    fail(ErrorCode::domain_error, "algebra has no uninterpreted symbol");
  return *found;
}

inline double corpus_loss(const TemplateAlgebra& alg,
                          std::span<const double> params,
                          const std::vector<Example>& corpus,
                          PictureDistance distance = PictureDistance::symdiff,
                          int resolution = 128,
                          geom::Viewport viewport = geom::unit_viewport()) {
  if (corpus.empty())
    fail(ErrorCode::empty_corpus, "corpus loss needs at least one example");
  TypedSymbol unknown = sole_uninterpreted(alg);
  const CandidateFamily& family = alg.family(unknown);
  if (params.size() != family.param_count)
    fail(ErrorCode::domain_error,
         "parameter vector length " + std::to_string(params.size()) +
             " does not match family arity " +
             std::to_string(family.param_count));
  TemplateAlgebra inst =
      alg.with_interpretation(unknown, family.instantiate(params))
          .with_interpretation(
              delta_symbol(),
              detail::distance_operation(distance, viewport, resolution));
  return total_value(inst, corpus).as_real();
}

struct FitConfig {
  double step = 0.5;
  int max_iters = 500;
  double fd_epsilon = 0.02;
  double tolerance = 1e-3;
  int resolution = 128;
  unsigned seed = 0;  // accepted for interface stability; descent is
                      // deterministic and does not consume randomness
  PictureDistance distance = PictureDistance::symdiff;
  geom::Viewport viewport = geom::unit_viewport();
};

struct FitResult {
  std::vector<double> params;
  // Loss at the initial point, then after each accepted step.
  std::vector<double> trace;
};

namespace detail {

struct CompiledExample {
  Term picture_term;
  RasterMask target;
};

// Validates the delta[x, t] shape produced by make_collage_example and
// caches the rasterized targets. Loss values agree exactly with
// corpus_loss: same rasterize-then-measure pipeline, and both picture
// distances are symmetric in their arguments.
inline std::vector<CompiledExample> compile_corpus(
    const std::vector<Example>& corpus, const FitConfig& cfg) {
  if (corpus.empty())
    fail(ErrorCode::empty_corpus, "fit needs at least one example");
  std::vector<CompiledExample> out;
  out.reserve(corpus.size());
  for (std::size_t n = 0; n < corpus.size(); ++n) {
    const Example& ex = corpus[n];
    bool shaped = ex.term.head() == delta_symbol().name &&
                  ex.term.args().size() == 2 &&
                  ex.term.args()[0].is_variable() && ex.objects.size() == 1;
    if (!shaped)
      fail(ErrorCode::domain_error,
           "fit corpus example " + std::to_string(n + 1) +
               " is not a distance comparison against one picture");
    out.push_back(
        {ex.term.args()[1],
         rasterize(ex.objects[0].value.as_picture(), cfg.viewport,
                   cfg.resolution, cfg.resolution)});
  }
  return out;
}

}  // namespace detail

// Fits the parameters of the single uninterpreted operator by monotone
// descent on the corpus loss: central finite-difference slopes and a
// step-halving line search (at most 20 halvings, accept only strict
// decrease). Each round line-searches along the full-gradient direction and
// then along each transform's six-parameter slice of it; the slice passes
// unjam directions that a single global step size cannot trade off between
// transforms. When a round accepts nothing, the difference stencil is
// halved down to a quarter pixel before giving up: the loss is piecewise
// constant at pixel granularity, so a stencil below that floor only reads
// plateau noise.
inline FitResult fit_transforms(const TemplateAlgebra& alg,
                                const std::vector<Example>& corpus,
                                std::span<const double> init,
                                const FitConfig& cfg = {}) {
  TypedSymbol unknown = sole_uninterpreted(alg);
  const CandidateFamily& family = alg.family(unknown);
  if (init.size() != family.param_count)
    fail(ErrorCode::domain_error,
         "initial parameter vector length " + std::to_string(init.size()) +
             " does not match family arity " +
             std::to_string(family.param_count));
  std::vector<detail::CompiledExample> compiled =
      detail::compile_corpus(corpus, cfg);

  std::vector<double> p(init.begin(), init.end());
  auto loss = [&](const std::vector<double>& params) {
    for (double x : params)
      if (!std::isfinite(x))
        fail(ErrorCode::non_finite_loss, "parameters diverged");
    TemplateAlgebra inst =
        alg.with_interpretation(unknown, family.instantiate(params));
    double sum = 0;
    for (const detail::CompiledExample& ex : compiled) {
      geom::Picture pic = eval_picture_term(inst, ex.picture_term);
      RasterMask mask =
          rasterize(pic, cfg.viewport, cfg.resolution, cfg.resolution);
      sum += cfg.distance == PictureDistance::symdiff
                 ? mask_sym_diff_area(ex.target, mask)
                 : mask_hausdorff(ex.target, mask);
    }
    double mean = sum / double(compiled.size());
    if (!std::isfinite(mean))
      fail(ErrorCode::non_finite_loss, "corpus loss is not finite");
    return mean;
  };

  FitResult r;
  double cur = loss(p);
  r.trace.push_back(cur);

  const std::size_t n = p.size();
  double eps = cfg.fd_epsilon;
  const double floor_eps =
      0.25 * std::min(cfg.viewport.width(), cfg.viewport.height()) /
      double(cfg.resolution);

  // Central FD slopes over [lo, hi), then a step-halving line search along
  // the negated slope vector. Returns whether a strictly lower point was
  // accepted.
  auto descend_along = [&](std::size_t lo, std::size_t hi) {
    std::vector<double> g(n, 0.0);
    bool nonzero = false;
    for (std::size_t i = lo; i < hi; ++i) {
      double save = p[i];
      p[i] = save + eps;
      double up = loss(p);
      p[i] = save - eps;
      double down = loss(p);
      p[i] = save;
      g[i] = (up - down) / (2 * eps);
      nonzero = nonzero || g[i] != 0;
    }
    if (!nonzero) return false;
    double step = cfg.step;
    for (int h = 0; h <= 20; ++h, step /= 2) {
      std::vector<double> cand = p;
      for (std::size_t i = lo; i < hi; ++i) cand[i] -= step * g[i];
      double cl = loss(cand);
      if (cl < cur) {
        p = std::move(cand);
        cur = cl;
        r.trace.push_back(cur);
        return true;
      }
    }
    return false;
  };

  const bool sliced = n > 6 && n % 6 == 0;
  int iter = 0;
  while (iter < cfg.max_iters && !(cur < cfg.tolerance)) {
    ++iter;
    bool any = descend_along(0, n);
    if (sliced)
      for (std::size_t b = 0; b < n / 6 && !(cur < cfg.tolerance); ++b)
        any = descend_along(6 * b, 6 * b + 6) || any;
    if (any) {
      eps = cfg.fd_epsilon;
      continue;
    }
    if (eps <= floor_eps) break;
    eps = std::max(eps / 2, floor_eps);
  }

  r.params = std::move(p);
  return r;
}

}  // namespace talgebra::collage
