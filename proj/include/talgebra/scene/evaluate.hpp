#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "talgebra/errors.hpp"
#include "talgebra/scene/model.hpp"

namespace talgebra::scene {

inline std::vector<Scene> scenes_of(const std::vector<SceneExample>& corpus) {
  std::vector<Scene> out;
  out.reserve(corpus.size());
  for (const SceneExample& ex : corpus) out.push_back(ex.scene);
  return out;
}

// Accuracy of each predicate's thresholded score (>= 0.5) against the
// attributes the predicates were generated to denote. Predicates are
// unlabeled during training, so attributes are assigned by the bijection
// that maximizes total accuracy; each predicate reports its accuracy under
// that matching.
inline std::vector<double> evaluate_predicates(
    const std::vector<PredicateModel>& models,
    const std::vector<Scene>& scenes,
    const std::vector<int>& predicate_attributes) {
  check_models(models);
  std::size_t k = models.size();
  if (predicate_attributes.size() != k)
    fail(ErrorCode::domain_error,
         "need one denoted attribute per predicate");
  for (int a : predicate_attributes)
    if (a < 0 || a >= kAttributeCount)
      fail(ErrorCode::domain_error, "attribute index out of range");
  std::size_t total = 0;
  for (const Scene& s : scenes) total += s.objects.size();
  if (total == 0) fail(ErrorCode::empty_corpus, "no objects to evaluate on");

  std::vector<std::vector<double>> acc(k, std::vector<double>(k, 0.0));
  for (const Scene& s : scenes)
    for (const SceneObject& o : s.objects) {
      if (!o.truth)
        fail(ErrorCode::missing_truth,
             "object " + o.id + " carries no truth labels");
      for (std::size_t i = 0; i < k; ++i) {
        bool predicted = models[i].score(o.features) >= 0.5;
        for (std::size_t j = 0; j < k; ++j)
          if (predicted == o.truth->has_attribute(predicate_attributes[j]))
            acc[i][j] += 1.0;
      }
    }
  for (auto& row : acc)
    for (double& x : row) x /= double(total);

  std::vector<std::size_t> perm(k), best_perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  best_perm = perm;
  double best_sum = -1.0;
  do {
    double sum = 0;
    for (std::size_t i = 0; i < k; ++i) sum += acc[i][perm[i]];
    if (sum > best_sum) {
      best_sum = sum;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<double> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = acc[i][best_perm[i]];
  return out;
}

}  // namespace talgebra::scene
