#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "talgebra/errors.hpp"
#include "talgebra/grounding.hpp"
#include "talgebra/term.hpp"
#include "talgebra/types.hpp"

namespace talgebra::scene {

inline const TypeName kObjectType{"object"};
inline const TypeName kTruthType{"truth"};

// Attribute vocabulary: one-hot blocks in layout order shape, color, size,
// material. An attribute is an index into the concatenated 15-bit layout.
inline constexpr int kNumShapes = 3;
inline constexpr int kNumColors = 8;
inline constexpr int kNumSizes = 2;
inline constexpr int kNumMaterials = 2;
inline constexpr int kShapeOffset = 0;
inline constexpr int kColorOffset = kNumShapes;
inline constexpr int kSizeOffset = kColorOffset + kNumColors;
inline constexpr int kMaterialOffset = kSizeOffset + kNumSizes;
inline constexpr int kAttributeCount = kMaterialOffset + kNumMaterials;

inline std::string attribute_name(int attr) {
  static const char* const names[kAttributeCount] = {
      "cube",  "sphere", "cylinder", "gray",  "red",
      "blue",  "green",  "brown",    "purple", "cyan",
      "yellow", "small", "large",    "rubber", "metal"};
  if (attr < 0 || attr >= kAttributeCount)
    fail(ErrorCode::domain_error,
         "attribute index out of range: " + std::to_string(attr));
  return names[attr];
}

// Ground-truth attribute labels of one object; indices into the per-block
// vocabularies above.
struct ObjectTruth {
  int shape = 0;
  int color = 0;
  int size = 0;
  int material = 0;

  bool operator==(const ObjectTruth&) const = default;

  bool has_attribute(int attr) const {
    if (attr < kColorOffset) return shape == attr - kShapeOffset;
    if (attr < kSizeOffset) return color == attr - kColorOffset;
    if (attr < kMaterialOffset) return size == attr - kSizeOffset;
    if (attr < kAttributeCount) return material == attr - kMaterialOffset;
    fail(ErrorCode::domain_error,
         "attribute index out of range: " + std::to_string(attr));
  }

  std::vector<double> one_hot() const {
    std::vector<double> v(kAttributeCount, 0.0);
    for (int a = 0; a < kAttributeCount; ++a)
      if (has_attribute(a)) v[std::size_t(a)] = 1.0;
    return v;
  }
};

struct SceneObject {
  std::string id;
  std::vector<double> features;
  std::optional<ObjectTruth> truth;
};

// A segmented scene: objects carry their embedding vectors; truth labels are
// present only on generated data and never feed evaluation of formulas.
struct Scene {
  std::vector<SceneObject> objects;
};

// One training example (formula, scene). vars lists the formula's free
// variables, all object-typed; their order fixes grounding enumeration.
struct SceneExample {
  Term formula;
  VariableContext vars;
  Scene scene;
};

// Logistic scorer standing in for the neural predicate theta_p.
struct PredicateModel {
  std::vector<double> weights;
  double bias = 0;

  double score(const std::vector<double>& o) const {
    if (o.size() != weights.size())
      fail(ErrorCode::domain_error,
           "object dimension does not match predicate model");
    double z = bias;
    for (std::size_t i = 0; i < o.size(); ++i) z += weights[i] * o[i];
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
  }
};

inline void check_models(const std::vector<PredicateModel>& models) {
  if (models.empty())
    fail(ErrorCode::domain_error, "predicate family is empty");
  for (const PredicateModel& m : models) {
    if (m.weights.size() != models.front().weights.size())
      fail(ErrorCode::domain_error, "predicate models disagree on dimension");
    if (!std::isfinite(m.bias)) fail(ErrorCode::non_finite_loss,
                                     "predicate model has non-finite bias");
    for (double w : m.weights)
      if (!std::isfinite(w))
        fail(ErrorCode::non_finite_loss,
             "predicate model has non-finite weight");
  }
}

// Core-framework view of a scene example: objects become typed values so the
// generic grounding machinery applies unchanged.
inline Example as_example(const SceneExample& ex) {
  Example out{ex.formula, ex.vars, {}};
  out.objects.reserve(ex.scene.objects.size());
  for (const SceneObject& o : ex.scene.objects)
    out.objects.push_back({o.id, Value(kObjectType, o.features)});
  return out;
}

}  // namespace talgebra::scene
