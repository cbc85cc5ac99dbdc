#pragma once

#include <utility>
#include <vector>

#include "talgebra/collage/algebra.hpp"
#include "talgebra/rtg.hpp"
#include "talgebra/term.hpp"

namespace talgebra::collage {

struct ChairGrammar {
  Rtg grammar;
  TemplateAlgebra algebra;  // fully interpreted ground truth
};

// Recursive tiling grammar: the start panel splits into a 2x2 grid whose
// cells refine further or bottom out in base triangles; the pair operator
// G reintroduces a whole panel beside a base shape. All interpretations are
// contractive into the unit square, so every derivation renders inside it.
inline ChairGrammar chair_grammar(const CollageConfig& cfg = {}) {
  Term a = Term::var("A");
  Term b = Term::var("B");
  Term s = Term::var("S");
  Term c = Term::apply("C");
  std::vector<RtgRule> rules;
  rules.push_back({"S", Term::apply("F", {a, a, a, a})});
  rules.push_back({"A", Term::apply("F", {a, a, a, a})});
  rules.push_back({"A", Term::apply("F", {b, b, b, b})});
  rules.push_back({"B", Term::apply("G", {c, s})});
  rules.push_back({"B", c});
  return {Rtg({"S", "A", "B"}, "S", std::move(rules)),
          collage_ground_truth(cfg)};
}

}  // namespace talgebra::collage
