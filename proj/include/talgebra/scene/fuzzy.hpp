#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>

#include "talgebra/errors.hpp"

namespace talgebra::scene {

enum class Connective { and_, or_, implies, not_ };

inline constexpr std::size_t arity_of(Connective c) {
  return c == Connective::not_ ? 1 : 2;
}

inline std::string connective_name(Connective c) {
  switch (c) {
    case Connective::and_: return "and";
    case Connective::or_: return "or";
    case Connective::implies: return "implies";
    case Connective::not_: return "not";
  }
  fail(ErrorCode::domain_error, "bad connective");
}

inline bool connective_from_name(const std::string& name, Connective& out) {
  for (Connective c : {Connective::and_, Connective::or_, Connective::implies,
                       Connective::not_})
    if (connective_name(c) == name) {
      out = c;
      return true;
    }
  return false;
}

// Fuzzy semantics of the connectives. Inputs are clamped into [0,1]
// defensively; predicate scorers already comply.
inline double fuzzy_apply(Connective c, std::span<const double> args) {
  if (args.size() != arity_of(c))
    fail(ErrorCode::arity_mismatch,
         "connective " + connective_name(c) + " expects " +
             std::to_string(arity_of(c)) + " arguments");
  auto clamp01 = [](double x) { return std::clamp(x, 0.0, 1.0); };
  double a = clamp01(args[0]);
  switch (c) {
    case Connective::and_: return std::min(a, clamp01(args[1]));
    case Connective::or_: return std::max(a, clamp01(args[1]));
    case Connective::implies: return std::max(1.0 - a, clamp01(args[1]));
    case Connective::not_: return 1.0 - a;
  }
  fail(ErrorCode::domain_error, "bad connective");
}

}  // namespace talgebra::scene
