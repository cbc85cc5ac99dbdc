#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "talgebra/algebra.hpp"
#include "talgebra/errors.hpp"
#include "talgebra/term.hpp"
#include "talgebra/types.hpp"
#include "talgebra/value.hpp"

namespace talgebra {

struct ObjectRef {
  std::string id;
  Value value;
};

// One example: a term with free variables plus the objects the variables
// range over. Object ids are unique within an example.
struct Example {
  Term term;
  VariableContext vars;
  std::vector<ObjectRef> objects;
};

// var name -> object id, in variable declaration order.
using GroundingAssignment = std::vector<std::pair<std::string, std::string>>;

inline constexpr std::size_t kDefaultGroundingCap = 1000000;

// All injective, type-respecting assignments of objects to variables.
// Deterministic: object ids sorted ascending per variable, assignments in
// lexicographic order over the variable declaration order.
inline std::vector<GroundingAssignment> enumerate_groundings(
    const VariableContext& vars, const std::vector<ObjectRef>& objects,
    std::size_t cap = kDefaultGroundingCap) {
  {
    std::vector<std::string> ids;
    ids.reserve(objects.size());
    for (const ObjectRef& o : objects) ids.push_back(o.id);
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
      fail(ErrorCode::domain_error, "duplicate object id in example");
  }

  // Candidate object indices per variable, ordered by object id.
  std::vector<std::size_t> by_id(objects.size());
  for (std::size_t i = 0; i < by_id.size(); ++i) by_id[i] = i;
  std::sort(by_id.begin(), by_id.end(), [&](std::size_t a, std::size_t b) {
    return objects[a].id < objects[b].id;
  });
  std::vector<std::vector<std::size_t>> candidates;
  for (const auto& [name, type] : vars.entries()) {
    std::vector<std::size_t> c;
    for (std::size_t i : by_id)
      if (objects[i].value.type() == type) c.push_back(i);
    candidates.push_back(std::move(c));
  }

  std::vector<GroundingAssignment> out;
  std::vector<std::size_t> chosen;
  std::vector<bool> used(objects.size(), false);

  auto emit = [&]() {
    if (out.size() >= cap)
      fail(ErrorCode::cap_exceeded, "grounding enumeration exceeds cap");
    GroundingAssignment g;
    for (std::size_t v = 0; v < chosen.size(); ++v)
      g.emplace_back(vars.entries()[v].first, objects[chosen[v]].id);
    out.push_back(std::move(g));
  };

  auto rec = [&](auto&& self, std::size_t v) -> void {
    if (v == vars.size()) {
      emit();
      return;
    }
    for (std::size_t i : candidates[v]) {
      if (used[i]) continue;
      used[i] = true;
      chosen.push_back(i);
      self(self, v + 1);
      chosen.pop_back();
      used[i] = false;
    }
  };
  rec(rec, 0);
  return out;
}

inline std::map<std::string, Value> grounding_env(
    const Example& ex, const GroundingAssignment& g) {
  std::map<std::string, Value> env;
  for (const auto& [var, id] : g) {
    for (const ObjectRef& o : ex.objects)
      if (o.id == id) {
        env.emplace(var, o.value);
        break;
      }
  }
  return env;
}

// Value of one example: opt over all groundings of the term's value. Ties
// keep the earliest grounding in enumeration order.
inline Value example_value(const TemplateAlgebra& alg, const Example& ex,
                           std::size_t cap = kDefaultGroundingCap) {
  auto gs = enumerate_groundings(ex.vars, ex.objects, cap);
  if (gs.empty())
    fail(ErrorCode::no_grounding, "example admits no grounding");
  bool have = false;
  Value best = Value(alg.eval_type(), false);
  for (const GroundingAssignment& g : gs) {
    Value v = alg.eval_open(ex.term, ex.vars, grounding_env(ex, g));
    if (!have) {
      best = std::move(v);
      have = true;
    } else if (alg.opt() == OptMode::min ? alg.value_less(v, best)
                                         : alg.value_less(best, v)) {
      best = std::move(v);
    }
  }
  return best;
}

// Aggregated value of a corpus under ⊕. Errors from individual examples are
// rethrown tagged with the failing example's index.
inline Value total_value(const TemplateAlgebra& alg,
                         const std::vector<Example>& corpus,
                         std::size_t cap = kDefaultGroundingCap) {
  if (corpus.empty())
    fail(ErrorCode::empty_corpus, "total_value over empty corpus");
  std::vector<Value> vals;
  vals.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    try {
      vals.push_back(example_value(alg, corpus[i], cap));
    } catch (const Error& e) {
      throw Error(e.code(),
                  "example " + std::to_string(i) + ": " + e.what());
    }
  }
  return alg.combine(vals);
}

}  // namespace talgebra
