#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"
#include "talgebra/grounding.hpp"
#include "talgebra/scene/algebra.hpp"
#include "talgebra/scene/evaluate.hpp"
#include "talgebra/scene/fuzzy.hpp"
#include "talgebra/scene/generate.hpp"
#include "talgebra/scene/ground.hpp"
#include "talgebra/scene/model.hpp"
#include "talgebra/scene/train.hpp"

using namespace talgebra;
using namespace talgebra::scene;

namespace {

template <class F>
ErrorCode thrown_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::io_error;  // not reached
}

double plain_sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Independent recursive fuzzy evaluator. Own connective arithmetic over a
// pluggable leaf scorer; shares no code with the shipped evaluation.
template <class Leaf>
double oracle_eval(const Term& t, const Leaf& leaf) {
  const std::string& h = t.head();
  if (h == "not") return 1.0 - oracle_eval(t.args()[0], leaf);
  if (h == "and" || h == "or" || h == "implies") {
    double a = oracle_eval(t.args()[0], leaf);
    double b = oracle_eval(t.args()[1], leaf);
    if (h == "and") return a < b ? a : b;
    if (h == "or") return a > b ? a : b;
    double na = 1.0 - a;
    return na > b ? na : b;
  }
  std::size_t idx = std::stoul(h.substr(1)) - 1;
  return leaf(idx, t.args()[0].head());
}

const std::vector<double>& features_of(const Scene& s, const std::string& id) {
  for (const SceneObject& o : s.objects)
    if (o.id == id) return o.features;
  FAIL("unknown object id " + id);
  return s.objects.front().features;  // not reached
}

const std::string& assigned(const GroundingAssignment& g,
                            const std::string& var) {
  for (const auto& kv : g)
    if (kv.first == var) return kv.second;
  FAIL("unassigned variable " + var);
  return g.front().second;  // not reached
}

// Independent injective enumeration: object ids ascending per variable,
// assignments lexicographic over declaration order. All variables here are
// object-typed, so no type filtering is needed.
std::vector<GroundingAssignment> oracle_assignments(const VariableContext& vars,
                                                    const Scene& scene) {
  std::vector<std::string> ids;
  for (const SceneObject& o : scene.objects) ids.push_back(o.id);
  std::sort(ids.begin(), ids.end());
  std::vector<GroundingAssignment> out;
  GroundingAssignment cur;
  std::vector<bool> used(ids.size(), false);
  auto rec = [&](auto&& self, std::size_t v) -> void {
    if (v == vars.size()) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      cur.emplace_back(vars.entries()[v].first, ids[i]);
      self(self, v + 1);
      cur.pop_back();
      used[i] = false;
    }
  };
  rec(rec, 0);
  return out;
}

struct OracleBest {
  double value = -1.0;
  GroundingAssignment assignment;
};

// Exhaustive maximization; strict > keeps the earliest tie, matching the
// contract for ground_best. Leaf scores go through the public scorer, the
// search and the connective arithmetic are this file's own.
OracleBest oracle_best(const std::vector<PredicateModel>& models,
                       const SceneExample& ex) {
  OracleBest best;
  for (const GroundingAssignment& g : oracle_assignments(ex.vars, ex.scene)) {
    double v = oracle_eval(ex.formula, [&](std::size_t p,
                                           const std::string& var) {
      return models[p].score(features_of(ex.scene, assigned(g, var)));
    });
    if (v > best.value) best = {v, g};
  }
  return best;
}

// Crisp faithfulness oracle: truth bits instead of scores, maximized over
// this file's own enumeration.
double oracle_crisp_best(const SceneExample& ex,
                         const std::vector<int>& attrs) {
  double best = -1.0;
  for (const GroundingAssignment& g : oracle_assignments(ex.vars, ex.scene)) {
    auto leaf = [&](std::size_t p, const std::string& var) {
      for (const SceneObject& o : ex.scene.objects)
        if (o.id == assigned(g, var))
          return o.truth->has_attribute(attrs[p]) ? 1.0 : 0.0;
      return -1.0;  // not reached
    };
    best = std::max(best, oracle_eval(ex.formula, leaf));
  }
  return best;
}

VariableContext object_vars(std::size_t n) {
  VariableContext vars;
  for (std::size_t v = 0; v < n; ++v)
    vars.declare("x" + std::to_string(v + 1), kObjectType);
  return vars;
}

// Random labeled scene with bounded uniform feature noise. Bounded noise
// keeps every |z| moderate, so logistic scores stay far from saturation.
Scene random_labeled_scene(std::mt19937_64& rng, std::size_t n,
                           double noise) {
  Scene s;
  for (std::size_t i = 0; i < n; ++i) {
    ObjectTruth truth{int(rng() % kNumShapes), int(rng() % kNumColors),
                      int(rng() % kNumSizes), int(rng() % kNumMaterials)};
    std::vector<double> f = truth.one_hot();
    f.resize(16, 0.0);
    for (double& x : f) x += (2.0 * testsupport::unit_real(rng) - 1.0) * noise;
    s.objects.push_back({"o" + std::to_string(i + 1), std::move(f), truth});
  }
  return s;
}

std::vector<PredicateModel> random_models(std::mt19937_64& rng, std::size_t k,
                                          std::size_t dim, double spread) {
  std::vector<PredicateModel> ms(k, PredicateModel{std::vector<double>(dim, 0.0), 0.0});
  for (PredicateModel& m : ms) {
    for (double& w : m.weights)
      w = (2.0 * testsupport::unit_real(rng) - 1.0) * spread;
    m.bias = (2.0 * testsupport::unit_real(rng) - 1.0) * spread;
  }
  return ms;
}

// Random formula over p1..pk and x1..xnv, independent of the corpus
// generator's grammar so other shapes get exercised too.
Term random_formula(std::mt19937_64& rng, std::size_t k, std::size_t nv,
                    int depth) {
  auto lit = [&] {
    Term p = Term::apply("p" + std::to_string(1 + rng() % k),
                         {Term::var("x" + std::to_string(1 + rng() % nv))});
    return rng() % 2 ? p : Term::apply("not", {p});
  };
  if (depth <= 0) return lit();
  switch (rng() % 5) {
    case 0:
      return Term::apply("and", {random_formula(rng, k, nv, depth - 1),
                                 random_formula(rng, k, nv, depth - 1)});
    case 1:
      return Term::apply("or", {random_formula(rng, k, nv, depth - 1),
                                random_formula(rng, k, nv, depth - 1)});
    case 2:
      return Term::apply("implies", {random_formula(rng, k, nv, depth - 1),
                                     random_formula(rng, k, nv, depth - 1)});
    case 3:
      return Term::apply("not", {random_formula(rng, k, nv, depth - 1)});
    default:
      return lit();
  }
}

// Smallest margin any min/max/implies selection rests on. Finite differences
// only agree with the selected-branch gradient when this is bounded away
// from zero; leaves impose no selection.
template <class Leaf>
std::pair<double, double> value_and_gap(const Term& t, const Leaf& leaf) {
  const std::string& h = t.head();
  if (h == "not") {
    auto vg = value_and_gap(t.args()[0], leaf);
    return {1.0 - vg.first, vg.second};
  }
  if (h == "and" || h == "or" || h == "implies") {
    auto l = value_and_gap(t.args()[0], leaf);
    auto r = value_and_gap(t.args()[1], leaf);
    double a = l.first, b = r.first;
    double mine, v;
    if (h == "implies") {
      mine = std::abs((1.0 - a) - b);
      v = std::max(1.0 - a, b);
    } else {
      mine = std::abs(a - b);
      v = h == "and" ? std::min(a, b) : std::max(a, b);
    }
    return {v, std::min({l.second, r.second, mine})};
  }
  std::size_t idx = std::stoul(h.substr(1)) - 1;
  return {leaf(idx, t.args()[0].head()), 2.0};
}

std::size_t param_count(const std::vector<PredicateModel>& ms) {
  std::size_t n = 0;
  for (const PredicateModel& m : ms) n += m.weights.size() + 1;
  return n;
}

// Flat parameter order: each model's weights then its bias, models in order.
double& param_ref(std::vector<PredicateModel>& ms, std::size_t flat) {
  for (PredicateModel& m : ms) {
    if (flat < m.weights.size()) return m.weights[flat];
    if (flat == m.weights.size()) return m.bias;
    flat -= m.weights.size() + 1;
  }
  FAIL("parameter index out of range");
  return ms.front().bias;  // not reached
}

double grad_entry(const std::vector<PredicateGrad>& gs, std::size_t flat) {
  for (const PredicateGrad& g : gs) {
    if (flat < g.weights.size()) return g.weights[flat];
    if (flat == g.weights.size()) return g.bias;
    flat -= g.weights.size() + 1;
  }
  FAIL("gradient index out of range");
  return 0;  // not reached
}

// Pinned training initialization: Box-Muller draw per weight.
double init_gaussian(std::mt19937_64& rng, double sigma) {
  double u1 = 1.0 - testsupport::unit_real(rng);
  double u2 = testsupport::unit_real(rng);
  return sigma * std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

TEST_CASE("attribute vocabulary is a one-hot block layout") {
  CHECK(kAttributeCount == 15);
  CHECK(attribute_name(0) == "cube");
  CHECK(attribute_name(kColorOffset) == "gray");
  CHECK(attribute_name(kSizeOffset + 1) == "large");
  CHECK(attribute_name(kAttributeCount - 1) == "metal");
  CHECK(thrown_code([] { attribute_name(kAttributeCount); }) ==
        ErrorCode::domain_error);
  CHECK(thrown_code([] { attribute_name(-1); }) == ErrorCode::domain_error);

  ObjectTruth t{1, 6, 0, 1};  // sphere, cyan, small, metal
  CHECK(t.has_attribute(kShapeOffset + 1));
  CHECK_FALSE(t.has_attribute(kShapeOffset));
  CHECK(t.has_attribute(kColorOffset + 6));
  CHECK(t.has_attribute(kSizeOffset));
  CHECK(t.has_attribute(kMaterialOffset + 1));
  CHECK(thrown_code([&] { t.has_attribute(kAttributeCount); }) ==
        ErrorCode::domain_error);

  // One indicator per block, at the attribute the truth labels name.
  std::vector<double> v = t.one_hot();
  REQUIRE(v.size() == std::size_t(kAttributeCount));
  double sum = 0;
  for (double x : v) sum += x;
  CHECK(sum == 4.0);
  for (int a = 0; a < kAttributeCount; ++a)
    CHECK(v[std::size_t(a)] == (t.has_attribute(a) ? 1.0 : 0.0));
}

TEST_CASE("logistic scorers match the closed form and never overflow") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    double z = (2.0 * testsupport::unit_real(rng) - 1.0) * 30.0;
    PredicateModel m{{z}, 0.0};
    double s = m.score({1.0});
    CHECK_THAT(s, Catch::Matchers::WithinRel(plain_sigmoid(z), 1e-12));
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
  }
  // Extreme inputs saturate cleanly instead of overflowing.
  PredicateModel big{{800.0}, 0.0};
  CHECK(big.score({1.0}) == 1.0);
  CHECK(big.score({-1.0}) == 0.0);
  CHECK(PredicateModel{{0.0}, 0.0}.score({123.0}) == 0.5);

  CHECK(thrown_code([] {
          PredicateModel m{{1.0, 2.0}, 0.0};
          m.score({1.0});
        }) == ErrorCode::domain_error);
  CHECK(thrown_code([] { check_models({}); }) == ErrorCode::domain_error);
  CHECK(thrown_code([] {
          check_models({PredicateModel{{1.0}, 0.0},
                        PredicateModel{{1.0, 2.0}, 0.0}});
        }) == ErrorCode::domain_error);
  double inf = std::numeric_limits<double>::infinity();
  CHECK(thrown_code([&] { check_models({PredicateModel{{inf}, 0.0}}); }) ==
        ErrorCode::non_finite_loss);
  CHECK(thrown_code([&] { check_models({PredicateModel{{1.0}, -inf}}); }) ==
        ErrorCode::non_finite_loss);
}

TEST_CASE("fuzzy connectives follow the truth tables") {
  auto F = [](Connective c, std::vector<double> a) {
    return fuzzy_apply(c, a);
  };
  CHECK(F(Connective::and_, {0.3, 0.7}) == 0.3);
  CHECK(F(Connective::or_, {0.3, 0.7}) == 0.7);
  CHECK(F(Connective::not_, {0.2}) == 0.8);
  CHECK(F(Connective::implies, {0.9, 0.4}) == 0.4);
  CHECK(F(Connective::implies, {0.2, 0.1}) == 0.8);

  for (int i = 0; i <= 10; ++i) {
    double a = i / 10.0;
    CHECK(F(Connective::not_, {a}) == 1.0 - a);
    for (int j = 0; j <= 10; ++j) {
      double b = j / 10.0;
      CHECK(F(Connective::and_, {a, b}) == std::min(a, b));
      CHECK(F(Connective::or_, {a, b}) == std::max(a, b));
      CHECK(F(Connective::implies, {a, b}) == std::max(1.0 - a, b));
    }
  }

  // Out-of-range inputs clamp to the unit interval first.
  CHECK(F(Connective::and_, {-0.5, 2.0}) == 0.0);
  CHECK(F(Connective::or_, {-0.5, 2.0}) == 1.0);
  CHECK(F(Connective::not_, {1.5}) == 0.0);

  CHECK(thrown_code([&] { F(Connective::and_, {0.5}); }) ==
        ErrorCode::arity_mismatch);
  CHECK(thrown_code([&] { F(Connective::not_, {0.5, 0.5}); }) ==
        ErrorCode::arity_mismatch);
  CHECK(connective_name(Connective::implies) == "implies");
  Connective c;
  CHECK(connective_from_name("or", c));
  CHECK(c == Connective::or_);
  CHECK_FALSE(connective_from_name("xor", c));
}

TEST_CASE("fuzzy algebra laws hold exactly") {
  auto fand = [](double a, double b) {
    return fuzzy_apply(Connective::and_, std::vector<double>{a, b});
  };
  auto forr = [](double a, double b) {
    return fuzzy_apply(Connective::or_, std::vector<double>{a, b});
  };
  auto fimp = [](double a, double b) {
    return fuzzy_apply(Connective::implies, std::vector<double>{a, b});
  };
  auto fnot = [](double a) {
    return fuzzy_apply(Connective::not_, std::vector<double>{a});
  };
  std::mt19937_64 rng(42);
  for (int i = 0; i < 1000; ++i) {
    double a = testsupport::unit_real(rng);
    double b = testsupport::unit_real(rng);
    CHECK(fnot(fnot(a)) == a);
    CHECK(fnot(fand(a, b)) == forr(fnot(a), fnot(b)));
    CHECK(fnot(forr(a, b)) == fand(fnot(a), fnot(b)));
    CHECK(fimp(a, b) == forr(fnot(a), b));
    CHECK(fand(a, b) == fand(b, a));
    CHECK(fand(a, a) == a);
    CHECK(fand(a, 1.0) == a);
    CHECK(forr(a, 0.0) == a);
    CHECK(fand(a, fnot(a)) <= 0.5);
  }
}

TEST_CASE("formula values compose scores through the connectives") {
  // Hand case: all pre-activations nonnegative, so the two-branch scorer
  // takes the same path as the plain closed form and values match exactly.
  Scene s;
  s.objects.push_back({"a", {1.0, 0.0}, std::nullopt});
  s.objects.push_back({"b", {0.0, 1.0}, std::nullopt});
  std::vector<PredicateModel> ms{PredicateModel{{2.0, 0.0}, 0.0},
                                 PredicateModel{{0.0, 1.0}, 0.5}};
  GroundingAssignment g{{"x1", "a"}, {"x2", "b"}};
  double s1a = plain_sigmoid(2.0);  // p1 on a
  double s2b = plain_sigmoid(1.5);  // p2 on b
  SceneExample ex{
      Term::apply("and",
                  {Term::apply("implies",
                               {Term::apply("p1", {Term::var("x1")}),
                                Term::apply("p2", {Term::var("x2")})}),
                   Term::apply("not", {Term::apply("p2", {Term::var("x2")})})}),
      object_vars(2), s};
  double expected = std::min(std::max(1.0 - s1a, s2b), 1.0 - s2b);
  CHECK(formula_value(ms, ex, g) == expected);

  // Single literal under each grounding slot.
  SceneExample lit{Term::apply("p1", {Term::var("x1")}), object_vars(1), s};
  CHECK(formula_value(ms, lit, {{"x1", "a"}}) == s1a);
  CHECK(formula_value(ms, lit, {{"x1", "b"}}) == plain_sigmoid(0.0));

  // Contradictions never score above one half.
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    Scene sc = random_labeled_scene(rng, 1, 0.05);
    auto m = random_models(rng, 1, 16, 2.0);
    Term p = Term::apply("p1", {Term::var("x1")});
    SceneExample contra{Term::apply("and", {p, Term::apply("not", {p})}),
                        object_vars(1), sc};
    CHECK(formula_value(m, contra, {{"x1", "o1"}}) <= 0.5);
  }

  // Random formulas against the independent evaluator, exact.
  for (int i = 0; i < 200; ++i) {
    std::size_t n = 2 + rng() % 3;
    Scene sc = random_labeled_scene(rng, n, 0.05);
    auto m = random_models(rng, 1 + rng() % 3, 16, 1.0);
    std::size_t nv = 1 + rng() % 2;
    Term f = random_formula(rng, m.size(), nv, int(rng() % 4));
    SceneExample rex{f, object_vars(nv), sc};
    auto gs = oracle_assignments(rex.vars, sc);
    const GroundingAssignment& ga = gs[rng() % gs.size()];
    double want = oracle_eval(f, [&](std::size_t p, const std::string& var) {
      return m[p].score(features_of(sc, assigned(ga, var)));
    });
    CHECK(formula_value(m, rex, ga) == want);
  }
}

TEST_CASE("formula evaluation rejects malformed inputs") {
  Scene s;
  s.objects.push_back({"a", {1.0}, std::nullopt});
  std::vector<PredicateModel> ms{PredicateModel{{1.0}, 0.0},
                                 PredicateModel{{-1.0}, 0.0}};
  Term p1x = Term::apply("p1", {Term::var("x1")});
  GroundingAssignment g{{"x1", "a"}};

  auto val = [&](Term f, GroundingAssignment gr) {
    SceneExample ex{std::move(f), object_vars(1), s};
    return formula_value(ms, ex, gr);
  };
  CHECK(thrown_code([&] { val(p1x, {}); }) == ErrorCode::unbound_variable);
  CHECK(thrown_code([&] { val(Term::var("x1"), g); }) ==
        ErrorCode::type_mismatch);
  CHECK(thrown_code([&] { val(Term::apply("xor", {p1x, p1x}), g); }) ==
        ErrorCode::unknown_symbol);
  CHECK(thrown_code([&] { val(Term::apply("p0", {Term::var("x1")}), g); }) ==
        ErrorCode::unknown_symbol);
  CHECK(thrown_code([&] { val(Term::apply("p3", {Term::var("x1")}), g); }) ==
        ErrorCode::unknown_symbol);
  CHECK(thrown_code([&] {
          val(Term::apply("p1", {Term::var("x1"), Term::var("x1")}), g);
        }) == ErrorCode::arity_mismatch);
  CHECK(thrown_code([&] { val(Term::apply("and", {p1x, p1x, p1x}), g); }) ==
        ErrorCode::arity_mismatch);
  CHECK(thrown_code([&] { val(Term::apply("p1", {p1x}), g); }) ==
        ErrorCode::type_mismatch);
  CHECK(thrown_code([&] { val(p1x, {{"x1", "nobody"}}); }) ==
        ErrorCode::domain_error);
  CHECK(thrown_code([&] {
          std::vector<PredicateModel> none;
          SceneExample ex{p1x, object_vars(1), s};
          formula_value(none, ex, g);
        }) == ErrorCode::domain_error);
}

TEST_CASE("best grounding matches exhaustive search") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    std::size_t n = 1 + rng() % 6;
    Scene sc = random_labeled_scene(rng, n, 0.05);
    auto ms = random_models(rng, 1 + rng() % 4, 16, 1.5);
    std::size_t nv = 1 + rng() % std::min<std::size_t>(3, n);
    Term f = random_formula(rng, ms.size(), nv, int(rng() % 4));
    SceneExample ex{f, object_vars(nv), sc};
    OracleBest want = oracle_best(ms, ex);
    GroundResult got = ground_best(ms, ex);
    CHECK(got.value == want.value);
    CHECK(got.assignment == want.assignment);
  }
}

TEST_CASE("best grounding keeps enumeration order on ties and respects caps") {
  // Identical scores everywhere: the winner must be the first injective
  // assignment, ids ascending per declaration slot. Ids arrive unsorted.
  Scene s;
  s.objects.push_back({"c", std::vector<double>{0.0}, std::nullopt});
  s.objects.push_back({"a", std::vector<double>{1.0}, std::nullopt});
  s.objects.push_back({"b", std::vector<double>{2.0}, std::nullopt});
  std::vector<PredicateModel> ms{PredicateModel{{0.0}, 0.0}};
  Term f = Term::apply("and", {Term::apply("p1", {Term::var("x1")}),
                               Term::apply("p1", {Term::var("x2")})});
  SceneExample ex{f, object_vars(2), s};
  GroundResult r = ground_best(ms, ex);
  CHECK(r.value == 0.5);
  CHECK(r.assignment ==
        GroundingAssignment{{"x1", "a"}, {"x2", "b"}});

  // 3 objects and 2 variables admit 6 injective assignments.
  CHECK(thrown_code([&] { ground_best(ms, ex, 5); }) ==
        ErrorCode::cap_exceeded);
  CHECK(ground_best(ms, ex, 6).value == 0.5);

  SceneExample starved{f, object_vars(4), s};
  CHECK(thrown_code([&] { ground_best(ms, starved); }) ==
        ErrorCode::no_grounding);
}

TEST_CASE("corpus objective is the mean best value") {
  std::mt19937_64 rng(23);
  auto ms = random_models(rng, 3, 16, 1.0);
  std::vector<SceneExample> corpus;
  for (int i = 0; i < 20; ++i) {
    std::size_t n = 2 + rng() % 3;
    Scene sc = random_labeled_scene(rng, n, 0.05);
    std::size_t nv = 1 + rng() % 2;
    corpus.push_back(
        {random_formula(rng, ms.size(), nv, 2), object_vars(nv), sc});
  }
  double sum = 0;
  for (const SceneExample& ex : corpus) sum += oracle_best(ms, ex).value;
  CHECK(corpus_objective(ms, corpus) == sum / double(corpus.size()));

  std::vector<SceneExample> one{corpus.front()};
  CHECK(corpus_objective(ms, one) == oracle_best(ms, one.front()).value);
  CHECK(thrown_code([&] { corpus_objective(ms, {}); }) ==
        ErrorCode::empty_corpus);

  // Loss complements value exactly.
  for (const SceneExample& ex : corpus) {
    double v = ground_best(ms, ex).value;
    CHECK(example_loss(ms, ex) == 1.0 - v);
    CHECK(example_loss(ms, ex) + v == 1.0);
  }

  // Failures propagate tagged with the offending example's index.
  std::vector<SceneExample> bad(corpus.begin(), corpus.begin() + 2);
  bad.push_back({corpus.front().formula, object_vars(4),
                 random_labeled_scene(rng, 2, 0.05)});
  try {
    corpus_objective(ms, bad);
    FAIL("expected an Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::no_grounding);
    CHECK(std::string(e.what()).find("example 2") != std::string::npos);
  }
}

TEST_CASE("frozen-grounding gradients match central finite differences") {
  // Validity needs every min/max/implies selection to rest on a margin, so
  // sampled points are kept when the smallest such margin exceeds 1e-3; the
  // 1e-6 perturbation moves leaf scores by under 1e-6 and cannot flip a
  // branch. Denominators floor at 1, making the bound absolute for the
  // sub-unit gradients that occur here.
  const double eps = 1e-6;
  std::mt19937_64 rng(77);
  int accepted = 0, attempts = 0;
  while (accepted < 100 && attempts < 2000) {
    ++attempts;
    std::size_t n = 2 + rng() % 3;
    Scene sc = random_labeled_scene(rng, n, 0.05);
    auto ms = random_models(rng, 1 + rng() % 3, 16, 0.5);
    std::size_t nv = 1 + rng() % 2;
    Term f = random_formula(rng, ms.size(), nv, int(rng() % 3));
    SceneExample ex{f, object_vars(nv), sc};
    auto gs = oracle_assignments(ex.vars, sc);
    const GroundingAssignment& g = gs[rng() % gs.size()];
    auto leaf = [&](std::size_t p, const std::string& var) {
      return ms[p].score(features_of(sc, assigned(g, var)));
    };
    if (value_and_gap(f, leaf).second < 1e-3) continue;
    ++accepted;

    FrozenEval fe = frozen_loss_grad(ms, ex, g);
    CHECK(fe.loss == 1.0 - formula_value(ms, ex, g));
    for (std::size_t p = 0; p < param_count(ms); ++p) {
      double save = param_ref(ms, p);
      param_ref(ms, p) = save + eps;
      double up = 1.0 - formula_value(ms, ex, g);
      param_ref(ms, p) = save - eps;
      double down = 1.0 - formula_value(ms, ex, g);
      param_ref(ms, p) = save;
      double fd = (up - down) / (2.0 * eps);
      double an = grad_entry(fe.grad, p);
      CHECK(std::abs(an - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
  REQUIRE(accepted == 100);
}

TEST_CASE("frozen-grounding gradients point downhill") {
  // Each connective routes the gradient through exactly one argument, so one
  // leaf receives it and the bias entry of that leaf's predicate is nonzero.
  // Away from selection ties some halved step must then reduce the loss.
  std::mt19937_64 rng(101);
  int accepted = 0, attempts = 0;
  while (accepted < 30 && attempts < 600) {
    ++attempts;
    Scene sc = random_labeled_scene(rng, 2 + rng() % 2, 0.05);
    auto ms = random_models(rng, 2, 16, 0.5);
    Term f = random_formula(rng, 2, 2, 2);
    SceneExample ex{f, object_vars(2), sc};
    auto gs = oracle_assignments(ex.vars, sc);
    const GroundingAssignment& g = gs[rng() % gs.size()];
    auto leaf = [&](std::size_t p, const std::string& var) {
      return ms[p].score(features_of(sc, assigned(g, var)));
    };
    if (value_and_gap(f, leaf).second < 1e-3) continue;
    ++accepted;

    FrozenEval fe = frozen_loss_grad(ms, ex, g);
    double norm = 0;
    for (std::size_t p = 0; p < param_count(ms); ++p)
      norm += grad_entry(fe.grad, p) * grad_entry(fe.grad, p);
    REQUIRE(norm > 0);

    bool improved = false;
    for (int k = 0; k < 50 && !improved; ++k) {
      std::vector<PredicateModel> moved = ms;
      double step = std::ldexp(1.0, -k);
      for (std::size_t p = 0; p < param_count(ms); ++p)
        param_ref(moved, p) -= step * grad_entry(fe.grad, p);
      improved = 1.0 - formula_value(moved, ex, g) < fe.loss;
    }
    CHECK(improved);
  }
  REQUIRE(accepted == 30);
}

TEST_CASE("training honors its contracts") {
  GenConfig gc;
  gc.seed = 7;
  gc.num_scenes = 10;
  gc.min_objects = 2;
  gc.max_objects = 3;
  gc.num_predicates = 2;
  SceneCorpus corpus = generate_scene_corpus(gc);

  std::mt19937_64 rng(5);
  std::vector<PredicateModel> init = random_models(rng, 2, 16, 0.3);

  TrainConfig zero;
  zero.epochs = 0;
  TrainResult r0 = train(init, corpus.examples, zero);
  REQUIRE(r0.trace.size() == 1);
  CHECK(r0.trace.front() == corpus_objective(init, corpus.examples));
  REQUIRE(r0.models.size() == init.size());
  for (std::size_t i = 0; i < init.size(); ++i) {
    CHECK(r0.models[i].weights == init[i].weights);
    CHECK(r0.models[i].bias == init[i].bias);
  }

  // Deterministic: identical inputs give identical traces and models.
  TrainConfig tc;
  tc.learning_rate = 0.5;
  tc.epochs = 5;
  TrainResult a = train(init, corpus.examples, tc);
  TrainResult b = train(init, corpus.examples, tc);
  REQUIRE(a.trace.size() == 6);
  CHECK(a.trace == b.trace);
  for (std::size_t i = 0; i < init.size(); ++i) {
    CHECK(a.models[i].weights == b.models[i].weights);
    CHECK(a.models[i].bias == b.models[i].bias);
  }

  // Regrounding less often than every epoch still runs.
  TrainConfig sparse = tc;
  sparse.regrounding_period = 3;
  CHECK(train(init, corpus.examples, sparse).trace.size() == 6);

  CHECK(thrown_code([&] { train(init, {}, tc); }) == ErrorCode::empty_corpus);
  auto bad_cfg = [&](auto mutate) {
    TrainConfig c = tc;
    mutate(c);
    return thrown_code([&] { train(init, corpus.examples, c); });
  };
  CHECK(bad_cfg([](TrainConfig& c) { c.learning_rate = 0.0; }) ==
        ErrorCode::domain_error);
  CHECK(bad_cfg([](TrainConfig& c) { c.learning_rate = -1.0; }) ==
        ErrorCode::domain_error);
  CHECK(bad_cfg([](TrainConfig& c) {
          c.learning_rate = std::numeric_limits<double>::infinity();
        }) == ErrorCode::domain_error);
  CHECK(bad_cfg([](TrainConfig& c) { c.regrounding_period = 0; }) ==
        ErrorCode::domain_error);
  CHECK(bad_cfg([](TrainConfig& c) { c.grounding_cap = 0; }) ==
        ErrorCode::domain_error);

  std::vector<PredicateModel> broken = init;
  broken[0].weights[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK(thrown_code([&] { train(broken, corpus.examples, tc); }) ==
        ErrorCode::non_finite_loss);
}

TEST_CASE("alternating training separates a generated corpus") {
  GenConfig gc;
  gc.seed = 32;
  gc.min_objects = 2;
  gc.max_objects = 3;
  gc.formula_depth = 4;
  SceneCorpus corpus = generate_scene_corpus(gc);
  REQUIRE(corpus.examples.size() == 200);

  std::mt19937_64 rng(1);
  std::vector<PredicateModel> init(
      4, PredicateModel{std::vector<double>(16, 0.0), 0.0});
  for (PredicateModel& m : init)
    for (double& w : m.weights) w = init_gaussian(rng, 0.3);

  TrainConfig tc;
  tc.learning_rate = 2.0;
  tc.epochs = 1000;
  tc.regrounding_period = 1;
  TrainResult r = train(init, corpus.examples, tc);
  REQUIRE(r.trace.size() == 1001);
  CHECK(r.trace.front() == corpus_objective(init, corpus.examples));
  CHECK(r.trace.back() > r.trace.front());
  CHECK(r.trace.back() >= 0.9);

  // The trained predicates, matched to attributes by best bijection, must
  // classify nearly every object correctly.
  std::vector<double> accs = evaluate_predicates(
      r.models, scenes_of(corpus.examples), corpus.predicate_attributes);
  REQUIRE(accs.size() == 4);
  for (double acc : accs) CHECK(acc >= 0.95);
}

TEST_CASE("generated corpora are faithful and reproducible") {
  GenConfig gc;
  gc.seed = 5;
  gc.num_scenes = 60;
  SceneCorpus corpus = generate_scene_corpus(gc);
  REQUIRE(corpus.examples.size() == 60);
  REQUIRE(corpus.predicate_attributes.size() == 4);
  std::set<int> distinct(corpus.predicate_attributes.begin(),
                         corpus.predicate_attributes.end());
  CHECK(distinct.size() == 4);
  for (int a : corpus.predicate_attributes) {
    CHECK(a >= 0);
    CHECK(a < kAttributeCount);
  }

  for (const SceneExample& ex : corpus.examples) {
    std::size_t n = ex.scene.objects.size();
    CHECK(n >= 3);
    CHECK(n <= 6);
    CHECK(ex.vars.size() >= 1);
    CHECK(ex.vars.size() <= n);
    std::set<std::string> ids;
    for (const SceneObject& o : ex.scene.objects) {
      ids.insert(o.id);
      REQUIRE(o.truth.has_value());
      REQUIRE(o.features.size() == 16);
      // Features sit near the one-hot truth encoding; sigma 0.05 noise
      // stays far inside a 0.5 band.
      std::vector<double> hot = o.truth->one_hot();
      hot.resize(16, 0.0);
      for (std::size_t i = 0; i < 16; ++i)
        CHECK(std::abs(o.features[i] - hot[i]) < 0.5);
    }
    CHECK(ids.size() == n);
    for (const auto& entry : ex.vars.entries()) {
      CHECK(entry.first[0] == 'x');
      CHECK(entry.second == kObjectType);
    }
    // The generator's promise, checked independently: the formula is
    // crisply satisfiable on its scene under the denoted attributes.
    CHECK(oracle_crisp_best(ex, corpus.predicate_attributes) >= 0.9);
  }

  // Same seed, same corpus.
  SceneCorpus again = generate_scene_corpus(gc);
  CHECK(again.predicate_attributes == corpus.predicate_attributes);
  REQUIRE(again.examples.size() == corpus.examples.size());
  for (std::size_t i = 0; i < corpus.examples.size(); ++i) {
    const SceneExample& x = corpus.examples[i];
    const SceneExample& y = again.examples[i];
    CHECK(x.formula == y.formula);
    CHECK(x.vars.entries() == y.vars.entries());
    REQUIRE(x.scene.objects.size() == y.scene.objects.size());
    for (std::size_t j = 0; j < x.scene.objects.size(); ++j) {
      CHECK(x.scene.objects[j].id == y.scene.objects[j].id);
      CHECK(x.scene.objects[j].features == y.scene.objects[j].features);
      CHECK(x.scene.objects[j].truth == y.scene.objects[j].truth);
    }
  }

  // Zero noise produces exact indicator features.
  GenConfig crisp = gc;
  crisp.num_scenes = 10;
  crisp.noise_sigma = 0.0;
  SceneCorpus clean = generate_scene_corpus(crisp);
  for (const SceneExample& ex : clean.examples)
    for (const SceneObject& o : ex.scene.objects) {
      std::vector<double> hot = o.truth->one_hot();
      hot.resize(16, 0.0);
      CHECK(o.features == hot);
    }

  // A single-predicate family draws formulas over p1 alone.
  GenConfig solo = gc;
  solo.num_scenes = 15;
  solo.num_predicates = 1;
  SceneCorpus one = generate_scene_corpus(solo);
  REQUIRE(one.predicate_attributes.size() == 1);
  for (const SceneExample& ex : one.examples) {
    auto walk = [&](auto&& self, const Term& t) -> void {
      if (t.is_variable()) return;
      bool known = t.head() == "and" || t.head() == "or" ||
                   t.head() == "implies" || t.head() == "not" ||
                   t.head() == "p1";
      CHECK(known);
      for (const Term& a : t.args()) self(self, a);
    };
    walk(walk, ex.formula);
  }
}

TEST_CASE("corpus generation validates its configuration") {
  auto code = [](auto mutate) {
    GenConfig c;
    c.num_scenes = 1;
    mutate(c);
    return thrown_code([&] { generate_scene_corpus(c); });
  };
  CHECK(code([](GenConfig& c) { c.min_objects = 0; }) ==
        ErrorCode::domain_error);
  CHECK(code([](GenConfig& c) {
          c.min_objects = 5;
          c.max_objects = 4;
        }) == ErrorCode::domain_error);
  CHECK(code([](GenConfig& c) { c.noise_sigma = -0.1; }) ==
        ErrorCode::domain_error);
  CHECK(code([](GenConfig& c) { c.dimension = 8; }) ==
        ErrorCode::domain_error);
  CHECK(code([](GenConfig& c) { c.num_predicates = 0; }) ==
        ErrorCode::domain_error);
  CHECK(code([](GenConfig& c) { c.num_predicates = 16; }) ==
        ErrorCode::domain_error);
  CHECK(code([](GenConfig& c) { c.formula_depth = 0; }) ==
        ErrorCode::domain_error);
}

TEST_CASE("predicate evaluation matches, swaps, and validates") {
  // Gain models: weight 10 on the denoted indicator, bias -5, so the
  // threshold reproduces the truth bit exactly on clean features.
  GenConfig gc;
  gc.seed = 13;
  gc.num_scenes = 30;
  gc.noise_sigma = 0.0;
  SceneCorpus corpus = generate_scene_corpus(gc);
  std::vector<Scene> scenes = scenes_of(corpus.examples);

  std::vector<PredicateModel> perfect;
  for (int a : corpus.predicate_attributes) {
    PredicateModel m{std::vector<double>(16, 0.0), -5.0};
    m.weights[std::size_t(a)] = 10.0;
    perfect.push_back(std::move(m));
  }
  for (double acc :
       evaluate_predicates(perfect, scenes, corpus.predicate_attributes))
    CHECK(acc == 1.0);

  // Swapping two models must not hurt: the bijection reassigns them.
  std::vector<PredicateModel> swapped = perfect;
  std::swap(swapped[0], swapped[1]);
  for (double acc :
       evaluate_predicates(swapped, scenes, corpus.predicate_attributes))
    CHECK(acc == 1.0);

  // A constant-true predicate scores each attribute's base rate.
  std::vector<PredicateModel> constant{
      PredicateModel{std::vector<double>(16, 0.0), 0.0}};
  std::vector<int> first_attr{corpus.predicate_attributes[0]};
  std::size_t total = 0, hits = 0;
  for (const Scene& s : scenes)
    for (const SceneObject& o : s.objects) {
      ++total;
      if (o.truth->has_attribute(first_attr[0])) ++hits;
    }
  std::vector<double> base = evaluate_predicates(constant, scenes, first_attr);
  REQUIRE(base.size() == 1);
  CHECK(base[0] == double(hits) / double(total));

  CHECK(thrown_code([&] {
          evaluate_predicates(perfect, scenes, {0, 1});
        }) == ErrorCode::domain_error);
  CHECK(thrown_code([&] {
          evaluate_predicates(constant, scenes, {kAttributeCount});
        }) == ErrorCode::domain_error);
  CHECK(thrown_code([&] {
          evaluate_predicates(constant, {}, first_attr);
        }) == ErrorCode::empty_corpus);
  Scene unlabeled;
  unlabeled.objects.push_back({"u", std::vector<double>(16, 0.0), std::nullopt});
  CHECK(thrown_code([&] {
          evaluate_predicates(constant, {unlabeled}, first_attr);
        }) == ErrorCode::missing_truth);

  // Hand corpus: a constant-true size predicate is right exactly on the
  // small objects.
  Scene hand;
  for (int i = 0; i < 4; ++i) {
    ObjectTruth t{0, 0, i == 0 ? 0 : 1, 0};
    std::vector<double> f = t.one_hot();
    f.resize(16, 0.0);
    hand.objects.push_back({"h" + std::to_string(i + 1), std::move(f), t});
  }
  std::vector<double> quarter =
      evaluate_predicates(constant, {hand}, {kSizeOffset});
  CHECK(quarter[0] == 0.25);
}

TEST_CASE("scene algebra mirrors the direct evaluator") {
  std::mt19937_64 rng(29);
  std::vector<Example> cores;
  std::vector<SceneExample> corpus;
  auto ms = random_models(rng, 3, 16, 1.0);
  TemplateAlgebra alg = scene_algebra(ms);
  CHECK(alg.instance_complete());
  for (int i = 0; i < 50; ++i) {
    std::size_t n = 2 + rng() % 3;
    Scene sc = random_labeled_scene(rng, n, 0.05);
    std::size_t nv = 1 + rng() % 2;
    Term f = random_formula(rng, ms.size(), nv, int(rng() % 3));
    SceneExample ex{f, object_vars(nv), sc};
    CHECK(alg.typecheck(f, ex.vars) == kTruthType);
    Example core = as_example(ex);
    CHECK(example_value(alg, core).as_real() == ground_best(ms, ex).value);
    cores.push_back(std::move(core));
    corpus.push_back(std::move(ex));
  }
  CHECK(total_value(alg, cores).as_real() == corpus_objective(ms, corpus));

  // Open template: filling the per-predicate candidate family with a
  // parameter vector reproduces the closed algebra's scores.
  TemplateAlgebra open = scene_template(2, 3);
  CHECK_FALSE(open.instance_complete());
  const CandidateFamily& fam = open.family(predicate_symbol(0));
  REQUIRE(fam.param_count == 4);
  std::vector<double> params{0.5, -1.0, 2.0, 0.25};
  TemplateAlgebra filled =
      open.with_interpretation(predicate_symbol(0), fam.instantiate(params));
  PredicateModel same{{0.5, -1.0, 2.0}, 0.25};
  VariableContext ctx;
  ctx.declare("x1", kObjectType);
  std::map<std::string, Value> env{
      {"x1", Value(kObjectType, std::vector<double>{1.0, 0.5, -0.5})}};
  Term lit = Term::apply("p1", {Term::var("x1")});
  CHECK(filled.eval_open(lit, ctx, env).as_real() ==
        same.score({1.0, 0.5, -0.5}));

  // The second predicate is still open and cannot be evaluated.
  Term lit2 = Term::apply("p2", {Term::var("x1")});
  CHECK(thrown_code([&] { filled.eval_open(lit2, ctx, env); }) ==
        ErrorCode::uninterpreted_symbol);
}
