#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "talgebra/algebra.hpp"
#include "talgebra/grounding.hpp"
#include "talgebra/rtg.hpp"
#include "talgebra/term.hpp"

using namespace talgebra;

namespace {

const TypeName kNum{"num"};
const TypeName kFlag{"flag"};

Value num(double x) { return Value(kNum, x); }
Value flag(bool b) { return Value(kFlag, b); }

// Small arithmetic/boolean algebra exercising overloads and partiality.
TemplateAlgebra toy_algebra(bool interpret_mystery = false) {
  AlgebraSpec s;
  TypedSymbol zero{"zero", {}, kNum};
  TypedSymbol one{"one", {}, kNum};
  TypedSymbol add_num{"add", {kNum, kNum}, kNum};
  TypedSymbol add_flag{"add", {kFlag, kFlag}, kFlag};  // overload: or
  TypedSymbol leq{"leq", {kNum, kNum}, kFlag};
  TypedSymbol nott{"not", {kFlag}, kFlag};
  TypedSymbol mystery{"mystery", {kNum}, kNum};
  for (const auto& sym :
       {zero, one, add_num, add_flag, leq, nott, mystery})
    s.alphabet.add(sym);

  s.domains[kNum] = [](const Value& v) {
    return std::holds_alternative<double>(v.payload());
  };
  s.domains[kFlag] = [](const Value& v) {
    return std::holds_alternative<bool>(v.payload());
  };

  s.interpretations[zero] = [](const std::vector<Value>&) { return num(0); };
  s.interpretations[one] = [](const std::vector<Value>&) { return num(1); };
  s.interpretations[add_num] = [](const std::vector<Value>& a) {
    return num(a[0].as_real() + a[1].as_real());
  };
  s.interpretations[add_flag] = [](const std::vector<Value>& a) {
    return flag(a[0].as_bool() || a[1].as_bool());
  };
  s.interpretations[leq] = [](const std::vector<Value>& a) {
    return flag(a[0].as_real() <= a[1].as_real());
  };
  s.interpretations[nott] = [](const std::vector<Value>& a) {
    return flag(!a[0].as_bool());
  };
  if (interpret_mystery)
    s.interpretations[mystery] = [](const std::vector<Value>& a) {
      return num(2 * a[0].as_real());
    };
  else
    s.candidate_families[mystery] = CandidateFamily{
        1, [](std::span<const double> p) -> Operation {
          double scale = p[0];
          return [scale](const std::vector<Value>& a) {
            return num(scale * a[0].as_real());
          };
        }};

  s.eval_type = kFlag;
  s.eval_less = [](const Value& a, const Value& b) {
    return !a.as_bool() && b.as_bool();
  };
  s.combine = [](const std::vector<Value>& vs) {
    bool all = true;
    for (const Value& v : vs) all = all && v.as_bool();
    return flag(all);
  };
  s.opt = OptMode::min;
  return TemplateAlgebra(std::move(s));
}

Term T(const std::string& head, std::vector<Term> args = {}) {
  return Term::apply(head, std::move(args));
}

}  // namespace

TEST_CASE("term structure and ordering") {
  Term t = T("add", {T("one"), T("zero")});
  CHECK(to_text(t) == "add[one,zero]");
  CHECK(t == T("add", {T("one"), T("zero")}));
  CHECK(t != T("add", {T("zero"), T("one")}));
  CHECK(Term::var("x") != T("x"));
  CHECK(t.node_count() == 3);

  std::set<Term> s{t, t, T("one"), Term::var("x")};
  CHECK(s.size() == 3);
}

TEST_CASE("typecheck resolves overloads bottom-up") {
  auto alg = toy_algebra();
  VariableContext ctx;
  ctx.declare("x", kNum);
  ctx.declare("p", kFlag);

  CHECK(alg.typecheck(T("add", {T("one"), T("zero")}), ctx) == kNum);
  CHECK(alg.typecheck(T("add", {Term::var("p"), Term::var("p")}), ctx) ==
        kFlag);
  CHECK(alg.typecheck(T("leq", {Term::var("x"), T("one")}), ctx) == kFlag);

  auto code = [&](const Term& t) {
    try {
      alg.typecheck(t, ctx);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::io_error;  // not reached
  };
  CHECK(code(T("bogus")) == ErrorCode::unknown_symbol);
  CHECK(code(T("leq", {T("one")})) == ErrorCode::arity_mismatch);
  CHECK(code(T("leq", {Term::var("p"), T("one")})) ==
        ErrorCode::type_mismatch);
  CHECK(code(Term::var("y")) == ErrorCode::unbound_variable);
}

TEST_CASE("eval_closed and eval_open agree through substitution") {
  auto alg = toy_algebra();
  // x bound to 1 behaves exactly like the closed term with `one` plugged in.
  VariableContext ctx;
  ctx.declare("x", kNum);
  Term open = T("leq", {Term::var("x"), T("add", {T("one"), T("one")})});
  Term closed = T("leq", {T("one"), T("add", {T("one"), T("one")})});
  std::map<std::string, Value> env{{"x", num(1)}};
  CHECK(alg.eval_open(open, ctx, env) == alg.eval_closed(closed));
  CHECK(alg.eval_closed(closed) == flag(true));

  CHECK_THROWS_AS(alg.eval_open(open, ctx, {}), Error);
  CHECK_THROWS_AS(alg.eval_closed(T("mystery", {T("one")})), Error);
  CHECK(toy_algebra(true).eval_closed(T("mystery", {T("one")})) == num(2));
}

TEST_CASE("instance completion via candidate family") {
  auto alg = toy_algebra();
  CHECK_FALSE(alg.instance_complete());
  TypedSymbol mystery{"mystery", {kNum}, kNum};
  const CandidateFamily& fam = alg.family(mystery);
  REQUIRE(fam.param_count == 1);
  double p[] = {3.0};
  auto filled = alg.with_interpretation(mystery, fam.instantiate(p));
  CHECK(filled.instance_complete());
  CHECK(filled.eval_closed(T("mystery", {T("one")})) == num(3));
}

TEST_CASE("grounding enumeration is injective, typed, ordered") {
  VariableContext vars;
  vars.declare("x", kNum);
  vars.declare("y", kNum);
  std::vector<ObjectRef> objs{
      {"b", num(2)}, {"a", num(1)}, {"c", flag(true)}};

  auto gs = enumerate_groundings(vars, objs);
  REQUIRE(gs.size() == 2);
  CHECK(gs[0] == GroundingAssignment{{"x", "a"}, {"y", "b"}});
  CHECK(gs[1] == GroundingAssignment{{"x", "b"}, {"y", "a"}});

  SECTION("count matches falling factorial for same-typed objects") {
    std::vector<ObjectRef> many;
    for (int i = 0; i < 5; ++i)
      many.push_back({"o" + std::to_string(i), num(i)});
    CHECK(enumerate_groundings(vars, many).size() == 5 * 4);
  }
  SECTION("cap") {
    CHECK_THROWS_AS(enumerate_groundings(vars, objs, 1), Error);
    try {
      enumerate_groundings(vars, objs, 1);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::cap_exceeded);
    }
  }
  SECTION("duplicate object ids rejected") {
    std::vector<ObjectRef> dup{{"a", num(1)}, {"a", num(2)}};
    CHECK_THROWS_AS(enumerate_groundings(vars, dup), Error);
  }
}

TEST_CASE("example_value takes opt over groundings") {
  auto alg = toy_algebra();
  VariableContext vars;
  vars.declare("x", kNum);
  vars.declare("y", kNum);
  Example ex{T("leq", {Term::var("x"), Term::var("y")}),
             vars,
             {{"a", num(1)}, {"b", num(2)}}};
  // Groundings: (1,2) -> true, (2,1) -> false; opt=min picks false.
  CHECK(example_value(alg, ex) == flag(false));

  Example one_obj{T("leq", {Term::var("x"), Term::var("x")}),
                  VariableContext{{{"x", kNum}}},
                  {{"a", num(1)}}};
  CHECK(example_value(alg, one_obj) == flag(true));

  Example starved{T("leq", {Term::var("x"), Term::var("y")}), vars,
                  {{"a", num(1)}}};
  try {
    example_value(alg, starved);
    FAIL("expected no_grounding");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::no_grounding);
  }
}

TEST_CASE("total_value combines and tags failures") {
  auto alg = toy_algebra();
  VariableContext vars{{{"x", kNum}}};
  Example good{T("leq", {Term::var("x"), T("one")}), vars, {{"a", num(0)}}};
  Example also_good{T("leq", {T("zero"), Term::var("x")}), vars,
                    {{"a", num(3)}}};
  CHECK(total_value(alg, {good, also_good}) == flag(true));

  Example bad{T("leq", {Term::var("x"), T("zero")}), vars, {{"a", num(1)}}};
  CHECK(total_value(alg, {good, bad}) == flag(false));

  try {
    total_value(alg, {});
    FAIL("expected empty_corpus");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::empty_corpus);
  }

  Example starved{T("leq", {Term::var("x"), Term::var("x")}),
                  VariableContext{{{"x", kNum}, {"y", kNum}}},
                  {{"a", num(1)}}};
  try {
    total_value(alg, {good, starved});
    FAIL("expected tagged error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::no_grounding);
    CHECK(std::string(e.what()).find("example 1") != std::string::npos);
  }
}

TEST_CASE("rtg exhaustive generation by derivation height") {
  // S -> f[S] | c. Height d admits chains up to f^d[c].
  Rtg g({"S"}, "S",
        {{"S", T("f", {Term::var("S")})}, {"S", T("c")}});
  auto d0 = rtg_generate_exhaustive(g, 0);
  REQUIRE(d0.size() == 1);
  CHECK(d0[0] == T("c"));

  auto d1 = rtg_generate_exhaustive(g, 1);
  CHECK(d1.size() == 2);
  auto d3 = rtg_generate_exhaustive(g, 3);
  CHECK(d3.size() == 4);

  SECTION("monotone in depth") {
    std::set<Term> small(d1.begin(), d1.end());
    for (const Term& t : d1) CHECK(small.count(t) == 1);
    std::set<Term> big(d3.begin(), d3.end());
    for (const Term& t : d1) CHECK(big.count(t) == 1);
  }

  SECTION("single-rule grammar") {
    Rtg single({"S"}, "S", {{"S", T("c")}});
    auto out = rtg_generate_exhaustive(single, 1);
    REQUIRE(out.size() == 1);
    CHECK(out[0] == T("c"));
  }

  SECTION("dedup across rules deriving the same term") {
    Rtg dup({"S", "A"}, "S",
            {{"S", T("c")}, {"S", Term::var("A")}, {"A", T("c")}});
    CHECK(rtg_generate_exhaustive(dup, 2).size() == 1);
  }

  SECTION("no terminal derivation") {
    Rtg loop({"S"}, "S", {{"S", T("f", {Term::var("S")})}});
    CHECK_THROWS_AS(rtg_generate_exhaustive(loop, 5), Error);
    CHECK_THROWS_AS(rtg_generate_random(loop, 3, 1, 4), Error);
  }
}

TEST_CASE("rtg random generation terminates and is seed-deterministic") {
  Rtg g({"S"}, "S",
        {{"S", T("f", {Term::var("S"), Term::var("S")})}, {"S", T("c")}});
  auto a = rtg_generate_random(g, 50, 42, 6);
  auto b = rtg_generate_random(g, 50, 42, 6);
  REQUIRE(a.size() == 50);
  CHECK(a == b);
  auto c = rtg_generate_random(g, 50, 43, 6);
  CHECK(a != c);

  // Cutoff caps growth: past depth 6 only the terminating rule fires, so no
  // term can nest f deeper than ~cutoff + 1.
  auto depth = [](auto&& self, const Term& t) -> int {
    int d = 0;
    for (const Term& x : t.args()) d = std::max(d, self(self, x));
    return d + 1;
  };
  for (const Term& t : a) CHECK(depth(depth, t) <= 8);
}
