#include <gtest/gtest.h>

#include "setproof/error.hpp"
#include "setproof/formula.hpp"
#include "setproof/model.hpp"
#include "support.hpp"

using namespace setproof;
using setproof::testing::F;
using setproof::testing::FormulaGen;
using setproof::testing::T;

namespace {

Term v(const char* n) { return Term::var(n); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::ParseError;
}

// Substitution lemma, checked semantically: m |= f[v:=t] iff m[v := eval t] |= f.
void expect_substitution_lemma(const Formula& f, const VarName& var, const Term& t) {
  Formula result = substitute(f, var, t);
  VarSet vars = free_vars(f);
  auto tv = free_vars(t);
  vars.insert(tv.begin(), tv.end());
  vars.erase(var);
  for_each_assignment(vars, 3, [&](const FiniteModel& m) {
    FiniteModel shifted = m;
    shifted.assignment[var] = evaluate(t, m);
    EXPECT_EQ(evaluate(result, m), evaluate(f, shifted)) << render(f) << " [" << var << " := " << render(t) << "]";
    return true;
  });
}

}  // namespace

TEST(VarNames, IdentifierSyntax) {
  EXPECT_TRUE(is_valid_var_name("x"));
  EXPECT_TRUE(is_valid_var_name("very_long_variable_name_42"));
  EXPECT_FALSE(is_valid_var_name(""));
  EXPECT_FALSE(is_valid_var_name("1x"));
  EXPECT_FALSE(is_valid_var_name("_x"));
  EXPECT_FALSE(is_valid_var_name("forall"));
  EXPECT_FALSE(is_valid_var_name("Union"));
  EXPECT_TRUE(is_valid_var_name("union_"));
}

TEST(FreeVars, Examples) {
  EXPECT_EQ(free_vars(Formula::forall("x", Formula::in(v("x"), v("A")))), (VarSet{"A"}));
  EXPECT_EQ(free_vars(F("x in A -> exists x (x in B)")), (VarSet{"x", "A", "B"}));
  EXPECT_TRUE(free_vars(Term::empty()).empty());
  EXPECT_EQ(all_vars(F("forall y (y in A)")), (VarSet{"y", "A"}));
}

TEST(FreshVar, NumericSuffixScheme) {
  EXPECT_EQ(fresh_var("x", {}), "x");
  EXPECT_EQ(fresh_var("x", {"x"}), "x0");
  EXPECT_EQ(fresh_var("x", {"x", "x0"}), "x1");
  EXPECT_EQ(fresh_var("x", {"x0"}), "x");
}

TEST(FreshVar, NeverInAvoidSet) {
  VarSet avoid;
  for (int i = 0; i < 50; ++i) {
    auto name = fresh_var("y", avoid);
    EXPECT_FALSE(avoid.contains(name));
    avoid.insert(name);
  }
}

TEST(Substitute, Examples) {
  EXPECT_EQ(substitute(F("x in A"), "x", T("B union C")), F("B union C in A"));
  EXPECT_EQ(substitute(F("forall x (x in A)"), "x", v("B")), F("forall x (x in A)"));
  Formula renamed = substitute(Formula::exists("y", Formula::in(v("x"), v("y"))), "x", v("y"));
  EXPECT_EQ(renamed, Formula::exists("y0", Formula::in(v("y"), v("y0"))));
  expect_substitution_lemma(Formula::exists("y", Formula::in(v("x"), v("y"))), "x", v("y"));
}

TEST(Substitute, RandomSubstitutionLemma) {
  FormulaGen gen(7, {"A", "x"}, {"x", "y"});
  for (int i = 0; i < 60; ++i) {
    Formula f = gen.formula(3);
    Term t = gen.pick(2) ? Term::var("y") : Term::set_union(Term::var("y"), Term::var("A"));
    expect_substitution_lemma(f, "x", t);
  }
}

TEST(Substitute, IdentityAndFreshness) {
  FormulaGen gen(11);
  for (int i = 0; i < 300; ++i) {
    Formula f = gen.formula(5);
    EXPECT_TRUE(alpha_eq(substitute(f, "A", v("A")), f));
    Term t = gen.term(2);
    VarSet expected = free_vars(f);
    expected.erase("A");
    auto tv = free_vars(t);
    VarSet bound = free_vars(f).contains("A") ? tv : VarSet{};
    expected.insert(bound.begin(), bound.end());
    for (const auto& name : free_vars(substitute(f, "A", t))) EXPECT_TRUE(expected.contains(name)) << name;
  }
}

TEST(AlphaEq, Examples) {
  EXPECT_TRUE(alpha_eq(F("forall x (x in A)"), F("forall y (y in A)")));
  EXPECT_FALSE(alpha_eq(F("forall x (x in A)"), F("forall x (x in B)")));
  EXPECT_FALSE(alpha_eq(F("x in A"), F("y in A")));
  EXPECT_FALSE(alpha_eq(F("forall x forall y (x in y)"), F("forall y forall x (x in y)")));
  EXPECT_TRUE(alpha_eq(F("forall x exists y (x in y)"), F("forall y exists x (y in x)")));
  // A binder must not capture a free name of the other side.
  EXPECT_FALSE(alpha_eq(F("forall x (x in y)"), F("forall y (y in y)")));
}

TEST(AlphaEq, EquivalenceRelationOnCorpus) {
  FormulaGen gen(5, {"A"}, {"x", "y"});
  std::vector<Formula> corpus;
  for (int i = 0; i < 40; ++i) {
    Formula f = gen.formula(2);
    corpus.push_back(f);
    // A renamed copy must join f's class.
    if (f.is_quantifier()) {
      VarName fresh = fresh_var("w", all_vars(f));
      corpus.push_back(Formula::quantifier(f.kind(), fresh, substitute(f.body(), f.bound_var(), Term::var(fresh))));
    }
  }
  for (const auto& a : corpus) {
    EXPECT_TRUE(alpha_eq(a, a));
    for (const auto& b : corpus) {
      EXPECT_EQ(alpha_eq(a, b), alpha_eq(b, a));
      if (!alpha_eq(a, b)) continue;
      for (const auto& c : corpus) {
        if (alpha_eq(b, c)) EXPECT_TRUE(alpha_eq(a, c));
      }
    }
  }
}

TEST(Paths, SubformulaAt) {
  Formula f = F("x in A & y in B");
  EXPECT_EQ(std::get<Formula>(subformula_at(f, {1})), F("y in B"));
  EXPECT_EQ(std::get<Formula>(subformula_at(f, {})), f);
  EXPECT_EQ(std::get<Term>(subformula_at(F("x in A"), {1})), v("A"));
  EXPECT_EQ(code_of([] { subformula_at(F("x in A"), {2}); }), ErrorCode::InvalidPath);
}

TEST(Paths, ReplaceAt) {
  Formula pq = F("x in A & y in B");
  EXPECT_EQ(replace_at(pq, {0}, F("z in C")), F("z in C & y in B"));
  EXPECT_EQ(replace_at(pq, {}, F("z in C")), F("z in C"));
  EXPECT_EQ(code_of([&] { replace_at(F("x in A"), {0}, pq); }), ErrorCode::CategoryMismatch);
  EXPECT_EQ(code_of([&] { replace_at(pq, {0, 0}, pq); }), ErrorCode::CategoryMismatch);
  EXPECT_EQ(code_of([&] { replace_at(pq, {3}, pq); }), ErrorCode::InvalidPath);
}

TEST(Paths, ReplaceWithSelfIsIdentity) {
  FormulaGen gen(3);
  for (int i = 0; i < 100; ++i) {
    Formula f = gen.formula(4);
    // Walk a random path and put the node back.
    Path p;
    Subtree node = f;
    while (true) {
      std::size_t arity = std::holds_alternative<Formula>(node) ? std::get<Formula>(node).arity()
                                                                 : std::get<Term>(node).arity();
      if (arity == 0 || gen.pick(3) == 0) break;
      p.push_back(static_cast<std::size_t>(gen.pick(static_cast<int>(arity))));
      node = subformula_at(f, p);
    }
    EXPECT_EQ(replace_at(f, p, subformula_at(f, p)), f) << path_to_string(p);
  }
}

TEST(Paths, StringForm) {
  EXPECT_EQ(path_to_string({0, 1, 0}), "0.1.0");
  EXPECT_EQ(path_from_string("0.1.0"), (Path{0, 1, 0}));
  EXPECT_TRUE(path_from_string("").empty());
  EXPECT_EQ(code_of([] { path_from_string("0..1"); }), ErrorCode::InvalidPath);
}

TEST(Formula, ContainsContradiction) {
  EXPECT_TRUE(contains_contradiction(F("x in A -> contra")));
  EXPECT_FALSE(contains_contradiction(F("x in A -> x in A")));
}
