#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/testutil.hpp"

using namespace pch;
using namespace pchtest;

TEST_CASE("signature invariants") {
  Signature sig = make_sig({"X", "Y"});
  CHECK_NOTHROW(sig.check());

  Signature dup = make_sig({"X", "X"});
  CHECK_THROWS_AS(dup.check(), PchError);

  Signature tiny = make_sig({"X"}, 1);
  CHECK_THROWS_AS(tiny.check(), PchError);

  Signature clash = make_sig({"X"});
  clash.dummies = {"X"};
  CHECK_THROWS_AS(clash.check(), PchError);
}

TEST_CASE("validate catches scoping and intervention errors") {
  Signature sig = make_sig({"X", "Y"});

  SUBCASE("bound dummy is fine") {
    auto f = f_le(t_sum("x", t_prob(ev_atom("X", ValueRef::of_dummy("x")))), t_prob(ev_true()));
    CHECK_NOTHROW(validate(f, sig));
    CHECK(sig.dummies == std::vector<std::string>{"x"});
  }
  SUBCASE("unbound dummy") {
    auto f = f_le(t_prob(ev_atom("X", ValueRef::of_dummy("x"))), t_prob(ev_true()));
    CHECK_THROWS_WITH_AS(validate(f, sig), doctest::Contains("UnboundDummy"), PchError);
  }
  SUBCASE("inconsistent intervention") {
    Intervention alpha{{"X", ValueRef::constant(1)}, {"X", ValueRef::constant(0)}};
    auto f = f_le(t_prob(ev_post_int(alpha, ev_atom("Y", 1))), t_prob(ev_true()));
    CHECK_THROWS_WITH_AS(validate(f, sig), doctest::Contains("InconsistentIntervention"),
                         PchError);
  }
  SUBCASE("repeated assignment with one value is consistent") {
    Intervention alpha{{"X", ValueRef::constant(1)}, {"X", ValueRef::constant(1)}};
    auto f = f_le(t_prob(ev_post_int(alpha, ev_atom("Y", 1))), t_prob(ev_true()));
    CHECK_NOTHROW(validate(f, sig));
  }
  SUBCASE("non propositional condition") {
    auto cond = ev_post_int({{"X", ValueRef::constant(1)}}, ev_atom("Y", 1));
    auto f = f_le(t_cond(ev_atom("Y", 1), cond), t_prob(ev_true()));
    CHECK_THROWS_WITH_AS(validate(f, sig), doctest::Contains("NonPropositionalCondition"),
                         PchError);
  }
  SUBCASE("unknown variable") {
    auto f = f_le(t_prob(ev_atom("Q", 1)), t_prob(ev_true()));
    CHECK_THROWS_WITH_AS(validate(f, sig), doctest::Contains("UnknownVariable"), PchError);
  }
  SUBCASE("value outside the domain") {
    auto f = f_le(t_prob(ev_atom("X", 2)), t_prob(ev_true()));
    CHECK_THROWS_AS(validate(f, sig), PchError);
  }
  SUBCASE("nested post-interventional body is rejected") {
    auto inner = ev_post_int({{"Y", ValueRef::constant(0)}}, ev_atom("Y", 0));
    auto f = f_le(t_prob(ev_post_int({{"X", ValueRef::constant(1)}}, inner)), t_prob(ev_true()));
    CHECK_THROWS_AS(validate(f, sig), PchError);
  }
}

TEST_CASE("classify_fragment on the reference shapes") {
  // P(X=1) <= P(Y=0): smallest grammar production.
  auto f1 = f_le(t_prob(ev_atom("X", 1)), t_prob(ev_atom("Y", 0)));
  CHECK(classify_fragment(f1) == FragmentTag{1, FragmentTag::Terms::Base, false});

  // QBF-reduction instance: sums over interventional primitives vs 2^k.
  Qbf qbf;
  qbf.prefix = {{true, 1}, {false, 2}};
  qbf.matrix.num_vars = 2;
  qbf.matrix.clauses = {{2, -1}, {-2, 1}};
  auto red = reduce_qbf_to_l2(qbf);
  CHECK(classify_fragment(red.formula) == FragmentTag{2, FragmentTag::Terms::Lin, true});

  // sum_y P([X=1]Y=1 & ![X=0]Y=1) <= P(T)*P(T): counterfactual plus product.
  auto counterfactual =
      ev_and(ev_post_int({{"X", ValueRef::constant(1)}}, ev_atom("Y", 1)),
             ev_not(ev_post_int({{"X", ValueRef::constant(0)}}, ev_atom("Y", 1))));
  auto f3 = f_le(t_sum("y", t_prob(counterfactual)), t_mul(t_prob(ev_true()), t_prob(ev_true())));
  CHECK(classify_fragment(f3) == FragmentTag{3, FragmentTag::Terms::Poly, true});
}

TEST_CASE("classify_fragment is monotone") {
  Rng rng(7);
  std::vector<std::string> vars{"X", "Y"};
  for (int i = 0; i < 200; ++i) {
    auto f = random_formula(rng, vars, 2, 2, false, 2);
    FragmentTag before = classify_fragment(f);
    auto harder = f_and(
        f, f_le(t_mul(t_prob(ev_atom("X", 1)), t_prob(ev_atom("Y", 1))), t_prob(ev_true())));
    FragmentTag after = classify_fragment(harder);
    CHECK(after.terms == FragmentTag::Terms::Poly);
    CHECK(after.layer >= before.layer);
    auto lifted =
        f_and(f, f_le(t_prob(ev_post_int({{"X", ValueRef::constant(0)}}, ev_atom("Y", 0))),
                      t_prob(ev_true())));
    CHECK(classify_fragment(lifted).layer >= 2);
    CHECK(classify_fragment(lifted).layer >= before.layer);
  }
}

TEST_CASE("desugar removes sugar, is idempotent, and preserves evaluation") {
  Rng rng(11);
  for (int i = 0; i < 120; ++i) {
    auto f = random_formula(rng, {"V1", "V2"}, 2, 2, false, 1);
    Signature s = make_sig({"V1", "V2"});
    validate(f, s);
    auto core = desugar(f);
    CHECK(is_desugared(core));
    CHECK(structurally_equal(desugar(core), core));  // idempotent
    for (int k = 0; k < 4; ++k) {
      Scm scm = random_scm(rng, 2);
      CHECK(eval_formula(scm, f) == eval_formula(scm, core));
    }
  }
}

TEST_CASE("desugar golden shapes") {
  auto a = t_prob(ev_atom("X", 1));
  auto b = t_prob(ev_atom("Y", 1));

  auto eq = desugar(f_eq(a, b));
  REQUIRE(eq->kind == Formula::Kind::And);
  CHECK(eq->left->kind == Formula::Kind::Le);
  CHECK(eq->right->kind == Formula::Kind::Le);
  CHECK(structurally_equal(eq->left->tl, a));
  CHECK(structurally_equal(eq->right->tl, b));

  auto lt = desugar(f_cmp(Formula::Kind::Lt, a, b));
  REQUIRE(lt->kind == Formula::Kind::Not);
  CHECK(structurally_equal(lt->left->tl, b));

  auto orf = desugar(f_or(f_le(a, b), f_le(b, a)));
  REQUIRE(orf->kind == Formula::Kind::Not);
  CHECK(orf->left->kind == Formula::Kind::And);
}

TEST_CASE("substitute_dummy follows t[v/x]") {
  auto t = t_prob(ev_and(ev_atom("Y", 1), ev_atom("X", ValueRef::of_dummy("x"))));
  CHECK(print_term(substitute_dummy(t, "x", 0)) == "P(Y=1 & X=0)");

  auto t2 = t_prob(ev_atom("Y", 1));
  CHECK(substitute_dummy(t2, "x", 0) == t2);  // x absent: shared node returned

  auto inner = t_sum("x", t_prob(ev_atom("X", ValueRef::of_dummy("x"))));
  CHECK(structurally_equal(substitute_dummy(inner, "x", 1), inner));  // shadowed

  auto t3 = t_prob(ev_post_int({{"X", ValueRef::of_dummy("x")}}, ev_atom("Y", 1)));
  CHECK(print_term(substitute_dummy(t3, "x", 1)) == "P([X=1] Y=1)");
}

TEST_CASE("substitute_dummy commutes for distinct dummies") {
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    auto ev = random_event(rng, {"X", "Y"}, {"x", "y"}, 2, 4);
    auto t = t_prob(ev);
    auto ab = substitute_dummy(substitute_dummy(t, "x", 0), "y", 1);
    auto ba = substitute_dummy(substitute_dummy(t, "y", 1), "x", 0);
    CHECK(structurally_equal(ab, ba));
  }
}

TEST_CASE("validate accepts grammar-generated formulas") {
  Rng rng(31);
  for (int layer : {1, 2, 3}) {
    for (int i = 0; i < 150; ++i) {
      auto f = random_formula(rng, {"X", "Y", "Z"}, 2, 3, true, layer);
      Signature sig = make_sig({"X", "Y", "Z"});
      CHECK_NOTHROW(validate(f, sig));
    }
  }
}
