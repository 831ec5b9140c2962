#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "support/testutil.hpp"

using namespace pch;
using namespace pchtest;

namespace {

FormulaPtr parse_body(const std::string& text, Signature& sig) {
  return parse_formula_body(text, sig);
}

TermPtr parse_term_text(const std::string& text, Signature sig) {
  auto f = parse_formula_body(text + " <= 1", sig);
  return f->tl;
}

}  // namespace

TEST_CASE("determine_values matches the fixture world table") {
  Scm appb = load_appb();
  CHECK(determine_values(appb, {1, 1, 0}) == std::vector<int>{0, 1, 0});
  CHECK(determine_values(appb, {0, 0, 1}) == std::vector<int>{1, 0, 1});
  CHECK(determine_values(appb, {0, 0, 0}) == std::vector<int>{1, 0, 0});

  Scm m = load_sec3_m();
  CHECK(determine_values(m, {0, 0}) == std::vector<int>{0, 0});
}

TEST_CASE("apply_intervention replaces mechanisms by constants") {
  Scm appb = load_appb();
  Scm out = apply_intervention(appb, {{"X", ValueRef::constant(1)}});

  // Post-intervention table P([X=1] z, y): 0.45, 0.30, 0.10, 0.15.
  auto p = [&](int z, int y) {
    return eval_term(out, t_prob(ev_and(ev_atom("Z", z), ev_atom("Y", y)))).value;
  };
  CHECK(p(0, 0) == Rat(45, 100));
  CHECK(p(0, 1) == Rat(30, 100));
  CHECK(p(1, 0) == Rat(10, 100));
  CHECK(p(1, 1) == Rat(15, 100));

  // Empty intervention: identical observational distribution.
  Scm same = apply_intervention(appb, {});
  for (int z : {0, 1})
    for (int x : {0, 1})
      for (int y : {0, 1}) {
        auto e = ev_and(ev_and(ev_atom("Z", z), ev_atom("X", x)), ev_atom("Y", y));
        CHECK(eval_term(same, t_prob(e)).value == eval_term(appb, t_prob(e)).value);
      }

  // Section 3: P_{M'}([X1=1] X2=1) = 3/4.
  Scm mp = apply_intervention(load_sec3_mprime(), {{"X1", ValueRef::constant(1)}});
  CHECK(eval_term(mp, t_prob(ev_atom("X2", 1))).value == Rat(3, 4));
}

TEST_CASE("satisfies implements the recursive satisfaction relation") {
  Scm appb = load_appb();
  auto cf = ev_post_int({{"X", ValueRef::constant(1)}}, ev_atom("Y", 1));
  CHECK(satisfies(appb, {0, 0, 0}, cf));
  CHECK(satisfies(appb, {0, 0, 0}, ev_and(ev_atom("X", 0), ev_atom("Y", 0))));
  CHECK_FALSE(satisfies(appb, {0, 0, 0}, ev_and(ev_atom("X", 0), ev_not(ev_atom("X", 0)))));
}

TEST_CASE("eval_term reproduces the fixture golden values") {
  Scm appb = load_appb();
  Signature sig = appb.sig;

  auto v = [&](const std::string& t) { return eval_term(appb, parse_term_text(t, sig)); };
  CHECK(v("P(Y=1 | X=1)").value == Rat(2, 5));
  CHECK(v("P(Y=1 | X=0)").value == Rat(2, 5));
  CHECK(v("P([X=1] Y=1 & (X=0 & Y=0))").value == Rat(3, 20));
  CHECK(v("P([X=1] Y=1 | X=0 & Y=0)").value == Rat(5, 8));
  CHECK(v("P(T)").value == 1);
  CHECK(v("sum x { P([X=x] Y=1) }").value == Rat(17, 20));
  CHECK(v("sum y { P([] T) }").value == 2);
}

TEST_CASE("the footnote formula's term is zero on every model") {
  Signature sig = make_sig({"X", "Y"});
  auto term = parse_term_text(
      "sum x { sum y { P(X=x & (!(X=x) | Y=y) & (!(X=x) | !(Y=y))) } }", sig);
  Scm appb_like = rename_vars(load_sec3_m(), {"X", "Y"});
  CHECK(eval_term(appb_like, term).value == 0);
  Rng rng(5);
  for (int i = 0; i < 30; ++i) {
    Scm scm = rename_vars(random_scm(rng, 2), {"X", "Y"});
    CHECK(eval_term(scm, term).value == 0);
  }
}

TEST_CASE("eval_formula is three-valued with strong Kleene connectives") {
  Scm m = load_sec3_m();
  Scm mp = load_sec3_mprime();
  Signature sig = m.sig;

  auto phi = parse_body("P([X1=1] X2=1) = P([X1=1] X2=0)", sig);
  CHECK(eval_formula(m, phi) == Truth::True);
  CHECK(eval_formula(mp, phi) == Truth::False);

  Scm appb = load_appb();
  Signature asig = appb.sig;
  CHECK(eval_formula(appb, parse_body("P([X=1] Y=1) > P([X=0] Y=1)", asig)) == Truth::True);

  // Conditioning on a zero-probability event is undefined, and undefinedness
  // propagates through comparisons; Kleene tables still decide when possible.
  auto undef = parse_body("P(X=1 | X=0 & X=1) = 0", asig);
  CHECK(eval_formula(appb, undef) == Truth::Undefined);
  auto rescued = parse_body("P(T) = 1 || P(X=1 | X=0 & X=1) = 0", asig);
  CHECK(eval_formula(appb, rescued) == Truth::True);
  auto doomed = parse_body("P(T) = 0 && P(X=1 | X=0 & X=1) = 0", asig);
  CHECK(eval_formula(appb, doomed) == Truth::False);
  auto notu = parse_body("~(P(X=1 | X=0 & X=1) = 0)", asig);
  CHECK(eval_formula(appb, notu) == Truth::Undefined);
}

TEST_CASE("normalization and monotonicity invariants on random models") {
  Rng rng(13);
  for (int i = 0; i < 40; ++i) {
    int n = 2 + pick(rng, 2);
    Scm scm = random_scm(rng, n);
    // Sum over all full assignments is exactly one.
    Rat total = 0;
    long cells = 1;
    for (int q = 0; q < n; ++q) cells *= 2;
    for (long cell = 0; cell < cells; ++cell) {
      EventPtr e;
      for (int q = 0; q < n; ++q) {
        int bit = (cell >> (n - 1 - q)) & 1;
        auto atom = ev_atom(scm.sig.endogenous[q], bit);
        e = e ? ev_and(e, atom) : atom;
      }
      total += eval_term(scm, t_prob(e)).value;
    }
    CHECK(total == 1);

    // P(d1 & d2) <= P(d1).
    auto d1 = random_event(rng, scm.sig.endogenous, {}, 2, 2);
    auto d2 = random_event(rng, scm.sig.endogenous, {}, 2, 2);
    CHECK(eval_term(scm, t_prob(ev_and(d1, d2))).value <= eval_term(scm, t_prob(d1)).value);
  }
}

TEST_CASE("intervention idempotence") {
  Rng rng(17);
  for (int i = 0; i < 25; ++i) {
    Scm scm = random_scm(rng, 3);
    Intervention alpha{{scm.sig.endogenous[pick(rng, 3)], ValueRef::constant(pick(rng, 2))}};
    Scm once = apply_intervention(scm, alpha);
    Scm twice = apply_intervention(once, alpha);
    auto probe = t_prob(random_event(rng, scm.sig.endogenous, {}, 2, 3));
    CHECK(eval_term(once, probe) == eval_term(twice, probe));
  }
}

TEST_CASE("observational equivalence of the section-3 pair") {
  Scm m = load_sec3_m();
  Scm mp = load_sec3_mprime();
  for (int a : {0, 1})
    for (int b : {0, 1}) {
      auto e = ev_and(ev_atom("X1", a), ev_atom("X2", b));
      CHECK(eval_term(m, t_prob(e)).value == eval_term(mp, t_prob(e)).value);
      CHECK(eval_term(m, t_prob(e)).value == Rat(1, 4));
    }
  Scm m_do = apply_intervention(m, {{"X1", ValueRef::constant(1)}});
  Scm mp_do = apply_intervention(mp, {{"X1", ValueRef::constant(1)}});
  CHECK(eval_term(m_do, t_prob(ev_atom("X2", 1))).value == Rat(1, 2));
  CHECK(eval_term(mp_do, t_prob(ev_atom("X2", 1))).value == Rat(3, 4));
}

TEST_CASE("algorithm-1 sums match eval_term on the treatment fixture") {
  Scm appb = load_appb();
  Signature sig = appb.sig;
  auto f = parse_body("sum x { P([X=x] Y=1) } <= sum y { P([] T) }", sig);
  auto values = eval_l2_sums_by_interventions(appb, f);
  CHECK(values.at(f->tl.get()) == Rat(17, 20));
  CHECK(values.at(f->tr.get()) == 2);
}

TEST_CASE("algorithm-1 path agrees with eval_term on random L2 formulas") {
  Rng rng(29);
  for (int i = 0; i < 120; ++i) {
    int n = 2 + pick(rng, 2);
    Scm scm = random_scm(rng, n);
    TermPtr a = random_l2_sum_term(rng, scm.sig.endogenous, 2, 2);
    TermPtr b = random_l2_sum_term(rng, scm.sig.endogenous, 2, 2);
    auto f = f_le(a, b);
    Signature sig = scm.sig;
    validate(f, sig);
    auto values = eval_l2_sums_by_interventions(scm, f);
    CHECK(values.at(a.get()) == eval_term(scm, a).value);
    CHECK(values.at(b.get()) == eval_term(scm, b).value);
  }
}

TEST_CASE("algorithm-1 path agreement holds on ternary domains too") {
  Rng rng(37);
  for (int i = 0; i < 40; ++i) {
    Scm scm = random_scm(rng, 2, 3);
    TermPtr a = random_l2_sum_term(rng, scm.sig.endogenous, 3, 2);
    auto f = f_le(a, t_const(Rat(9)));
    Signature sig = scm.sig;
    validate(f, sig);
    auto values = eval_l2_sums_by_interventions(scm, f);
    CHECK(values.at(a.get()) == eval_term(scm, a).value);
  }
}

TEST_CASE("algorithm-1 evaluates the QBF-reduction sum to 2^k on its witness") {
  // forall y exists x (x <-> y): the reduction's main sum reaches 2^1 on the
  // witness model built by the solver.
  Qbf qbf;
  qbf.prefix = {{true, 1}, {false, 2}};
  qbf.matrix = {2, {{2, -1}, {-2, 1}}};
  auto red = reduce_qbf_to_l2(qbf);
  Verdict v = check_sat_causal(red.formula, red.sig, Bounds{});
  REQUIRE(v.kind == Verdict::Kind::Sat);
  auto values = eval_l2_sums_by_interventions(*v.witness, red.formula);
  // The main equation's left side is the only Sum term in the output.
  TermPtr sum_node;
  std::function<void(const FormulaPtr&)> find = [&](const FormulaPtr& f) {
    if (f->kind == Formula::Kind::And) {
      find(f->left);
      find(f->right);
      return;
    }
    if (f->tl && f->tl->kind == Term::Kind::Sum) sum_node = f->tl;
    if (f->tr && f->tr->kind == Term::Kind::Sum) sum_node = f->tr;
  };
  find(red.formula);
  REQUIRE(sum_node != nullptr);
  CHECK(values.at(sum_node.get()) == 2);
  CHECK(eval_term(*v.witness, sum_node).value == 2);
}

TEST_CASE("algorithm-1 path rejects nested interventions") {
  Signature sig = make_sig({"X", "Y"});
  auto counterfactual =
      ev_and(ev_post_int({{"X", ValueRef::constant(1)}}, ev_atom("Y", 1)),
             ev_post_int({{"X", ValueRef::constant(0)}}, ev_atom("Y", 0)));
  auto f = f_le(t_prob(counterfactual), t_prob(ev_true()));
  validate(f, sig);
  Scm scm = rename_vars(load_sec3_m(), {"X", "Y"});
  CHECK_THROWS_WITH_AS(eval_l2_sums_by_interventions(scm, f),
                       doctest::Contains("FragmentError"), PchError);
}
