#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/testutil.hpp"

using namespace pch;
using namespace pchtest;

namespace {

int count_conjuncts(const FormulaPtr& f) {
  if (f->kind == Formula::Kind::And)
    return count_conjuncts(f->left) + count_conjuncts(f->right);
  return 1;
}

}  // namespace

TEST_CASE("sat3 reduction shape and endpoints") {
  // (a | !b) becomes P(A=1) > 0 | ~(P(B=1) > 0) with 0 as a contradiction.
  Cnf cnf{2, {{1, -2}}};
  auto red = reduce_sat3_to_l1(cnf);
  CHECK(classify_fragment(red.formula) ==
        FragmentTag{1, FragmentTag::Terms::Base, false});
  REQUIRE(red.formula->kind == Formula::Kind::Or);
  CHECK(red.formula->left->kind == Formula::Kind::Gt);
  CHECK(red.formula->right->kind == Formula::Kind::Not);
  CHECK(check_sat_l1(red.formula, red.sig, Bounds{}).kind == Verdict::Kind::Sat);

  // Empty CNF is satisfiable outright.
  auto empty = reduce_sat3_to_l1(Cnf{0, {}});
  CHECK(check_sat_l1(empty.formula, empty.sig, Bounds{}).kind == Verdict::Kind::Sat);

  // (a) & (!a) is unsatisfiable.
  auto contra = reduce_sat3_to_l1(Cnf{1, {{1}, {-1}}});
  CHECK(check_sat_l1(contra.formula, contra.sig, Bounds{}).kind ==
        Verdict::Kind::UnsatWithinBounds);
}

TEST_CASE("emajsat reduction shape") {
  // n=1, phi = y1: sum_y1 P(Y1=y1) >= P(T).
  EMajSatInstance inst{1, p_var(1)};
  auto red = reduce_emajsat_to_l1(inst);
  CHECK(print_formula(red.formula) == "sum y1 { P(Y1=y1) } >= P(T)");
  CHECK(classify_fragment(red.formula) == FragmentTag{1, FragmentTag::Terms::Base, true});
  CHECK(check_sat_l1(red.formula, red.sig, Bounds{}).kind == Verdict::Kind::Sat);

  // n=1, phi = y1 & !y1: zero satisfying assignments < 1.
  EMajSatInstance contra{1, p_and(p_var(1), p_not(p_var(1)))};
  auto red2 = reduce_emajsat_to_l1(contra);
  CHECK(check_sat_l1(red2.formula, red2.sig, Bounds{}).kind ==
        Verdict::Kind::UnsatWithinBounds);

  // n=2, phi = x1 & y1: the x1=0 branch counts 2 >= 2^1.
  EMajSatInstance two{2, p_and(p_var(0), p_var(2))};
  auto red3 = reduce_emajsat_to_l1(two);
  CHECK(emajsat_truth(two));
  CHECK(check_sat_l1(red3.formula, red3.sig, Bounds{}).kind == Verdict::Kind::Sat);
}

TEST_CASE("emajsat reduction agrees with brute force on the enumerated family") {
  auto family = emajsat_family(2);
  CHECK(family.size() >= 200);
  int checked = 0;
  for (const auto& inst : family) {
    auto red = reduce_emajsat_to_l1(inst);
    Verdict v = check_sat_l1(red.formula, red.sig, Bounds{});
    REQUIRE(v.kind != Verdict::Kind::Unknown);
    CHECK((v.kind == Verdict::Kind::Sat) == emajsat_truth(inst));
    ++checked;
  }
  CHECK(checked >= 200);
}

TEST_CASE("causal-order gadget emits c*(n-1) unit equations") {
  auto g2 = encode_causal_order({"X1", "X2"}, 2, "C", false);
  CHECK(g2.equations.size() == 2);
  CHECK(print_formula(g2.equations[0]) == "P([C=1, X1=0] X2=0) = 1");
  CHECK(print_formula(g2.equations[1]) == "P([C=1, X1=1] X2=1) = 1");

  CHECK(encode_causal_order({"X1"}, 2, "C", false).equations.empty());

  auto g3 = encode_causal_order({"A", "B", "D"}, 2, "C", false);
  CHECK(g3.equations.size() == 4);

  // A model violating the pinned order falsifies at least one equation: take
  // B := constant 0 while A is ordered after B.
  Signature sig = make_sig({"A", "B", "D", "C"});
  Scm scm;
  scm.sig = make_sig({"B", "A", "D", "C"});
  scm.exo_vars.emplace_back("U", 1);
  scm.exo_dist.push_back({{0}, Rat(1)});
  for (int i = 0; i < 4; ++i) {
    Mechanism m;
    m.table = {0};
    scm.mechanisms.push_back(std::move(m));
  }
  scm.check();
  bool all_hold = true;
  for (const auto& eq : g3.equations)
    if (eval_formula(scm, eq) != Truth::True) all_hold = false;
  CHECK_FALSE(all_hold);
}

TEST_CASE("qbf reduction shapes") {
  // Single existential variable: no gadget, k = 0, P([] psi') = 1.
  Qbf trivial;
  trivial.prefix = {{false, 1}};
  trivial.matrix = {1, {{1}}};
  auto red = reduce_qbf_to_l2(trivial);
  CHECK(red.sig.endogenous == std::vector<std::string>{"V1"});
  CHECK(print_formula(red.formula) == "P([] V1=1) = 1");
  CHECK(check_sat_causal(red.formula, red.sig, Bounds{}).kind == Verdict::Kind::Sat);

  // Two universal variables: right side 2^2 as a constant by default,
  // as a P(T) sum chain with unary weights.
  Qbf two_forall;
  two_forall.prefix = {{true, 1}, {true, 2}};
  two_forall.matrix = {2, {{1, 2}}};
  auto by_const = reduce_qbf_to_l2(two_forall, false);
  CHECK(print_formula(by_const.formula).find("= 4") != std::string::npos);
  auto by_unary = reduce_qbf_to_l2(two_forall, true);
  CHECK(print_formula(by_unary.formula).find("sum w1 { sum w2 { P(T) } }") != std::string::npos);
  CHECK(classify_fragment(by_unary.formula).terms == FragmentTag::Terms::Base);

  // Both encodings agree with brute force (here: false).
  CHECK_FALSE(qbf_truth(two_forall));
  CHECK(check_sat_causal(by_const.formula, by_const.sig, Bounds{}).kind ==
        Verdict::Kind::UnsatWithinBounds);
  CHECK(check_sat_causal(by_unary.formula, by_unary.sig, Bounds{}).kind ==
        Verdict::Kind::UnsatWithinBounds);
}

TEST_CASE("epr reduction constraint-family counts") {
  // One unary relation with two occurrences: 1x relation functionality,
  // 2x occurrence functionality, 2x consistency, |exists| x independence,
  // 1x main condition.
  auto s = parse_epr("exists x . forall y . (R(x) & !R(y))");
  auto red = reduce_epr_to_l3(s);
  CHECK(count_conjuncts(red.formula) == 1 + 2 + 2 + 1 + 1);
  CHECK(classify_fragment(red.formula).layer == 3);
  CHECK(red.sig.endogenous ==
        std::vector<std::string>{"X_x", "Y_y", "Z_R_1", "R_R", "O_R_1", "O_R_2"});

  auto no_exists = parse_epr("forall y . R(y)");
  CHECK(count_conjuncts(reduce_epr_to_l3(no_exists).formula) == 1 + 1 + 1 + 0 + 1);
}

TEST_CASE("epr reduction rejects repeated occurrence arguments and bad arities") {
  CHECK_THROWS_AS(reduce_epr_to_l3(parse_epr("exists x . R(x, x)")), PchError);
  CHECK_THROWS_AS(reduce_epr_to_l3(parse_epr("exists x . forall y . (R(x) & R(x, y))")),
                  PchError);
  CHECK_THROWS_AS(reduce_epr_to_l3(parse_epr("exists x . R(z)")), PchError);
}

TEST_CASE("reduction outputs validate and advertise their fragments") {
  auto em = reduce_emajsat_to_l1(EMajSatInstance{1, p_var(1)});
  CHECK(classify_fragment(em.formula) == FragmentTag{1, FragmentTag::Terms::Base, true});

  Qbf q;
  q.prefix = {{true, 1}, {false, 2}};
  q.matrix = {2, {{2, -1}}};
  CHECK(classify_fragment(reduce_qbf_to_l2(q).formula).layer == 2);
  CHECK(classify_fragment(reduce_qbf_to_l2(q, true).formula) ==
        FragmentTag{2, FragmentTag::Terms::Base, true});

  auto ep = reduce_epr_to_l3(parse_epr("exists x . forall y . (R(x) | !R(y))"), true);
  CHECK(classify_fragment(ep.formula) == FragmentTag{3, FragmentTag::Terms::Base, true});
}

TEST_CASE("reduction output size is polynomial in the source size") {
  // QBF: linear in clauses + quadratic-ish in variables (order gadget).
  for (int n = 1; n <= 3; ++n) {
    Qbf q;
    for (int v = 1; v <= n; ++v) q.prefix.emplace_back(v % 2 == 0, v);
    q.matrix.num_vars = n;
    for (int v = 1; v <= n; ++v) q.matrix.clauses.push_back({v});
    long nodes = formula_node_count(reduce_qbf_to_l2(q).formula);
    CHECK(nodes <= 40L * n * n + 40);
  }
  // EPR: bounded by a fixed polynomial in (vars + occurrences).
  auto s = parse_epr("exists x . forall y . (R(x) & !R(y))");
  long n_endo = 6;
  CHECK(formula_node_count(reduce_epr_to_l3(s).formula) <= 30 * n_endo * n_endo);
}

TEST_CASE("expand_sums golden shapes and value preservation") {
  Signature sig = make_sig({"X", "Y"});
  auto f = parse_formula_body("sum x { P(Y=1 & X=x) } <= 1", sig);
  auto expanded = expand_sums(f, 2);
  CHECK(print_formula(expanded) == "P(Y=1 & X=0) + P(Y=1 & X=1) <= 1");

  // Sum-free input is untouched.
  Signature sig2 = make_sig({"X", "Y"});
  auto plain = parse_formula_body("P(X=1) <= P(Y=1)", sig2);
  CHECK(structurally_equal(expand_sums(plain, 2), plain));

  // Nested sums: four addends, value preserved on the treatment fixture.
  Scm appb = load_appb();
  Signature asig = appb.sig;
  auto nested = parse_formula_body("sum x { sum y { P(X=x & Y=y) } } = 1", asig);
  auto nested_exp = expand_sums(nested, 2);
  CHECK(formula_node_count(nested_exp) > formula_node_count(nested));
  CHECK(eval_formula(appb, nested) == eval_formula(appb, nested_exp));

  // Random probes: expansion never changes evaluation.
  Rng rng(97);
  for (int i = 0; i < 100; ++i) {
    Signature s = make_sig({"V1", "V2"});
    auto g = random_formula(rng, s.endogenous, 2, 2, false, 2);
    validate(g, s);
    auto ge = expand_sums(g, 2);
    Scm scm = random_scm(rng, 2);
    CHECK(eval_formula(scm, g) == eval_formula(scm, ge));
  }
}

TEST_CASE("expand_sums enforces its size cap") {
  Signature sig = make_sig({"X"});
  auto f = parse_formula_body(
      "sum a { sum b { sum c { sum d { sum e { P(X=1) } } } } } <= 32", sig);
  CHECK_THROWS_AS(expand_sums(f, 2, 10), PchError);
}

TEST_CASE("eliminate_conditionals golden shape") {
  Signature sig = make_sig({"A", "B"});
  auto f = parse_formula_body("P(A=1 | B=1) <= 1/2", sig);
  auto elim = eliminate_conditionals(f, sig);
  REQUIRE(elim.changed);
  CHECK(elim.sig.unknowns == std::vector<std::string>{"z0"});
  CHECK(print_formula(elim.formula) ==
        "z0 <= 1/2 && P(A=1 & B=1) = z0 * P(B=1) && P(B=1) != 0");

  // Conditional-free input: unchanged, no unknowns.
  Signature sig2 = make_sig({"A"});
  auto plain = parse_formula_body("P(A=1) <= 1", sig2);
  auto elim2 = eliminate_conditionals(plain, sig2);
  CHECK_FALSE(elim2.changed);
  CHECK(structurally_equal(elim2.formula, plain));

  // Two occurrences of the same conditional get two fresh unknowns.
  Signature sig3 = make_sig({"A", "B"});
  auto twice = parse_formula_body("P(A=1 | B=1) <= P(A=1 | B=1)", sig3);
  auto elim3 = eliminate_conditionals(twice, sig3);
  CHECK(elim3.sig.unknowns.size() == 2);
}

TEST_CASE("eliminate_conditionals is equisatisfiable under bounded search") {
  // For any fixed model the unknown is forced to num/den, so comparing the
  // two sides model-by-model is a complete check at desk scale.
  Rng rng(103);
  Signature sig = make_sig({"A", "B"});
  for (int i = 0; i < 60; ++i) {
    auto cond = t_cond(random_event(rng, sig.endogenous, {}, 2, 2),
                       random_event(rng, sig.endogenous, {}, 2, 2));
    auto f = f_cmp(pick(rng, 2) ? Formula::Kind::Le : Formula::Kind::Ge, cond,
                   t_const(Rat(pick(rng, 5), 4)));
    Signature s = sig;
    validate(f, s);
    auto elim = eliminate_conditionals(f, s);
    REQUIRE(elim.changed);

    for (int k = 0; k < 8; ++k) {
      Scm scm = (k < 4) ? scm_from_distribution(sig, random_distribution(rng, 4))
                        : rename_vars(random_scm(rng, 2), {"A", "B"});
      bool original_true = eval_formula(scm, f) == Truth::True;

      Valuation den = eval_term(scm, t_prob(cond->condition));
      bool transformed_true = false;
      if (den.defined && den.value != 0) {
        Rat num = eval_term(scm, t_prob(ev_and(cond->event, cond->condition))).value;
        auto substituted = substitute_unknown(elim.formula, elim.sig.unknowns[0], num / den.value);
        transformed_true = eval_formula(scm, substituted) == Truth::True;
      }
      CHECK(original_true == transformed_true);
    }
  }
}

TEST_CASE("source-format parsers") {
  SUBCASE("dimacs") {
    Cnf cnf = parse_dimacs("c comment\np cnf 3 2\n1 -2 0\n3 0\n");
    CHECK(cnf.num_vars == 3);
    REQUIRE(cnf.clauses.size() == 2);
    CHECK(cnf.clauses[0] == std::vector<int>{1, -2});
    CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\n2 0\n"), PchError);
    CHECK_THROWS_AS(parse_dimacs("1 0\n"), PchError);
  }
  SUBCASE("emajsat split header") {
    auto inst = parse_emajsat_dimacs("p cnf 4 1\nx 1 2 0\n3 -4 0\n");
    CHECK(inst.n == 2);
    CHECK_THROWS_AS(parse_emajsat_dimacs("p cnf 4 1\n3 -4 0\n"), PchError);
    CHECK_THROWS_AS(parse_emajsat_dimacs("p cnf 3 1\nx 1 0\n2 0\n"), PchError);
  }
  SUBCASE("qdimacs with implicit outer existentials") {
    Qbf q = parse_qdimacs("p cnf 3 1\na 2 0\ne 3 0\n1 2 3 0\n");
    REQUIRE(q.prefix.size() == 3);
    CHECK(q.prefix[0] == std::pair<bool, int>{false, 1});
    CHECK(q.prefix[1] == std::pair<bool, int>{true, 2});
  }
  SUBCASE("epr grammar") {
    auto s = parse_epr("exists x1 x2 . forall y . (R(x1, y) | !(x2 = y))");
    CHECK(s.exists_vars == std::vector<std::string>{"x1", "x2"});
    CHECK(s.forall_vars == std::vector<std::string>{"y"});
    REQUIRE(s.matrix->kind == EprForm::Kind::Or);
    CHECK_THROWS_AS(parse_epr("exists x ."), PchError);
    CHECK_THROWS_AS(parse_epr("exists x . R(x) trailing"), PchError);
  }
}
