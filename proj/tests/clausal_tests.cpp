#include <catch2/catch.hpp>

#include "lukabd/clausal.hpp"
#include "test_util.hpp"

using namespace lukabd;
using namespace testutil;

namespace {

SimpleClause SC(std::multiset<std::string> pos, std::multiset<std::string> neg) {
  return SimpleClause(std::move(pos), std::move(neg));
}

Theory theory_of(std::initializer_list<Formula> fs) {
  Theory t;
  for (const auto& f : fs) t.add(f);
  return t;
}

// Random SCA instance: a few clauses over vars, a few interval-term facts.
struct RandomSca {
  Theory theory;
  Formula obs;
};

RandomSca random_sca(std::mt19937_64& rng) {
  std::vector<std::string> vars{"a", "b", "c", "d"};
  std::uniform_int_distribution<int> nclauses(1, 4), nlits(1, 3), coin(0, 1),
      nterms(0, 2), reli(0, 3);
  std::uniform_int_distribution<std::size_t> vi(0, vars.size() - 1);
  Theory t;
  for (int i = 0, n = nclauses(rng); i < n; ++i) {
    std::multiset<std::string> pos, neg;
    for (int j = 0, m = nlits(rng); j < m; ++j)
      (coin(rng) ? pos : neg).insert(vars[vi(rng)]);
    if (pos.empty() && neg.empty()) pos.insert(vars[vi(rng)]);
    t.add(SC(pos, neg).to_formula());
  }
  for (int i = 0, n = nterms(rng); i < n; ++i)
    t.add(Formula::lit(IL(vars[vi(rng)], static_cast<Rel>(reli(rng)),
                          random_rat(rng, 6))));
  Formula obs;
  switch (coin(rng) * 2 + coin(rng)) {
    case 0: {  // simple clause
      std::multiset<std::string> pos{vars[vi(rng)]}, neg;
      if (coin(rng)) neg.insert(vars[vi(rng)]);
      obs = SC(pos, neg).to_formula();
      break;
    }
    case 1:  // interval literal
      obs = L(vars[vi(rng)], static_cast<Rel>(reli(rng)), random_rat(rng, 6));
      break;
    case 2:  // interval term
      obs = C(L(vars[vi(rng)], static_cast<Rel>(reli(rng)), random_rat(rng, 6)),
              L(vars[vi(rng)], static_cast<Rel>(reli(rng)), random_rat(rng, 6)));
      break;
    default:  // interval clause
      obs = D(L(vars[vi(rng)], static_cast<Rel>(reli(rng)), random_rat(rng, 6)),
              L(vars[vi(rng)], static_cast<Rel>(reli(rng)), random_rat(rng, 6)));
      break;
  }
  return {std::move(t), std::move(obs)};
}

}  // namespace

TEST_CASE("clause_to_linear images") {
  std::map<std::string, int> cols;
  auto c = clause_to_linear(SC({"p", "q"}, {"r"}), cols);
  // x_p + x_q + (1 - x_r) >= 1
  CHECK(c.rel == LinRel::Ge);
  CHECK(c.rhs == Rat(1));
  auto m = c.lhs.collected();
  CHECK(c.lhs.constant == Rat(1));
  CHECK(m.at(cols.at("p")) == Rat(1));
  CHECK(m.at(cols.at("q")) == Rat(1));
  CHECK(m.at(cols.at("r")) == Rat(-1));

  auto l = clause_to_linear(IL("p", Rel::Geq, Rat(1, 2)), cols);
  CHECK(l.rel == LinRel::Ge);
  CHECK(l.rhs == Rat(1, 2));

  // Unit clause pins its variable to one under the unit box.
  auto u = clause_to_linear(SC({"p"}, {}), cols);
  CHECK(u.rel == LinRel::Ge);
  CHECK(u.rhs == Rat(1));
  CHECK(u.lhs.collected().size() == 1);
}

TEST_CASE("sca_sat frozen cases") {
  // {p + q, (q <= 0)} forces p = 1.
  Theory t = theory_of({D(V("p"), V("q")), L("q", Rel::Leq, Rat(0))});
  auto r = sca_sat(t);
  REQUIRE(r.is_sat());
  CHECK(r.witness->at("p") == Rat(1));

  CHECK(sca_sat(theory_of({V("p"), Neg(V("p"))})).status == Status::Unsat);

  CHECK_THROWS_AS(sca_sat(theory_of({Formula::iff(V("p"), V("q"))})),
                  FragmentViolation);
}

TEST_CASE("sca systems never construct binaries") {
  auto t = ScaTheory::from(theory_of({D(V("p"), V("q")), L("q", Rel::Lt, Rat(1, 2))}));
  REQUIRE(t);
  ScaSystem s;
  t->emit(s);
  CHECK(s.sys.binaries().empty());
}

TEST_CASE("sca_entails frozen cases") {
  Theory t = theory_of({D(V("p"), V("q")), L("q", Rel::Leq, Rat(0))});
  CHECK(sca_entails(t, V("p")));

  Theory t2 = theory_of({D(V("p"), V("q"))});
  CHECK_FALSE(sca_entails(t2, V("p")));

  // The threshold chain entails its interval literal.
  Formula chain = D(D(D(V("c"), V("c")), V("c")), V("c"));
  CHECK(sca_entails(theory_of({chain}), L("c", Rel::Geq, Rat(1, 4))));
  CHECK_FALSE(sca_entails(theory_of({chain}), L("c", Rel::Gt, Rat(1, 4))));
}

TEST_CASE("sca agrees with the general engine on random instances") {
  std::mt19937_64 rng(424242);
  Engine e;
  int n = 0;
  for (int i = 0; i < 500; ++i) {
    RandomSca inst = random_sca(rng);
    auto sca = ScaTheory::from(inst.theory);
    REQUIRE(sca);
    auto obs = ScaObservation::from(inst.obs);
    REQUIRE(obs);

    bool fast_sat = sca_sat(*sca).is_sat();
    bool gen_sat = e.sat(inst.theory).is_sat();
    REQUIRE(fast_sat == gen_sat);

    bool fast_ent = sca_entails(*sca, nullptr, *obs);
    bool gen_ent = e.entails(inst.theory, inst.obs).is_entailed();
    REQUIRE(fast_ent == gen_ent);
    ++n;
  }
  CHECK(n == 500);
}

TEST_CASE("flp_sat frozen cases") {
  // <p -> q, 1>, <p, 1> forces q = 1.
  std::vector<FuzzyRule> prog;
  prog.emplace_back(SC({"q"}, {"p"}), Rat(1));
  prog.emplace_back(SC({"p"}, {}), Rat(1));
  auto r = flp_sat(prog);
  REQUIRE(r.is_sat());
  CHECK(r.witness->at("q") == Rat(1));

  std::vector<FuzzyRule> half{FuzzyRule(SC({"p"}, {}), Rat(1, 2))};
  auto r2 = flp_sat(half);
  REQUIRE(r2.is_sat());
  CHECK(r2.witness->at("p") == Rat(1, 2));

  std::vector<FuzzyRule> clash{FuzzyRule(SC({"p"}, {}), Rat(1, 2)),
                               FuzzyRule(SC({"p"}, {}), Rat(1))};
  CHECK(flp_sat(clash).status == Status::Unsat);

  CHECK_THROWS_AS(FuzzyRule(SC({"p"}, {}), Rat(0)), Error);
}

TEST_CASE("flp_sat agrees with the engine through definitional variables") {
  std::mt19937_64 rng(909090);
  std::vector<std::string> vars{"a", "b", "c"};
  std::uniform_int_distribution<int> nrules(1, 3), nlits(1, 2), coin(0, 1),
      deg_num(1, 4);
  std::uniform_int_distribution<std::size_t> vi(0, vars.size() - 1);
  Engine e;
  for (int iter = 0; iter < 120; ++iter) {
    std::vector<FuzzyRule> prog;
    Theory defs;
    int fresh = 0;
    for (int i = 0, n = nrules(rng); i < n; ++i) {
      std::multiset<std::string> pos, neg;
      for (int j = 0, m = nlits(rng); j < m; ++j)
        (coin(rng) ? pos : neg).insert(vars[vi(rng)]);
      if (pos.empty() && neg.empty()) pos.insert(vars[vi(rng)]);
      Rat deg(deg_num(rng), 4);
      SimpleClause kappa = SC(pos, neg);
      prog.emplace_back(kappa, deg);
      std::string d = "def" + std::to_string(fresh++);
      defs.add(Formula::iff(V(d), kappa.to_formula()));
      defs.add(L(d, Rel::Geq, deg));
      defs.add(L(d, Rel::Leq, deg));
    }
    CHECK(flp_sat(prog).is_sat() == e.sat(defs).is_sat());
  }
}

TEST_CASE("flp entailment of rules and terms") {
  std::vector<FuzzyRule> prog{FuzzyRule(SC({"p"}, {}), Rat(1, 2))};
  FlpObservation obs_rule;
  obs_rule.rule = FuzzyRule(SC({"p"}, {}), Rat(1, 2));
  CHECK(flp_entails(prog, nullptr, obs_rule));

  FlpObservation obs_wrong;
  obs_wrong.rule = FuzzyRule(SC({"p"}, {}), Rat(3, 4));
  CHECK_FALSE(flp_entails(prog, nullptr, obs_wrong));

  FlpObservation obs_term;
  obs_term.term = IntervalTerm({IL("p", Rel::Geq, Rat(1, 2))});
  CHECK(flp_entails(prog, nullptr, obs_term));
  obs_term.term = IntervalTerm({IL("p", Rel::Gt, Rat(1, 2))});
  CHECK_FALSE(flp_entails(prog, nullptr, obs_term));
}

TEST_CASE("cover-free detection") {
  Theory covering = theory_of({L("p", Rel::Leq, Rat(2, 3)), L("p", Rel::Geq, Rat(1, 4))});
  auto cf1 = CfTheory::from(covering);
  REQUIRE(cf1);
  CoveringPair pair;
  CHECK_FALSE(cover_free_check(*cf1, &pair));
  REQUIRE(pair);
  CHECK(pair->first.var == "p");

  Theory fine = theory_of({L("p", Rel::Geq, Rat(1, 2)), L("p", Rel::Leq, Rat(1, 4))});
  auto cf2 = CfTheory::from(fine);
  REQUIRE(cf2);
  CHECK(cover_free_check(*cf2));

  auto cf3 = CfTheory::from(theory_of({L("p", Rel::Geq, Rat(1, 2))}));
  REQUIRE(cf3);
  CHECK(cover_free_check(*cf3));
}

TEST_CASE("horn reduction of a one-rule problem") {
  Theory t = theory_of({I(L("p", Rel::Geq, Rat(1)), L("q", Rel::Geq, Rat(1)))});
  auto cf = CfTheory::from(t);
  REQUIRE(cf);
  std::vector<IntervalLiteral> H{IL("p", Rel::Geq, Rat(1))};
  IntervalTerm obs({IL("q", Rel::Geq, Rat(1))});
  HornProblem hp = horn_reduce(*cf, obs, H);

  CHECK(hp.atoms.size() == 2);
  REQUIRE(hp.theory_rule_count == 1);
  CHECK(hp.rules[0].body.size() == 1);
  REQUIRE(hp.goal.size() == 1);
  // Assuming the hypothesis derives the goal.
  CHECK(horn_recognize(hp, hp.hypotheses) == HornVerdict::IsSolution);
}

TEST_CASE("horn reduction adds containment and disjointness axioms") {
  Theory t = theory_of(
      {I(L("p", Rel::Geq, Rat(1, 2)), L("q", Rel::Geq, Rat(1))),
       I(L("p", Rel::Geq, Rat(1, 4)), L("r", Rel::Geq, Rat(1)))});
  auto cf = CfTheory::from(t);
  REQUIRE(cf);
  HornProblem hp = horn_reduce(*cf, IntervalTerm({IL("r", Rel::Geq, Rat(1))}),
                               {IL("p", Rel::Geq, Rat(1, 2))});
  // Assuming p >= 1/2 must derive p >= 1/4 and hence r >= 1.
  CHECK(horn_recognize(hp, hp.hypotheses) == HornVerdict::IsSolution);

  // Disjoint but non-covering literals get a falsum pair rule.
  Theory t2 = theory_of({I(C(L("p", Rel::Geq, Rat(3, 4)), L("p", Rel::Leq, Rat(1, 4))),
                           L("q", Rel::Geq, Rat(1)))});
  auto cf2 = CfTheory::from(t2);
  REQUIRE(cf2);
  HornProblem hp2 = horn_reduce(*cf2, IntervalTerm({IL("q", Rel::Geq, Rat(1))}),
                                {IL("p", Rel::Geq, Rat(3, 4)), IL("p", Rel::Leq, Rat(1, 4))});
  // The disjoint pair cannot be jointly assumed.
  CHECK(horn_recognize(hp2, hp2.hypotheses) == HornVerdict::NotConsistent);
}

TEST_CASE("horn reduction refuses covering theories") {
  Theory t = theory_of({L("p", Rel::Leq, Rat(2, 3)), L("p", Rel::Geq, Rat(1, 4))});
  auto cf = CfTheory::from(t);
  REQUIRE(cf);
  CHECK_THROWS_AS(horn_reduce(*cf, IntervalTerm({IL("p", Rel::Geq, Rat(1, 4))}), {}),
                  NotCoverFree);
}

TEST_CASE("horn_recognize frozen verdicts") {
  HornProblem hp;
  hp.atoms = {IL("a", Rel::Geq, Rat(1)), IL("b", Rel::Geq, Rat(1))};
  hp.rules = {{{0}, 1}};
  hp.theory_rule_count = 1;
  hp.goal = {1};
  hp.hypotheses = {0};
  CHECK(horn_recognize(hp, {0}) == HornVerdict::IsSolution);

  HornProblem bad;
  bad.atoms = {IL("a", Rel::Geq, Rat(1))};
  bad.rules = {{{0}, std::nullopt}};
  bad.theory_rule_count = 1;
  bad.hypotheses = {0};
  CHECK(horn_recognize(bad, {0}) == HornVerdict::NotConsistent);

  HornProblem none;
  none.atoms = {IL("a", Rel::Geq, Rat(1)), IL("b", Rel::Geq, Rat(1))};
  none.goal = {1};
  none.hypotheses = {0};
  CHECK(horn_recognize(none, {0}) == HornVerdict::NotEntailing);
}

TEST_CASE("unit resolution is sound for strong disjunctions") {
  std::mt19937_64 rng(777);
  std::vector<std::string> vars{"a", "b", "c"};
  for (int i = 0; i < 400; ++i) {
    std::uniform_int_distribution<int> nl(2, 4), coin(0, 1);
    std::uniform_int_distribution<std::size_t> vi(0, vars.size() - 1);
    std::vector<Formula> lits;
    int n = nl(rng);
    for (int j = 0; j < n; ++j) {
      Formula l = V(vars[vi(rng)]);
      lits.push_back(coin(rng) ? Neg(l) : l);
    }
    Valuation v = random_valuation(rng, vars, 8);
    if (evaluate(Formula::big_disj(lits), v) == Rat(1) &&
        evaluate(lits[0], v) == Rat(0)) {
      std::vector<Formula> rest(lits.begin() + 1, lits.end());
      CHECK(evaluate(Formula::big_disj(rest), v) == Rat(1));
    }
  }
}

TEST_CASE("closure valuations satisfy the source problem") {
  Theory t = theory_of(
      {I(L("p", Rel::Geq, Rat(1, 2)), L("q", Rel::Geq, Rat(1))),
       I(L("q", Rel::Gt, Rat(1, 2)), L("r", Rel::Leq, Rat(1, 4)))});
  auto cf = CfTheory::from(t);
  REQUIRE(cf);
  IntervalTerm obs({IL("r", Rel::Leq, Rat(1, 4))});
  std::vector<IntervalLiteral> H{IL("p", Rel::Geq, Rat(1, 2)),
                                 IL("p", Rel::Leq, Rat(1, 4))};
  HornProblem hp = horn_reduce(*cf, obs, H);

  // sigma = {p >= 1/2} is a solution; its closure valuation satisfies theory
  // and sigma and the goal.
  std::vector<int> sigma{hp.atom_of(IL("p", Rel::Geq, Rat(1, 2)))};
  CHECK(horn_recognize(hp, sigma) == HornVerdict::IsSolution);
  HornClosure c = horn_closure(hp, sigma);
  Valuation v = horn_closure_valuation(hp, c);
  for (const auto& f : t) CHECK(evaluate(f, v) == Rat(1));
  CHECK(v.at("p") >= Rat(1, 2));

  // sigma' = {p <= 1/4} is consistent but not entailing; the closure
  // valuation is a countermodel.
  std::vector<int> sigma2{hp.atom_of(IL("p", Rel::Leq, Rat(1, 4)))};
  CHECK(horn_recognize(hp, sigma2) == HornVerdict::NotEntailing);
  HornClosure c2 = horn_closure(hp, sigma2);
  Valuation v2 = horn_closure_valuation(hp, c2);
  for (const auto& f : t) CHECK(evaluate(f, v2) == Rat(1));
  CHECK_FALSE(obs.holds_under(v2));
}

#include "lukabd/abduction.hpp"

TEST_CASE("fuzzy-program abduction end to end") {
  std::vector<FuzzyRule> prog{FuzzyRule(SC({"p"}, {}), Rat(1, 2))};
  AbductionProblem uses_rules =
      make_problem(Theory{}, L("p", Rel::Geq, Rat(1, 2)),
                   {IL("p", Rel::Geq, Rat(1, 2)), IL("p", Rel::Geq, Rat(1))}, {},
                   prog);
  REQUIRE(uses_rules.fragment == FragmentTag::Flp);
  AbductionSolver solver(uses_rules);
  CHECK(solver.routed_through_fast_path());

  // The program pins p to one half, so only the compatible hypothesis works.
  auto all = solver.enumerate_solutions(SolutionClass::Any);
  REQUIRE(all.solutions.size() == 1);
  CHECK(all.solutions[0].term == IntervalTerm({IL("p", Rel::Geq, Rat(1, 2))}));
  // It entails the observation on its own, so no proper solution exists.
  CHECK(solver.enumerate_solutions(SolutionClass::Proper).solutions.empty());
  CHECK(solver.engine_stats().branch_nodes == 0);
}

TEST_CASE("mixed degree rules and plain formulas leave the program fragment") {
  std::vector<FuzzyRule> prog{FuzzyRule(SC({"p"}, {}), Rat(1, 2))};
  Theory extra;
  extra.add(D(V("q"), V("r")));
  AbductionProblem mixed =
      make_problem(extra, L("p", Rel::Geq, Rat(1, 2)),
                   {IL("q", Rel::Geq, Rat(1))}, {}, prog);
  CHECK(mixed.fragment == FragmentTag::General);

  // The general route still honors the degree rule: p is pinned to one half.
  AbductionSolver solver(mixed);
  auto r = solver.recognize(IntervalTerm({IL("q", Rel::Geq, Rat(1))}),
                            SolutionClass::Any);
  CHECK(r.accepted);  // the rule alone entails the observation
  Engine e;
  Theory eff = mixed.effective_theory();
  auto sat = e.sat(eff);
  REQUIRE(sat.is_sat());
  CHECK(sat.witness->at("p") == Rat(1, 2));

  // A program problem with a non-clausal observation also routes generally.
  AbductionProblem general_obs =
      make_problem(Theory{}, I(V("p"), V("q")), {IL("q", Rel::Geq, Rat(1))}, {},
                   prog);
  CHECK(general_obs.fragment == FragmentTag::General);
  AbductionSolver s2(general_obs);
  auto w = s2.exists_solution(SolutionClass::Any);
  REQUIRE(w);
  CHECK(*w == IntervalTerm({IL("q", Rel::Geq, Rat(1))}));
}
