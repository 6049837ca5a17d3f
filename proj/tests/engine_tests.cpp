#include <catch2/catch.hpp>

#include "lukabd/engine.hpp"
#include "test_util.hpp"

using namespace lukabd;
using namespace testutil;

namespace {

Theory theory_of(std::initializer_list<Formula> fs) {
  Theory t;
  for (const auto& f : fs) t.add(f);
  return t;
}

}  // namespace

TEST_CASE("sat finds the fixed point of negation") {
  Engine e;
  auto r = e.sat(theory_of({Formula::iff(V("p"), Neg(V("p")))}));
  REQUIRE(r.is_sat());
  REQUIRE(r.witness);
  CHECK(r.witness->at("p") == Rat(1, 2));
}

TEST_CASE("contradictory premises are unsatisfiable") {
  Engine e;
  CHECK(e.sat(theory_of({V("p"), Neg(V("p"))})).status == Status::Unsat);
}

TEST_CASE("bottom pinned to one is infeasible") {
  Engine e;
  CHECK(e.sat(theory_of({Formula::bot()})).status == Status::Unsat);
  auto sys = e.encode({{Formula::bot(), AssertLevel::EQ1}});
  CHECK_FALSE(lp_strict_feasible(sys.var_count(), sys.constraints()).feasible);
}

TEST_CASE("pinned interval literal becomes a plain row") {
  Engine e;
  auto sys = e.encode({{L("p", Rel::Geq, Rat(1, 2)), AssertLevel::EQ1}});
  REQUIRE(sys.constraints().size() == 1);
  const auto& c = sys.constraints()[0];
  CHECK(c.rel == LinRel::Ge);
  CHECK(c.rhs == Rat(1, 2));
  CHECK(sys.binaries().empty());
}

TEST_CASE("free strong disjunction introduces one clamp binary") {
  Engine e;
  auto sys = e.encode({{D(V("p"), V("q")), AssertLevel::FREE}});
  CHECK(sys.binaries().size() == 1);
  // p, q, the disjunction value and its binary.
  CHECK(sys.var_count() == 4);
  CHECK(sys.constraints().size() == 3);
}

TEST_CASE("lift theory admits the observed indicator state") {
  Engine e;
  Theory t = lift_theory();
  t.add(C(V("g"), V("b")));
  auto r = e.sat(t);
  REQUIRE(r.is_sat());
  REQUIRE(r.witness);
  const Rat& c = r.witness->at("c");
  CHECK(c >= Rat(1, 4));
  CHECK(c <= Rat(2, 3));
  // Witness re-evaluates to one on every premise.
  for (const auto& f : t) CHECK(evaluate(f, *r.witness) == Rat(1));
}

TEST_CASE("premise strengthening is entailment") {
  Engine e;
  CHECK(e.entails(theory_of({V("p")}), C(V("p"), V("p"))).is_entailed());
}

TEST_CASE("the deduction-theorem direction fails with countermodel one half") {
  Engine e;
  auto r = e.entails(Theory{}, I(V("p"), C(V("p"), V("p"))));
  REQUIRE(r.status == Status::NotEntailed);
  REQUIRE(r.witness);
  CHECK(r.witness->at("p") == Rat(1, 2));
  CHECK(evaluate(I(V("p"), C(V("p"), V("p"))), *r.witness) < Rat(1));
}

TEST_CASE("premises entail themselves when satisfiable") {
  std::mt19937_64 rng(8181);
  std::vector<std::string> vars{"p", "q"};
  Engine e;
  for (int i = 0; i < 40; ++i) {
    Formula phi = random_formula(rng, vars, 3);
    Formula psi = random_formula(rng, vars, 3);
    Theory t = theory_of({phi, psi});
    if (!e.sat(t).is_sat()) continue;
    CHECK(e.entails(t, phi).is_entailed());
  }
}

TEST_CASE("consistently entails") {
  Engine e;
  // Inconsistent premise fails the consistency half.
  CHECK_FALSE(e.consistently_entails(theory_of({V("p")}),
                                     IntervalTerm({IL("p", Rel::Leq, Rat(0))}),
                                     V("q")));
  CHECK(e.consistently_entails(Theory{}, IntervalTerm({IL("p", Rel::Geq, Rat(1))}),
                               V("p")));
  // The lift solution consistently entails the observation.
  CHECK(e.consistently_entails(
      lift_theory(),
      IntervalTerm({IL("c", Rel::Geq, Rat(3, 12)), IL("c", Rel::Leq, Rat(8, 12))}),
      C(V("g"), V("b"))));
}

TEST_CASE("grid oracle frozen examples") {
  CHECK(grid_oracle_entails(theory_of({V("p")}), C(V("p"), V("p")), 2));
  CHECK_FALSE(grid_oracle_entails(Theory{}, I(V("p"), C(V("p"), V("p"))), 2));
  Theory guarded = classicality_guards({"p", "q"});
  guarded.add(D(V("p"), V("q")));
  CHECK(grid_oracle_entails(guarded, D(V("p"), V("q")), 1));
}

TEST_CASE("grid oracle rejects oversized grids") {
  Theory t = theory_of({D(V("a"), V("b"))});
  CHECK_THROWS_AS(grid_oracle_entails(t, V("a"), 100000, 1000), GridTooLarge);
}

TEST_CASE("engine agrees with the grid oracle on guarded instances") {
  std::mt19937_64 rng(2025);
  std::vector<std::string> vars{"p", "q", "r"};
  Engine e;
  int checked = 0;
  for (int i = 0; i < 150; ++i) {
    Formula phi = random_formula(rng, vars, 3, /*with_literals=*/false);
    Formula chi = random_formula(rng, vars, 3, /*with_literals=*/false);
    Theory t = classicality_guards({"p", "q", "r"});
    t.add(phi);
    bool grid = grid_oracle_entails(t, chi, 1);
    auto engine = e.entails(t, chi);
    CHECK(grid == engine.is_entailed());
    if (!engine.is_entailed()) {
      REQUIRE(engine.witness);
      for (const auto& f : t) CHECK(evaluate(f, *engine.witness) == Rat(1));
      CHECK(evaluate(chi, *engine.witness) < Rat(1));
    }
    ++checked;
  }
  CHECK(checked == 150);
}

TEST_CASE("comma premises and their strong-conjunction folding agree") {
  std::mt19937_64 rng(515);
  std::vector<std::string> vars{"p", "q"};
  Engine e;
  for (int i = 0; i < 60; ++i) {
    Formula a = random_formula(rng, vars, 2);
    Formula b = random_formula(rng, vars, 2);
    Formula chi = random_formula(rng, vars, 2);
    bool separate = e.entails(theory_of({a, b}), chi).is_entailed();
    bool folded = e.entails(theory_of({C(a, b)}), chi).is_entailed();
    CHECK(separate == folded);
  }
}

TEST_CASE("entailment is monotone under premise growth") {
  std::mt19937_64 rng(616);
  std::vector<std::string> vars{"p", "q"};
  Engine e;
  for (int i = 0; i < 60; ++i) {
    Formula a = random_formula(rng, vars, 2);
    Formula b = random_formula(rng, vars, 2);
    Formula chi = random_formula(rng, vars, 2);
    if (e.entails(theory_of({a}), chi).is_entailed())
      CHECK(e.entails(theory_of({a, b}), chi).is_entailed());
  }
}

TEST_CASE("sat witnesses are exact rational models") {
  std::mt19937_64 rng(717);
  std::vector<std::string> vars{"p", "q", "r"};
  Engine e;
  for (int i = 0; i < 80; ++i) {
    Theory t = theory_of({random_formula(rng, vars, 3),
                          random_formula(rng, vars, 2)});
    auto r = e.sat(t);
    if (!r.is_sat()) continue;
    REQUIRE(r.witness);
    for (const auto& f : t) CHECK(evaluate(f, *r.witness) == Rat(1));
  }
}

TEST_CASE("strictness at the boundary decides entailment exactly") {
  Engine e;
  Theory strict = theory_of({L("p", Rel::Gt, Rat(1, 2))});
  CHECK(e.entails(strict, L("p", Rel::Geq, Rat(1, 2))).is_entailed());

  Theory closed = theory_of({L("p", Rel::Geq, Rat(1, 2))});
  auto r = e.entails(closed, L("p", Rel::Gt, Rat(1, 2)));
  REQUIRE(r.status == Status::NotEntailed);
  CHECK(r.witness->at("p") == Rat(1, 2));

  // Strict bounds still admit rational models arbitrarily close by.
  auto s = e.sat(theory_of({L("p", Rel::Gt, Rat(11, 12)), L("p", Rel::Lt, Rat(1))}));
  REQUIRE(s.is_sat());
  CHECK(s.witness->at("p") > Rat(11, 12));
  CHECK(s.witness->at("p") < Rat(1));
}

TEST_CASE("entailment agrees with the definitional-variable route") {
  // Second algebraic route: Gamma entails chi iff Gamma plus a fresh variable
  // pinned to chi's value and forced below one is unsatisfiable. The two
  // routes exercise different encodings (a strict root row vs an interval
  // literal indicator on the definitional variable).
  std::mt19937_64 rng(246800);
  std::vector<std::string> vars{"p", "q", "r"};
  Engine e;
  for (int i = 0; i < 120; ++i) {
    Theory t = theory_of({random_formula(rng, vars, 3)});
    Formula chi = random_formula(rng, vars, 2);
    bool direct = e.entails(t, chi).is_entailed();
    Theory dual = t;
    dual.add(Formula::iff(V("d"), chi));
    dual.add(L("d", Rel::Lt, Rat(1)));
    bool via_def = !e.sat(dual).is_sat();
    REQUIRE(direct == via_def);
  }
}

namespace {

// Independent strict-feasibility oracle: Fourier-Motzkin elimination over
// exact rationals, strictness propagating through combinations. Exponential,
// fine at oracle sizes.
struct FmRow {
  std::vector<Rat> a;
  Rat b;
  bool strict;  // sum a.x < b rather than <= b
};

bool fm_feasible(int nvars, std::vector<FmRow> rows) {
  for (int k = 0; k < nvars; ++k) {
    std::vector<FmRow> lowers, uppers, rest;
    for (auto& r : rows) {
      const Rat& c = r.a[static_cast<std::size_t>(k)];
      if (c > Rat(0))
        uppers.push_back(r);
      else if (c < Rat(0))
        lowers.push_back(r);
      else
        rest.push_back(r);
    }
    for (const auto& lo : lowers)
      for (const auto& up : uppers) {
        // Scale so the eliminated coefficients cancel.
        Rat cl = lo.a[static_cast<std::size_t>(k)];
        Rat cu = up.a[static_cast<std::size_t>(k)];
        FmRow combined;
        combined.a.resize(static_cast<std::size_t>(nvars), Rat(0));
        for (int j = 0; j < nvars; ++j)
          combined.a[static_cast<std::size_t>(j)] =
              up.a[static_cast<std::size_t>(j)] * (-cl) +
              lo.a[static_cast<std::size_t>(j)] * cu;
        combined.b = up.b * (-cl) + lo.b * cu;
        combined.strict = lo.strict || up.strict;
        rest.push_back(std::move(combined));
      }
    rows = std::move(rest);
  }
  for (const auto& r : rows) {
    if (r.strict ? !(Rat(0) < r.b) : !(Rat(0) <= r.b)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("strict feasibility agrees with Fourier-Motzkin elimination") {
  std::mt19937_64 rng(352413);
  std::uniform_int_distribution<int> ncons(2, 6), coeff(-2, 2), reli(0, 4);
  std::uniform_int_distribution<long> num(-3, 3), den(1, 4);
  const int nvars = 3;
  int disagreements = 0;
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<LinConstraint> cons;
    std::vector<FmRow> rows;
    // Box rows for the oracle (the simplex has them built in).
    for (int v = 0; v < nvars; ++v) {
      FmRow up;
      up.a.assign(nvars, Rat(0));
      up.a[static_cast<std::size_t>(v)] = Rat(1);
      up.b = Rat(1);
      up.strict = false;
      rows.push_back(up);
      FmRow lo;
      lo.a.assign(nvars, Rat(0));
      lo.a[static_cast<std::size_t>(v)] = Rat(-1);
      lo.b = Rat(0);
      lo.strict = false;
      rows.push_back(lo);
    }
    int m = ncons(rng);
    for (int i = 0; i < m; ++i) {
      std::vector<Rat> a(nvars, Rat(0));
      for (int v = 0; v < nvars; ++v) a[static_cast<std::size_t>(v)] = Rat(coeff(rng));
      Rat b(num(rng), den(rng));
      LinRel rel = static_cast<LinRel>(reli(rng));
      LinExpr e;
      for (int v = 0; v < nvars; ++v)
        if (a[static_cast<std::size_t>(v)] != Rat(0))
          e.add(v, a[static_cast<std::size_t>(v)]);
      cons.push_back({e, rel, b});
      // Oracle form: <= / < rows (>= and > negate; = splits).
      auto push = [&](std::vector<Rat> av, Rat bv, bool strict) {
        rows.push_back({std::move(av), std::move(bv), strict});
      };
      auto negated = [&] {
        std::vector<Rat> n2(nvars);
        for (int v = 0; v < nvars; ++v) n2[static_cast<std::size_t>(v)] = -a[static_cast<std::size_t>(v)];
        return n2;
      };
      switch (rel) {
        case LinRel::Le: push(a, b, false); break;
        case LinRel::Lt: push(a, b, true); break;
        case LinRel::Ge: push(negated(), -b, false); break;
        case LinRel::Gt: push(negated(), -b, true); break;
        case LinRel::Eq:
          push(a, b, false);
          push(negated(), -b, false);
          break;
      }
    }
    bool simplex = lp_strict_feasible(nvars, cons).feasible;
    bool fm = fm_feasible(nvars, rows);
    if (simplex != fm) ++disagreements;
  }
  CHECK(disagreements == 0);
}
