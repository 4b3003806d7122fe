#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "bstc/json_io.hpp"
#include "bstc/oracle.hpp"
#include "bstc/parser.hpp"

using namespace bstc;

namespace {
Formula parse(const std::string& src) {
  ParseResult r = parse_formula(src);
  REQUIRE_MESSAGE(r.ok(), (src + " | " + (r.error ? r.error->format() : std::string())));
  return *r.formula;
}

PartialChoice load_fixture(const std::string& name) {
  std::ifstream in(std::string(BSTC_FIXTURE_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return choice_from_json(ss.str());
}

SetMask mask(std::initializer_list<int> bits) {
  SetMask m = 0;
  for (int b : bits) m |= SetMask{1} << b;
  return m;
}
}  // namespace

TEST_CASE("total-choice counts follow the product formula") {
  CHECK(enumerate_total_choices({"x"}).size() == 1);
  CHECK(enumerate_total_choices({"x", "y"}).size() == 3);
  CHECK(enumerate_total_choices({"x", "y", "z"}).size() == 189);
}

TEST_CASE("the identity choice appears in every filtered enumeration") {
  for (auto ax : {Axiom::Alpha, Axiom::Beta, Axiom::Gamma, Axiom::Rho, Axiom::Warp}) {
    bool found = false;
    TotalChoiceStream stream({"x", "y", "z"}, ax);
    while (auto c = stream.next()) {
      bool identity = true;
      for (size_t i = 0; i < c->menu_count(); ++i)
        if (c->selected(i) != c->menu(i)) {
          identity = false;
          break;
        }
      if (identity) {
        found = true;
        break;
      }
    }
    CHECK_MESSAGE(found, axiom_name(ax));
  }
}

TEST_CASE("filtered enumeration agrees with the axiom checker") {
  for (auto ax : {Axiom::Alpha, Axiom::Beta, Axiom::Warp, Axiom::Gamma, Axiom::Rho}) {
    size_t filtered = 0, checked = 0;
    TotalChoiceStream all({"x", "y", "z"}, std::nullopt);
    while (auto c = all.next())
      if (check_axiom(*c, ax).holds) ++checked;
    TotalChoiceStream stream({"x", "y", "z"}, ax);
    while (auto c = stream.next()) {
      CHECK(check_axiom(*c, ax).holds);
      ++filtered;
    }
    CHECK(filtered == checked);
  }
}

TEST_CASE("lifting scans on the fixtures") {
  PartialChoice e1 = load_fixture("example1.choice.json");
  CHECK_FALSE(oracle_liftable(e1, Axiom::Alpha));
  CHECK_FALSE(oracle_liftable(e1, Axiom::Warp));
  CHECK(oracle_liftable(e1, Axiom::Beta));

  PartialChoice single({"x", "y"}, {{mask({0, 1}), mask({0})}});
  CHECK(oracle_liftable(single, Axiom::Alpha));
  CHECK(oracle_liftable(single, Axiom::Beta));
  CHECK(oracle_liftable(single, Axiom::Warp));
}

TEST_CASE("the four-element fixture has no alpha extension") {
  PartialChoice e2 = load_fixture("example2.choice.json");
  CHECK_FALSE(oracle_liftable(e2, Axiom::Alpha));
}

TEST_CASE("exhaustive model search on small formulas") {
  OracleSatResult r1 = oracle_sat(parse("X = X"), Semantics::Unrestricted);
  CHECK(r1.status == OracleSatStatus::Sat);
  CHECK(r1.universe_size == 1);

  OracleSatResult r2 = oracle_sat(parse("not (X = Y)"), Semantics::Unrestricted);
  CHECK(r2.status == OracleSatStatus::Sat);
  CHECK(r2.universe_size == 1);

  OracleSatResult r3 = oracle_sat(parse("not (X = X)"), Semantics::Unrestricted);
  CHECK(r3.status == OracleSatStatus::NoModelWithinBudget);
}

TEST_CASE("the cyclic encoding has no WARP model within budget three") {
  std::ifstream in(std::string(BSTC_FIXTURE_DIR) + "/example1.bstc");
  std::ostringstream ss;
  ss << in.rdbuf();
  Formula f = parse(ss.str());
  OracleBudget b;
  b.max_universe = 3;
  CHECK(oracle_sat(f, Semantics::WarpSem, b).status == OracleSatStatus::NoModelWithinBudget);
  CHECK(oracle_sat(f, Semantics::Unrestricted, b).status == OracleSatStatus::Sat);
  CHECK(oracle_sat(f, Semantics::BetaSem, b).status == OracleSatStatus::Sat);
}

TEST_CASE("choice terms over empty arguments satisfy nothing") {
  // any model of the left conjunct drives X empty, where c has no value
  Formula f = parse("X = 0 and c(X) = X");
  CHECK(oracle_sat(f, Semantics::Unrestricted).status ==
        OracleSatStatus::NoModelWithinBudget);
  CHECK(oracle_sat(parse("X = 0"), Semantics::Unrestricted).status == OracleSatStatus::Sat);
  // even a disjunction cannot be satisfied through the undefined branch
  CHECK(oracle_sat(parse("X = 0 and (c(X) = X or X = 0)"), Semantics::Unrestricted).status ==
        OracleSatStatus::NoModelWithinBudget);
}

TEST_CASE("budget exhaustion is reported distinctly") {
  OracleBudget tiny;
  tiny.max_universe = 3;
  tiny.max_assignments = 5;
  CHECK(oracle_sat(parse("not (X = X)"), Semantics::Unrestricted, tiny).status ==
        OracleSatStatus::BudgetExceeded);
  CHECK_THROWS_AS(oracle_sat(parse("X = X"), Semantics::Unrestricted, OracleBudget{5, 100}),
                  std::invalid_argument);
}
