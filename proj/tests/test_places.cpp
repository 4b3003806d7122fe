#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bstc/normalize.hpp"
#include "bstc/oracle.hpp"
#include "bstc/parser.hpp"
#include "bstc/places.hpp"

using namespace bstc;

namespace {
Formula parse(const std::string& src) {
  ParseResult r = parse_formula(src);
  REQUIRE_MESSAGE(r.ok(), (src + " | " + (r.error ? r.error->format() : std::string())));
  return *r.formula;
}

std::vector<bool> gens(const FormulaIndex& idx, std::initializer_list<std::pair<const char*, bool>> vals) {
  std::vector<bool> out(idx.generators().size(), false);
  for (auto& [text, v] : vals) {
    ParseResult r = parse_formula(std::string(text) + " = 0");
    REQUIRE(r.ok());
    int gid = idx.generator_id(r.formula->atom_ref().lhs);
    REQUIRE(gid >= 0);
    out[static_cast<size_t>(gid)] = v;
  }
  return out;
}
}  // namespace

TEST_CASE("place evaluation extends generators through the operators") {
  FormulaIndex idx(parse("X - Y = 0 and X + Y = 0 and X & Y = 0"));
  Place p = evaluate_place(idx, gens(idx, {{"X", true}, {"Y", false}}));
  CHECK(p.at(idx, Term::difference(Term::set_var("X"), Term::set_var("Y"))));
  CHECK(p.at(idx, Term::union_of(Term::set_var("X"), Term::set_var("Y"))));
  CHECK_FALSE(p.at(idx, Term::intersection(Term::set_var("X"), Term::set_var("Y"))));
  CHECK_FALSE(p.at(idx, Term::empty()));
  CHECK(place_invariants_hold(idx, p));
}

TEST_CASE("the all-zero assignment zeroes every term") {
  FormulaIndex idx(parse("(X + Y) - (X & {x}) = 0 and c(X) sub Y"));
  Place p = evaluate_place(idx, std::vector<bool>(idx.generators().size(), false));
  for (bool v : p.values) CHECK_FALSE(v);
  CHECK(place_invariants_hold(idx, p));
}

TEST_CASE("choice terms are opaque generator slots") {
  FormulaIndex idx(parse("X & c(X) = 0"));
  Place p = evaluate_place(idx, gens(idx, {{"X", true}, {"c(X)", true}}));
  CHECK(p.at(idx, Term::intersection(Term::set_var("X"), Term::choice(Term::set_var("X")))));
  // no structural link between X and c(X) at place level
  Place q = evaluate_place(idx, gens(idx, {{"X", false}, {"c(X)", true}}));
  CHECK(place_invariants_hold(idx, q));
  CHECK(q.at(idx, Term::choice(Term::set_var("X"))));
}

TEST_CASE("equal generator assignments give equal places") {
  FormulaIndex idx(parse("{x} + X sub Y & c(Y)"));
  std::vector<bool> a(idx.generators().size(), false);
  a[1] = true;
  Place p1 = evaluate_place(idx, a);
  Place p2 = evaluate_place(idx, a);
  CHECK(p1.values == p2.values);
}

TEST_CASE("ample conditions on tiny candidates") {
  FormulaIndex idx_id(parse("X = X"));
  AmpleCandidate single;
  single.places.push_back(evaluate_place(idx_id, {true}));
  CHECK(is_ample(single, {}, idx_id).ok);  // nothing to witness

  FormulaIndex idx_eq(parse("X = Y"));
  AmpleCandidate agree;
  agree.places.push_back(evaluate_place(idx_eq, gens(idx_eq, {{"X", true}, {"Y", true}})));
  // atom inside A but no differing place: fails the equality witness
  AmpleCheck no_wit = is_ample(agree, {0}, idx_eq);
  CHECK_FALSE(no_wit.ok);
  CHECK(no_wit.failing_condition == "vii");
  // atom outside A and agreeing places: fine
  CHECK(is_ample(agree, {}, idx_eq).ok);
  // one differing place witnesses the atom
  agree.places.push_back(evaluate_place(idx_eq, gens(idx_eq, {{"X", true}, {"Y", false}})));
  CHECK(is_ample(agree, {0}, idx_eq).ok);
  // but the same candidate breaks the universal condition when the atom
  // is positive
  AmpleCheck broken = is_ample(agree, {}, idx_eq);
  CHECK_FALSE(broken.ok);
  CHECK(broken.failing_condition == "v");
}

TEST_CASE("inclusion atoms need a strict witness") {
  FormulaIndex idx(parse("X sub Y"));
  AmpleCandidate cand;
  cand.places.push_back(evaluate_place(idx, gens(idx, {{"X", false}, {"Y", false}})));
  cand.places.push_back(evaluate_place(idx, gens(idx, {{"X", true}, {"Y", true}})));
  AmpleCheck r = is_ample(cand, {0}, idx);  // all places respect X <= Y
  CHECK_FALSE(r.ok);
  CHECK(r.failing_condition == "viii");
}

TEST_CASE("designated-place bookkeeping") {
  FormulaIndex idx(parse("x in X and y in X"));
  AmpleCandidate cand;
  cand.places.push_back(evaluate_place(idx, gens(idx, {{"X", true}, {"{x}", true}})));
  cand.places.push_back(evaluate_place(idx, gens(idx, {{"X", true}, {"{y}", true}})));
  cand.var_place["x"] = 0;
  cand.var_place["y"] = 1;
  CHECK(var_places_consistent(cand, idx));
  // a second place at x breaks soleness
  cand.places.push_back(evaluate_place(idx, gens(idx, {{"{x}", true}})));
  CHECK_FALSE(var_places_consistent(cand, idx));
}

TEST_CASE("filtered enumeration keeps exactly the uniform places") {
  FormulaIndex idx(parse("X = Y"));
  auto all = enumerate_filtered_places(idx, {0});  // atom witnessed: no universal filter
  CHECK(all.size() == 4);
  auto agreeing = enumerate_filtered_places(idx, {});
  CHECK(agreeing.size() == 2);
  for (const Place& p : agreeing)
    CHECK(p.at(idx, Term::set_var("X")) == p.at(idx, Term::set_var("Y")));
}

TEST_CASE("generator cap raises a resource error") {
  std::string big = "X1 = X1";
  for (int i = 2; i <= 30; ++i) big += " and X" + std::to_string(i) + " = X" + std::to_string(i);
  FormulaIndex idx(parse(big));
  CHECK_THROWS_AS(enumerate_filtered_places(idx, {}, 24), ResourceLimitError);
  CHECK(enumerate_filtered_places(parse_formula("X = X").formula.has_value()
                                      ? FormulaIndex(*parse_formula("X = X").formula)
                                      : idx,
                                  {}, 24)
            .size() == 2);
}

TEST_CASE("mask engine agrees with the object-level filter") {
  for (const char* src :
       {"X = Y and Y sub Z", "{x} sub X and X & Y = 0", "c(X) sub X and not (c(X) = 0)",
        "X - Y = Z or Z = 0"}) {
    Formula f = parse(src);
    FormulaIndex idx(f);
    PlaceSpace space(idx, PlaceSpaceCaps{});
    for (uint64_t bits = 0; bits < (uint64_t{1} << idx.atoms().size()); ++bits) {
      std::vector<int> witness_ids;
      for (size_t a = 0; a < idx.atoms().size(); ++a)
        if (bits & (uint64_t{1} << a)) witness_ids.push_back(static_cast<int>(a));
      auto places = enumerate_filtered_places(idx, witness_ids);
      Bitset filter = space.all_places();
      for (size_t a = 0; a < idx.atoms().size(); ++a)
        if (!(bits & (uint64_t{1} << a))) filter.and_with(space.atom_universal(a));
      CHECK(filter.count() == places.size());
      for (const Place& p : places) {
        // rebuild the place index from its generator values
        uint64_t pi = 0;
        for (size_t g = 0; g < idx.generators().size(); ++g)
          if (p.at(idx, idx.generators()[g])) pi |= uint64_t{1} << g;
        CHECK(filter.test(pi));
        CHECK(space.place_at(pi).values == p.values);
      }
    }
  }
}

TEST_CASE("term masks match per-place evaluation") {
  Formula f = parse("(X + {x}) - Y sub c(Z) and Z = Y");
  FormulaIndex idx(f);
  PlaceSpace space(idx, PlaceSpaceCaps{});
  for (const Term& t : idx.terms()) {
    Bitset m = space.term_mask(t);
    for (uint64_t p = 0; p < space.place_count(); ++p)
      CHECK(m.test(p) == space.place_at(p).at(idx, t));
  }
}

TEST_CASE("region valuations of interpreted term families are places") {
  // build tiny models by hand, read the term family off the model, and
  // check that every region's valuation satisfies the place conditions
  Formula f = parse("X sub Y and not (Y - Z = 0)");
  FormulaIndex idx(f);
  // model over {0,1,2}: X={0}, Y={0,1}, Z={2}
  auto value_of = [&](const Term& t) -> SetMask {
    std::function<SetMask(const Term&)> ev = [&](const Term& term) -> SetMask {
      switch (term.kind()) {
        case TermKind::Empty: return 0;
        case TermKind::SetVar:
          if (term.name() == "X") return 0b001;
          if (term.name() == "Y") return 0b011;
          return 0b100;
        case TermKind::Union: return ev(term.left()) | ev(term.right());
        case TermKind::Intersection: return ev(term.left()) & ev(term.right());
        case TermKind::Difference: return ev(term.left()) & ~ev(term.right());
        default: return 0;
      }
    };
    return ev(t);
  };
  std::vector<SetMask> family;
  for (const Term& t : idx.terms()) family.push_back(value_of(t));
  EulerDiagram d = euler_diagram(family);
  for (SetMask region : d.regions) {
    Place p;
    for (const Term& t : idx.terms()) p.values.push_back((region & ~value_of(t)) == 0);
    CHECK(place_invariants_hold(idx, p));
  }
}
