#ifndef BSTC_SOLVER_HPP
#define BSTC_SOLVER_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bstc/ast.hpp"
#include "bstc/choice.hpp"
#include "bstc/lifting.hpp"
#include "bstc/normalize.hpp"
#include "bstc/oracle.hpp"
#include "bstc/places.hpp"

namespace bstc {

struct SolverCaps {
  int max_generator_bits = 24;   // place space is 2^bits
  int max_choice_terms = 10;     // alpha reduction emits 2^k - 1 conditions
  int max_individual_vars = 12;  // designated-place search width
  int verify_universe = 12;      // axiom checks enumerate Pow+(U)
  uint64_t max_mask_bytes = uint64_t{1} << 30;
};

// A finite witness model. The universe has one element per place of the
// accepting candidate; set and individual variables are the original
// formula's. The choice component is total, stored explicitly together
// with the extension rule that produced it from the induced data.
struct FiniteModel {
  std::vector<std::string> universe;
  std::map<std::string, int> individuals;   // variable -> element index
  std::map<std::string, SetMask> sets;      // variable -> element mask
  PartialChoice base_choice;                // induced data on the menu terms
  PartialChoice total_choice;               // total on Pow+(U)
  LiftRule rule = LiftRule::FreeExtension;
  std::optional<WarpStructure> warp;
};

enum class VerdictStatus : uint8_t { Sat, Unsat, ResourceLimit };

struct SolverStats {
  size_t atom_count = 0;
  size_t generator_count = 0;
  uint64_t nodes = 0;
  uint64_t leaves = 0;
};

struct Verdict {
  VerdictStatus status = VerdictStatus::Unsat;
  std::optional<FiniteModel> model;
  std::string resource_reason;
  SolverStats stats;
};

// A choice-free rewrite of a complete choice-flat formula. Each distinct
// choice term c(T_i) becomes the fresh set variable C__flat_<i>; the
// bindings keep the argument terms so the induced choice data can be
// read back out of a model.
struct ReductionResult {
  Formula formula;
  std::vector<std::pair<Term, std::string>> bindings;  // T_i -> fresh variable
  size_t beta_condition_count = 0;
  size_t alpha_condition_count = 0;
  size_t nonemptiness_condition_count = 0;
};

// Choice terms become opaque set variables; satisfiability is preserved
// in both directions under the unrestricted semantics because any model
// of the rewrite extends to a choice by c(A) = A off the menu terms.
ReductionResult reduce_unrestricted(const Formula& complete_flat);

// Adds the beta instances
//   (T_i sub T_j and not ((C_i & C_j) = 0)) -> C_i sub C_j
// for all ordered pairs i,j; k^2 of them, so the rewrite stays quadratic.
ReductionResult reduce_beta(const Formula& complete_flat);

// Adds the alpha instances  T_i sub T_j -> (T_i & C_j) sub C_i  (k^2) and
// the nonemptiness conditions
//   not ((T_{i1} + ... ) - ((T_{i1} - C_{i1}) + ...) = 0)
// for every nonempty index set, 2^k - 1 of them.
ReductionResult reduce_alpha(const Formula& complete_flat, int max_choice_terms = 10);

// Model construction from an ample candidate: one element per place,
// variables interpreted by their place bits, choice data read off the
// given (menu term, selection term) bindings.
struct PartialModel {
  std::vector<std::string> universe;
  std::map<std::string, int> individuals;
  std::map<std::string, SetMask> sets;  // all set variables of the index
  PartialChoice partial;
};

PartialModel build_model(const AmpleCandidate& candidate, const FormulaIndex& idx,
                         const std::vector<std::pair<Term, Term>>& choice_bindings);

// Extends the induced data to a total choice by the semantics' rule.
// The reductions guarantee the preconditions; a failure here means a
// solver bug and raises logic_error.
FiniteModel extend_choice(const PartialModel& m, Semantics s);

// Evaluates f directly under the model and checks the semantics' axiom
// over the full power set. The independent gate behind every Sat verdict.
bool verify_model(const FiniteModel& m, const Formula& f, Semantics s,
                  int universe_cap = 12);

// The four-semantics decision procedure. Sat verdicts carry a verified
// model; Unsat means the candidate search was exhausted; resource caps
// surface as ResourceLimit, never as a wrong verdict.
Verdict decide(const Formula& f, Semantics s, const SolverCaps& caps = {});

// The choice-free core decision (input must not contain choice terms).
Verdict decide_bstc_minus(const Formula& f, const SolverCaps& caps = {});

// WARP-semantics decision on the un-reduced formula: ample-candidate
// search plus a preorder-existence test on the induced choice data.
Verdict decide_warp(const Formula& f, const SolverCaps& caps = {});

}  // namespace bstc

#endif
