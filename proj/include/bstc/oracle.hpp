#ifndef BSTC_ORACLE_HPP
#define BSTC_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bstc/ast.hpp"
#include "bstc/choice.hpp"

namespace bstc {

// Exhaustive reference implementations for tests and the acceptance
// suite. Deliberately separate code paths from the solver: set values,
// choices and formula evaluation are all re-done from scratch here.

struct OracleBudget {
  int max_universe = 3;  // hard maximum 4
  uint64_t max_assignments = 400'000'000;
};

// Streams every total choice on Pow+(U), menus in ascending mask order,
// selections in ascending mask order per menu, depth-first. When an
// axiom is given, violating prefixes are pruned as soon as an instance
// among the already-assigned menus fails.
class TotalChoiceStream {
public:
  TotalChoiceStream(std::vector<std::string> universe, std::optional<Axiom> filter,
                    const PartialChoice* extends = nullptr);
  std::optional<PartialChoice> next();

private:
  bool prefix_consistent(size_t upto) const;
  std::vector<std::string> universe_;
  std::optional<Axiom> filter_;
  std::vector<uint32_t> menus_;
  std::vector<uint32_t> fixed_;      // 0 = free menu, else the forced selection
  std::vector<uint32_t> selection_;
  size_t level_ = 0;
  bool done_ = false;
  bool started_ = false;
};

std::vector<PartialChoice> enumerate_total_choices(const std::vector<std::string>& universe,
                                                   std::optional<Axiom> filter = std::nullopt,
                                                   size_t limit = 1u << 24);

// True iff some total choice on the universe of c extends c and
// satisfies the axiom. |U| <= 4.
bool oracle_liftable(const PartialChoice& c, Axiom a);

enum class Semantics : uint8_t { Unrestricted, AlphaSem, BetaSem, WarpSem };
const char* semantics_name(Semantics s);
std::optional<Axiom> semantics_axiom(Semantics s);

enum class OracleSatStatus : uint8_t { Sat, NoModelWithinBudget, BudgetExceeded };

struct OracleSatResult {
  OracleSatStatus status = OracleSatStatus::NoModelWithinBudget;
  int universe_size = 0;      // on Sat
  uint64_t assignments_tried = 0;
};

// Tries every universe size up to the budget, every variable assignment
// and every axiom-filtered total choice. Sat is definitive;
// NoModelWithinBudget is not an unsatisfiability claim. Assignments
// interpreting some choice-term argument as the empty set are skipped
// (the choice map has no value there).
OracleSatResult oracle_sat(const Formula& f, Semantics s, const OracleBudget& budget = {});

}  // namespace bstc

#endif
