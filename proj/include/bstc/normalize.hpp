#ifndef BSTC_NORMALIZE_HPP
#define BSTC_NORMALIZE_HPP

#include <optional>
#include <vector>

#include "bstc/ast.hpp"

namespace bstc {

// Rewrites f into choice-flat form: every choice operator applies to a
// choice-free argument. Innermost nested choice terms are replaced by
// fresh set variables X__flat_<n> first, each with a defining conjunct
// `X__flat_<n> = c(T)` prepended, until no nesting remains. The result
// is equisatisfiable with f under every semantics and linear in |f|.
Formula flatten(const Formula& f);

bool is_choice_flat(const Formula& f);

// Conjoins, for each distinct choice term c(T) of a choice-flat formula,
// the choice conditions `not (c(T) = 0)` and `c(T) sub T`, and for each
// unordered pair of distinct choice terms the single-valuedness
// implication `T_i = T_j -> c(T_i) = c(T_j)` (i < j in term order).
// These hold in every assignment, so models are unchanged; no new terms
// are introduced.
Formula complete(const Formula& f);

// Propositional shape of a formula: atoms are replaced by variables,
// equal atoms by the same variable.
struct Prop {
  // Mirrors FormulaKind; Atom nodes carry the atom id instead.
  FormulaKind kind = FormulaKind::Atom;
  int atom = -1;
  std::vector<Prop> children;
};

struct Skeleton {
  Prop prop;
  std::vector<Atom> atom_table;  // atom id -> atom, first-occurrence order
};

Skeleton skeleton(const Formula& f);

// Three-valued evaluation under a partial assignment (-1 unknown, 0, 1).
// Returns -1 when undetermined.
int eval_prop(const Prop& p, const std::vector<int8_t>& assignment);

// Enumerates the promising sets of a skeleton: exactly those atom-id sets
// whose induced valuation (true on the set, false elsewhere) satisfies
// the skeleton. Backtracking over atom ids in order, false branch first,
// with unit propagation; the order is deterministic. Single consumer.
class PromisingSetStream {
public:
  explicit PromisingSetStream(const Skeleton& sk);
  // The next promising set as a sorted list of atom ids, or nullopt.
  std::optional<std::vector<int>> next();

private:
  bool descend();
  const Skeleton& sk_;
  size_t n_;
  std::vector<int8_t> assignment_;
  std::vector<std::vector<int>> trail_;  // atoms forced/decided per level
  std::vector<int> decisions_;           // decided atom per level
  bool exhausted_ = false;
  bool started_ = false;
};

std::vector<std::vector<int>> all_promising_sets(const Skeleton& sk, size_t limit = 1u << 20);

}  // namespace bstc

#endif
