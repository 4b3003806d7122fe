#ifndef BSTC_AST_HPP
#define BSTC_AST_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace bstc {

// Set terms: variables, 0 (empty set), singletons {x} over individual
// variables, the Boolean operators, and the choice operator c(T).
// Terms are immutable shared trees; copying a Term is cheap.
enum class TermKind : uint8_t {
  SetVar,
  Empty,
  Singleton,
  Union,
  Intersection,
  Difference,
  Choice,
};

class Term {
public:
  Term() = default;

  static Term set_var(std::string name);
  static Term empty();
  static Term singleton(std::string individual_var);
  static Term union_of(Term lhs, Term rhs);
  static Term intersection(Term lhs, Term rhs);
  static Term difference(Term lhs, Term rhs);
  static Term choice(Term arg);

  bool valid() const { return node_ != nullptr; }
  TermKind kind() const;
  // SetVar / Singleton only.
  const std::string& name() const;
  // Union/Intersection/Difference: both sides; Choice: left() is the argument.
  const Term& left() const;
  const Term& right() const;

  bool operator==(const Term& other) const { return equals(*this, other); }
  bool operator!=(const Term& other) const { return !equals(*this, other); }

  static bool equals(const Term& a, const Term& b);
  // Total order used for deterministic indexing: lexicographic on the
  // canonical printed form.
  static bool less(const Term& a, const Term& b);

private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct TermLess {
  bool operator()(const Term& a, const Term& b) const { return Term::less(a, b); }
};

enum class Relation : uint8_t { Equal, SubsetEq };

// An atomic formula T1 = T2 or T1 sub T2. Orientation is preserved as
// written; deduplication is purely structural.
struct Atom {
  Relation rel = Relation::Equal;
  Term lhs;
  Term rhs;

  bool operator==(const Atom& other) const {
    return rel == other.rel && lhs == other.lhs && rhs == other.rhs;
  }
};

enum class FormulaKind : uint8_t { Atom, Not, And, Or, Implies, Iff };

// Propositional combinations of atoms. Same immutable-shared-tree shape
// as Term.
class Formula {
public:
  Formula() = default;

  static Formula atom(Atom a);
  static Formula negation(Formula f);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula equivalence(Formula lhs, Formula rhs);

  bool valid() const { return node_ != nullptr; }
  FormulaKind kind() const;
  const Atom& atom_ref() const;
  const Formula& left() const;   // Not: the operand
  const Formula& right() const;  // binary only

  bool operator==(const Formula& other) const { return equals(*this, other); }
  bool operator!=(const Formula& other) const { return !equals(*this, other); }
  static bool equals(const Formula& a, const Formula& b);

private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Canonical text form; parseable by the front end, used for term ordering
// and round-trip tests.
std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const Formula& f);

bool is_choice_free(const Term& t);
bool is_choice_free(const Formula& f);

// All structural data the decision machinery needs about a formula:
// the deduplicated sub-term collection (always containing the empty set),
// variables of both sorts, the distinct choice terms c(T_1),...,c(T_k),
// and the distinct atoms with stable ids.
//
// Ordering: terms are sorted by canonical string; individual and set
// variables are sorted by name; choice terms follow the term order;
// atoms keep first-occurrence order.
class FormulaIndex {
public:
  explicit FormulaIndex(const Formula& f);

  const std::vector<Term>& terms() const { return terms_; }
  const std::vector<std::string>& individual_vars() const { return individual_vars_; }
  const std::vector<std::string>& set_vars() const { return set_vars_; }
  const std::vector<Term>& choice_terms() const { return choice_terms_; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  // Free generator slots of the place algebra: set variables, singleton
  // terms and choice terms, in term order. Everything else is derived.
  const std::vector<Term>& generators() const { return generators_; }

  int term_id(const Term& t) const;      // -1 when absent
  int atom_id(const Atom& a) const;      // -1 when absent
  int generator_id(const Term& t) const; // -1 when not a generator

private:
  std::vector<Term> terms_;
  std::vector<std::string> individual_vars_;
  std::vector<std::string> set_vars_;
  std::vector<Term> choice_terms_;
  std::vector<Atom> atoms_;
  std::vector<Term> generators_;
  std::vector<std::string> term_keys_; // canonical strings, parallel to terms_
};

FormulaIndex build_index(const Formula& f);

// Convenience builders used throughout tests and the normalizer.
Formula make_conjunction(const std::vector<Formula>& fs);

// Structural substitution of one sub-term by another, everywhere.
Term replace_term_in(const Term& t, const Term& what, const Term& with);
Formula replace_term_in(const Formula& f, const Term& what, const Term& with);

}  // namespace bstc

#endif
