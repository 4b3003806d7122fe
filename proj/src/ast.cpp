#include "bstc/ast.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace bstc {

struct Term::Node {
  TermKind kind;
  std::string name;  // SetVar / Singleton
  Term left;
  Term right;
};

Term Term::set_var(std::string name) {
  return Term(std::make_shared<const Node>(Node{TermKind::SetVar, std::move(name), {}, {}}));
}
Term Term::empty() {
  static const Term e(std::make_shared<const Node>(Node{TermKind::Empty, {}, {}, {}}));
  return e;
}
Term Term::singleton(std::string individual_var) {
  return Term(std::make_shared<const Node>(
      Node{TermKind::Singleton, std::move(individual_var), {}, {}}));
}
Term Term::union_of(Term lhs, Term rhs) {
  return Term(std::make_shared<const Node>(
      Node{TermKind::Union, {}, std::move(lhs), std::move(rhs)}));
}
Term Term::intersection(Term lhs, Term rhs) {
  return Term(std::make_shared<const Node>(
      Node{TermKind::Intersection, {}, std::move(lhs), std::move(rhs)}));
}
Term Term::difference(Term lhs, Term rhs) {
  return Term(std::make_shared<const Node>(
      Node{TermKind::Difference, {}, std::move(lhs), std::move(rhs)}));
}
Term Term::choice(Term arg) {
  return Term(std::make_shared<const Node>(Node{TermKind::Choice, {}, std::move(arg), {}}));
}

TermKind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const Term& Term::left() const { return node_->left; }
const Term& Term::right() const { return node_->right; }

bool Term::equals(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.node_->kind != b.node_->kind) return false;
  switch (a.node_->kind) {
    case TermKind::Empty:
      return true;
    case TermKind::SetVar:
    case TermKind::Singleton:
      return a.node_->name == b.node_->name;
    case TermKind::Choice:
      return equals(a.node_->left, b.node_->left);
    default:
      return equals(a.node_->left, b.node_->left) && equals(a.node_->right, b.node_->right);
  }
}

bool Term::less(const Term& a, const Term& b) { return to_string(a) < to_string(b); }

struct Formula::Node {
  FormulaKind kind;
  Atom atom;  // Atom only
  Formula left;
  Formula right;
};

Formula Formula::atom(Atom a) {
  return Formula(std::make_shared<const Node>(Node{FormulaKind::Atom, std::move(a), {}, {}}));
}
Formula Formula::negation(Formula f) {
  return Formula(std::make_shared<const Node>(Node{FormulaKind::Not, {}, std::move(f), {}}));
}
Formula Formula::conjunction(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::And, {}, std::move(lhs), std::move(rhs)}));
}
Formula Formula::disjunction(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::Or, {}, std::move(lhs), std::move(rhs)}));
}
Formula Formula::implication(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::Implies, {}, std::move(lhs), std::move(rhs)}));
}
Formula Formula::equivalence(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(
      Node{FormulaKind::Iff, {}, std::move(lhs), std::move(rhs)}));
}

FormulaKind Formula::kind() const { return node_->kind; }
const Atom& Formula::atom_ref() const { return node_->atom; }
const Formula& Formula::left() const { return node_->left; }
const Formula& Formula::right() const { return node_->right; }

bool Formula::equals(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.node_->kind != b.node_->kind) return false;
  switch (a.node_->kind) {
    case FormulaKind::Atom:
      return a.node_->atom == b.node_->atom;
    case FormulaKind::Not:
      return equals(a.node_->left, b.node_->left);
    default:
      return equals(a.node_->left, b.node_->left) && equals(a.node_->right, b.node_->right);
  }
}

namespace {

// Term printing levels: 0 = sum (+), 1 = product (& and -), 2 = atomic.
int term_level(const Term& t) {
  switch (t.kind()) {
    case TermKind::Union:
      return 0;
    case TermKind::Intersection:
    case TermKind::Difference:
      return 1;
    default:
      return 2;
  }
}

void print_term(const Term& t, int parent_level, bool right_operand, std::string& out) {
  const int level = term_level(t);
  const bool parens =
      level < parent_level || (level == parent_level && right_operand && level != 2);
  if (parens) out += '(';
  switch (t.kind()) {
    case TermKind::Empty:
      out += '0';
      break;
    case TermKind::SetVar:
      out += t.name();
      break;
    case TermKind::Singleton:
      out += '{';
      out += t.name();
      out += '}';
      break;
    case TermKind::Choice:
      out += "c(";
      print_term(t.left(), 0, false, out);
      out += ')';
      break;
    case TermKind::Union:
      print_term(t.left(), 0, false, out);
      out += " + ";
      print_term(t.right(), 0, true, out);
      break;
    case TermKind::Intersection:
      print_term(t.left(), 1, false, out);
      out += " & ";
      print_term(t.right(), 1, true, out);
      break;
    case TermKind::Difference:
      print_term(t.left(), 1, false, out);
      out += " - ";
      print_term(t.right(), 1, true, out);
      break;
  }
  if (parens) out += ')';
}

// Formula levels: 0 = <->, 1 = ->, 2 = or, 3 = and, 4 = not, 5 = atom.
int formula_level(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Iff:
      return 0;
    case FormulaKind::Implies:
      return 1;
    case FormulaKind::Or:
      return 2;
    case FormulaKind::And:
      return 3;
    case FormulaKind::Not:
      return 4;
    case FormulaKind::Atom:
      return 5;
  }
  return 5;
}

void print_formula(const Formula& f, int parent_level, bool right_operand, std::string& out) {
  const int level = formula_level(f);
  bool parens = level < parent_level;
  // Left-associative connectives need parens on a same-level right child;
  // `->` is right-associative so the same-level paren goes on the left.
  if (level == parent_level && level != 4 && level != 5) {
    if (level == 1)
      parens = !right_operand;
    else
      parens = right_operand;
  }
  if (parens) out += '(';
  switch (f.kind()) {
    case FormulaKind::Atom:
      out += to_string(f.atom_ref());
      break;
    case FormulaKind::Not:
      out += "not ";
      if (f.left().kind() == FormulaKind::Atom || f.left().kind() == FormulaKind::Not) {
        out += '(';
        print_formula(f.left(), 0, false, out);
        out += ')';
      } else {
        print_formula(f.left(), 4, false, out);
      }
      break;
    case FormulaKind::And:
      print_formula(f.left(), 3, false, out);
      out += " and ";
      print_formula(f.right(), 3, true, out);
      break;
    case FormulaKind::Or:
      print_formula(f.left(), 2, false, out);
      out += " or ";
      print_formula(f.right(), 2, true, out);
      break;
    case FormulaKind::Implies:
      print_formula(f.left(), 1, false, out);
      out += " -> ";
      print_formula(f.right(), 1, true, out);
      break;
    case FormulaKind::Iff:
      print_formula(f.left(), 0, false, out);
      out += " <-> ";
      print_formula(f.right(), 0, true, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string to_string(const Term& t) {
  std::string out;
  print_term(t, 0, false, out);
  return out;
}

std::string to_string(const Atom& a) {
  std::string out = to_string(a.lhs);
  out += a.rel == Relation::Equal ? " = " : " sub ";
  out += to_string(a.rhs);
  return out;
}

std::string to_string(const Formula& f) {
  std::string out;
  print_formula(f, 0, false, out);
  return out;
}

bool is_choice_free(const Term& t) {
  switch (t.kind()) {
    case TermKind::Choice:
      return false;
    case TermKind::Union:
    case TermKind::Intersection:
    case TermKind::Difference:
      return is_choice_free(t.left()) && is_choice_free(t.right());
    default:
      return true;
  }
}

bool is_choice_free(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      return is_choice_free(f.atom_ref().lhs) && is_choice_free(f.atom_ref().rhs);
    case FormulaKind::Not:
      return is_choice_free(f.left());
    default:
      return is_choice_free(f.left()) && is_choice_free(f.right());
  }
}

namespace {

void collect_terms(const Term& t, std::map<std::string, Term>& terms) {
  std::string key = to_string(t);
  if (terms.count(key)) return;
  terms.emplace(std::move(key), t);
  switch (t.kind()) {
    case TermKind::Union:
    case TermKind::Intersection:
    case TermKind::Difference:
      collect_terms(t.left(), terms);
      collect_terms(t.right(), terms);
      break;
    case TermKind::Choice:
      collect_terms(t.left(), terms);
      break;
    default:
      break;
  }
}

void collect_atoms(const Formula& f, std::vector<Atom>& atoms,
                   std::map<std::string, Term>& terms) {
  switch (f.kind()) {
    case FormulaKind::Atom: {
      const Atom& a = f.atom_ref();
      collect_terms(a.lhs, terms);
      collect_terms(a.rhs, terms);
      bool seen = false;
      for (const Atom& b : atoms)
        if (b == a) {
          seen = true;
          break;
        }
      if (!seen) atoms.push_back(a);
      break;
    }
    case FormulaKind::Not:
      collect_atoms(f.left(), atoms, terms);
      break;
    default:
      collect_atoms(f.left(), atoms, terms);
      collect_atoms(f.right(), atoms, terms);
      break;
  }
}

}  // namespace

FormulaIndex::FormulaIndex(const Formula& f) {
  std::map<std::string, Term> term_map;
  collect_terms(Term::empty(), term_map);  // 0 is always indexed
  collect_atoms(f, atoms_, term_map);

  terms_.reserve(term_map.size());
  term_keys_.reserve(term_map.size());
  for (auto& [key, term] : term_map) {
    term_keys_.push_back(key);
    terms_.push_back(term);
  }

  std::map<std::string, bool> ivars, svars;
  for (const Term& t : terms_) {
    switch (t.kind()) {
      case TermKind::Singleton:
        ivars[t.name()] = true;
        break;
      case TermKind::SetVar:
        svars[t.name()] = true;
        break;
      case TermKind::Choice:
        choice_terms_.push_back(t);
        break;
      default:
        break;
    }
  }
  for (auto& [name, _] : ivars) individual_vars_.push_back(name);
  for (auto& [name, _] : svars) set_vars_.push_back(name);

  for (const Term& t : terms_) {
    TermKind k = t.kind();
    if (k == TermKind::SetVar || k == TermKind::Singleton || k == TermKind::Choice)
      generators_.push_back(t);
  }
}

int FormulaIndex::term_id(const Term& t) const {
  std::string key = to_string(t);
  auto it = std::lower_bound(term_keys_.begin(), term_keys_.end(), key);
  if (it == term_keys_.end() || *it != key) return -1;
  return static_cast<int>(it - term_keys_.begin());
}

int FormulaIndex::atom_id(const Atom& a) const {
  for (size_t i = 0; i < atoms_.size(); ++i)
    if (atoms_[i] == a) return static_cast<int>(i);
  return -1;
}

int FormulaIndex::generator_id(const Term& t) const {
  for (size_t i = 0; i < generators_.size(); ++i)
    if (generators_[i] == t) return static_cast<int>(i);
  return -1;
}

FormulaIndex build_index(const Formula& f) { return FormulaIndex(f); }

Formula make_conjunction(const std::vector<Formula>& fs) {
  if (fs.empty()) throw std::invalid_argument("make_conjunction: empty list");
  Formula acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) acc = Formula::conjunction(acc, fs[i]);
  return acc;
}

Term replace_term_in(const Term& t, const Term& what, const Term& with) {
  if (t == what) return with;
  switch (t.kind()) {
    case TermKind::Union:
      return Term::union_of(replace_term_in(t.left(), what, with),
                            replace_term_in(t.right(), what, with));
    case TermKind::Intersection:
      return Term::intersection(replace_term_in(t.left(), what, with),
                                replace_term_in(t.right(), what, with));
    case TermKind::Difference:
      return Term::difference(replace_term_in(t.left(), what, with),
                              replace_term_in(t.right(), what, with));
    case TermKind::Choice:
      return Term::choice(replace_term_in(t.left(), what, with));
    default:
      return t;
  }
}

Formula replace_term_in(const Formula& f, const Term& what, const Term& with) {
  switch (f.kind()) {
    case FormulaKind::Atom: {
      const Atom& a = f.atom_ref();
      return Formula::atom(Atom{a.rel, replace_term_in(a.lhs, what, with),
                                replace_term_in(a.rhs, what, with)});
    }
    case FormulaKind::Not:
      return Formula::negation(replace_term_in(f.left(), what, with));
    case FormulaKind::And:
      return Formula::conjunction(replace_term_in(f.left(), what, with),
                                  replace_term_in(f.right(), what, with));
    case FormulaKind::Or:
      return Formula::disjunction(replace_term_in(f.left(), what, with),
                                  replace_term_in(f.right(), what, with));
    case FormulaKind::Implies:
      return Formula::implication(replace_term_in(f.left(), what, with),
                                  replace_term_in(f.right(), what, with));
    case FormulaKind::Iff:
      return Formula::equivalence(replace_term_in(f.left(), what, with),
                                  replace_term_in(f.right(), what, with));
  }
  return f;
}

}  // namespace bstc
