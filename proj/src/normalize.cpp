#include "bstc/normalize.hpp"

#include <set>
#include <stdexcept>

namespace bstc {

namespace {

// True iff t contains a choice term nested inside another choice term.
bool term_has_nested_choice(const Term& t, bool inside_choice) {
  switch (t.kind()) {
    case TermKind::Choice:
      if (inside_choice) return true;
      return term_has_nested_choice(t.left(), true);
    case TermKind::Union:
    case TermKind::Intersection:
    case TermKind::Difference:
      return term_has_nested_choice(t.left(), inside_choice) ||
             term_has_nested_choice(t.right(), inside_choice);
    default:
      return false;
  }
}

// First (depth-first, left-to-right) choice term with a choice-free
// argument occurring inside the scope of another choice symbol.
bool find_nested_candidate(const Term& t, bool inside_choice, Term& out) {
  switch (t.kind()) {
    case TermKind::Choice:
      if (find_nested_candidate(t.left(), true, out)) return true;
      if (inside_choice && is_choice_free(t.left())) {
        out = t;
        return true;
      }
      return false;
    case TermKind::Union:
    case TermKind::Intersection:
    case TermKind::Difference:
      return find_nested_candidate(t.left(), inside_choice, out) ||
             find_nested_candidate(t.right(), inside_choice, out);
    default:
      return false;
  }
}

bool find_nested_candidate(const Formula& f, Term& out) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      return find_nested_candidate(f.atom_ref().lhs, false, out) ||
             find_nested_candidate(f.atom_ref().rhs, false, out);
    case FormulaKind::Not:
      return find_nested_candidate(f.left(), out);
    default:
      return find_nested_candidate(f.left(), out) || find_nested_candidate(f.right(), out);
  }
}

void collect_set_var_names(const Term& t, std::set<std::string>& names) {
  switch (t.kind()) {
    case TermKind::SetVar:
      names.insert(t.name());
      break;
    case TermKind::Union:
    case TermKind::Intersection:
    case TermKind::Difference:
      collect_set_var_names(t.left(), names);
      collect_set_var_names(t.right(), names);
      break;
    case TermKind::Choice:
      collect_set_var_names(t.left(), names);
      break;
    default:
      break;
  }
}

void collect_set_var_names(const Formula& f, std::set<std::string>& names) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      collect_set_var_names(f.atom_ref().lhs, names);
      collect_set_var_names(f.atom_ref().rhs, names);
      break;
    case FormulaKind::Not:
      collect_set_var_names(f.left(), names);
      break;
    default:
      collect_set_var_names(f.left(), names);
      collect_set_var_names(f.right(), names);
      break;
  }
}

}  // namespace

bool is_choice_flat(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      return !term_has_nested_choice(f.atom_ref().lhs, false) &&
             !term_has_nested_choice(f.atom_ref().rhs, false);
    case FormulaKind::Not:
      return is_choice_flat(f.left());
    default:
      return is_choice_flat(f.left()) && is_choice_flat(f.right());
  }
}

Formula flatten(const Formula& f) {
  std::set<std::string> used;
  collect_set_var_names(f, used);
  int counter = 0;
  auto fresh = [&]() {
    for (;;) {
      std::string name = "X__flat_" + std::to_string(++counter);
      if (!used.count(name)) {
        used.insert(name);
        return name;
      }
    }
  };

  Formula body = f;
  std::vector<Formula> defs;
  Term candidate;
  while (find_nested_candidate(body, candidate)) {
    Term var = Term::set_var(fresh());
    defs.push_back(Formula::atom(Atom{Relation::Equal, var, candidate}));
    body = replace_term_in(body, candidate, var);
  }
  if (defs.empty()) return f;
  defs.push_back(body);
  return make_conjunction(defs);
}

namespace {

void top_level_conjuncts(const Formula& f, std::vector<Formula>& out) {
  if (f.kind() == FormulaKind::And) {
    top_level_conjuncts(f.left(), out);
    top_level_conjuncts(f.right(), out);
  } else {
    out.push_back(f);
  }
}

}  // namespace

Formula complete(const Formula& f) {
  if (!is_choice_flat(f)) throw std::invalid_argument("complete: formula is not choice-flat");
  FormulaIndex idx(f);
  const auto& cterms = idx.choice_terms();
  if (cterms.empty()) return f;

  // Conditions already conjoined (e.g. by an earlier pass) are not
  // repeated, which makes completion idempotent.
  std::vector<Formula> present;
  top_level_conjuncts(f, present);
  auto has = [&](const Formula& cond) {
    for (const Formula& p : present)
      if (p == cond) return true;
    return false;
  };

  Formula out = f;
  auto append = [&](Formula cond) {
    if (!has(cond)) out = Formula::conjunction(out, std::move(cond));
  };
  for (const Term& ct : cterms) {
    append(Formula::negation(Formula::atom(Atom{Relation::Equal, ct, Term::empty()})));
    append(Formula::atom(Atom{Relation::SubsetEq, ct, ct.left()}));
  }
  for (size_t i = 0; i < cterms.size(); ++i)
    for (size_t j = i + 1; j < cterms.size(); ++j) {
      Formula premise =
          Formula::atom(Atom{Relation::Equal, cterms[i].left(), cterms[j].left()});
      Formula conclusion = Formula::atom(Atom{Relation::Equal, cterms[i], cterms[j]});
      append(Formula::implication(premise, conclusion));
    }
  return out;
}

namespace {

Prop skeleton_walk(const Formula& f, std::vector<Atom>& table) {
  Prop p;
  p.kind = f.kind();
  switch (f.kind()) {
    case FormulaKind::Atom: {
      const Atom& a = f.atom_ref();
      int id = -1;
      for (size_t i = 0; i < table.size(); ++i)
        if (table[i] == a) {
          id = static_cast<int>(i);
          break;
        }
      if (id < 0) {
        id = static_cast<int>(table.size());
        table.push_back(a);
      }
      p.atom = id;
      break;
    }
    case FormulaKind::Not:
      p.children.push_back(skeleton_walk(f.left(), table));
      break;
    default:
      p.children.push_back(skeleton_walk(f.left(), table));
      p.children.push_back(skeleton_walk(f.right(), table));
      break;
  }
  return p;
}

}  // namespace

Skeleton skeleton(const Formula& f) {
  Skeleton sk;
  sk.prop = skeleton_walk(f, sk.atom_table);
  return sk;
}

int eval_prop(const Prop& p, const std::vector<int8_t>& assignment) {
  switch (p.kind) {
    case FormulaKind::Atom:
      return assignment[static_cast<size_t>(p.atom)];
    case FormulaKind::Not: {
      int v = eval_prop(p.children[0], assignment);
      return v < 0 ? -1 : 1 - v;
    }
    case FormulaKind::And: {
      int a = eval_prop(p.children[0], assignment);
      if (a == 0) return 0;
      int b = eval_prop(p.children[1], assignment);
      if (b == 0) return 0;
      return (a == 1 && b == 1) ? 1 : -1;
    }
    case FormulaKind::Or: {
      int a = eval_prop(p.children[0], assignment);
      if (a == 1) return 1;
      int b = eval_prop(p.children[1], assignment);
      if (b == 1) return 1;
      return (a == 0 && b == 0) ? 0 : -1;
    }
    case FormulaKind::Implies: {
      int a = eval_prop(p.children[0], assignment);
      if (a == 0) return 1;
      int b = eval_prop(p.children[1], assignment);
      if (b == 1) return 1;
      return (a == 1 && b == 0) ? 0 : -1;
    }
    case FormulaKind::Iff: {
      int a = eval_prop(p.children[0], assignment);
      int b = eval_prop(p.children[1], assignment);
      if (a < 0 || b < 0) return -1;
      return a == b ? 1 : 0;
    }
  }
  return -1;
}

PromisingSetStream::PromisingSetStream(const Skeleton& sk)
    : sk_(sk), n_(sk.atom_table.size()), assignment_(sk.atom_table.size(), -1) {}

namespace {

// Failed-literal propagation to fixpoint; records forced atoms in trail.
// Returns false on conflict (trail still holds everything assigned here).
bool propagate(const Skeleton& sk, std::vector<int8_t>& assignment, std::vector<int>& trail) {
  for (;;) {
    int v = eval_prop(sk.prop, assignment);
    if (v == 0) return false;
    if (v == 1) return true;  // every completion satisfies; nothing forced
    bool changed = false;
    for (size_t a = 0; a < assignment.size(); ++a) {
      if (assignment[a] >= 0) continue;
      assignment[a] = 0;
      int e0 = eval_prop(sk.prop, assignment);
      assignment[a] = 1;
      int e1 = eval_prop(sk.prop, assignment);
      assignment[a] = -1;
      if (e0 == 0 && e1 == 0) return false;
      if (e0 == 0) {
        assignment[a] = 1;
        trail.push_back(static_cast<int>(a));
        changed = true;
      } else if (e1 == 0) {
        assignment[a] = 0;
        trail.push_back(static_cast<int>(a));
        changed = true;
      }
    }
    if (!changed) return true;
  }
}

}  // namespace

bool PromisingSetStream::descend() {
  auto try_level = [&](size_t level) -> bool {
    int atom = decisions_[level];
    int8_t pol = assignment_[static_cast<size_t>(atom)];
    std::vector<int>& trail = trail_[level];
    (void)pol;
    if (propagate(sk_, assignment_, trail)) return true;
    for (int a : trail) assignment_[static_cast<size_t>(a)] = -1;
    trail.clear();
    return false;
  };
  auto open_level = [&](int atom, int8_t pol) -> bool {
    decisions_.push_back(atom);
    trail_.emplace_back();
    assignment_[static_cast<size_t>(atom)] = pol;
    trail_.back().push_back(atom);
    return try_level(decisions_.size() - 1);
  };
  auto backtrack = [&]() -> bool {
    while (!decisions_.empty()) {
      size_t level = decisions_.size() - 1;
      int atom = decisions_[level];
      int8_t pol = assignment_[static_cast<size_t>(atom)];
      for (int a : trail_[level]) assignment_[static_cast<size_t>(a)] = -1;
      trail_[level].clear();
      if (pol == 0) {
        assignment_[static_cast<size_t>(atom)] = 1;
        trail_[level].push_back(atom);
        if (try_level(level)) return true;
        for (int a : trail_[level]) assignment_[static_cast<size_t>(a)] = -1;
        trail_[level].clear();
      }
      decisions_.pop_back();
      trail_.pop_back();
    }
    return false;
  };

  if (started_) {
    // Leave the current leaf before searching for the next one.
    if (!backtrack()) return false;
  }
  for (;;) {
    int unassigned = -1;
    for (size_t a = 0; a < n_; ++a)
      if (assignment_[a] < 0) {
        unassigned = static_cast<int>(a);
        break;
      }
    if (unassigned < 0) return true;  // leaf
    if (!open_level(unassigned, 0)) {
      // try_level failed with the false branch; flip or backtrack
      size_t level = decisions_.size() - 1;
      assignment_[static_cast<size_t>(unassigned)] = 1;
      trail_[level].push_back(unassigned);
      if (try_level(level)) continue;
      for (int a : trail_[level]) assignment_[static_cast<size_t>(a)] = -1;
      trail_[level].clear();
      decisions_.pop_back();
      trail_.pop_back();
      if (!backtrack()) return false;
    }
  }
}

std::optional<std::vector<int>> PromisingSetStream::next() {
  if (exhausted_) return std::nullopt;
  if (!started_) {
    // Root-level propagation; conflicts here mean no promising set exists.
    decisions_.push_back(-1);
    trail_.emplace_back();
    if (!propagate(sk_, assignment_, trail_.back())) {
      exhausted_ = true;
      return std::nullopt;
    }
    decisions_.pop_back();
    std::vector<int> root_trail = std::move(trail_.back());
    trail_.pop_back();
    // Root assignments are permanent; keep them out of the level trails.
    if (!descend()) {
      exhausted_ = true;
      return std::nullopt;
    }
    started_ = true;
  } else {
    if (!descend()) {
      exhausted_ = true;
      return std::nullopt;
    }
  }
  std::vector<int> out;
  for (size_t a = 0; a < n_; ++a)
    if (assignment_[a] == 1) out.push_back(static_cast<int>(a));
  return out;
}

std::vector<std::vector<int>> all_promising_sets(const Skeleton& sk, size_t limit) {
  PromisingSetStream stream(sk);
  std::vector<std::vector<int>> out;
  while (auto s = stream.next()) {
    out.push_back(std::move(*s));
    if (out.size() > limit)
      throw std::runtime_error("all_promising_sets: enumeration exceeds limit");
  }
  return out;
}

}  // namespace bstc
