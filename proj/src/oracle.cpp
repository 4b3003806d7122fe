#include "bstc/oracle.hpp"

#include <bit>
#include <stdexcept>

namespace bstc {

const char* semantics_name(Semantics s) {
  switch (s) {
    case Semantics::Unrestricted: return "unrestricted";
    case Semantics::AlphaSem: return "alpha";
    case Semantics::BetaSem: return "beta";
    case Semantics::WarpSem: return "warp";
  }
  return "?";
}

std::optional<Axiom> semantics_axiom(Semantics s) {
  switch (s) {
    case Semantics::Unrestricted: return std::nullopt;
    case Semantics::AlphaSem: return Axiom::Alpha;
    case Semantics::BetaSem: return Axiom::Beta;
    case Semantics::WarpSem: return Axiom::Warp;
  }
  return std::nullopt;
}

namespace {

// Axiom instances re-implemented over raw masks; the solver-side
// check_axiom is intentionally not reused here.
bool pair_ok(Axiom ax, uint32_t a, uint32_t ca, uint32_t b, uint32_t cb) {
  switch (ax) {
    case Axiom::Alpha:
      return (a & ~b) != 0 || ((a & cb) & ~ca) == 0;
    case Axiom::Beta:
      return (a & ~b) != 0 || (ca & cb) == 0 || (ca & ~cb) == 0;
    case Axiom::Warp:
      return (a & ~b) != 0 || (a & cb) == 0 || ca == (a & cb);
    default:
      return true;
  }
}

bool union_ok(Axiom ax, uint32_t a, uint32_t ca, uint32_t b, uint32_t cb, uint32_t cu,
              uint32_t bmask) {
  switch (ax) {
    case Axiom::Gamma:
      return ((ca & cb) & ~cu) == 0;
    case Axiom::Rho:
      return (ca & ~cu) == 0 || (bmask & cu) != 0;
    default:
      (void)a;
      (void)b;
      return true;
  }
}

}  // namespace

TotalChoiceStream::TotalChoiceStream(std::vector<std::string> universe,
                                     std::optional<Axiom> filter, const PartialChoice* extends)
    : universe_(std::move(universe)), filter_(filter) {
  if (universe_.empty() || universe_.size() > 4)
    throw std::invalid_argument("TotalChoiceStream: universe size must be 1..4");
  const uint32_t full = (uint32_t{1} << universe_.size()) - 1;
  for (uint32_t m = 1; m <= full; ++m) {
    menus_.push_back(m);
    uint32_t forced = 0;
    if (extends) {
      int i = extends->menu_index(m);
      if (i >= 0) forced = static_cast<uint32_t>(extends->selected(static_cast<size_t>(i)));
    }
    fixed_.push_back(forced);
  }
  selection_.assign(menus_.size(), 0);
}

bool TotalChoiceStream::prefix_consistent(size_t upto) const {
  if (!filter_) return true;
  const Axiom ax = *filter_;
  const uint32_t m = menus_[upto], cm = selection_[upto];
  if (ax == Axiom::Alpha || ax == Axiom::Beta || ax == Axiom::Warp) {
    for (size_t j = 0; j <= upto; ++j) {
      if (!pair_ok(ax, menus_[j], selection_[j], m, cm)) return false;
      if (!pair_ok(ax, m, cm, menus_[j], selection_[j])) return false;
    }
    return true;
  }
  // Gamma / Rho: instances whose union is the newly assigned menu.
  for (uint32_t a = m; a > 0; a = (a - 1) & m) {
    for (uint32_t b = m; b > 0; b = (b - 1) & m) {
      if ((a | b) != m) continue;
      if (!union_ok(ax, a, selection_[a - 1], b, selection_[b - 1], cm, b)) return false;
    }
  }
  return true;
}

std::optional<PartialChoice> TotalChoiceStream::next() {
  if (done_) return std::nullopt;
  // selection_[level] iterates over nonempty submasks of the menu in
  // ascending order; fixed menus have a single candidate.
  auto first_candidate = [&](size_t level) -> uint32_t {
    if (fixed_[level]) return fixed_[level];
    return menus_[level] & (~menus_[level] + 1);  // lowest bit
  };
  auto next_candidate = [&](size_t level, uint32_t cur) -> uint32_t {
    if (fixed_[level]) return 0;
    // next submask of menu above cur
    for (uint32_t v = cur + 1; v <= menus_[level]; ++v)
      if ((v & menus_[level]) == v) return v;
    return 0;
  };

  if (!started_) {
    started_ = true;
    level_ = 0;
    selection_[0] = first_candidate(0);
  } else {
    // Resume: advance the deepest level.
    level_ = menus_.size() - 1;
    for (;;) {
      uint32_t nxt = next_candidate(level_, selection_[level_]);
      if (nxt) {
        selection_[level_] = nxt;
        break;
      }
      if (level_ == 0) {
        done_ = true;
        return std::nullopt;
      }
      --level_;
    }
  }
  for (;;) {
    if (prefix_consistent(level_)) {
      if (level_ + 1 == menus_.size()) {
        std::vector<std::pair<SetMask, SetMask>> entries;
        for (size_t i = 0; i < menus_.size(); ++i)
          entries.emplace_back(menus_[i], selection_[i]);
        return PartialChoice(universe_, std::move(entries));
      }
      ++level_;
      selection_[level_] = first_candidate(level_);
      continue;
    }
    for (;;) {
      uint32_t nxt = next_candidate(level_, selection_[level_]);
      if (nxt) {
        selection_[level_] = nxt;
        break;
      }
      if (level_ == 0) {
        done_ = true;
        return std::nullopt;
      }
      --level_;
    }
  }
}

std::vector<PartialChoice> enumerate_total_choices(const std::vector<std::string>& universe,
                                                   std::optional<Axiom> filter, size_t limit) {
  TotalChoiceStream stream(universe, filter);
  std::vector<PartialChoice> out;
  while (auto c = stream.next()) {
    out.push_back(std::move(*c));
    if (out.size() > limit) throw std::runtime_error("enumerate_total_choices: limit exceeded");
  }
  return out;
}

bool oracle_liftable(const PartialChoice& c, Axiom a) {
  if (c.universe_size() == 0 || c.universe_size() > 4)
    throw std::invalid_argument("oracle_liftable: universe size must be 1..4");
  TotalChoiceStream stream(c.universe(), a, &c);
  return stream.next().has_value();
}

namespace {

// Oracle-side formula evaluation. Set values are uint32 masks; the total
// choice is an array indexed by menu mask. A choice term over an empty
// argument makes the whole assignment inadmissible.
struct OracleEnv {
  const std::vector<std::string>* ivars;
  const std::vector<std::string>* svars;
  const std::vector<int>* ivals;        // element index per individual var
  const std::vector<uint32_t>* svals;   // mask per set var
  const std::vector<uint32_t>* choice;  // selection per menu mask (index 0 unused)
};

std::optional<uint32_t> eval_term(const Term& t, const OracleEnv& env) {
  switch (t.kind()) {
    case TermKind::Empty:
      return 0u;
    case TermKind::SetVar:
      for (size_t i = 0; i < env.svars->size(); ++i)
        if ((*env.svars)[i] == t.name()) return (*env.svals)[i];
      return 0u;
    case TermKind::Singleton:
      for (size_t i = 0; i < env.ivars->size(); ++i)
        if ((*env.ivars)[i] == t.name()) return uint32_t{1} << (*env.ivals)[i];
      return 0u;
    case TermKind::Union: {
      auto l = eval_term(t.left(), env), r = eval_term(t.right(), env);
      if (!l || !r) return std::nullopt;
      return *l | *r;
    }
    case TermKind::Intersection: {
      auto l = eval_term(t.left(), env), r = eval_term(t.right(), env);
      if (!l || !r) return std::nullopt;
      return *l & *r;
    }
    case TermKind::Difference: {
      auto l = eval_term(t.left(), env), r = eval_term(t.right(), env);
      if (!l || !r) return std::nullopt;
      return *l & ~*r;
    }
    case TermKind::Choice: {
      auto arg = eval_term(t.left(), env);
      if (!arg || *arg == 0) return std::nullopt;
      return (*env.choice)[*arg];
    }
  }
  return std::nullopt;
}

std::optional<bool> eval_formula(const Formula& f, const OracleEnv& env) {
  switch (f.kind()) {
    case FormulaKind::Atom: {
      auto l = eval_term(f.atom_ref().lhs, env), r = eval_term(f.atom_ref().rhs, env);
      if (!l || !r) return std::nullopt;
      return f.atom_ref().rel == Relation::Equal ? (*l == *r) : ((*l & ~*r) == 0);
    }
    case FormulaKind::Not: {
      auto v = eval_formula(f.left(), env);
      if (!v) return std::nullopt;
      return !*v;
    }
    default: {
      auto l = eval_formula(f.left(), env), r = eval_formula(f.right(), env);
      if (!l || !r) return std::nullopt;
      switch (f.kind()) {
        case FormulaKind::And: return *l && *r;
        case FormulaKind::Or: return *l || *r;
        case FormulaKind::Implies: return !*l || *r;
        case FormulaKind::Iff: return *l == *r;
        default: return std::nullopt;
      }
    }
  }
}

}  // namespace

OracleSatResult oracle_sat(const Formula& f, Semantics s, const OracleBudget& budget) {
  if (budget.max_universe < 1 || budget.max_universe > 4)
    throw std::invalid_argument("oracle_sat: max_universe must be 1..4");
  FormulaIndex idx(f);
  const std::vector<std::string>& ivars = idx.individual_vars();
  const std::vector<std::string>& svars = idx.set_vars();
  OracleSatResult result;

  // Choice-free formulas are insensitive to the choice component; one
  // axiom-consistent choice per universe size is enough then.
  const bool uses_choice = !idx.choice_terms().empty();

  for (int n = 1; n <= budget.max_universe; ++n) {
    std::vector<std::string> universe;
    for (int i = 0; i < n; ++i) universe.push_back("u" + std::to_string(i));
    TotalChoiceStream stream(universe, semantics_axiom(s));
    const uint32_t full = (uint32_t{1} << n) - 1;
    while (auto choice = stream.next()) {
      std::vector<uint32_t> ctab(static_cast<size_t>(full) + 1, 0);
      for (uint32_t m = 1; m <= full; ++m)
        ctab[m] = static_cast<uint32_t>(choice->selected(static_cast<size_t>(choice->menu_index(m))));
      std::vector<int> ivals(ivars.size(), 0);
      std::vector<uint32_t> svals(svars.size(), 0);
      OracleEnv env{&ivars, &svars, &ivals, &svals, &ctab};
      for (;;) {
        if (++result.assignments_tried > budget.max_assignments) {
          result.status = OracleSatStatus::BudgetExceeded;
          return result;
        }
        auto v = eval_formula(f, env);
        if (v && *v) {
          result.status = OracleSatStatus::Sat;
          result.universe_size = n;
          return result;
        }
        // advance the assignment counters, individuals first
        size_t pos = 0;
        for (; pos < ivals.size(); ++pos) {
          if (++ivals[pos] < n) break;
          ivals[pos] = 0;
        }
        if (pos < ivals.size()) continue;
        size_t spos = 0;
        for (; spos < svals.size(); ++spos) {
          if (++svals[spos] <= full) break;
          svals[spos] = 0;
        }
        if (spos == svals.size()) break;
      }
      if (!uses_choice) break;
    }
  }
  result.status = OracleSatStatus::NoModelWithinBudget;
  return result;
}

}  // namespace bstc
