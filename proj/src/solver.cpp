#include "bstc/solver.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <set>

namespace bstc {

namespace {

bool any_and_not(const Bitset& a, const Bitset& b) {  // a & ~b != 0
  const auto& aw = a.words();
  const auto& bw = b.words();
  for (size_t i = 0; i < aw.size(); ++i)
    if (aw[i] & ~bw[i]) return true;
  return false;
}

// --- propositional layer -----------------------------------------------

struct Conjunct {
  Prop prop;
  std::vector<int> atoms;
};

void collect_conjunct_props(const Prop& p, std::vector<Prop>& out) {
  if (p.kind == FormulaKind::And) {
    collect_conjunct_props(p.children[0], out);
    collect_conjunct_props(p.children[1], out);
  } else {
    out.push_back(p);
  }
}

void collect_prop_atoms(const Prop& p, std::set<int>& out) {
  if (p.kind == FormulaKind::Atom) out.insert(p.atom);
  for (const Prop& ch : p.children) collect_prop_atoms(ch, out);
}

// --- the candidate search -----------------------------------------------
//
// Backtracking over the atoms of the skeleton, false branch first, with
// two propagation layers per node: conjunct-local forcing on the
// propositional side, and on the place side a shrinking filter of places
// compatible with the atoms deemed true. An atom whose witness pool dies
// is forced true; an individual variable with no remaining place at it
// kills the branch. Leaves are complete truth assignments that survived
// both layers; the leaf handler does the designated-place and witness
// assembly (plus the preorder test under the WARP semantics) and stops
// the search on success.

class Search {
public:
  Search(const FormulaIndex& idx, const Skeleton& sk, const PlaceSpace& space)
      : idx_(idx), sk_(sk), space_(space) {
    // Atom ids are shared between the skeleton and the index; both use
    // first-occurrence order.
    if (sk.atom_table.size() != idx.atoms().size())
      throw std::logic_error("search: skeleton and index atom tables diverge");
    for (size_t a = 0; a < sk.atom_table.size(); ++a)
      if (!(sk.atom_table[a] == idx.atoms()[a]))
        throw std::logic_error("search: skeleton and index atom order diverge");
    std::vector<Prop> props;
    collect_conjunct_props(sk.prop, props);
    conjuncts_.reserve(props.size());
    occurs_.resize(sk.atom_table.size());
    for (Prop& p : props) {
      Conjunct c;
      std::set<int> atoms;
      collect_prop_atoms(p, atoms);
      c.prop = std::move(p);
      c.atoms.assign(atoms.begin(), atoms.end());
      for (int a : c.atoms) occurs_[static_cast<size_t>(a)].push_back(conjuncts_.size());
      conjuncts_.push_back(std::move(c));
    }
    assignment_.assign(sk.atom_table.size(), -1);
    filter_ = space.all_places();
  }

  using LeafFn = std::function<bool(Search&)>;

  const std::vector<int8_t>& assignment() const { return assignment_; }
  const Bitset& filter() const { return filter_; }
  const PlaceSpace& space() const { return space_; }
  const FormulaIndex& index() const { return idx_; }
  SolverStats stats;

  // Returns true when the leaf handler accepted a candidate.
  bool run(const LeafFn& leaf) {
    std::vector<int> root_trail;
    std::vector<size_t> worklist;
    std::vector<uint8_t> queued(conjuncts_.size(), 0);
    for (size_t c = 0; c < conjuncts_.size(); ++c) {
      worklist.push_back(c);
      queued[c] = 1;
    }
    filter_dirty_ = true;
    if (!fixpoint(root_trail, worklist, queued)) return false;
    return dfs(leaf);
  }

private:
  const FormulaIndex& idx_;
  const Skeleton& sk_;
  const PlaceSpace& space_;
  std::vector<Conjunct> conjuncts_;
  std::vector<std::vector<size_t>> occurs_;
  std::vector<int8_t> assignment_;
  Bitset filter_;
  bool filter_dirty_ = false;

  bool assign(int atom, int8_t value, std::vector<int>& trail, std::vector<size_t>& worklist,
              std::vector<uint8_t>& queued) {
    int8_t cur = assignment_[static_cast<size_t>(atom)];
    if (cur >= 0) return cur == value;
    assignment_[static_cast<size_t>(atom)] = value;
    trail.push_back(atom);
    if (value == 1) {
      filter_.and_with(space_.atom_universal(static_cast<size_t>(atom)));
      filter_dirty_ = true;
    } else {
      // A false atom needs a witnessing place now and at every later node.
      if (!any_and_not(filter_, space_.atom_universal(static_cast<size_t>(atom)))) return false;
    }
    for (size_t c : occurs_[static_cast<size_t>(atom)])
      if (!queued[c]) {
        queued[c] = 1;
        worklist.push_back(c);
      }
    return true;
  }

  bool process_conjunct(size_t ci, std::vector<int>& trail, std::vector<size_t>& worklist,
                        std::vector<uint8_t>& queued) {
    const Conjunct& c = conjuncts_[ci];
    int v = eval_prop(c.prop, assignment_);
    if (v == 0) return false;
    if (v == 1) return true;
    for (int b : c.atoms) {
      if (assignment_[static_cast<size_t>(b)] >= 0) continue;
      assignment_[static_cast<size_t>(b)] = 0;
      int e0 = eval_prop(c.prop, assignment_);
      assignment_[static_cast<size_t>(b)] = 1;
      int e1 = eval_prop(c.prop, assignment_);
      assignment_[static_cast<size_t>(b)] = -1;
      if (e0 == 0 && e1 == 0) return false;
      if (e0 == 0) {
        if (!assign(b, 1, trail, worklist, queued)) return false;
      } else if (e1 == 0) {
        if (!assign(b, 0, trail, worklist, queued)) return false;
      }
    }
    return true;
  }

  bool fixpoint(std::vector<int>& trail, std::vector<size_t>& worklist,
                std::vector<uint8_t>& queued) {
    for (;;) {
      while (!worklist.empty()) {
        size_t ci = worklist.back();
        worklist.pop_back();
        queued[ci] = 0;
        if (!process_conjunct(ci, trail, worklist, queued)) return false;
      }
      if (!filter_dirty_) return true;
      filter_dirty_ = false;
      // The filter shrank: witness pools and variable places can die, and
      // atoms without any witness left must turn true.
      for (size_t a = 0; a < assignment_.size(); ++a) {
        if (assignment_[a] == 1) continue;
        if (any_and_not(filter_, space_.atom_universal(a))) continue;
        if (assignment_[a] == 0) return false;
        if (!assign(static_cast<int>(a), 1, trail, worklist, queued)) return false;
      }
      for (size_t v = 0; v < idx_.individual_vars().size(); ++v)
        if (!filter_.intersects(space_.at_var(v))) return false;
      if (worklist.empty() && !filter_dirty_) return true;
    }
  }

  bool dfs(const LeafFn& leaf) {
    ++stats.nodes;
    int atom = -1;
    for (size_t a = 0; a < assignment_.size(); ++a)
      if (assignment_[a] < 0) {
        atom = static_cast<int>(a);
        break;
      }
    if (atom < 0) {
      ++stats.leaves;
      return leaf(*this);
    }
    for (int8_t pol = 0; pol <= 1; ++pol) {
      std::vector<int> trail;
      std::vector<size_t> worklist;
      std::vector<uint8_t> queued(conjuncts_.size(), 0);
      Bitset saved = filter_;
      bool saved_dirty = filter_dirty_;
      bool ok = assign(atom, pol, trail, worklist, queued) && fixpoint(trail, worklist, queued);
      if (ok && dfs(leaf)) return true;
      for (int t : trail) assignment_[static_cast<size_t>(t)] = -1;
      filter_ = std::move(saved);
      filter_dirty_ = saved_dirty;
    }
    return false;
  }
};

// --- leaf machinery -------------------------------------------------------

// Small flat bitset for needy-witness coverage profiles.
struct Profile {
  std::vector<uint64_t> w;
  explicit Profile(size_t nbits = 0) : w((nbits + 63) / 64, 0) {}
  void set(size_t i) { w[i >> 6] |= uint64_t{1} << (i & 63); }
  void or_with(const Profile& o) {
    for (size_t i = 0; i < w.size(); ++i) w[i] |= o.w[i];
  }
  bool covers_all(size_t nbits) const {
    for (size_t i = 0; i < nbits; ++i)
      if (!((w[i >> 6] >> (i & 63)) & 1)) return false;
    return true;
  }
};

struct DesignClass {
  uint64_t rep = 0;
  uint32_t varbits = 0;  // which individual variables the place is at
  Profile profile;       // which profiled atoms it witnesses
  uint32_t sig = 0;      // choice-structure signature (WARP search only)
};

struct LeafAnalysis {
  std::vector<int> false_atoms;
  Bitset p0;               // filtered places at no variable
  std::vector<int> needy;  // false atoms with no witness inside p0
  // Atoms the class profiles range over, and which of those bits a valid
  // designation must cover. The choice-free search profiles the needy
  // atoms only (the rest are witnessed from p0 for free); the WARP search
  // profiles every false atom, because a designated place that happens to
  // witness an atom spares an extra witness signature.
  std::vector<int> profiled_atoms;
  Profile needy_required;
  std::vector<std::vector<DesignClass>> classes;  // per individual variable
};

// Splits base by the profiled witness masks, then by the signature masks;
// emits one class per nonempty cell. Empty cells prune, so the work stays
// proportional to the number of distinct cells actually present.
void split_classes(const Search& s, Bitset base, const std::vector<int>& profiled, size_t pos,
                   Profile profile, const std::vector<Bitset>* sig_masks, size_t sig_pos,
                   uint32_t sig, uint32_t varbits, std::vector<DesignClass>& out) {
  if (base.none()) return;
  if (pos < profiled.size()) {
    const Bitset& uni = s.space().atom_universal(static_cast<size_t>(profiled[pos]));
    Bitset with = Bitset::minus(base, uni);  // places witnessing the atom
    Bitset without = Bitset::intersect(base, uni);
    Profile with_profile = profile;
    with_profile.set(pos);
    split_classes(s, std::move(with), profiled, pos + 1, std::move(with_profile), sig_masks,
                  sig_pos, sig, varbits, out);
    split_classes(s, std::move(without), profiled, pos + 1, std::move(profile), sig_masks,
                  sig_pos, sig, varbits, out);
    return;
  }
  if (sig_masks && sig_pos < sig_masks->size()) {
    split_classes(s, Bitset::intersect(base, (*sig_masks)[sig_pos]), profiled, pos, profile,
                  sig_masks, sig_pos + 1, sig | (uint32_t{1} << sig_pos), varbits, out);
    split_classes(s, Bitset::minus(base, (*sig_masks)[sig_pos]), profiled, pos, profile,
                  sig_masks, sig_pos + 1, sig, varbits, out);
    return;
  }
  out.push_back(DesignClass{static_cast<uint64_t>(base.first_set()), varbits,
                            std::move(profile), sig});
}

LeafAnalysis analyze_leaf(const Search& s, bool profile_all_false_atoms,
                          const std::vector<Bitset>* sig_masks) {
  LeafAnalysis la;
  const FormulaIndex& idx = s.index();
  const size_t nvars = idx.individual_vars().size();
  for (size_t a = 0; a < s.assignment().size(); ++a)
    if (s.assignment()[a] == 0) la.false_atoms.push_back(static_cast<int>(a));

  la.p0 = s.filter();
  for (size_t v = 0; v < nvars; ++v) la.p0.and_not(s.space().at_var(v));

  for (int a : la.false_atoms)
    if (!any_and_not(la.p0, s.space().atom_universal(static_cast<size_t>(a))))
      la.needy.push_back(a);

  la.profiled_atoms = profile_all_false_atoms ? la.false_atoms : la.needy;
  la.needy_required = Profile(la.profiled_atoms.size());
  for (size_t i = 0; i < la.profiled_atoms.size(); ++i)
    if (std::find(la.needy.begin(), la.needy.end(), la.profiled_atoms[i]) != la.needy.end())
      la.needy_required.set(i);

  la.classes.resize(nvars);
  for (size_t x = 0; x < nvars; ++x) {
    for (uint32_t vbits = 0; vbits < (uint32_t{1} << nvars); ++vbits) {
      if (!(vbits & (uint32_t{1} << x))) continue;
      Bitset base = s.filter();
      for (size_t y = 0; y < nvars; ++y) {
        if (vbits & (uint32_t{1} << y)) base.and_with(s.space().at_var(y));
        else base.and_not(s.space().at_var(y));
      }
      split_classes(s, std::move(base), la.profiled_atoms, 0,
                    Profile(la.profiled_atoms.size()), sig_masks, 0, 0, vbits, la.classes[x]);
      if (la.classes[x].size() > (size_t{1} << 16))
        throw ResourceLimitError("designation-classes",
                                 "designated-place search space too large");
    }
  }
  return la;
}

// Enumerates consistent designated-place assignments covering every needy
// atom; cb returns true to stop the enumeration.
bool for_each_designation(const LeafAnalysis& la, size_t nvars,
                          const std::function<bool(const std::vector<int64_t>&)>& cb) {
  if (nvars == 0) {
    if (!la.needy.empty()) return false;
    std::vector<int64_t> none;
    return cb(none);
  }
  auto covers_needy = [&](const Profile& covered) {
    for (size_t i = 0; i < la.profiled_atoms.size(); ++i) {
      bool required = (la.needy_required.w[i >> 6] >> (i & 63)) & 1;
      bool got = (covered.w[i >> 6] >> (i & 63)) & 1;
      if (required && !got) return false;
    }
    return true;
  };
  std::vector<int64_t> designated(nvars, -1);
  std::function<bool(size_t, const Profile&)> rec = [&](size_t i,
                                                        const Profile& covered) -> bool {
    if (i == nvars) {
      if (!covers_needy(covered)) return false;
      return cb(designated);
    }
    if (designated[i] >= 0) return rec(i + 1, covered);
    for (const DesignClass& cls : la.classes[i]) {
      bool clash = false;
      for (size_t y = 0; y < nvars; ++y)
        if ((cls.varbits & (uint32_t{1} << y)) && designated[y] >= 0) {
          clash = true;
          break;
        }
      if (clash) continue;
      for (size_t y = 0; y < nvars; ++y)
        if (cls.varbits & (uint32_t{1} << y)) designated[y] = static_cast<int64_t>(cls.rep);
      Profile next = covered;
      next.or_with(cls.profile);
      if (rec(i + 1, next)) return true;
      for (size_t y = 0; y < nvars; ++y)
        if (cls.varbits & (uint32_t{1} << y)) designated[y] = -1;
    }
    return false;
  };
  return rec(0, Profile(la.profiled_atoms.size()));
}

// Witness places for every false atom, reusing already-chosen places
// greedily so the model stays small.
std::vector<uint64_t> pick_witnesses(const Search& s, const LeafAnalysis& la,
                                     const std::vector<int64_t>& designated) {
  std::vector<uint64_t> chosen;
  for (int64_t d : designated)
    if (std::find(chosen.begin(), chosen.end(), static_cast<uint64_t>(d)) == chosen.end())
      chosen.push_back(static_cast<uint64_t>(d));
  for (int a : la.false_atoms) {
    const Bitset& uni = s.space().atom_universal(static_cast<size_t>(a));
    bool covered = false;
    for (uint64_t p : chosen)
      if (!uni.test(p)) {
        covered = true;
        break;
      }
    if (covered) continue;
    Bitset pool = Bitset::minus(la.p0, uni);
    int64_t p = pool.first_set();
    if (p < 0) throw std::logic_error("pick_witnesses: missing witness for a checked atom");
    chosen.push_back(static_cast<uint64_t>(p));
  }
  return chosen;
}

AmpleCandidate assemble_candidate(const Search& s, std::vector<uint64_t> places,
                                  const std::vector<int64_t>& designated) {
  if (places.empty()) places.push_back(0);  // the all-empty place
  std::sort(places.begin(), places.end());
  places.erase(std::unique(places.begin(), places.end()), places.end());
  AmpleCandidate cand;
  for (uint64_t p : places) cand.places.push_back(s.space().place_at(p));
  const auto& vars = s.index().individual_vars();
  for (size_t v = 0; v < vars.size(); ++v) {
    size_t pos = static_cast<size_t>(
        std::lower_bound(places.begin(), places.end(), static_cast<uint64_t>(designated[v])) -
        places.begin());
    cand.var_place[vars[v]] = pos;
  }
  return cand;
}

}  // namespace

// --- model construction ----------------------------------------------------

PartialModel build_model(const AmpleCandidate& candidate, const FormulaIndex& idx,
                         const std::vector<std::pair<Term, Term>>& choice_bindings) {
  PartialModel m;
  const size_t n = candidate.places.size();
  for (size_t i = 0; i < n; ++i) m.universe.push_back("a" + std::to_string(i));
  for (const auto& [var, pos] : candidate.var_place) m.individuals[var] = static_cast<int>(pos);
  for (const std::string& sv : idx.set_vars()) {
    const size_t tid = static_cast<size_t>(idx.term_id(Term::set_var(sv)));
    SetMask mask = 0;
    for (size_t p = 0; p < n; ++p)
      if (candidate.places[p].values[tid]) mask |= SetMask{1} << p;
    m.sets[sv] = mask;
  }
  std::vector<std::pair<SetMask, SetMask>> menus;
  for (const auto& [menu_term, sel_term] : choice_bindings) {
    const size_t mt = static_cast<size_t>(idx.term_id(menu_term));
    const size_t st = static_cast<size_t>(idx.term_id(sel_term));
    SetMask menu = 0, sel = 0;
    for (size_t p = 0; p < n; ++p) {
      if (candidate.places[p].values[mt]) menu |= SetMask{1} << p;
      if (candidate.places[p].values[st]) sel |= SetMask{1} << p;
    }
    bool dup = false;
    for (auto& [m2, s2] : menus)
      if (m2 == menu) {
        if (s2 != sel)
          throw std::logic_error("build_model: equal menu terms with unequal selections");
        dup = true;
        break;
      }
    if (!dup) menus.emplace_back(menu, sel);
  }
  m.partial = PartialChoice(m.universe, std::move(menus));
  return m;
}

FiniteModel extend_choice(const PartialModel& m, Semantics s) {
  FiniteModel out;
  out.universe = m.universe;
  out.individuals = m.individuals;
  out.sets = m.sets;
  out.base_choice = m.partial;
  switch (s) {
    case Semantics::Unrestricted:
      out.rule = LiftRule::FreeExtension;
      out.total_choice = materialize_total(m.partial, LiftRule::FreeExtension);
      break;
    case Semantics::BetaSem: {
      if (!check_axiom(m.partial, Axiom::Beta).holds)
        throw std::logic_error("extend_choice: induced data violates beta");
      out.rule = LiftRule::BetaComponent;
      out.total_choice = beta_lift(m.partial);
      break;
    }
    case Semantics::AlphaSem: {
      out.rule = LiftRule::AlphaFormula;
      try {
        out.total_choice = alpha_lift(m.partial);
      } catch (const std::invalid_argument&) {
        throw std::logic_error("extend_choice: induced data has no alpha extension");
      }
      break;
    }
    case Semantics::WarpSem: {
      LiftReport wl = warp_liftable(m.partial);
      if (!wl.liftable)
        throw std::logic_error("extend_choice: induced data has no WARP extension");
      out.rule = LiftRule::WarpPreorder;
      out.warp = wl.warp;
      out.total_choice = warp_lift(m.partial, *wl.warp);
      break;
    }
  }
  return out;
}

// --- verification -----------------------------------------------------------

namespace {

std::optional<SetMask> model_eval_term(const FiniteModel& m, const Term& t) {
  switch (t.kind()) {
    case TermKind::Empty:
      return SetMask{0};
    case TermKind::SetVar: {
      auto it = m.sets.find(t.name());
      if (it == m.sets.end())
        throw std::invalid_argument("verify_model: unassigned set variable " + t.name());
      return it->second;
    }
    case TermKind::Singleton: {
      auto it = m.individuals.find(t.name());
      if (it == m.individuals.end())
        throw std::invalid_argument("verify_model: unassigned individual variable " + t.name());
      return SetMask{1} << it->second;
    }
    case TermKind::Union: {
      auto l = model_eval_term(m, t.left()), r = model_eval_term(m, t.right());
      if (!l || !r) return std::nullopt;
      return *l | *r;
    }
    case TermKind::Intersection: {
      auto l = model_eval_term(m, t.left()), r = model_eval_term(m, t.right());
      if (!l || !r) return std::nullopt;
      return *l & *r;
    }
    case TermKind::Difference: {
      auto l = model_eval_term(m, t.left()), r = model_eval_term(m, t.right());
      if (!l || !r) return std::nullopt;
      return *l & ~*r;
    }
    case TermKind::Choice: {
      auto arg = model_eval_term(m, t.left());
      // The choice map has no value on the empty set; an assignment that
      // sends a choice argument there satisfies nothing.
      if (!arg || *arg == 0) return std::nullopt;
      return m.total_choice.selection_for(*arg);
    }
  }
  return std::nullopt;
}

std::optional<bool> model_eval(const FiniteModel& m, const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom: {
      auto l = model_eval_term(m, f.atom_ref().lhs), r = model_eval_term(m, f.atom_ref().rhs);
      if (!l || !r) return std::nullopt;
      return f.atom_ref().rel == Relation::Equal ? (*l == *r) : ((*l & ~*r) == 0);
    }
    case FormulaKind::Not: {
      auto v = model_eval(m, f.left());
      if (!v) return std::nullopt;
      return !*v;
    }
    default: {
      auto l = model_eval(m, f.left()), r = model_eval(m, f.right());
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

bool verify_model(const FiniteModel& m, const Formula& f, Semantics s, int universe_cap) {
  if (m.universe.size() > static_cast<size_t>(universe_cap))
    throw ResourceLimitError("verify-universe",
                             "model universe exceeds the verification cap of " +
                                 std::to_string(universe_cap));
  if (!m.total_choice.is_total()) return false;
  if (auto ax = semantics_axiom(s))
    if (!check_axiom(m.total_choice, *ax).holds) return false;
  auto v = model_eval(m, f);
  return v && *v;
}

// --- reductions --------------------------------------------------------------

ReductionResult reduce_unrestricted(const Formula& complete_flat) {
  if (!is_choice_flat(complete_flat))
    throw std::invalid_argument("reduce_unrestricted: formula is not choice-flat");
  FormulaIndex idx(complete_flat);
  ReductionResult out;
  Formula g = complete_flat;
  int counter = 0;
  for (const Term& ct : idx.choice_terms()) {
    std::string name = "C__flat_" + std::to_string(++counter);
    g = replace_term_in(g, ct, Term::set_var(name));
    out.bindings.emplace_back(ct.left(), name);
  }
  out.formula = g;
  return out;
}

ReductionResult reduce_beta(const Formula& complete_flat) {
  ReductionResult out = reduce_unrestricted(complete_flat);
  const size_t k = out.bindings.size();
  Formula g = out.formula;
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j) {
      const Term& ti = out.bindings[i].first;
      const Term& tj = out.bindings[j].first;
      Term ci = Term::set_var(out.bindings[i].second);
      Term cj = Term::set_var(out.bindings[j].second);
      Formula premise = Formula::conjunction(
          Formula::atom(Atom{Relation::SubsetEq, ti, tj}),
          Formula::negation(
              Formula::atom(Atom{Relation::Equal, Term::intersection(ci, cj), Term::empty()})));
      Formula cond =
          Formula::implication(premise, Formula::atom(Atom{Relation::SubsetEq, ci, cj}));
      g = Formula::conjunction(g, cond);
      ++out.beta_condition_count;
    }
  out.formula = g;
  return out;
}

ReductionResult reduce_alpha(const Formula& complete_flat, int max_choice_terms) {
  ReductionResult out = reduce_unrestricted(complete_flat);
  const size_t k = out.bindings.size();
  if (k > static_cast<size_t>(max_choice_terms))
    throw ResourceLimitError("choice-terms",
                             "alpha reduction over " + std::to_string(k) +
                                 " choice terms exceeds the cap of " +
                                 std::to_string(max_choice_terms));
  Formula g = out.formula;
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j) {
      const Term& ti = out.bindings[i].first;
      const Term& tj = out.bindings[j].first;
      Term ci = Term::set_var(out.bindings[i].second);
      Term cj = Term::set_var(out.bindings[j].second);
      Formula cond = Formula::implication(
          Formula::atom(Atom{Relation::SubsetEq, ti, tj}),
          Formula::atom(Atom{Relation::SubsetEq, Term::intersection(ti, cj), ci}));
      g = Formula::conjunction(g, cond);
      ++out.alpha_condition_count;
    }
  for (uint64_t set = 1; set < (uint64_t{1} << k); ++set) {
    Term menus, rejected;
    bool first = true;
    for (size_t i = 0; i < k; ++i) {
      if (!(set & (uint64_t{1} << i))) continue;
      const Term& ti = out.bindings[i].first;
      Term ri = Term::difference(ti, Term::set_var(out.bindings[i].second));
      if (first) {
        menus = ti;
        rejected = ri;
        first = false;
      } else {
        menus = Term::union_of(menus, ti);
        rejected = Term::union_of(rejected, ri);
      }
    }
    Formula cond = Formula::negation(
        Formula::atom(Atom{Relation::Equal, Term::difference(menus, rejected), Term::empty()}));
    g = Formula::conjunction(g, cond);
    ++out.nonemptiness_condition_count;
  }
  out.formula = g;
  return out;
}

// --- decision cores -----------------------------------------------------------

namespace {

Verdict run_reduced(const Formula& original, const ReductionResult& red, Semantics s,
                    const SolverCaps& caps) {
  FormulaIndex idx(red.formula);
  if (idx.individual_vars().size() > static_cast<size_t>(caps.max_individual_vars))
    throw ResourceLimitError("individual-variables",
                             "more individual variables than the designation search cap");
  Skeleton sk = skeleton(red.formula);
  PlaceSpace space(idx, PlaceSpaceCaps{caps.max_generator_bits, caps.max_mask_bytes});
  std::vector<std::pair<Term, Term>> bindings;
  for (const auto& [menu_term, var] : red.bindings)
    bindings.emplace_back(menu_term, Term::set_var(var));

  Search search(idx, sk, space);
  Verdict verdict;
  std::optional<FiniteModel> found;
  const FormulaIndex original_idx(original);
  bool ok = search.run([&](Search& srch) -> bool {
    LeafAnalysis la = analyze_leaf(srch, false, nullptr);
    return for_each_designation(
        la, idx.individual_vars().size(),
        [&](const std::vector<int64_t>& designated) -> bool {
          std::vector<uint64_t> places = pick_witnesses(srch, la, designated);
          AmpleCandidate cand = assemble_candidate(srch, std::move(places), designated);
          PartialModel pm = build_model(cand, idx, bindings);
          if (pm.universe.size() > static_cast<size_t>(caps.verify_universe))
            throw ResourceLimitError("verify-universe",
                                     "witness model larger than the verification cap");
          FiniteModel fm = extend_choice(pm, s);
          // Surface only the original formula's variables.
          for (auto it = fm.sets.begin(); it != fm.sets.end();) {
            if (std::find(original_idx.set_vars().begin(), original_idx.set_vars().end(),
                          it->first) == original_idx.set_vars().end())
              it = fm.sets.erase(it);
            else
              ++it;
          }
          if (!verify_model(fm, original, s, caps.verify_universe))
            throw std::logic_error("decide: model failed verification");
          found = std::move(fm);
          return true;
        });
  });
  verdict.stats = search.stats;
  verdict.stats.atom_count = idx.atoms().size();
  verdict.stats.generator_count = idx.generators().size();
  if (ok) {
    verdict.status = VerdictStatus::Sat;
    verdict.model = std::move(found);
  } else {
    verdict.status = VerdictStatus::Unsat;
  }
  return verdict;
}

// Witness-signature option: a class of interchangeable witness places.
struct SigOption {
  uint32_t sig = 0;
  uint64_t rep = 0;
};

void split_by_signature(const Bitset& base, const std::vector<Bitset>& sig_masks, size_t pos,
                        uint32_t sig, std::vector<SigOption>& out) {
  if (base.none()) return;
  if (pos == sig_masks.size()) {
    out.push_back(SigOption{sig, static_cast<uint64_t>(base.first_set())});
    return;
  }
  split_by_signature(Bitset::intersect(base, sig_masks[pos]), sig_masks, pos + 1,
                     sig | (uint32_t{1} << pos), out);
  split_by_signature(Bitset::minus(base, sig_masks[pos]), sig_masks, pos + 1, sig, out);
}

Verdict run_warp(const Formula& original, const Formula& comp, const SolverCaps& caps) {
  FormulaIndex idx(comp);
  if (idx.individual_vars().size() > static_cast<size_t>(caps.max_individual_vars))
    throw ResourceLimitError("individual-variables",
                             "more individual variables than the designation search cap");
  Skeleton sk = skeleton(comp);
  PlaceSpace space(idx, PlaceSpaceCaps{caps.max_generator_bits, caps.max_mask_bytes});
  const auto& cterms = idx.choice_terms();
  const size_t k = cterms.size();
  std::vector<std::pair<Term, Term>> bindings;
  for (const Term& ct : cterms) bindings.emplace_back(ct.left(), ct);

  // Signature bit layout: T_1..T_k then c(T_1)..c(T_k).
  std::vector<Bitset> sig_masks;
  for (const Term& ct : cterms) sig_masks.push_back(space.term_mask(ct.left()));
  for (const Term& ct : cterms) sig_masks.push_back(space.term_mask(ct));
  auto sig_of_place = [&](uint64_t p) -> uint32_t {
    uint32_t sig = 0;
    for (size_t b = 0; b < sig_masks.size(); ++b)
      if (sig_masks[b].test(p)) sig |= uint32_t{1} << b;
    return sig;
  };

  Search search(idx, sk, space);
  Verdict verdict;
  std::optional<FiniteModel> found;
  const FormulaIndex original_idx(original);

  auto try_candidate = [&](Search& srch, const std::vector<int64_t>& designated,
                           const std::vector<uint64_t>& witnesses) -> bool {
    std::vector<uint64_t> places;
    for (int64_t d : designated) places.push_back(static_cast<uint64_t>(d));
    for (uint64_t w : witnesses) places.push_back(w);
    AmpleCandidate cand = assemble_candidate(srch, std::move(places), designated);
    PartialModel pm = build_model(cand, idx, bindings);
    LiftReport wl = warp_liftable(pm.partial);
    if (!wl.liftable) return false;
    if (pm.universe.size() > static_cast<size_t>(caps.verify_universe))
      throw ResourceLimitError("verify-universe",
                               "witness model larger than the verification cap");
    FiniteModel fm;
    fm.universe = pm.universe;
    fm.individuals = pm.individuals;
    fm.sets = pm.sets;
    fm.base_choice = pm.partial;
    fm.rule = LiftRule::WarpPreorder;
    fm.warp = wl.warp;
    fm.total_choice = warp_lift(pm.partial, *wl.warp);
    for (auto it = fm.sets.begin(); it != fm.sets.end();) {
      if (std::find(original_idx.set_vars().begin(), original_idx.set_vars().end(),
                    it->first) == original_idx.set_vars().end())
        it = fm.sets.erase(it);
      else
        ++it;
    }
    if (!verify_model(fm, original, Semantics::WarpSem, caps.verify_universe))
      throw std::logic_error("decide: WARP model failed verification");
    found = std::move(fm);
    return true;
  };

  bool ok = search.run([&](Search& srch) -> bool {
    LeafAnalysis la = analyze_leaf(srch, true, &sig_masks);
    return for_each_designation(
        la, idx.individual_vars().size(),
        [&](const std::vector<int64_t>& designated) -> bool {
          // Degenerate case: no choice structure to respect.
          if (k == 0) {
            std::vector<uint64_t> ws = pick_witnesses(srch, la, designated);
            return try_candidate(srch, designated, ws);
          }
          std::set<uint32_t> base_sigs;  // signatures forced by the designations
          for (int64_t d : designated) {
            uint32_t s = sig_of_place(static_cast<uint64_t>(d));
            if (s) base_sigs.insert(s);
          }
          // Per false atom: either some designated place witnesses it, or
          // a witness comes from the variable-free pool, grouped by
          // signature. Supersets of a workable signature set only add
          // preorder constraints, so options whose signature is already
          // present (or zero) are taken outright.
          std::vector<std::vector<SigOption>> pending;
          std::vector<int> pending_atom;
          for (int a : la.false_atoms) {
            const Bitset& uni = srch.space().atom_universal(static_cast<size_t>(a));
            bool covered = false;
            for (int64_t d : designated)
              if (!uni.test(static_cast<uint64_t>(d))) {
                covered = true;
                break;
              }
            if (covered) continue;
            std::vector<SigOption> opts;
            split_by_signature(Bitset::minus(la.p0, uni), sig_masks, 0, 0, opts);
            if (opts.empty()) return false;  // needs a designated witness it lacks
            std::sort(opts.begin(), opts.end(),
                      [](const SigOption& x, const SigOption& y) { return x.sig < y.sig; });
            pending.push_back(std::move(opts));
            pending_atom.push_back(a);
          }
          std::set<std::vector<uint32_t>> tried;
          std::vector<uint64_t> witness;
          std::set<uint32_t> sigs = base_sigs;
          std::function<bool(size_t)> choose = [&](size_t i) -> bool {
            if (i == pending.size()) {
              std::vector<uint32_t> key(sigs.begin(), sigs.end());
              if (!tried.insert(key).second) return false;
              return try_candidate(srch, designated, witness);
            }
            const std::vector<SigOption>& opts = pending[i];
            for (const SigOption& o : opts)
              if (o.sig == 0 || sigs.count(o.sig)) {
                witness.push_back(o.rep);
                bool hit = choose(i + 1);
                witness.pop_back();
                return hit;  // growth-free choices dominate all others
              }
            for (const SigOption& o : opts) {
              witness.push_back(o.rep);
              sigs.insert(o.sig);
              if (choose(i + 1)) return true;
              sigs.erase(o.sig);
              witness.pop_back();
            }
            return false;
          };
          return choose(0);
        });
  });
  verdict.stats = search.stats;
  verdict.stats.atom_count = idx.atoms().size();
  verdict.stats.generator_count = idx.generators().size();
  if (ok) {
    verdict.status = VerdictStatus::Sat;
    verdict.model = std::move(found);
  } else {
    verdict.status = VerdictStatus::Unsat;
  }
  return verdict;
}

}  // namespace

Verdict decide(const Formula& f, Semantics s, const SolverCaps& caps) {
  try {
    Formula comp = complete(flatten(f));
    if (s == Semantics::WarpSem) return run_warp(f, comp, caps);
    ReductionResult red;
    switch (s) {
      case Semantics::Unrestricted: red = reduce_unrestricted(comp); break;
      case Semantics::BetaSem: red = reduce_beta(comp); break;
      default: red = reduce_alpha(comp, caps.max_choice_terms); break;
    }
    return run_reduced(f, red, s, caps);
  } catch (const ResourceLimitError& e) {
    Verdict v;
    v.status = VerdictStatus::ResourceLimit;
    v.resource_reason = e.what();
    return v;
  }
}

Verdict decide_bstc_minus(const Formula& f, const SolverCaps& caps) {
  if (!is_choice_free(f))
    throw std::invalid_argument("decide_bstc_minus: formula contains choice terms");
  try {
    ReductionResult red;
    red.formula = f;
    return run_reduced(f, red, Semantics::Unrestricted, caps);
  } catch (const ResourceLimitError& e) {
    Verdict v;
    v.status = VerdictStatus::ResourceLimit;
    v.resource_reason = e.what();
    return v;
  }
}

Verdict decide_warp(const Formula& f, const SolverCaps& caps) {
  try {
    return run_warp(f, complete(flatten(f)), caps);
  } catch (const ResourceLimitError& e) {
    Verdict v;
    v.status = VerdictStatus::ResourceLimit;
    v.resource_reason = e.what();
    return v;
  }
}

}  // namespace bstc
