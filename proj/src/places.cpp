#include "bstc/places.hpp"

#include <algorithm>
#include <bit>

namespace bstc {

Place evaluate_place(const FormulaIndex& idx, const std::vector<bool>& generator_values) {
  if (generator_values.size() != idx.generators().size())
    throw std::invalid_argument("evaluate_place: assignment does not cover the generator slots");
  const auto& terms = idx.terms();
  Place p;
  p.values.assign(terms.size(), false);
  // Terms are ordered lexicographically, not topologically; evaluate by
  // recursion with memoization over term ids.
  std::vector<int8_t> state(terms.size(), -1);
  struct Eval {
    const FormulaIndex& idx;
    const std::vector<bool>& gens;
    std::vector<int8_t>& state;
    bool run(const Term& t) {
      int id = idx.term_id(t);
      if (id >= 0 && state[static_cast<size_t>(id)] >= 0)
        return state[static_cast<size_t>(id)] == 1;
      bool v = false;
      switch (t.kind()) {
        case TermKind::Empty: v = false; break;
        case TermKind::SetVar:
        case TermKind::Singleton:
        case TermKind::Choice:
          v = gens[static_cast<size_t>(idx.generator_id(t))];
          break;
        case TermKind::Union: v = run(t.left()) || run(t.right()); break;
        case TermKind::Intersection: v = run(t.left()) && run(t.right()); break;
        case TermKind::Difference: v = run(t.left()) && !run(t.right()); break;
      }
      if (id >= 0) state[static_cast<size_t>(id)] = v ? 1 : 0;
      return v;
    }
  } eval{idx, generator_values, state};
  for (size_t i = 0; i < terms.size(); ++i) p.values[i] = eval.run(terms[i]);
  return p;
}

bool place_invariants_hold(const FormulaIndex& idx, const Place& p) {
  const auto& terms = idx.terms();
  if (p.values.size() != terms.size()) return false;
  for (size_t i = 0; i < terms.size(); ++i) {
    const Term& t = terms[i];
    switch (t.kind()) {
      case TermKind::Empty:
        if (p.values[i]) return false;
        break;
      case TermKind::Union:
        if (p.values[i] != (p.at(idx, t.left()) || p.at(idx, t.right()))) return false;
        break;
      case TermKind::Intersection:
        if (p.values[i] != (p.at(idx, t.left()) && p.at(idx, t.right()))) return false;
        break;
      case TermKind::Difference:
        if (p.values[i] != (p.at(idx, t.left()) && !p.at(idx, t.right()))) return false;
        break;
      default:
        break;
    }
  }
  return true;
}

AmpleCheck is_ample(const AmpleCandidate& candidate, const std::vector<int>& witness_atom_ids,
                    const FormulaIndex& idx) {
  const auto& atoms = idx.atoms();
  std::vector<bool> needs_witness(atoms.size(), false);
  for (int id : witness_atom_ids) needs_witness[static_cast<size_t>(id)] = true;
  for (size_t a = 0; a < atoms.size(); ++a) {
    const Atom& atom = atoms[a];
    const size_t l = static_cast<size_t>(idx.term_id(atom.lhs));
    const size_t r = static_cast<size_t>(idx.term_id(atom.rhs));
    if (!needs_witness[a]) {
      for (const Place& p : candidate.places) {
        if (atom.rel == Relation::Equal && p.values[l] != p.values[r])
          return AmpleCheck{false, "v", atom};
        if (atom.rel == Relation::SubsetEq && p.values[l] && !p.values[r])
          return AmpleCheck{false, "vi", atom};
      }
    } else {
      bool witnessed = false;
      for (const Place& p : candidate.places) {
        if (atom.rel == Relation::Equal ? (p.values[l] != p.values[r])
                                        : (p.values[l] && !p.values[r])) {
          witnessed = true;
          break;
        }
      }
      if (!witnessed)
        return AmpleCheck{false, atom.rel == Relation::Equal ? "vii" : "viii", atom};
    }
  }
  return AmpleCheck{};
}

bool var_places_consistent(const AmpleCandidate& candidate, const FormulaIndex& idx) {
  for (const std::string& x : idx.individual_vars()) {
    auto it = candidate.var_place.find(x);
    if (it == candidate.var_place.end()) return false;
    if (it->second >= candidate.places.size()) return false;
    size_t tid = static_cast<size_t>(idx.term_id(Term::singleton(x)));
    if (!candidate.places[it->second].values[tid]) return false;
    for (size_t p = 0; p < candidate.places.size(); ++p)
      if (p != it->second && candidate.places[p].values[tid]) return false;
  }
  return true;
}

std::vector<Place> enumerate_filtered_places(const FormulaIndex& idx,
                                             const std::vector<int>& witness_atom_ids,
                                             int max_generator_bits) {
  PlaceSpaceCaps caps;
  caps.max_generator_bits = max_generator_bits;
  PlaceSpace space(idx, caps);
  Bitset filter = space.all_places();
  std::vector<bool> needs_witness(idx.atoms().size(), false);
  for (int id : witness_atom_ids) needs_witness[static_cast<size_t>(id)] = true;
  for (size_t a = 0; a < idx.atoms().size(); ++a)
    if (!needs_witness[a]) filter.and_with(space.atom_universal(a));
  std::vector<Place> out;
  for (uint64_t p = 0; p < space.place_count(); ++p)
    if (filter.test(p)) out.push_back(space.place_at(p));
  return out;
}

// --- Bitset ---------------------------------------------------------------

Bitset::Bitset(uint64_t nbits, bool fill) : nbits_(nbits) {
  w_.assign((nbits + 63) / 64, fill ? ~uint64_t{0} : 0);
  if (fill) trim();
}

void Bitset::trim() {
  if (nbits_ % 64 != 0 && !w_.empty()) w_.back() &= (uint64_t{1} << (nbits_ % 64)) - 1;
}

bool Bitset::any() const {
  for (uint64_t w : w_)
    if (w) return true;
  return false;
}

uint64_t Bitset::count() const {
  uint64_t c = 0;
  for (uint64_t w : w_) c += static_cast<uint64_t>(std::popcount(w));
  return c;
}

int64_t Bitset::first_set() const {
  for (size_t i = 0; i < w_.size(); ++i)
    if (w_[i]) return static_cast<int64_t>(i * 64 + static_cast<size_t>(std::countr_zero(w_[i])));
  return -1;
}

void Bitset::and_with(const Bitset& other) {
  for (size_t i = 0; i < w_.size(); ++i) w_[i] &= other.w_[i];
}
void Bitset::or_with(const Bitset& other) {
  for (size_t i = 0; i < w_.size(); ++i) w_[i] |= other.w_[i];
}
void Bitset::and_not(const Bitset& other) {
  for (size_t i = 0; i < w_.size(); ++i) w_[i] &= ~other.w_[i];
}
Bitset Bitset::intersect(const Bitset& a, const Bitset& b) {
  Bitset out = a;
  out.and_with(b);
  return out;
}
Bitset Bitset::minus(const Bitset& a, const Bitset& b) {
  Bitset out = a;
  out.and_not(b);
  return out;
}
bool Bitset::intersects(const Bitset& other) const {
  for (size_t i = 0; i < w_.size(); ++i)
    if (w_[i] & other.w_[i]) return true;
  return false;
}

// --- PlaceSpace -----------------------------------------------------------

namespace {

void topo_order(const FormulaIndex& idx, const Term& t, std::vector<int8_t>& seen,
                std::vector<int>& order) {
  int id = idx.term_id(t);
  if (id < 0 || seen[static_cast<size_t>(id)]) return;
  switch (t.kind()) {
    case TermKind::Union:
    case TermKind::Intersection:
    case TermKind::Difference:
      topo_order(idx, t.left(), seen, order);
      topo_order(idx, t.right(), seen, order);
      break;
    default:
      break;
  }
  seen[static_cast<size_t>(id)] = 1;
  order.push_back(id);
}

constexpr uint64_t kPeriodic[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
};

}  // namespace

PlaceSpace::PlaceSpace(const FormulaIndex& idx, const PlaceSpaceCaps& caps) : idx_(idx) {
  gens_ = idx.generators().size();
  if (static_cast<int>(gens_) > caps.max_generator_bits)
    throw ResourceLimitError(
        "max-places", "formula needs " + std::to_string(gens_) +
                          " generator bits, above the cap of " +
                          std::to_string(caps.max_generator_bits));
  count_ = uint64_t{1} << gens_;
  const uint64_t words = (count_ + 63) / 64;
  const uint64_t mask_bytes = (idx.atoms().size() + idx.individual_vars().size()) * words * 8;
  if (mask_bytes > caps.max_mask_bytes)
    throw ResourceLimitError("mask-memory",
                             "place masks would need " + std::to_string(mask_bytes) + " bytes");

  generator_slot_.assign(idx.terms().size(), -1);
  for (size_t s = 0; s < idx.generators().size(); ++s)
    generator_slot_[static_cast<size_t>(idx.term_id(idx.generators()[s]))] =
        static_cast<int>(s);

  // Resolve operand ids once; the per-word evaluation must not touch the
  // string-keyed term lookup.
  left_id_.assign(idx.terms().size(), -1);
  right_id_.assign(idx.terms().size(), -1);
  for (size_t i = 0; i < idx.terms().size(); ++i) {
    const Term& t = idx.terms()[i];
    switch (t.kind()) {
      case TermKind::Union:
      case TermKind::Intersection:
      case TermKind::Difference:
        left_id_[i] = idx.term_id(t.left());
        right_id_[i] = idx.term_id(t.right());
        break;
      default:
        break;
    }
  }

  std::vector<int8_t> seen(idx.terms().size(), 0);
  for (const Term& t : idx.terms()) topo_order(idx, t, seen, eval_order_);

  atom_universal_.assign(idx.atoms().size(), Bitset(count_, false));
  at_var_.assign(idx.individual_vars().size(), Bitset(count_, false));

  std::vector<uint64_t> lanes(idx.terms().size(), 0);
  std::vector<size_t> atom_l(idx.atoms().size()), atom_r(idx.atoms().size());
  for (size_t a = 0; a < idx.atoms().size(); ++a) {
    atom_l[a] = static_cast<size_t>(idx.term_id(idx.atoms()[a].lhs));
    atom_r[a] = static_cast<size_t>(idx.term_id(idx.atoms()[a].rhs));
  }
  std::vector<size_t> var_tid(idx.individual_vars().size());
  for (size_t v = 0; v < idx.individual_vars().size(); ++v)
    var_tid[v] = static_cast<size_t>(idx.term_id(Term::singleton(idx.individual_vars()[v])));

  const uint64_t tail =
      (count_ % 64 != 0) ? ((uint64_t{1} << (count_ % 64)) - 1) : ~uint64_t{0};
  for (uint64_t w = 0; w < words; ++w) {
    eval_terms_for_word(w, lanes);
    const uint64_t valid = (w + 1 == words) ? tail : ~uint64_t{0};
    for (size_t a = 0; a < idx.atoms().size(); ++a) {
      uint64_t l = lanes[atom_l[a]], r = lanes[atom_r[a]];
      uint64_t uni = idx.atoms()[a].rel == Relation::Equal ? ~(l ^ r) : (~l | r);
      atom_universal_[a].words()[w] = uni & valid;
    }
    for (size_t v = 0; v < var_tid.size(); ++v)
      at_var_[v].words()[w] = lanes[var_tid[v]] & valid;
  }
}

uint64_t PlaceSpace::generator_lane(size_t slot, uint64_t word_index) const {
  if (slot < 6) return kPeriodic[slot];
  return ((word_index >> (slot - 6)) & 1) ? ~uint64_t{0} : 0;
}

void PlaceSpace::eval_terms_for_word(uint64_t word_index, std::vector<uint64_t>& lanes) const {
  const auto& terms = idx_.terms();
  for (int id : eval_order_) {
    const size_t i = static_cast<size_t>(id);
    const Term& t = terms[i];
    switch (t.kind()) {
      case TermKind::Empty:
        lanes[i] = 0;
        break;
      case TermKind::SetVar:
      case TermKind::Singleton:
      case TermKind::Choice:
        lanes[i] = generator_lane(static_cast<size_t>(generator_slot_[i]), word_index);
        break;
      case TermKind::Union:
        lanes[i] = lanes[static_cast<size_t>(left_id_[i])] |
                   lanes[static_cast<size_t>(right_id_[i])];
        break;
      case TermKind::Intersection:
        lanes[i] = lanes[static_cast<size_t>(left_id_[i])] &
                   lanes[static_cast<size_t>(right_id_[i])];
        break;
      case TermKind::Difference:
        lanes[i] = lanes[static_cast<size_t>(left_id_[i])] &
                   ~lanes[static_cast<size_t>(right_id_[i])];
        break;
    }
  }
}

Bitset PlaceSpace::term_mask(const Term& t) const {
  const int tid = idx_.term_id(t);
  if (tid < 0) throw std::invalid_argument("term_mask: term not in index");
  Bitset out(count_, false);
  std::vector<uint64_t> lanes(idx_.terms().size(), 0);
  const uint64_t words = (count_ + 63) / 64;
  const uint64_t tail =
      (count_ % 64 != 0) ? ((uint64_t{1} << (count_ % 64)) - 1) : ~uint64_t{0};
  for (uint64_t w = 0; w < words; ++w) {
    eval_terms_for_word(w, lanes);
    out.words()[w] = lanes[static_cast<size_t>(tid)] & ((w + 1 == words) ? tail : ~uint64_t{0});
  }
  return out;
}

std::vector<bool> PlaceSpace::generator_values(uint64_t place_index) const {
  std::vector<bool> out(gens_);
  for (size_t s = 0; s < gens_; ++s) out[s] = (place_index >> s) & 1;
  return out;
}

Place PlaceSpace::place_at(uint64_t place_index) const {
  return evaluate_place(idx_, generator_values(place_index));
}

}  // namespace bstc
