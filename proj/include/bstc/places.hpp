#ifndef BSTC_PLACES_HPP
#define BSTC_PLACES_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bstc/ast.hpp"

namespace bstc {

struct ResourceLimitError : std::runtime_error {
  std::string cap;
  ResourceLimitError(std::string cap_name, const std::string& msg)
      : std::runtime_error(msg), cap(std::move(cap_name)) {}
};

// A place: a Boolean valuation over the indexed terms with
//   pi(0) = 0,  pi(A + B) = pi(A) | pi(B),
//   pi(A & B) = pi(A) & pi(B),  pi(A - B) = pi(A) & ~pi(B).
// Set variables, singleton terms and choice terms are free generator
// slots; everything else is derived.
struct Place {
  std::vector<bool> values;  // indexed by FormulaIndex term order

  bool at(const FormulaIndex& idx, const Term& t) const {
    return values[static_cast<size_t>(idx.term_id(t))];
  }
};

// The unique place extending a generator assignment (one bool per
// idx.generators() slot) through the Boolean term structure.
Place evaluate_place(const FormulaIndex& idx, const std::vector<bool>& generator_values);

bool place_invariants_hold(const FormulaIndex& idx, const Place& p);

struct AmpleCandidate {
  std::vector<Place> places;
  std::map<std::string, size_t> var_place;  // individual variable -> index into places
};

struct AmpleCheck {
  bool ok = true;
  std::string failing_condition;  // "v", "vi", "vii" or "viii"
  std::optional<Atom> atom;
};

// Conditions (v)-(viii) for the atom set A (given as atom ids of idx):
// atoms outside A must hold uniformly at every place, atoms inside A
// need one witnessing place.
AmpleCheck is_ample(const AmpleCandidate& candidate, const std::vector<int>& witness_atom_ids,
                    const FormulaIndex& idx);

// The designated-place invariant: each individual variable has exactly
// one member of the candidate at its singleton term, namely var_place[x].
bool var_places_consistent(const AmpleCandidate& candidate, const FormulaIndex& idx);

// All places satisfying the universal conditions relative to A.
std::vector<Place> enumerate_filtered_places(const FormulaIndex& idx,
                                             const std::vector<int>& witness_atom_ids,
                                             int max_generator_bits = 24);

// --- bit-parallel place space -------------------------------------------
//
// Place index p encodes a generator assignment: bit s of p is the value of
// generator slot s. Masks are bitsets over all 2^g places; the universal
// mask of an atom marks the places where the atom's uniform condition
// holds, so its complement marks the witness candidates.

class Bitset {
public:
  Bitset() = default;
  Bitset(uint64_t nbits, bool fill);

  uint64_t size() const { return nbits_; }
  bool test(uint64_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void set(uint64_t i) { w_[i >> 6] |= uint64_t{1} << (i & 63); }
  bool any() const;
  bool none() const { return !any(); }
  uint64_t count() const;
  int64_t first_set() const;  // -1 when empty

  void and_with(const Bitset& other);
  void or_with(const Bitset& other);
  void and_not(const Bitset& other);            // this &= ~other
  static Bitset intersect(const Bitset& a, const Bitset& b);
  static Bitset minus(const Bitset& a, const Bitset& b);
  bool intersects(const Bitset& other) const;

  const std::vector<uint64_t>& words() const { return w_; }
  std::vector<uint64_t>& words() { return w_; }

private:
  uint64_t nbits_ = 0;
  std::vector<uint64_t> w_;
  void trim();
};

struct PlaceSpaceCaps {
  int max_generator_bits = 24;
  uint64_t max_mask_bytes = uint64_t{1} << 30;
};

class PlaceSpace {
public:
  PlaceSpace(const FormulaIndex& idx, const PlaceSpaceCaps& caps);

  const FormulaIndex& index() const { return idx_; }
  size_t generator_count() const { return gens_; }
  uint64_t place_count() const { return count_; }

  const Bitset& atom_universal(size_t atom_id) const { return atom_universal_[atom_id]; }
  const Bitset& at_var(size_t var_index) const { return at_var_[var_index]; }
  Bitset all_places() const { return Bitset(count_, true); }

  // Places where the given term holds; one streaming pass, not cached.
  Bitset term_mask(const Term& t) const;

  std::vector<bool> generator_values(uint64_t place_index) const;
  Place place_at(uint64_t place_index) const;

private:
  const FormulaIndex& idx_;
  size_t gens_ = 0;
  uint64_t count_ = 0;
  std::vector<int> eval_order_;       // term ids, children first
  std::vector<int> generator_slot_;   // term id -> generator slot or -1
  std::vector<int> left_id_;          // operand term ids, -1 where absent
  std::vector<int> right_id_;
  std::vector<Bitset> atom_universal_;
  std::vector<Bitset> at_var_;

  uint64_t generator_lane(size_t slot, uint64_t word_index) const;
  void eval_terms_for_word(uint64_t word_index, std::vector<uint64_t>& lanes) const;
};

}  // namespace bstc

#endif
