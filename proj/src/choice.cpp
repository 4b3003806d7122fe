#include "bstc/choice.hpp"

#include <algorithm>
#include <bit>
#include <functional>

namespace bstc {

PartialChoice::PartialChoice(std::vector<std::string> universe,
                             std::vector<std::pair<SetMask, SetMask>> menu_selections)
    : universe_(std::move(universe)) {
  if (universe_.size() > kMaxUniverse)
    throw ChoiceDataError("universe", "more than 64 elements are not supported");
  for (size_t i = 0; i < universe_.size(); ++i)
    for (size_t j = i + 1; j < universe_.size(); ++j)
      if (universe_[i] == universe_[j])
        throw ChoiceDataError("universe", "duplicate element '" + universe_[i] + "'");
  const SetMask u = universe_mask();
  menus_.reserve(menu_selections.size());
  selections_.reserve(menu_selections.size());
  for (size_t i = 0; i < menu_selections.size(); ++i) {
    auto [menu, sel] = menu_selections[i];
    std::string path = "choice[" + std::to_string(i) + "]";
    if (menu == 0) throw ChoiceDataError(path + ".menu", "menu is empty");
    if ((menu & ~u) != 0) throw ChoiceDataError(path + ".menu", "menu uses unknown elements");
    if (sel == 0) throw ChoiceDataError(path + ".selected", "selection is empty");
    if ((sel & ~menu) != 0)
      throw ChoiceDataError(path + ".selected", "selection is not a subset of the menu");
    for (SetMask m : menus_)
      if (m == menu) throw ChoiceDataError(path + ".menu", "duplicate menu");
    menus_.push_back(menu);
    selections_.push_back(sel);
  }
}

SetMask PartialChoice::universe_mask() const {
  return universe_.size() == 64 ? ~SetMask{0} : ((SetMask{1} << universe_.size()) - 1);
}

int PartialChoice::menu_index(SetMask menu) const {
  for (size_t i = 0; i < menus_.size(); ++i)
    if (menus_[i] == menu) return static_cast<int>(i);
  return -1;
}

SetMask PartialChoice::selection_for(SetMask menu) const {
  int i = menu_index(menu);
  if (i < 0) throw std::invalid_argument("selection_for: unknown menu " + set_to_string(menu));
  return selections_[i];
}

bool PartialChoice::is_total() const {
  if (universe_.empty()) return false;
  if (universe_.size() > 20) return false;  // would be > 1M menus; never built here
  SetMask u = universe_mask();
  for (SetMask m = 1; m <= u; ++m)
    if (!has_menu(m)) return false;
  return true;
}

int PartialChoice::element_index(const std::string& name) const {
  for (size_t i = 0; i < universe_.size(); ++i)
    if (universe_[i] == name) return static_cast<int>(i);
  return -1;
}

std::string PartialChoice::set_to_string(SetMask mask) const {
  std::string out = "{";
  bool first = true;
  for (size_t i = 0; i < universe_.size(); ++i)
    if (mask & (SetMask{1} << i)) {
      if (!first) out += ",";
      out += universe_[i];
      first = false;
    }
  out += "}";
  return out;
}

std::vector<std::string> PartialChoice::set_to_names(SetMask mask) const {
  std::vector<std::string> out;
  for (size_t i = 0; i < universe_.size(); ++i)
    if (mask & (SetMask{1} << i)) out.push_back(universe_[i]);
  return out;
}

const char* axiom_name(Axiom a) {
  switch (a) {
    case Axiom::Alpha: return "alpha";
    case Axiom::Beta: return "beta";
    case Axiom::Gamma: return "gamma";
    case Axiom::Rho: return "rho";
    case Axiom::Warp: return "warp";
  }
  return "?";
}

SetMask rejection(const PartialChoice& c, SetMask menu) {
  return menu & ~c.selection_for(menu);
}

AxiomCheck check_axiom(const PartialChoice& c, Axiom axiom) {
  const size_t n = c.menu_count();
  for (size_t i = 0; i < n; ++i) {
    const SetMask a = c.menu(i), ca = c.selected(i);
    for (size_t j = 0; j < n; ++j) {
      const SetMask b = c.menu(j), cb = c.selected(j);
      bool ok = true;
      switch (axiom) {
        case Axiom::Alpha:
          ok = (a & ~b) != 0 || ((a & cb) & ~ca) == 0;
          break;
        case Axiom::Beta:
          ok = (a & ~b) != 0 || (ca & cb) == 0 || (ca & ~cb) == 0;
          break;
        case Axiom::Warp:
          ok = (a & ~b) != 0 || (a & cb) == 0 || ca == (a & cb);
          break;
        case Axiom::Gamma: {
          int u = c.menu_index(a | b);
          ok = u < 0 || ((ca & cb) & ~c.selected(static_cast<size_t>(u))) == 0;
          break;
        }
        case Axiom::Rho: {
          int u = c.menu_index(a | b);
          ok = u < 0 || (ca & ~c.selected(static_cast<size_t>(u))) == 0 ||
               (b & c.selected(static_cast<size_t>(u))) != 0;
          break;
        }
      }
      if (!ok) return AxiomCheck{false, std::make_pair(a, b)};
    }
  }
  return AxiomCheck{};
}

bool warp_equals_alpha_and_beta(const PartialChoice& c) {
  bool warp = check_axiom(c, Axiom::Warp).holds;
  bool ab = check_axiom(c, Axiom::Alpha).holds && check_axiom(c, Axiom::Beta).holds;
  return warp == ab;
}

std::vector<SetMask> revealed_preference(const PartialChoice& c) {
  std::vector<SetMask> rel(c.universe_size(), 0);
  for (size_t m = 0; m < c.menu_count(); ++m) {
    SetMask menu = c.menu(m), sel = c.selected(m);
    for (size_t i = 0; i < c.universe_size(); ++i) {
      if (!(sel & (SetMask{1} << i))) continue;
      rel[i] |= menu;  // i >= b for every b in the menu
    }
  }
  return rel;
}

SetMask max_elements(const std::vector<SetMask>& relation, SetMask menu) {
  SetMask out = 0;
  for (size_t a = 0; a < relation.size(); ++a) {
    if (!(menu & (SetMask{1} << a))) continue;
    bool maximal = true;
    for (size_t b = 0; b < relation.size() && maximal; ++b) {
      if (!(menu & (SetMask{1} << b))) continue;
      // b strictly above a: b >= a and not a >= b
      if ((relation[b] & (SetMask{1} << a)) && !(relation[a] & (SetMask{1} << b)))
        maximal = false;
    }
    if (maximal) out |= SetMask{1} << a;
  }
  return out;
}

namespace {

// A relation rationalizes c iff its strict part s satisfies, per menu B:
//   (1) nothing in B beats a selected element, and
//   (2) every rejected element is beaten by something in B.
// The canonical revealed relation settles most instances; when it fails,
// elements that are never selected may still beat others, so a
// backtracking search over beater choices for the rejected pairs decides
// the rest. (1) fixes the forbidden strict pairs up front; asymmetry is
// maintained during the search.
bool search_strict_rationalizer(const PartialChoice& c, std::vector<SetMask>& strict_out) {
  const size_t n = c.universe_size();
  std::vector<SetMask> forbidden(n, 0);  // bit a of forbidden[b]: s(b,a) disallowed
  for (size_t m = 0; m < c.menu_count(); ++m) {
    SetMask menu = c.menu(m), sel = c.selected(m);
    for (size_t b = 0; b < n; ++b)
      if (menu & (SetMask{1} << b)) forbidden[b] |= sel;
  }
  std::vector<std::pair<SetMask, size_t>> requirements;  // (menu, rejected element)
  for (size_t m = 0; m < c.menu_count(); ++m) {
    SetMask rej = c.menu(m) & ~c.selected(m);
    for (size_t a = 0; a < n; ++a)
      if (rej & (SetMask{1} << a)) requirements.emplace_back(c.menu(m), a);
  }
  // A requirement with no permitted beater at all can never be met;
  // catching it here keeps failing instances linear.
  for (auto& [menu, a] : requirements) {
    bool feasible = false;
    for (size_t b = 0; b < n && !feasible; ++b)
      if (b != a && (menu & (SetMask{1} << b)) && !(forbidden[b] & (SetMask{1} << a)))
        feasible = true;
    if (!feasible) return false;
  }
  std::vector<SetMask> strict(n, 0);  // bit a of strict[b]: b beats a
  std::function<bool(size_t)> rec = [&](size_t i) -> bool {
    if (i == requirements.size()) return true;
    auto [menu, a] = requirements[i];
    for (size_t b = 0; b < n; ++b) {
      if (b == a || !(menu & (SetMask{1} << b))) continue;
      if (strict[b] & (SetMask{1} << a)) return rec(i + 1);  // already beaten
    }
    for (size_t b = 0; b < n; ++b) {
      if (b == a || !(menu & (SetMask{1} << b))) continue;
      if (forbidden[b] & (SetMask{1} << a)) continue;
      if (strict[a] & (SetMask{1} << b)) continue;  // asymmetry
      strict[b] |= SetMask{1} << a;
      if (rec(i + 1)) return true;
      strict[b] &= ~(SetMask{1} << a);
    }
    return false;
  };
  if (!rec(0)) return false;
  strict_out = std::move(strict);
  return true;
}

}  // namespace

RationalizabilityCheck is_rationalizable(const PartialChoice& c) {
  // Fast path: the canonical revealed relation.
  std::vector<SetMask> rel = revealed_preference(c);
  bool canonical_ok = true;
  for (size_t m = 0; m < c.menu_count(); ++m)
    if (max_elements(rel, c.menu(m)) != c.selected(m)) {
      canonical_ok = false;
      break;
    }
  if (canonical_ok) return RationalizabilityCheck{true, std::move(rel)};

  std::vector<SetMask> strict;
  if (!search_strict_rationalizer(c, strict)) return RationalizabilityCheck{};
  // a >= b  iff  not (b beats a); reproduces exactly the found strict part.
  const size_t n = c.universe_size();
  std::vector<SetMask> witness(n, 0);
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b)
      if (!(strict[b] & (SetMask{1} << a))) witness[a] |= SetMask{1} << b;
  for (size_t m = 0; m < c.menu_count(); ++m)
    if (max_elements(witness, c.menu(m)) != c.selected(m))
      throw std::logic_error("is_rationalizable: constructed relation fails its menus");
  return RationalizabilityCheck{true, std::move(witness)};
}

EulerDiagram euler_diagram(const std::vector<SetMask>& family) {
  if (family.empty()) throw std::invalid_argument("euler_diagram: empty family");
  SetMask ground = 0;
  for (SetMask s : family) ground |= s;
  // Bucket elements by membership signature over the family.
  std::vector<uint64_t> signature_of;  // per element bit position
  std::vector<std::pair<uint64_t, SetMask>> buckets;
  for (size_t e = 0; e < 64; ++e) {
    if (!(ground & (SetMask{1} << e))) continue;
    uint64_t sig = 0;
    for (size_t s = 0; s < family.size(); ++s)
      if (family[s] & (SetMask{1} << e)) sig |= uint64_t{1} << s;
    bool found = false;
    for (auto& [bsig, bmask] : buckets)
      if (bsig == sig) {
        bmask |= SetMask{1} << e;
        found = true;
        break;
      }
    if (!found) buckets.emplace_back(sig, SetMask{1} << e);
  }
  // Deterministic region order: by smallest element.
  std::sort(buckets.begin(), buckets.end(),
            [](const auto& a, const auto& b) { return (a.second & -a.second) < (b.second & -b.second); });
  EulerDiagram d;
  for (auto& [sig, mask] : buckets) {
    d.regions.push_back(mask);
    std::vector<size_t> members;
    for (size_t s = 0; s < family.size(); ++s)
      if (sig & (uint64_t{1} << s)) members.push_back(s);
    d.membership.push_back(std::move(members));
  }
  return d;
}

std::vector<size_t> envelope(const EulerDiagram& d, SetMask a) {
  std::vector<size_t> out;
  for (size_t r = 0; r < d.regions.size(); ++r)
    if (d.regions[r] & a) out.push_back(r);
  return out;
}

std::vector<SetMask> relativized_domain(const PartialChoice& c, SetMask a) {
  std::vector<SetMask> out;
  for (SetMask m : c.menus())
    if ((m & ~a) == 0) out.push_back(m);
  return out;
}

bool is_subset_closed(const PartialChoice& c, const std::vector<SetMask>& family) {
  for (SetMask f : family)
    if (!c.has_menu(f))
      throw std::invalid_argument("is_subset_closed: family member is not a menu");
  SetMask ground = 0;
  for (SetMask f : family) ground |= f;
  for (SetMask m : c.menus()) {
    if ((m & ~ground) != 0) continue;
    if (std::find(family.begin(), family.end(), m) == family.end()) return false;
  }
  return true;
}

}  // namespace bstc
