#ifndef BSTC_CHOICE_HPP
#define BSTC_CHOICE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bstc {

// Subsets of a universe of at most 64 named elements, as bit masks over
// the universe ordering.
using SetMask = uint64_t;

struct ChoiceDataError : std::runtime_error {
  std::string path;  // e.g. "choice[3].selected"
  ChoiceDataError(std::string p, const std::string& msg)
      : std::runtime_error(p + ": " + msg), path(std::move(p)) {}
};

// A finite partial choice correspondence: a universe U, a family of
// pairwise-distinct nonempty menus, and a nonempty selection c(B) <= B
// per menu. The domain may be empty (no observations yet); a menu's
// selection may equal the menu.
class PartialChoice {
public:
  PartialChoice() = default;
  PartialChoice(std::vector<std::string> universe,
                std::vector<std::pair<SetMask, SetMask>> menu_selections);

  static constexpr size_t kMaxUniverse = 64;

  const std::vector<std::string>& universe() const { return universe_; }
  size_t universe_size() const { return universe_.size(); }
  SetMask universe_mask() const;

  size_t menu_count() const { return menus_.size(); }
  const std::vector<SetMask>& menus() const { return menus_; }
  SetMask menu(size_t i) const { return menus_[i]; }
  SetMask selected(size_t i) const { return selections_[i]; }

  // -1 when the mask is not a menu of the domain.
  int menu_index(SetMask menu) const;
  bool has_menu(SetMask menu) const { return menu_index(menu) >= 0; }
  SetMask selection_for(SetMask menu) const;  // throws on unknown menu

  // True when the domain is all of Pow+(U).
  bool is_total() const;

  int element_index(const std::string& name) const;  // -1 when unknown
  std::string set_to_string(SetMask mask) const;
  std::vector<std::string> set_to_names(SetMask mask) const;

private:
  std::vector<std::string> universe_;
  std::vector<SetMask> menus_;
  std::vector<SetMask> selections_;
};

enum class Axiom : uint8_t { Alpha, Beta, Gamma, Rho, Warp };

const char* axiom_name(Axiom a);

struct AxiomCheck {
  bool holds = true;
  // On failure, the first violating menu pair (A, B) in domain order.
  std::optional<std::pair<SetMask, SetMask>> witness;
};

// c̄(B) = B \ c(B); may be empty. Throws on unknown menu.
SetMask rejection(const PartialChoice& c, SetMask menu);

// Checks the universally quantified axiom over all menu pairs of the
// domain. Gamma and Rho instances whose conclusion mentions A u B are
// checked only when A u B is itself a menu.
AxiomCheck check_axiom(const PartialChoice& c, Axiom a);

// Self-test utility for total choices: WARP holds iff alpha and beta do.
bool warp_equals_alpha_and_beta(const PartialChoice& c);

struct RationalizabilityCheck {
  bool rationalizable = false;
  // The canonical revealed-preference relation (a >= b iff a in c(B) for
  // some menu B containing both); attached when it rationalizes c.
  std::vector<SetMask> revealed;  // bit j of revealed[i]: element i >= element j
};

// c is rationalizable iff the canonical revealed relation rationalizes it.
RationalizabilityCheck is_rationalizable(const PartialChoice& c);

// The canonical revealed relation and maximization, exposed for tests.
std::vector<SetMask> revealed_preference(const PartialChoice& c);
SetMask max_elements(const std::vector<SetMask>& relation, SetMask menu);

// The partition of U(family) into cells with a uniform membership
// signature over the family.
struct EulerDiagram {
  std::vector<SetMask> regions;
  // membership[r] lists the indices of the family sets containing region r.
  std::vector<std::vector<size_t>> membership;
};

// family must be nonempty; members may repeat or be empty, the partition
// is over the union of all members.
EulerDiagram euler_diagram(const std::vector<SetMask>& family);

// Regions of d intersecting A.
std::vector<size_t> envelope(const EulerDiagram& d, SetMask a);

// Omega_A = { B in Omega : B <= A }.
std::vector<SetMask> relativized_domain(const PartialChoice& c, SetMask a);

// True iff every menu of c inside U(family) belongs to family.
// family must be a subset of the domain.
bool is_subset_closed(const PartialChoice& c, const std::vector<SetMask>& family);

}  // namespace bstc

#endif
