#ifndef BSTC_LIFTING_HPP
#define BSTC_LIFTING_HPP

#include <optional>
#include <utility>
#include <vector>

#include "bstc/choice.hpp"

namespace bstc {

// A total preorder on the Euler regions of a choice structure, stored as
// an ordered partition into layers. layers[0] is the bottom; elements of
// higher layers are strictly above. On a finite carrier every total
// preorder has maximal elements, so no extra structure is needed.
struct LayeredPreorder {
  std::vector<std::vector<size_t>> layers;  // region indices per layer
  std::vector<size_t> layer_of;             // region index -> layer

  bool leq(size_t a, size_t b) const { return layer_of[a] <= layer_of[b]; }
};

struct WarpStructure {
  EulerDiagram diagram;  // regions of menus u selections
  LayeredPreorder preorder;
};

struct LiftCertificate {
  enum class Kind { MenuPair, SubsetClosedFamily, RegionCycle };
  Kind kind = Kind::MenuPair;
  std::pair<SetMask, SetMask> menu_pair{0, 0};  // axiom violation (alpha a / beta)
  std::vector<SetMask> family;                  // alpha (b): family with empty residue
  std::vector<SetMask> cycle;                   // warp: regions forced into a strict cycle
};

struct LiftReport {
  bool liftable = false;
  // Total extension, materialized menu-by-menu when |U| <= 16.
  std::optional<PartialChoice> witness;
  std::optional<LiftCertificate> certificate;
  std::optional<WarpStructure> warp;  // the found preorder, warp only
};

enum class LiftRule { FreeExtension, AlphaFormula, BetaComponent, WarpPreorder };

const char* lift_rule_name(LiftRule r);

// --- alpha ------------------------------------------------------------
// Liftable iff (a) the alpha axiom holds on the domain and (b) every
// nonempty subset-closed family of menus leaves some element unrejected:
//   U(F) \ U_{B in F} (B \ c(B))  is nonempty.
LiftReport alpha_liftable(const PartialChoice& c);

// c+(A) = A \ U_{B in Omega, B <= A} (B \ c(B)); requires alpha_liftable.
SetMask alpha_lift_value(const PartialChoice& c, SetMask menu);
PartialChoice alpha_lift(const PartialChoice& c);

// --- beta -------------------------------------------------------------
// Liftable iff the beta axiom holds on the domain.
LiftReport beta_liftable(const PartialChoice& c);

// c+(A) = the union of the connected component of the intersection graph
// of {c(B) : B in Omega, B <= A} whose union contains u_A, or {u_A} when
// u_A lies outside every such selection. u_A is the least element of
// c(A) when A is a menu, otherwise the least element of A.
SetMask beta_lift_value(const PartialChoice& c, SetMask menu);
PartialChoice beta_lift(const PartialChoice& c);

// --- WARP -------------------------------------------------------------
// Liftable iff a total preorder on the Euler regions of menus u selections
// exists with
//   (a) E <= B and E' <= c(B)  implies  E below-or-equal E', and
//   (b) regions maximal in the envelope of a menu lie inside its selection.
// Given (a), condition (b) is equivalent to strict constraints from each
// rejected region of a menu to each selected one, so existence reduces to
// the mixed weak/strict constraint graph having no strict edge inside a
// strongly connected component. On failure the offending cycle is the
// certificate.
LiftReport warp_liftable(const PartialChoice& c);

// Extension by the preorder: c+(B) = B \ U(regions) when nonempty,
// otherwise the union of the top occupied layer of B's envelope, meeting B.
SetMask warp_lift_value(const PartialChoice& c, const WarpStructure& w, SetMask menu);
PartialChoice warp_lift(const PartialChoice& c, const WarpStructure& w);

// Direct check of conditions (a) and (b); used by tests and as a
// postcondition guard inside warp_liftable.
bool preorder_satisfies_conditions(const PartialChoice& c, const WarpStructure& w);

// --- shared -----------------------------------------------------------
// The do-nothing extension: menus keep their data, everything else picks
// itself.
SetMask free_extension_value(const PartialChoice& c, SetMask menu);

// Evaluates the rule on every nonempty subset of the universe (|U| <= 16).
PartialChoice materialize_total(const PartialChoice& c, LiftRule rule,
                                const WarpStructure* w = nullptr);

// The family Omega u c[Omega] in deterministic order, deduplicated.
std::vector<SetMask> choice_structure_family(const PartialChoice& c);

}  // namespace bstc

#endif
