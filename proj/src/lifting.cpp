#include "bstc/lifting.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <stdexcept>

namespace bstc {

const char* lift_rule_name(LiftRule r) {
  switch (r) {
    case LiftRule::FreeExtension: return "free-extension";
    case LiftRule::AlphaFormula: return "alpha-formula";
    case LiftRule::BetaComponent: return "beta-component";
    case LiftRule::WarpPreorder: return "warp-preorder";
  }
  return "?";
}

namespace {

void require_universe(const PartialChoice& c, const char* op) {
  if (c.universe_size() == 0)
    throw std::invalid_argument(std::string(op) + ": empty universe");
}

int least_element(SetMask m) { return std::countr_zero(m); }

}  // namespace

// --- alpha ------------------------------------------------------------

SetMask alpha_lift_value(const PartialChoice& c, SetMask menu) {
  SetMask rejected = 0;
  for (size_t i = 0; i < c.menu_count(); ++i)
    if ((c.menu(i) & ~menu) == 0) rejected |= c.menu(i) & ~c.selected(i);
  return menu & ~rejected;
}

namespace {

// Empty-residue search over subset-closed families. Families correspond
// exactly to the menu sets {B : B <= W} for W in the union closure of the
// domain, which keeps the search polynomial in the closure size; small
// domains are enumerated directly instead.
std::optional<std::vector<SetMask>> find_failing_family(const PartialChoice& c) {
  const size_t n = c.menu_count();
  if (n == 0) return std::nullopt;
  auto residue_empty = [&](const std::vector<SetMask>& family) {
    SetMask ground = 0, rejected = 0;
    for (SetMask b : family) {
      ground |= b;
      rejected |= b & ~c.selection_for(b);
    }
    return (ground & ~rejected) == 0;
  };
  if (n <= 20) {
    for (uint64_t bits = 1; bits < (uint64_t{1} << n); ++bits) {
      std::vector<SetMask> family;
      for (size_t i = 0; i < n; ++i)
        if (bits & (uint64_t{1} << i)) family.push_back(c.menu(i));
      if (!is_subset_closed(c, family)) continue;
      if (residue_empty(family)) return family;
    }
    return std::nullopt;
  }
  // Union closure of the domain, breadth-first, deterministic.
  std::vector<SetMask> reachable;
  for (SetMask m : c.menus())
    if (std::find(reachable.begin(), reachable.end(), m) == reachable.end())
      reachable.push_back(m);
  for (size_t i = 0; i < reachable.size(); ++i)
    for (size_t j = 0; j < c.menu_count(); ++j) {
      SetMask u = reachable[i] | c.menu(j);
      if (std::find(reachable.begin(), reachable.end(), u) == reachable.end())
        reachable.push_back(u);
    }
  std::sort(reachable.begin(), reachable.end());
  for (SetMask w : reachable) {
    std::vector<SetMask> family = relativized_domain(c, w);
    if (family.empty()) continue;
    if (residue_empty(family)) return family;
  }
  return std::nullopt;
}

}  // namespace

LiftReport alpha_liftable(const PartialChoice& c) {
  require_universe(c, "alpha_liftable");
  LiftReport report;
  AxiomCheck ax = check_axiom(c, Axiom::Alpha);
  if (!ax.holds) {
    LiftCertificate cert;
    cert.kind = LiftCertificate::Kind::MenuPair;
    cert.menu_pair = *ax.witness;
    report.certificate = cert;
    return report;
  }
  if (auto family = find_failing_family(c)) {
    LiftCertificate cert;
    cert.kind = LiftCertificate::Kind::SubsetClosedFamily;
    cert.family = *family;
    report.certificate = cert;
    return report;
  }
  report.liftable = true;
  if (c.universe_size() <= 16) report.witness = alpha_lift(c);
  return report;
}

PartialChoice alpha_lift(const PartialChoice& c) {
  if (!check_axiom(c, Axiom::Alpha).holds || find_failing_family(c))
    throw std::invalid_argument("alpha_lift: choice has no alpha extension");
  return materialize_total(c, LiftRule::AlphaFormula);
}

// --- beta -------------------------------------------------------------

SetMask beta_lift_value(const PartialChoice& c, SetMask menu) {
  int idx = c.menu_index(menu);
  int u = idx >= 0 ? least_element(c.selected(static_cast<size_t>(idx)))
                   : least_element(menu);
  const SetMask u_bit = SetMask{1} << u;
  // Distinct selections of submenus.
  std::vector<SetMask> image;
  for (size_t i = 0; i < c.menu_count(); ++i)
    if ((c.menu(i) & ~menu) == 0) {
      SetMask s = c.selected(i);
      if (std::find(image.begin(), image.end(), s) == image.end()) image.push_back(s);
    }
  SetMask covered = 0;
  for (SetMask s : image) covered |= s;
  if (!(covered & u_bit)) return u_bit;
  // Connected component of the intersection graph whose union holds u.
  std::vector<size_t> comp(image.size());
  for (size_t i = 0; i < image.size(); ++i) comp[i] = i;
  std::function<size_t(size_t)> find = [&](size_t x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  for (size_t i = 0; i < image.size(); ++i)
    for (size_t j = i + 1; j < image.size(); ++j)
      if (image[i] & image[j]) comp[find(i)] = find(j);
  size_t root = image.size();
  for (size_t i = 0; i < image.size(); ++i)
    if (image[i] & u_bit) {
      root = find(i);
      break;
    }
  SetMask out = 0;
  for (size_t i = 0; i < image.size(); ++i)
    if (find(i) == root) out |= image[i];
  return out;
}

LiftReport beta_liftable(const PartialChoice& c) {
  require_universe(c, "beta_liftable");
  LiftReport report;
  AxiomCheck ax = check_axiom(c, Axiom::Beta);
  if (!ax.holds) {
    LiftCertificate cert;
    cert.kind = LiftCertificate::Kind::MenuPair;
    cert.menu_pair = *ax.witness;
    report.certificate = cert;
    return report;
  }
  report.liftable = true;
  if (c.universe_size() <= 16) report.witness = beta_lift(c);
  return report;
}

PartialChoice beta_lift(const PartialChoice& c) {
  if (!check_axiom(c, Axiom::Beta).holds)
    throw std::invalid_argument("beta_lift: choice violates beta");
  return materialize_total(c, LiftRule::BetaComponent);
}

// --- WARP -------------------------------------------------------------

std::vector<SetMask> choice_structure_family(const PartialChoice& c) {
  std::vector<SetMask> family;
  auto add = [&](SetMask s) {
    if (std::find(family.begin(), family.end(), s) == family.end()) family.push_back(s);
  };
  for (size_t i = 0; i < c.menu_count(); ++i) add(c.menu(i));
  for (size_t i = 0; i < c.menu_count(); ++i) add(c.selected(i));
  return family;
}

namespace {

struct ConstraintGraph {
  size_t n = 0;
  std::vector<std::vector<size_t>> succ;              // weak and strict together
  std::vector<std::vector<uint8_t>> strict;           // adjacency flag
  void add(size_t from, size_t to, bool is_strict) {
    if (std::find(succ[from].begin(), succ[from].end(), to) == succ[from].end())
      succ[from].push_back(to);
    if (is_strict) strict[from][to] = 1;
  }
};

ConstraintGraph build_constraints(const PartialChoice& c, const EulerDiagram& d) {
  ConstraintGraph g;
  g.n = d.regions.size();
  g.succ.resize(g.n);
  g.strict.assign(g.n, std::vector<uint8_t>(g.n, 0));
  for (size_t m = 0; m < c.menu_count(); ++m) {
    const SetMask menu = c.menu(m), sel = c.selected(m);
    std::vector<size_t> chosen, rejected, env;
    for (size_t r = 0; r < d.regions.size(); ++r) {
      if ((d.regions[r] & ~menu) != 0) continue;  // menus are unions of regions
      env.push_back(r);
      if ((d.regions[r] & ~sel) == 0) chosen.push_back(r);
      else rejected.push_back(r);
    }
    for (size_t e : env)
      for (size_t ch : chosen) g.add(e, ch, false);
    for (size_t e : rejected)
      for (size_t ch : chosen) g.add(e, ch, true);
  }
  return g;
}

// Iterative Tarjan, deterministic by vertex order.
std::vector<size_t> scc_of(const ConstraintGraph& g) {
  std::vector<size_t> comp(g.n, SIZE_MAX), low(g.n), disc(g.n, SIZE_MAX), stk;
  std::vector<uint8_t> on_stack(g.n, 0);
  size_t timer = 0, comp_count = 0;
  struct Frame {
    size_t v;
    size_t child;
  };
  for (size_t s = 0; s < g.n; ++s) {
    if (disc[s] != SIZE_MAX) continue;
    std::vector<Frame> frames{{s, 0}};
    disc[s] = low[s] = timer++;
    stk.push_back(s);
    on_stack[s] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.child < g.succ[f.v].size()) {
        size_t w = g.succ[f.v][f.child++];
        if (disc[w] == SIZE_MAX) {
          disc[w] = low[w] = timer++;
          stk.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], disc[w]);
        }
      } else {
        if (low[f.v] == disc[f.v]) {
          for (;;) {
            size_t w = stk.back();
            stk.pop_back();
            on_stack[w] = 0;
            comp[w] = comp_count;
            if (w == f.v) break;
          }
          ++comp_count;
        }
        size_t v = f.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
    }
  }
  return comp;
}

// A cycle through the strict edge (u,v): v ->* u inside their component.
std::vector<size_t> cycle_through(const ConstraintGraph& g, const std::vector<size_t>& comp,
                                  size_t u, size_t v) {
  std::vector<size_t> parent(g.n, SIZE_MAX);
  std::vector<size_t> queue{v};
  std::vector<uint8_t> seen(g.n, 0);
  seen[v] = 1;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    size_t x = queue[qi];
    if (x == u) break;
    for (size_t w : g.succ[x]) {
      if (seen[w] || comp[w] != comp[v]) continue;
      seen[w] = 1;
      parent[w] = x;
      queue.push_back(w);
    }
  }
  std::vector<size_t> path;  // u back to v
  for (size_t x = u; x != SIZE_MAX && x != v; x = parent[x]) path.push_back(x);
  path.push_back(v);
  std::reverse(path.begin(), path.end());  // v ... u; edge u->v closes the cycle
  return path;
}

}  // namespace

LiftReport warp_liftable(const PartialChoice& c) {
  require_universe(c, "warp_liftable");
  LiftReport report;
  if (c.menu_count() == 0) {
    report.liftable = true;
    report.warp = WarpStructure{};
    if (c.universe_size() <= 16) report.witness = warp_lift(c, *report.warp);
    return report;
  }
  WarpStructure w;
  w.diagram = euler_diagram(choice_structure_family(c));
  ConstraintGraph g = build_constraints(c, w.diagram);
  std::vector<size_t> comp = scc_of(g);
  for (size_t u = 0; u < g.n; ++u)
    for (size_t v : g.succ[u])
      if (g.strict[u][v] && comp[u] == comp[v]) {
        LiftCertificate cert;
        cert.kind = LiftCertificate::Kind::RegionCycle;
        for (size_t r : cycle_through(g, comp, u, v)) cert.cycle.push_back(w.diagram.regions[r]);
        report.certificate = cert;
        return report;
      }
  // Longest-path layering of the condensation: weak edges never descend,
  // strict edges always climb.
  size_t comp_count = 0;
  for (size_t x : comp) comp_count = std::max(comp_count, x + 1);
  std::vector<size_t> comp_layer(comp_count, 0);
  bool changed = true;
  while (changed) {  // <= n iterations on a DAG
    changed = false;
    for (size_t u = 0; u < g.n; ++u)
      for (size_t v : g.succ[u]) {
        if (comp[u] == comp[v]) continue;
        if (comp_layer[comp[v]] < comp_layer[comp[u]] + 1) {
          comp_layer[comp[v]] = comp_layer[comp[u]] + 1;
          changed = true;
        }
      }
  }
  size_t depth = 0;
  for (size_t l : comp_layer) depth = std::max(depth, l + 1);
  w.preorder.layers.assign(depth, {});
  w.preorder.layer_of.assign(g.n, 0);
  for (size_t r = 0; r < g.n; ++r) {
    size_t layer = comp_layer[comp[r]];
    w.preorder.layer_of[r] = layer;
    w.preorder.layers[layer].push_back(r);
  }
  if (!preorder_satisfies_conditions(c, w))
    throw std::logic_error("warp_liftable: constructed preorder fails its own conditions");
  report.liftable = true;
  report.warp = std::move(w);
  if (c.universe_size() <= 16) report.witness = warp_lift(c, *report.warp);
  return report;
}

bool preorder_satisfies_conditions(const PartialChoice& c, const WarpStructure& w) {
  const auto& d = w.diagram;
  const auto& p = w.preorder;
  for (size_t m = 0; m < c.menu_count(); ++m) {
    const SetMask menu = c.menu(m), sel = c.selected(m);
    size_t top = 0;
    bool has_env = false;
    for (size_t r = 0; r < d.regions.size(); ++r) {
      if (!(d.regions[r] & menu)) continue;
      has_env = true;
      top = std::max(top, p.layer_of[r]);
    }
    if (!has_env) return false;  // menus are covered by the diagram
    for (size_t r = 0; r < d.regions.size(); ++r) {
      const bool in_menu = (d.regions[r] & ~menu) == 0;
      const bool in_sel = (d.regions[r] & ~sel) == 0;
      if (in_menu && !in_sel && p.layer_of[r] == top) return false;        // (b)
      if (!in_sel) continue;
      for (size_t e = 0; e < d.regions.size(); ++e)
        if ((d.regions[e] & ~menu) == 0 && p.layer_of[e] > p.layer_of[r]) return false;  // (a)
    }
  }
  return true;
}

SetMask warp_lift_value(const PartialChoice& c, const WarpStructure& w, SetMask menu) {
  (void)c;  // the rule reads everything off the diagram and preorder
  SetMask covered = 0;
  for (SetMask r : w.diagram.regions) covered |= r;
  if (menu & ~covered) return menu & ~covered;
  size_t top = 0;
  for (size_t r = 0; r < w.diagram.regions.size(); ++r)
    if (w.diagram.regions[r] & menu) top = std::max(top, w.preorder.layer_of[r]);
  SetMask out = 0;
  for (size_t r = 0; r < w.diagram.regions.size(); ++r)
    if ((w.diagram.regions[r] & menu) && w.preorder.layer_of[r] == top)
      out |= w.diagram.regions[r];
  return out & menu;
}

PartialChoice warp_lift(const PartialChoice& c, const WarpStructure& w) {
  return materialize_total(c, LiftRule::WarpPreorder, &w);
}

// --- shared -----------------------------------------------------------

SetMask free_extension_value(const PartialChoice& c, SetMask menu) {
  int i = c.menu_index(menu);
  return i >= 0 ? c.selected(static_cast<size_t>(i)) : menu;
}

PartialChoice materialize_total(const PartialChoice& c, LiftRule rule, const WarpStructure* w) {
  require_universe(c, "materialize_total");
  if (c.universe_size() > 16)
    throw std::invalid_argument("materialize_total: universe larger than the 16-element guard");
  if (rule == LiftRule::WarpPreorder && !w)
    throw std::invalid_argument("materialize_total: warp rule needs its preorder");
  std::vector<std::pair<SetMask, SetMask>> entries;
  const SetMask u = c.universe_mask();
  for (SetMask m = 1; m <= u && m != 0; ++m) {
    SetMask v = 0;
    switch (rule) {
      case LiftRule::FreeExtension: v = free_extension_value(c, m); break;
      case LiftRule::AlphaFormula: v = alpha_lift_value(c, m); break;
      case LiftRule::BetaComponent: v = beta_lift_value(c, m); break;
      case LiftRule::WarpPreorder: v = warp_lift_value(c, *w, m); break;
    }
    entries.emplace_back(m, v);
  }
  return PartialChoice(c.universe(), std::move(entries));
}

}  // namespace bstc
