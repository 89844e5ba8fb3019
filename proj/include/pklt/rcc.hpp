#pragma once

// Rational chain connectedness of loci from genus labels and incidence.

#include "pklt/error.hpp"
#include "pklt/locus.hpp"
#include "pklt/potential.hpp"

#include <algorithm>
#include <string>

namespace pklt {

inline IncidenceGraph incidence_graph(const PairSpec& pair, const Locus& comps) {
  return build_incidence_graph(pair.model(), pair.level(), comps);
}

/// Empty, or connected with every curve rational. Points impose nothing.
inline bool is_rcc_locus(const IncidenceGraph& g) {
  if (g.nodes.empty()) return true;
  bool rational = std::all_of(g.nodes.begin(), g.nodes.end(), [](const LocusComponent& c) {
    return c.kind == LocusComponent::Kind::point || c.genus == 0;
  });
  return rational && g.connected();
}

struct RccResult {
  bool rcc = false;
  std::string explanation;
};

/// For Δ = 0 and −K big: X is rationally chain connected iff pNklt(X, 0) is.
inline RccResult surface_rcc_via_pnklt(const PairSpec& pair) {
  if (!pair.delta().is_zero()) throw PreconditionError("criterion requires Delta = 0");
  if (!pair.anti_log_canonical_big()) throw PreconditionError("criterion requires -K big");
  Locus p = pnklt_locus(pair);
  if (p.empty()) return {true, "pNklt(X,0) is empty, so X is rationally connected"};
  auto g = incidence_graph(pair, p);
  bool rcc = is_rcc_locus(g);
  std::string list;
  for (const auto& c : g.nodes) list += (list.empty() ? "" : ", ") + c.name + (c.kind == LocusComponent::Kind::curve ? " (genus " + std::to_string(c.genus) + ")" : "");
  if (rcc) return {true, "pNklt(X,0) = {" + list + "} is a connected chain of rational curves and points; X is rationally chain connected"};
  return {false, "pNklt(X,0) = {" + list + "} is " + (g.connected() ? "not rational" : "disconnected") +
                     "; X is not rationally chain connected"};
}

}  // namespace pklt
