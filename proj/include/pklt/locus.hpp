#pragma once

// Closed subsets of the pair's surface X recorded as irreducible components:
// curves of X, or points of X that are images of contracted tower curves.

#include "pklt/surface_model.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace pklt {

struct LocusComponent {
  enum class Kind { curve, point };
  Kind kind = Kind::curve;
  std::string id;                       // stable curve id, or point label
  std::string name;                     // "C0~" or "pt:E1"
  int genus = 0;                        // points count as genus 0
  std::vector<std::string> on_curves;   // points: curves of X through the point

  bool operator==(const LocusComponent& o) const { return kind == o.kind && id == o.id; }
  bool operator<(const LocusComponent& o) const { return std::pair(kind, id) < std::pair(o.kind, o.id); }
};

using Locus = std::vector<LocusComponent>;

/// Image on the level-`pair_level` surface of a curve of the top level.
inline LocusComponent image_at_level(const SurfaceModel& model, int pair_level, const std::string& curve_id) {
  const int top = model.top_level();
  const Curve& c = model.curve(top, curve_id);
  if (c.created_level <= pair_level) {
    const Curve& here = model.curve(pair_level, c.id);
    return {LocusComponent::Kind::curve, here.id, here.display_name(), here.genus, {}};
  }
  // Walk down to the first blow-up over X in this infinitely-near chain.
  const BlowUpCenter* center = &*model.level(c.created_level).center;
  for (;;) {
    const BlowUpCenter* parent = nullptr;
    for (const auto& inc : center->on_curves) {
      const Curve& on = model.curve(top, inc.curve);
      if (on.created_level > pair_level) {
        parent = &*model.level(on.created_level).center;
        break;
      }
    }
    if (!parent) break;
    center = parent;
  }
  LocusComponent p{LocusComponent::Kind::point, center->point_label, "pt:" + center->point_label, 0, {}};
  for (const auto& inc : center->on_curves) p.on_curves.push_back(model.curve(top, inc.curve).id);
  std::sort(p.on_curves.begin(), p.on_curves.end());
  return p;
}

inline bool point_on_curve(const LocusComponent& point, const std::string& curve_id) {
  return std::find(point.on_curves.begin(), point.on_curves.end(), curve_id) != point.on_curves.end();
}

/// Sorted, duplicate-free, and without points that lie on a curve component.
inline Locus reduce(Locus l) {
  std::sort(l.begin(), l.end());
  l.erase(std::unique(l.begin(), l.end()), l.end());
  Locus out;
  for (const auto& c : l) {
    bool absorbed = c.kind == LocusComponent::Kind::point &&
                    std::any_of(l.begin(), l.end(), [&](const LocusComponent& o) {
                      return o.kind == LocusComponent::Kind::curve && point_on_curve(c, o.id);
                    });
    if (!absorbed) out.push_back(c);
  }
  return out;
}

/// Set-theoretic containment of a component in a locus.
inline bool contains(const Locus& l, const LocusComponent& c) {
  for (const auto& o : l) {
    if (o == c) return true;
    if (c.kind == LocusComponent::Kind::point && o.kind == LocusComponent::Kind::curve && point_on_curve(c, o.id)) return true;
  }
  return false;
}

inline bool is_subset(const Locus& a, const Locus& b) {
  return std::all_of(a.begin(), a.end(), [&](const LocusComponent& c) { return contains(b, c); });
}

inline Locus locus_union(const Locus& a, const Locus& b) {
  Locus u = a;
  u.insert(u.end(), b.begin(), b.end());
  return reduce(std::move(u));
}

inline Locus locus_intersection(const Locus& a, const Locus& b) {
  Locus out;
  for (const auto& c : a)
    if (contains(b, c)) out.push_back(c);
  for (const auto& c : b)
    if (contains(a, c)) out.push_back(c);
  return reduce(std::move(out));
}

inline std::vector<std::string> names(const Locus& l) {
  std::vector<std::string> out;
  for (const auto& c : l) out.push_back(c.name);
  return out;
}

/// Undirected graph on locus components: curves are adjacent when their
/// intersection number at the pair level is positive, a point is adjacent to
/// the curves it lies on.
struct IncidenceGraph {
  Locus nodes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  bool connected() const {
    if (nodes.empty()) return true;
    std::vector<std::size_t> parent(nodes.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&parent](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::size_t parts = nodes.size();
    for (auto [a, b] : edges) {
      auto ra = find(a), rb = find(b);
      if (ra != rb) {
        parent[ra] = rb;
        --parts;
      }
    }
    return parts == 1;
  }
};

inline IncidenceGraph build_incidence_graph(const SurfaceModel& model, int level, const Locus& comps) {
  IncidenceGraph g;
  g.nodes = comps;
  std::sort(g.nodes.begin(), g.nodes.end());
  g.nodes.erase(std::unique(g.nodes.begin(), g.nodes.end()), g.nodes.end());
  using K = LocusComponent::Kind;
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    for (std::size_t j = i + 1; j < g.nodes.size(); ++j) {
      const auto& a = g.nodes[i];
      const auto& b = g.nodes[j];
      bool edge = false;
      if (a.kind == K::curve && b.kind == K::curve)
        edge = model.intersect(level, model.curve(level, a.id).cls, model.curve(level, b.id).cls) > 0;
      else if (a.kind == K::point && b.kind == K::curve)
        edge = point_on_curve(a, b.id);
      else if (a.kind == K::curve && b.kind == K::point)
        edge = point_on_curve(b, a.id);
      if (edge) g.edges.emplace_back(i, j);
    }
  return g;
}

}  // namespace pklt
