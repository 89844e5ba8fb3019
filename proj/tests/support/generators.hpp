#pragma once

// Seeded random towers, divisors and pairs for the property suites.

#include "pklt/potential.hpp"

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace gen {

using pklt::Rational;
using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline Rational small_rational(Rng& rng, int max_num, int max_den) {
  int den = uniform(rng, 1, max_den);
  return Rational(uniform(rng, 0, max_num), den);
}

inline pklt::SurfaceModel random_base(Rng& rng) {
  if (uniform(rng, 0, 1) == 0) {
    pklt::ProjectivePlane p;
    int lines = uniform(rng, 0, 3);
    for (int i = 0; i < lines; ++i) p.curves.push_back({"M" + std::to_string(i + 1), {1}, 0});
    if (uniform(rng, 0, 3) == 0) p.curves.push_back({"Q", {2}, 0});
    return pklt::make_base(p);
  }
  int g = uniform(rng, 0, 4) == 0 ? uniform(rng, 1, 2) : 0;
  int e = uniform(rng, 1, 4);
  if (g > 0) e = std::max(e, 2 * g - 1);
  return pklt::make_base(pklt::Ruled{g, e});
}

/// A random center at the top: a general point, a point of one curve, a
/// common point of two curves, or a point infinitely near an exceptional curve.
inline std::optional<pklt::SurfaceModel> random_blow_up(Rng& rng, const pklt::SurfaceModel& m, const std::string& id) {
  const int k = m.top_level();
  const auto& cat = m.catalog(k);
  pklt::BlowUpCenter c;
  c.exceptional_id = id;
  int shape = uniform(rng, 0, 3);
  if (shape >= 1) {
    const auto& a = cat[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(cat.size()) - 1))];
    c.on_curves.push_back({a.id, 1});
    if (shape == 2) {
      std::vector<const pklt::Curve*> partners;
      for (const auto& b : cat)
        if (b.id != a.id && m.intersect(k, a.cls, b.cls) >= 1) partners.push_back(&b);
      if (partners.empty()) return std::nullopt;
      c.on_curves.push_back({partners[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(partners.size()) - 1))]->id, 1});
    }
    if (shape == 3) {
      if (!a.is_exceptional_origin()) return std::nullopt;
      c.on_curves.clear();
      c.infinitely_near = a.id;
    }
  }
  try {
    return pklt::blow_up(m, c);
  } catch (const pklt::ModelError&) {
    return std::nullopt;
  }
}

inline pklt::SurfaceModel random_tower(Rng& rng, int max_blowups) {
  pklt::SurfaceModel m = random_base(rng);
  int n = uniform(rng, 0, max_blowups);
  for (int i = 0; i < n;) {
    if (auto next = random_blow_up(rng, m, "E" + std::to_string(i + 1))) {
      m = std::move(*next);
      ++i;
    }
  }
  return m;
}

/// Effective divisor on a random subset of the level's catalog.
inline pklt::RDivisor random_effective(Rng& rng, const pklt::SurfaceModel& m, int level, int max_num, int max_den) {
  pklt::RDivisor d{level, {}};
  for (const auto& c : m.catalog(level))
    if (uniform(rng, 0, 2) == 0) d.add(c.id, small_rational(rng, max_num, max_den));
  return d;
}

inline std::optional<pklt::PairSpec> try_pair(const pklt::SurfaceModel& m, int level, const pklt::RDivisor& delta) {
  try {
    return pklt::PairSpec::create(m, level, delta);
  } catch (const pklt::NotPseudoeffective&) {
  } catch (const pklt::PreconditionError&) {
  }
  return std::nullopt;
}

/// A pair with pseudoeffective −(K+Δ) and a log-resolution-ready tower.
/// Boundary coefficients are drawn from {0, 1/4, 1/3, 1/2, 2/3, 1}.
inline pklt::PairSpec random_pair(Rng& rng, int max_blowups) {
  static const Rational coeffs[] = {Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(2, 3), Rational(1)};
  for (;;) {
    pklt::SurfaceModel m = random_tower(rng, max_blowups);
    int level = uniform(rng, 0, m.top_level());
    pklt::RDivisor delta{level, {}};
    for (const auto& c : m.catalog(level))
      if (uniform(rng, 0, 3) == 0) delta.add(c.id, coeffs[uniform(rng, 0, 4)]);
    if (auto p = try_pair(m, level, delta)) return std::move(*p);
  }
}

}  // namespace gen
