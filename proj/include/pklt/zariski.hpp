#pragma once

// Zariski decomposition D = P + N on one tower level, certified against the
// model's finite curve catalog.
//
// Iteration: S ← {C : D·C < 0}; solve gram(S)·x = (D·C)_{C∈S}; N = Σ x_C·C,
// P = D − N; add every curve with P·C < 0 to S and repeat. Violators are
// added all at once per round.

#include "pklt/error.hpp"
#include "pklt/lattice.hpp"
#include "pklt/surface_model.hpp"

#include <string>
#include <utility>
#include <vector>

namespace pklt {

/// Verdicts on nef/big/pseudoeffective are catalog-relative; every report
/// that carries one repeats this text verbatim.
inline constexpr const char* kCatalogDisclaimer =
    "nef, big and pseudoeffective verdicts are certified only against the model's finite curve catalog";

struct NefCertificate {
  std::vector<std::string> tested_curves;
  std::vector<std::pair<std::string, Rational>> violations;
  bool nef() const { return violations.empty(); }
};

inline NefCertificate is_nef_against_catalog(const SurfaceModel& model, int level, const DivisorClass& d) {
  NefCertificate cert;
  for (const auto& c : model.catalog(level)) {
    cert.tested_curves.push_back(c.id);
    Rational v = model.intersect(level, d, c.cls);
    if (v < 0) cert.violations.emplace_back(c.id, v);
  }
  return cert;
}

struct ZariskiCertificate {
  std::vector<std::string> support;            // Supp N, catalog order
  Matrix gram;                                 // gram(Supp N)
  std::vector<Rational> positive_on_support;   // P·C for C in Supp N (all zero)
  std::vector<std::string> nef_checked;        // every catalog curve
  int rounds = 0;
};

struct ZariskiDecomposition {
  int level = 0;
  DivisorClass positive;
  RDivisor negative;
  ZariskiCertificate certificate;
};

inline ZariskiDecomposition zariski_decompose(const SurfaceModel& model, int level, const DivisorClass& d) {
  model.check_level(level);
  require_in_lattice(d, model.form(level));
  const auto& catalog = model.catalog(level);

  std::vector<bool> in_support(catalog.size(), false);
  std::vector<Rational> x;
  DivisorClass p = d;
  ZariskiDecomposition out;
  out.level = level;

  auto violators = [&](const DivisorClass& cls) {
    std::vector<std::size_t> v;
    for (std::size_t i = 0; i < catalog.size(); ++i)
      if (!in_support[i] && model.intersect(level, cls, catalog[i].cls) < 0) v.push_back(i);
    return v;
  };

  std::vector<std::size_t> support;
  for (auto add = violators(d); !add.empty(); add = violators(p)) {
    ++out.certificate.rounds;
    for (std::size_t i : add) in_support[i] = true;
    support.clear();
    for (std::size_t i = 0; i < catalog.size(); ++i)
      if (in_support[i]) support.push_back(i);

    std::vector<DivisorClass> classes;
    std::vector<Rational> rhs;
    for (std::size_t i : support) {
      classes.push_back(catalog[i].cls);
      rhs.push_back(model.intersect(level, d, catalog[i].cls));
    }
    Matrix gram = gram_submatrix(classes, model.form(level));
    if (!is_negative_definite(gram)) {
      std::string names;
      for (std::size_t i : support) names += (names.empty() ? "" : ", ") + catalog[i].display_name();
      throw NotPseudoeffective("curve set {" + names + "} is not negative definite");
    }
    x = solve_exact(gram, rhs);
    p = d;
    for (std::size_t s = 0; s < support.size(); ++s) p -= x[s] * classes[s];
  }

  out.negative.level = level;
  for (std::size_t s = 0; s < support.size(); ++s) {
    if (x[s] < 0)
      throw NotPseudoeffective("negative coefficient " + to_string(x[s]) + " on " + catalog[support[s]].display_name());
    out.negative.add(catalog[support[s]].id, x[s]);
  }
  if (model.intersect(level, p, p) < 0)
    throw NotPseudoeffective("catalog-nef positive part has negative self-intersection " + to_string(model.intersect(level, p, p)));

  std::vector<DivisorClass> supp_classes;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    out.certificate.nef_checked.push_back(catalog[i].id);
    if (out.negative.coefficient(catalog[i].id) != 0) {
      out.certificate.support.push_back(catalog[i].id);
      supp_classes.push_back(catalog[i].cls);
      out.certificate.positive_on_support.push_back(model.intersect(level, p, catalog[i].cls));
    }
  }
  if (!supp_classes.empty()) out.certificate.gram = gram_submatrix(supp_classes, model.form(level));
  out.positive = std::move(p);
  return out;
}

/// P² > 0 for the positive part.
inline bool is_big(const SurfaceModel& model, int level, const DivisorClass& d) {
  auto z = zariski_decompose(model, level, d);
  return model.intersect(level, z.positive, z.positive) > 0;
}

inline bool is_pseudoeffective(const SurfaceModel& model, int level, const DivisorClass& d) {
  try {
    zariski_decompose(model, level, d);
    return true;
  } catch (const NotPseudoeffective&) {
    return false;
  }
}

struct NnefLocus {
  bool entire_surface = false;  // D not pseudoeffective
  std::vector<std::string> curves;
  bool operator==(const NnefLocus&) const = default;
};

/// On a surface the non-nef locus is Supp N.
inline NnefLocus nnef_locus(const SurfaceModel& model, int level, const DivisorClass& d) {
  try {
    return {false, zariski_decompose(model, level, d).certificate.support};
  } catch (const NotPseudoeffective&) {
    return {true, {}};
  }
}

}  // namespace pklt
