#pragma once

// Discrepancies, potential discrepancies and the loci and classifications
// built from them, for a pair (X, Δ) where X is one level of a blow-up tower
// and the top of the tower serves as the resolution.
//
// For a curve E of the top level:
//   a(E)   discrepancy: −mult_E Δ for curves of X; for an exceptional curve
//          a_new = 1 + Σ m_C·a_C over the curves C through its center.
//   σ(E)   coefficient of E in N, where f*(−(K_X+Δ)) = P + N at the top.
//   ā(E) = a(E) − σ(E).
//
// Because P is nef at the top, blowing up a point lying on curves C with
// multiplicities m_C gives ā_new = 1 + Σ m_C·ā_C. At a transverse point of
// E_i ∩ E_j this is ā_i + ā_j + 1, on E_i alone ā_i + 1. Hence
//   inf over all valuations = m := min(0, min_E ā(E))   when m ≥ −1,
// and −∞ otherwise: repeatedly blowing up E_new ∩ E_i gives values
// k·(ā_i + 1), unbounded below when ā_i < −1.

#include "pklt/error.hpp"
#include "pklt/locus.hpp"
#include "pklt/surface_model.hpp"
#include "pklt/zariski.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pklt {

struct Discrepancy {
  std::string curve;
  Rational a;
};

/// Discrepancy of every top-level curve over the level-`pair_level` pair.
/// Needs no positivity of −(K+Δ).
inline std::vector<Discrepancy> discrepancies(const SurfaceModel& model, int pair_level, const RDivisor& delta) {
  model.check_level(pair_level);
  if (delta.level != pair_level) throw ModelError("boundary lives at level " + std::to_string(delta.level));
  const RDivisor d = normalize(model, delta);
  std::map<std::string, Rational> a;
  for (const auto& c : model.catalog(pair_level)) a[c.id] = -d.coefficient(c.id);
  for (int k = pair_level + 1; k <= model.top_level(); ++k) {
    const BlowUpCenter& center = *model.level(k).center;
    Rational v = 1;
    for (const auto& inc : center.on_curves) v += inc.multiplicity * a.at(inc.curve);
    a[center.exceptional_id] = v;
  }
  std::vector<Discrepancy> out;
  for (const auto& c : model.catalog(model.top_level())) out.push_back({c.id, a.at(c.id)});
  return out;
}

/// A pair (X, Δ) with X = level `level` of the tower. Creation checks that Δ
/// is effective, that −(K_X+Δ) is pseudoeffective against the catalog, and
/// that the top level is a log resolution for Supp Δ ∪ Supp N ∪ exceptionals.
class PairSpec {
 public:
  static PairSpec create(SurfaceModel model, int level, RDivisor delta) {
    model.check_level(level);
    if (delta.level != level)
      throw ModelError("boundary lives at level " + std::to_string(delta.level) + ", pair at level " + std::to_string(level));
    PairSpec p;
    p.delta_ = normalize(model, delta);
    if (!p.delta_.effective()) throw PreconditionError("boundary is not effective");
    p.level_ = level;
    p.anti_log_canonical_ = -(model.canonical(level) + divisor_class(model, p.delta_));
    const int top = model.top_level();
    p.decomposition_ = zariski_decompose(model, top, pull_back(model, level, top, p.anti_log_canonical_));

    std::vector<std::string> support;
    for (const auto& [id, c] : p.delta_.terms) support.push_back(id);
    for (const auto& id : p.decomposition_.certificate.support) support.push_back(id);
    for (const auto& c : model.catalog(top))
      if (c.created_level > level) support.push_back(c.id);
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    auto issues = log_resolution_issues(model, support);
    if (!issues.empty()) throw PreconditionError("top level is not log-resolution-ready: " + issues.front());
    p.resolution_support_ = std::move(support);
    p.model_ = std::move(model);
    return p;
  }

  const SurfaceModel& model() const { return model_; }
  int level() const { return level_; }
  int top() const { return model_.top_level(); }
  const RDivisor& delta() const { return delta_; }
  /// −(K_X + Δ) at the pair level.
  const DivisorClass& anti_log_canonical() const { return anti_log_canonical_; }
  /// Zariski decomposition of f*(−(K_X+Δ)) at the top level.
  const ZariskiDecomposition& top_decomposition() const { return decomposition_; }
  const std::vector<std::string>& resolution_support() const { return resolution_support_; }

  bool anti_log_canonical_big() const {
    const auto& p = decomposition_.positive;
    return model_.intersect(top(), p, p) > 0;
  }

 private:
  PairSpec() = default;
  SurfaceModel model_;
  int level_ = 0;
  RDivisor delta_;
  DivisorClass anti_log_canonical_;
  ZariskiDecomposition decomposition_;
  std::vector<std::string> resolution_support_;
};

inline std::vector<Discrepancy> discrepancies(const PairSpec& pair) {
  return discrepancies(pair.model(), pair.level(), pair.delta());
}

struct LedgerEntry {
  std::string curve;   // stable id
  std::string name;    // display name at the top level
  bool exceptional_over_pair = false;
  int genus = 0;
  Rational a;
  Rational sigma_num;
  Rational pa;
};

struct DiscrepancyLedger {
  int pair_level = 0;
  int top_level = 0;
  std::vector<LedgerEntry> entries;

  const LedgerEntry& at(const std::string& curve) const {
    std::string_view id = curve;
    while (!id.empty() && id.back() == '~') id.remove_suffix(1);
    for (const auto& e : entries)
      if (e.curve == id) return e;
    throw ModelError("no ledger entry for '" + curve + "'");
  }
};

inline DiscrepancyLedger potential_ledger(const PairSpec& pair) {
  const auto& model = pair.model();
  const int top = pair.top();
  DiscrepancyLedger ledger{pair.level(), top, {}};
  const auto& n = pair.top_decomposition().negative;
  for (const auto& d : discrepancies(pair)) {
    const Curve& c = model.curve(top, d.curve);
    LedgerEntry e{c.id, c.display_name(), c.created_level > pair.level(), c.genus, d.a, n.coefficient(c.id), 0};
    e.pa = e.a - e.sigma_num;
    if (e.sigma_num < 0) throw InvariantViolation("negative asymptotic valuation on " + e.name);
    ledger.entries.push_back(std::move(e));
  }
  return ledger;
}

namespace detail {

inline Rational clamped_minimum(const DiscrepancyLedger& ledger) {
  // Curves of X outside the catalog have ā = 0.
  Rational m = 0;
  for (const auto& e : ledger.entries) m = std::min(m, e.pa);
  return m;
}

inline Locus images_where(const PairSpec& pair, const DiscrepancyLedger& ledger, auto&& pred) {
  Locus l;
  for (const auto& e : ledger.entries)
    if (pred(e)) l.push_back(image_at_level(pair.model(), pair.level(), e.curve));
  return reduce(std::move(l));
}

}  // namespace detail

inline ExtendedRational total_potential_discrepancy(const DiscrepancyLedger& ledger) {
  Rational m = detail::clamped_minimum(ledger);
  if (m < -1) return ExtendedRational::minus_infinity();
  return ExtendedRational::finite(m);
}

inline ExtendedRational total_potential_discrepancy(const PairSpec& pair) {
  return total_potential_discrepancy(potential_ledger(pair));
}

/// Centers with a ≤ −1.
inline Locus nklt_locus(const PairSpec& pair, const DiscrepancyLedger& ledger) {
  return detail::images_where(pair, ledger, [](const LedgerEntry& e) { return e.a <= -1; });
}
inline Locus nklt_locus(const PairSpec& pair) { return nklt_locus(pair, potential_ledger(pair)); }

/// Images of the support of N, i.e. Nnef(−(K_X+Δ)).
inline Locus nnef_image(const PairSpec& pair, const DiscrepancyLedger& ledger) {
  return detail::images_where(pair, ledger, [](const LedgerEntry& e) { return e.sigma_num > 0; });
}

/// Centers of valuations with ā ≤ −1 + ε. Besides top-level curves, checks
/// the first infinitesimal valuations (a transverse node E_i ∩ E_j and a
/// general point of E_i) and asserts they lie over centers already found.
inline Locus eps_spnklt(const PairSpec& pair, const DiscrepancyLedger& ledger, const Rational& eps) {
  if (eps < 0) throw PreconditionError("eps must be >= 0");
  const Rational bound = -1 + eps;
  Locus l = detail::images_where(pair, ledger, [&](const LedgerEntry& e) { return e.pa <= bound; });

  const auto& model = pair.model();
  const int top = pair.top();
  for (std::size_t i = 0; i < ledger.entries.size(); ++i) {
    const auto& ei = ledger.entries[i];
    if (ei.pa + 1 <= bound && !contains(l, image_at_level(model, pair.level(), ei.curve)))
      throw InvariantViolation("free-point valuation on " + ei.name + " escapes the locus");
    for (std::size_t j = i + 1; j < ledger.entries.size(); ++j) {
      const auto& ej = ledger.entries[j];
      if (ei.pa + ej.pa + 1 > bound) continue;
      if (model.intersect(top, model.curve(top, ei.curve).cls, model.curve(top, ej.curve).cls) <= 0) continue;
      if (ei.pa > bound && ej.pa > bound)
        throw InvariantViolation("node valuation on " + ei.name + " ∩ " + ej.name + " escapes the locus");
    }
  }
  return l;
}
inline Locus eps_spnklt(const PairSpec& pair, const Rational& eps) { return eps_spnklt(pair, potential_ledger(pair), eps); }

inline Locus pnklt_locus(const PairSpec& pair, const DiscrepancyLedger& ledger) {
  return eps_spnklt(pair, ledger, Rational(0));
}
inline Locus pnklt_locus(const PairSpec& pair) { return pnklt_locus(pair, potential_ledger(pair)); }

/// ε₀ = min(1, min{ā + 1 : ā > −1}); for 0 ≤ ε < ε₀ the ε-locus equals
/// the potentially-non-klt locus.
inline Rational stabilization_threshold(const DiscrepancyLedger& ledger) {
  Rational eps0 = 1;
  for (const auto& e : ledger.entries)
    if (e.pa > -1) eps0 = std::min<Rational>(eps0, e.pa + 1);
  return eps0;
}

struct PairFlags {
  bool klt = false;
  bool lc = false;
  bool potentially_klt = false;
  bool potentially_lc = false;
};

struct PotentialReport {
  DiscrepancyLedger ledger;
  ExtendedRational frak_a;
  Locus nklt;
  Locus pnklt;
  Locus nnef;
  Rational eps0;
  std::vector<std::pair<Rational, Locus>> eps_table;
  PairFlags flags;
  bool big = false;                        // −(K_X+Δ) big against the catalog
  std::optional<bool> pnklt_connected;     // set only when big
};

inline PotentialReport classify_pair(const PairSpec& pair, std::span<const Rational> eps_values = {}) {
  PotentialReport r;
  r.ledger = potential_ledger(pair);
  r.frak_a = total_potential_discrepancy(r.ledger);
  r.nklt = nklt_locus(pair, r.ledger);
  r.pnklt = pnklt_locus(pair, r.ledger);
  r.nnef = nnef_image(pair, r.ledger);
  r.eps0 = stabilization_threshold(r.ledger);
  for (const auto& eps : eps_values) r.eps_table.emplace_back(eps, eps_spnklt(pair, r.ledger, eps));

  r.flags.klt = std::all_of(r.ledger.entries.begin(), r.ledger.entries.end(), [](const auto& e) { return e.a > -1; });
  r.flags.lc = std::all_of(r.ledger.entries.begin(), r.ledger.entries.end(), [](const auto& e) { return e.a >= -1; });
  r.flags.potentially_klt = r.frak_a > Rational(-1);
  r.flags.potentially_lc = r.frak_a >= Rational(-1);

  for (const auto& e : r.ledger.entries)
    if (e.pa != e.a - e.sigma_num) throw InvariantViolation("ledger entry " + e.name + " breaks pa = a - sigma");
  if (r.flags.potentially_klt && !r.flags.klt) throw InvariantViolation("potentially klt pair is not klt");
  if (r.flags.potentially_lc && !r.flags.lc) throw InvariantViolation("potentially lc pair is not lc");
  if (r.flags.potentially_klt != r.pnklt.empty()) throw InvariantViolation("potentially klt disagrees with empty pNklt");
  if (!is_subset(r.nklt, r.pnklt)) throw InvariantViolation("Nklt is not contained in pNklt");
  if (!is_subset(r.pnklt, locus_union(r.nklt, r.nnef))) throw InvariantViolation("pNklt is not contained in Nklt ∪ Nnef");

  r.big = pair.anti_log_canonical_big();
  if (r.big) r.pnklt_connected = build_incidence_graph(pair.model(), pair.level(), r.pnklt).connected();
  return r;
}

struct FanoTypeResult {
  bool fano_type = false;
  std::string reason;
  bool anti_canonical_big = false;
  std::optional<ZariskiDecomposition> decomposition;  // of −K at the level
  bool pair_klt = false;                              // (X, N) klt
};

/// Surface criterion: X is of Fano type iff −K_X is big and (X, N) is klt,
/// where −K_X = P + N. Cross-checked against potential kltness of (X, N).
inline FanoTypeResult fano_type_test(const SurfaceModel& model, int level) {
  model.check_level(level);
  FanoTypeResult out;
  DivisorClass anti_k = -model.canonical(level);
  try {
    out.decomposition = zariski_decompose(model, level, anti_k);
  } catch (const NotPseudoeffective& e) {
    out.reason = std::string("-K is not pseudoeffective: ") + e.what();
    return out;
  }
  const auto& p = out.decomposition->positive;
  out.anti_canonical_big = model.intersect(level, p, p) > 0;

  auto pair = PairSpec::create(model, level, out.decomposition->negative);
  auto a = discrepancies(pair);
  out.pair_klt = std::all_of(a.begin(), a.end(), [](const Discrepancy& d) { return d.a > -1; });
  bool pklt = classify_pair(pair).flags.potentially_klt;
  if (pklt != out.pair_klt) throw InvariantViolation("(X, N): klt and potentially klt disagree on a surface");

  out.fano_type = out.anti_canonical_big && out.pair_klt;
  if (!out.anti_canonical_big)
    out.reason = "-K is not big";
  else if (!out.pair_klt)
    out.reason = "(X, N) is not klt";
  else
    out.reason = "-K is big and (X, N) is klt";
  return out;
}

struct MonotonicityViolation {
  std::string curve;
  Rational pa_base;
  Rational pa_extended;
};

struct MonotonicityReport {
  DiscrepancyLedger base;
  DiscrepancyLedger extended;
  std::vector<MonotonicityViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Compares ā(·; X, Δ) with ā(·; X, Δ + extra) curve by curve.
inline MonotonicityReport check_monotonicity(const PairSpec& pair, const RDivisor& extra) {
  if (!extra.effective()) throw PreconditionError("extra boundary is not effective");
  auto bigger = PairSpec::create(pair.model(), pair.level(), pair.delta() + normalize(pair.model(), extra));
  MonotonicityReport r{potential_ledger(pair), potential_ledger(bigger), {}};
  for (const auto& e : r.base.entries) {
    const auto& f = r.extended.at(e.curve);
    if (e.pa < f.pa) r.violations.push_back({e.name, e.pa, f.pa});
  }
  return r;
}

struct LimitReport {
  Locus limit;                 // pNklt(X, Δ)
  std::vector<Locus> chain;    // pNklt(X, Δ_i)
  Locus intersection;
  bool decreasing_boundaries = true;
  bool decreasing_chain = true;
  bool contains_limit = true;
  bool stabilized = false;
  bool ok() const { return decreasing_boundaries && decreasing_chain && contains_limit && stabilized; }
};

/// For Δ_1 ≥ Δ_2 ≥ ... ≥ Δ with −(K+Δ_i) big, checks on the supplied prefix
/// that the loci decrease and that their intersection is pNklt(X, Δ).
inline LimitReport check_intersection_limit(const PairSpec& pair, std::span<const RDivisor> deltas) {
  if (!pair.anti_log_canonical_big()) throw PreconditionError("-(K+Delta) is not big");
  const auto& model = pair.model();
  LimitReport r;
  r.limit = pnklt_locus(pair);
  RDivisor previous;
  bool first = true;
  for (const auto& raw : deltas) {
    RDivisor d = normalize(model, raw);
    if (d.level != pair.level()) throw PreconditionError("boundary sequence must live at the pair level");
    if (!(d + Rational(-1) * pair.delta()).effective()) r.decreasing_boundaries = false;
    if (!first && !(previous + Rational(-1) * d).effective()) r.decreasing_boundaries = false;
    auto pi = PairSpec::create(model, pair.level(), d);
    if (!pi.anti_log_canonical_big()) throw PreconditionError("-(K+Delta_i) is not big");
    Locus li = pnklt_locus(pi);
    if (!first && !is_subset(li, r.chain.back())) r.decreasing_chain = false;
    if (!is_subset(r.limit, li)) r.contains_limit = false;
    r.intersection = first ? li : locus_intersection(r.intersection, li);
    r.chain.push_back(std::move(li));
    previous = std::move(d);
    first = false;
  }
  if (first) r.intersection = r.limit;
  r.stabilized = is_subset(r.intersection, r.limit) && is_subset(r.limit, r.intersection);
  return r;
}

struct WitnessReport {
  bool dominates = true;                 // f*D ≥ N at the top level
  std::vector<std::string> shortfall;    // curves where f*D < N
  Rational eps;
  Locus eps_locus;                       // ε-spNklt(X, Δ)
  Locus nklt_with_witness;               // Nklt(X, Δ + D)
  bool inclusion = false;
  bool ok() const { return dominates && inclusion; }
};

/// Given an effective D on X with f*D ≥ N at the top, checks
/// ε-spNklt(X, Δ) ⊆ Nklt(X, Δ + D) at ε = ε₀/2.
inline WitnessReport check_witness(const PairSpec& pair, const RDivisor& witness) {
  const auto& model = pair.model();
  RDivisor d = normalize(model, witness);
  if (d.level != pair.level()) throw PreconditionError("witness must live at the pair level");
  if (!d.effective()) throw PreconditionError("witness is not effective");
  WitnessReport r;
  RDivisor up = pull_back(model, pair.level(), pair.top(), d);
  for (const auto& [id, n] : pair.top_decomposition().negative.terms)
    if (up.coefficient(id) < n) {
      r.dominates = false;
      r.shortfall.push_back(model.curve(pair.top(), id).display_name());
    }
  auto ledger = potential_ledger(pair);
  r.eps = stabilization_threshold(ledger) / 2;
  r.eps_locus = eps_spnklt(pair, ledger, r.eps);

  RDivisor bigger = pair.delta() + d;
  std::vector<std::string> support;
  for (const auto& [id, c] : bigger.terms) support.push_back(id);
  for (const auto& c : model.catalog(pair.top()))
    if (c.created_level > pair.level()) support.push_back(c.id);
  auto issues = log_resolution_issues(model, support);
  if (!issues.empty()) throw PreconditionError("top level is not a log resolution of (X, Delta + D): " + issues.front());
  Locus nklt;
  for (const auto& e : discrepancies(model, pair.level(), bigger))
    if (e.a <= -1) nklt.push_back(image_at_level(model, pair.level(), e.curve));
  r.nklt_with_witness = reduce(std::move(nklt));
  r.inclusion = is_subset(r.eps_locus, r.nklt_with_witness);
  return r;
}

}  // namespace pklt
