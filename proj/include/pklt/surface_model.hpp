#pragma once

// Smooth projective surfaces presented as towers of point blow-ups over a
// model base (ℙ², a ruled surface, or a user lattice).
//
// Every level uses the basis {pullback of the base basis} ∪ {total transforms
// of the exceptional curves E_1..E_k}, so pulling back a class appends zero
// coordinates and pushing forward drops them. Centers are combinatorial: a
// center is the list of catalog curves through the blown-up point together
// with the multiplicity of the point on each curve.

#include "pklt/error.hpp"
#include "pklt/lattice.hpp"
#include "pklt/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pklt {

/// A curve declared on a base surface by its class in the base basis.
struct CurveDecl {
  std::string id;
  std::vector<Rational> cls;
  int genus = 0;
  bool operator==(const CurveDecl&) const = default;
};

/// ℙ² with basis {L}. The catalog always holds a general line `L`;
/// further curves (lines, conics, a cubic, ...) may be declared by degree.
struct ProjectivePlane {
  std::vector<CurveDecl> curves;
  bool operator==(const ProjectivePlane&) const = default;
};

/// ℙ(O_C ⊕ O_C(-A)) over a genus-g curve with deg A = e; basis {C0, f}.
struct Ruled {
  int genus = 0;
  int e = 1;
  bool operator==(const Ruled&) const = default;
};

struct AbstractLattice {
  std::vector<std::string> basis;  // labels; defaults to b1..br
  Matrix gram;
  std::vector<Rational> canonical;
  std::vector<CurveDecl> curves;
  bool operator==(const AbstractLattice&) const = default;
};

using BaseSpec = std::variant<ProjectivePlane, Ruled, AbstractLattice>;

enum class CurveKind { base, exceptional, strict_transform };

inline const char* to_string(CurveKind k) {
  switch (k) {
    case CurveKind::base: return "base-curve";
    case CurveKind::exceptional: return "exceptional";
    case CurveKind::strict_transform: return "strict-transform";
  }
  return "?";
}

/// A catalog curve at one level. `id` is stable along the tower; the same
/// id at a higher level denotes the strict transform.
struct Curve {
  std::string id;
  DivisorClass cls;
  int genus = 0;
  CurveKind kind = CurveKind::base;
  std::optional<std::string> origin;
  int created_level = 0;

  /// `C0` at its own level, `C0~` once strictly transformed.
  std::string display_name() const { return kind == CurveKind::strict_transform ? id + "~" : id; }
  /// Exceptional curve of some blow-up in the tower (possibly transformed since).
  bool is_exceptional_origin() const { return created_level > 0; }
  bool operator==(const Curve&) const = default;
};

struct CenterIncidence {
  std::string curve;
  int multiplicity = 1;
  bool operator==(const CenterIncidence&) const = default;
};

struct BlowUpCenter {
  std::string exceptional_id;
  std::vector<CenterIncidence> on_curves;
  std::optional<std::string> infinitely_near;
  std::string point_label;  // defaults to exceptional_id
  bool operator==(const BlowUpCenter&) const = default;
};

struct Level {
  IntersectionForm form;
  DivisorClass canonical;
  std::vector<Curve> catalog;
  std::optional<BlowUpCenter> center;  // the blow-up that produced this level
  bool operator==(const Level&) const = default;
};

/// A finitely supported ℚ-combination of catalog curves at one level.
/// Zero coefficients are never stored.
struct RDivisor {
  int level = 0;
  std::map<std::string, Rational> terms;

  void add(const std::string& curve, const Rational& c) {
    if (c == 0) return;
    auto& slot = terms[curve];
    slot += c;
    if (slot == 0) terms.erase(curve);
  }
  Rational coefficient(const std::string& curve) const {
    auto it = terms.find(curve);
    return it == terms.end() ? Rational(0) : it->second;
  }
  bool effective() const {
    return std::all_of(terms.begin(), terms.end(), [](const auto& t) { return t.second >= 0; });
  }
  bool is_zero() const { return terms.empty(); }
  bool operator==(const RDivisor&) const = default;
};

inline RDivisor operator+(RDivisor a, const RDivisor& b) {
  if (a.level != b.level) throw ModelError("adding divisors at different levels");
  for (const auto& [id, c] : b.terms) a.add(id, c);
  return a;
}

inline RDivisor operator*(const Rational& r, const RDivisor& d) {
  RDivisor out{d.level, {}};
  for (const auto& [id, c] : d.terms) out.add(id, r * c);
  return out;
}

class SurfaceModel;
SurfaceModel make_base(const BaseSpec& spec);
SurfaceModel blow_up(const SurfaceModel& model, const BlowUpCenter& center);
SurfaceModel blow_down(const SurfaceModel& model);

class SurfaceModel {
 public:
  const BaseSpec& base() const { return base_; }
  int top_level() const { return static_cast<int>(levels_.size()) - 1; }
  std::size_t level_count() const { return levels_.size(); }

  const Level& level(int k) const {
    check_level(k);
    return levels_[static_cast<std::size_t>(k)];
  }
  const IntersectionForm& form(int k) const { return level(k).form; }
  const DivisorClass& canonical(int k) const { return level(k).canonical; }
  const std::vector<Curve>& catalog(int k) const { return level(k).catalog; }

  /// Accepts stable ids or display names ("C0~").
  const Curve* find_curve(int k, std::string_view name) const {
    std::string_view id = name;
    while (!id.empty() && id.back() == '~') id.remove_suffix(1);
    for (const auto& c : level(k).catalog)
      if (c.id == id) return &c;
    return nullptr;
  }
  const Curve& curve(int k, std::string_view name) const {
    if (const Curve* c = find_curve(k, name)) return *c;
    throw ModelError("unknown curve '" + std::string(name) + "' at level " + std::to_string(k));
  }

  void check_level(int k) const {
    if (k < 0 || k > top_level())
      throw ModelError("level " + std::to_string(k) + " out of range [0, " + std::to_string(top_level()) + "]");
  }

  Rational intersect(int k, const DivisorClass& a, const DivisorClass& b) const {
    return pklt::intersect(a, b, form(k));
  }

  bool operator==(const SurfaceModel&) const = default;

 private:
  friend SurfaceModel make_base(const BaseSpec& spec);
  friend SurfaceModel blow_up(const SurfaceModel& model, const BlowUpCenter& center);
  friend SurfaceModel blow_down(const SurfaceModel& model);

  BaseSpec base_;
  std::vector<Level> levels_;
};

/// Arithmetic genus 1 + (C² + K·C)/2 of a class.
inline Rational arithmetic_genus(const SurfaceModel& model, int k, const DivisorClass& c) {
  return 1 + (model.intersect(k, c, c) + model.intersect(k, model.canonical(k), c)) / 2;
}

namespace detail {

inline std::string base_tag(const BaseSpec& spec) {
  if (std::holds_alternative<ProjectivePlane>(spec)) return "P2";
  if (const auto* r = std::get_if<Ruled>(&spec))
    return "ruled(" + std::to_string(r->genus) + "," + std::to_string(r->e) + ")";
  // FNV-1a over the printed gram and canonical class.
  const auto& lat = std::get<AbstractLattice>(spec);
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ull;
    }
    h ^= ';';
    h *= 1099511628211ull;
  };
  for (std::size_t i = 0; i < lat.gram.rows(); ++i)
    for (std::size_t j = 0; j < lat.gram.cols(); ++j) mix(to_string(lat.gram(i, j)));
  for (const auto& k : lat.canonical) mix(to_string(k));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return "lattice#" + std::string(buf);
}

inline bool valid_curve_id(const std::string& id) {
  if (id.empty()) return false;
  return std::none_of(id.begin(), id.end(), [](char c) { return c == '~' || c == '/' || c == ' '; });
}

}  // namespace detail

inline SurfaceModel make_base(const BaseSpec& spec) {
  Level level;
  std::vector<CurveDecl> decls;

  if (const auto* p2 = std::get_if<ProjectivePlane>(&spec)) {
    level.form = {"P2", {"L"}, Matrix{{1}}};
    level.canonical = {"P2", {Rational(-3)}};
    decls.push_back({"L", {Rational(1)}, 0});
    decls.insert(decls.end(), p2->curves.begin(), p2->curves.end());
  } else if (const auto* r = std::get_if<Ruled>(&spec)) {
    if (r->genus < 0) throw ModelError("ruled surface: genus must be >= 0");
    if (r->e <= 0) throw ModelError("ruled surface: invariant e must be > 0");
    const std::string tag = detail::base_tag(spec);
    level.form = {tag, {"C0", "f"}, Matrix{{Rational(-r->e), 1}, {1, 0}}};
    level.canonical = {tag, {Rational(-2), Rational(2 * r->genus - 2 - r->e)}};
    decls.push_back({"C0", {Rational(1), Rational(0)}, r->genus});
    decls.push_back({"f", {Rational(0), Rational(1)}, 0});
  } else {
    const auto& lat = std::get<AbstractLattice>(spec);
    const std::size_t rank = lat.gram.rows();
    if (rank == 0 || !lat.gram.is_symmetric()) throw ModelError("lattice base: gram must be a nonempty symmetric matrix");
    if (inertia(lat.gram).positive != 1 || inertia(lat.gram).zero != 0)
      throw ModelError("lattice base: gram violates the Hodge index theorem (need exactly one positive direction, nondegenerate)");
    if (lat.canonical.size() != rank) throw ModelError("lattice base: K has wrong length");
    std::vector<std::string> labels = lat.basis;
    if (labels.empty())
      for (std::size_t i = 0; i < rank; ++i) labels.push_back("b" + std::to_string(i + 1));
    if (labels.size() != rank) throw ModelError("lattice base: basis labels have wrong length");
    const std::string tag = detail::base_tag(spec);
    level.form = {tag, labels, lat.gram};
    level.canonical = {tag, lat.canonical};
    decls = lat.curves;
  }

  SurfaceModel model;
  model.base_ = spec;
  for (const auto& d : decls) {
    if (!detail::valid_curve_id(d.id)) throw ModelError("invalid curve id '" + d.id + "'");
    if (d.genus < 0) throw ModelError("curve '" + d.id + "': negative genus");
    if (d.cls.size() != level.form.rank()) throw ModelError("curve '" + d.id + "': class has wrong length");
    for (const auto& c : level.catalog)
      if (c.id == d.id) throw ModelError("duplicate curve id '" + d.id + "'");
    level.catalog.push_back({d.id, {level.form.lattice, d.cls}, d.genus, CurveKind::base, std::nullopt, 0});
  }
  model.levels_.push_back(std::move(level));

  for (const auto& c : model.catalog(0)) {
    Rational pa = arithmetic_genus(model, 0, c.cls);
    if (boost::multiprecision::denominator(pa) != 1)
      throw ModelError("curve '" + c.id + "': class has non-integral arithmetic genus " + to_string(pa));
    if (pa < c.genus)
      throw ModelError("curve '" + c.id + "': genus " + std::to_string(c.genus) + " exceeds arithmetic genus " + to_string(pa));
  }
  return model;
}

inline SurfaceModel blow_up(const SurfaceModel& model, const BlowUpCenter& center_in) {
  const int k = model.top_level();
  const Level& prev = model.level(k);
  BlowUpCenter center = center_in;
  if (center.point_label.empty()) center.point_label = center.exceptional_id;

  if (!detail::valid_curve_id(center.exceptional_id))
    throw ModelError("invalid exceptional id '" + center.exceptional_id + "'");
  if (model.find_curve(k, center.exceptional_id))
    throw ModelError("exceptional id '" + center.exceptional_id + "' already names a curve");

  if (center.infinitely_near) {
    const Curve* parent = model.find_curve(k, *center.infinitely_near);
    if (!parent) throw ModelError("unknown curve '" + *center.infinitely_near + "'");
    if (!parent->is_exceptional_origin())
      throw ModelError("infinitely near parent '" + parent->id + "' is not an exceptional curve");
    center.infinitely_near = parent->id;
    bool listed = std::any_of(center.on_curves.begin(), center.on_curves.end(),
                              [&](const CenterIncidence& inc) { return model.curve(k, inc.curve).id == parent->id; });
    if (!listed) center.on_curves.push_back({parent->id, 1});
  }

  std::map<std::string, int> mult;
  for (auto& inc : center.on_curves) {
    const Curve* c = model.find_curve(k, inc.curve);
    if (!c) throw ModelError("unknown curve '" + inc.curve + "'");
    if (inc.multiplicity < 1) throw ModelError("curve '" + c->id + "': multiplicity must be >= 1");
    inc.curve = c->id;
    if (!mult.emplace(c->id, inc.multiplicity).second) throw ModelError("curve '" + c->id + "' listed twice in one center");
  }

  // Two curves through the point with multiplicities m, n meet there with
  // local intersection >= m·n, which must fit in their intersection number.
  for (auto a = mult.begin(); a != mult.end(); ++a)
    for (auto b = std::next(a); b != mult.end(); ++b) {
      Rational ab = model.intersect(k, model.curve(k, a->first).cls, model.curve(k, b->first).cls);
      if (ab < a->second * b->second)
        throw ModelError("intersection budget exceeded for pair (" + a->first + ", " + b->first + "): intersection number " +
                         to_string(ab) + " < required " + std::to_string(a->second * b->second));
    }

  SurfaceModel out;
  out.base_ = model.base_;
  out.levels_ = model.levels_;

  Level next;
  next.form.lattice = prev.form.lattice + "/" + center.exceptional_id;
  next.form.basis = prev.form.basis;
  next.form.basis.push_back(center.exceptional_id);
  const std::size_t r = prev.form.rank();
  next.form.gram = Matrix(r + 1, r + 1);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) next.form.gram(i, j) = prev.form.gram(i, j);
  next.form.gram(r, r) = -1;

  next.canonical = {next.form.lattice, prev.canonical.coeffs};
  next.canonical.coeffs.push_back(1);

  for (const auto& c : prev.catalog) {
    Curve t = c;
    t.cls.lattice = next.form.lattice;
    auto it = mult.find(c.id);
    t.cls.coeffs.push_back(it == mult.end() ? Rational(0) : Rational(-it->second));
    if (it != mult.end()) t.kind = CurveKind::strict_transform;
    t.origin = c.id;
    next.catalog.push_back(std::move(t));
  }
  Curve e;
  e.id = center.exceptional_id;
  e.cls = next.form.basis_vector(r);
  e.genus = 0;
  e.kind = CurveKind::exceptional;
  e.created_level = k + 1;
  next.catalog.push_back(std::move(e));
  next.center = center;
  out.levels_.push_back(std::move(next));

  for (const auto& [id, m] : mult) {
    const Curve& t = out.curve(k + 1, id);
    if (arithmetic_genus(out, k + 1, t.cls) < t.genus)
      throw ModelError("curve '" + id + "' has no singular point of multiplicity " + std::to_string(m) +
                       " left (arithmetic genus would drop below genus " + std::to_string(t.genus) + ")");
  }
  return out;
}

inline SurfaceModel blow_down(const SurfaceModel& model) {
  if (model.top_level() < 1) throw ModelError("blow_down: model has a single level");
  SurfaceModel out = model;
  out.levels_.pop_back();
  return out;
}

inline DivisorClass pull_back(const SurfaceModel& model, int from, int to, const DivisorClass& c) {
  model.check_level(from);
  model.check_level(to);
  if (from > to) throw ModelError("pull_back: from_level > to_level");
  require_in_lattice(c, model.form(from));
  DivisorClass out{model.form(to).lattice, c.coeffs};
  out.coeffs.resize(model.form(to).rank());
  return out;
}

inline DivisorClass push_forward(const SurfaceModel& model, int from, int to, const DivisorClass& c) {
  model.check_level(from);
  model.check_level(to);
  if (from < to) throw ModelError("push_forward: from_level < to_level");
  require_in_lattice(c, model.form(from));
  DivisorClass out{model.form(to).lattice, c.coeffs};
  out.coeffs.resize(model.form(to).rank());
  return out;
}

inline DivisorClass divisor_class(const SurfaceModel& model, const RDivisor& d) {
  DivisorClass sum = model.form(d.level).zero();
  for (const auto& [id, c] : d.terms) sum += c * model.curve(d.level, id).cls;
  return sum;
}

/// Checks every term names a curve at the divisor's level and normalizes
/// display names to stable ids.
inline RDivisor normalize(const SurfaceModel& model, const RDivisor& d) {
  RDivisor out{d.level, {}};
  for (const auto& [name, c] : d.terms) out.add(model.curve(d.level, name).id, c);
  return out;
}

/// Total transform: each step gives the new exceptional curve the
/// coefficient Σ m_C · coeff_C over the curves through the center.
inline RDivisor pull_back(const SurfaceModel& model, int from, int to, const RDivisor& d) {
  model.check_level(from);
  model.check_level(to);
  if (from > to) throw ModelError("pull_back: from_level > to_level");
  if (d.level != from) throw ModelError("pull_back: divisor lives at level " + std::to_string(d.level));
  RDivisor out = normalize(model, d);
  for (int k = from + 1; k <= to; ++k) {
    const BlowUpCenter& center = *model.level(k).center;
    Rational e = 0;
    for (const auto& inc : center.on_curves) e += inc.multiplicity * out.coefficient(inc.curve);
    out.level = k;
    out.add(center.exceptional_id, e);
  }
  out.level = to;
  return out;
}

/// Drops curves contracted between the levels; surviving curves keep their
/// coefficients (strict transforms map to their origins).
inline RDivisor push_forward(const SurfaceModel& model, int from, int to, const RDivisor& d) {
  model.check_level(from);
  model.check_level(to);
  if (from < to) throw ModelError("push_forward: from_level < to_level");
  if (d.level != from) throw ModelError("push_forward: divisor lives at level " + std::to_string(d.level));
  RDivisor out{to, {}};
  for (const auto& [name, c] : d.terms) {
    const Curve& curve = model.curve(from, name);
    if (curve.created_level <= to) out.add(curve.id, c);
  }
  return out;
}

struct Violation {
  std::string code;
  std::string message;
  int level = -1;
  std::vector<std::string> curves;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool log_resolution_ready = false;
  std::vector<std::string> readiness_issues;
  bool ok() const { return violations.empty(); }
};

/// Top-level support is usable as a log resolution when each curve is smooth
/// (arithmetic genus equals genus) and any two meet in at most one point,
/// transversally (intersection number <= 1).
inline std::vector<std::string> log_resolution_issues(const SurfaceModel& model, const std::vector<std::string>& support) {
  const int top = model.top_level();
  std::vector<std::string> issues;
  std::vector<const Curve*> curves;
  for (const auto& name : support) {
    const Curve* c = model.find_curve(top, name);
    if (!c) {
      issues.push_back("unknown curve '" + name + "' at top level");
      continue;
    }
    if (std::find(curves.begin(), curves.end(), c) == curves.end()) curves.push_back(c);
  }
  for (const Curve* c : curves)
    if (arithmetic_genus(model, top, c->cls) != c->genus)
      issues.push_back("curve '" + c->display_name() + "' is singular at the top level");
  for (std::size_t i = 0; i < curves.size(); ++i)
    for (std::size_t j = i + 1; j < curves.size(); ++j) {
      Rational ab = model.intersect(top, curves[i]->cls, curves[j]->cls);
      if (ab > 1)
        issues.push_back("curves '" + curves[i]->display_name() + "' and '" + curves[j]->display_name() +
                         "' meet with intersection number " + to_string(ab) + " (not declared transverse and distinct)");
    }
  return issues;
}

/// Never throws. `support` selects the curves for the log-resolution flag;
/// when absent the whole top catalog is used.
inline ValidationReport validate(const SurfaceModel& model, const std::optional<std::vector<std::string>>& support = std::nullopt) {
  ValidationReport report;
  auto flag = [&report](std::string code, std::string msg, int level, std::vector<std::string> curves = {}) {
    report.violations.push_back({std::move(code), std::move(msg), level, std::move(curves)});
  };

  for (int k = 0; k <= model.top_level(); ++k) {
    const Level& lv = model.level(k);
    if (!lv.form.gram.is_symmetric()) {
      flag("asymmetric_form", "intersection form is not symmetric", k);
      continue;
    }
    Inertia sig = inertia(lv.form.gram);
    if (sig.positive != 1 || sig.zero != 0)
      flag("hodge_index", "signature (" + std::to_string(sig.positive) + "," + std::to_string(sig.negative) + "," +
                              std::to_string(sig.zero) + ") is not hyperbolic with one positive direction", k);

    for (std::size_t i = 0; i < lv.catalog.size(); ++i) {
      const Curve& c = lv.catalog[i];
      Rational pa = arithmetic_genus(model, k, c.cls);
      if (pa < c.genus)
        flag("genus", "curve '" + c.display_name() + "' has arithmetic genus " + to_string(pa) + " below genus " +
                          std::to_string(c.genus), k, {c.id});
      if (c.kind == CurveKind::exceptional &&
          (c.genus != 0 || model.intersect(k, c.cls, c.cls) != -1 || model.intersect(k, lv.canonical, c.cls) != -1))
        flag("exceptional", "exceptional curve '" + c.id + "' is not a (-1)-curve of genus 0", k, {c.id});
      for (std::size_t j = i + 1; j < lv.catalog.size(); ++j) {
        const Curve& d = lv.catalog[j];
        Rational cd = model.intersect(k, c.cls, d.cls);
        if (cd < 0)
          flag("intersection_budget", "pair (" + c.id + ", " + d.id + ") has negative intersection " + to_string(cd) +
                                          ": more shared points declared than the intersection number allows", k, {c.id, d.id});
      }
    }

    if (k == 0) continue;
    const Level& prev = model.level(k - 1);
    const std::size_t r = prev.form.rank();
    bool structural = lv.form.rank() == r + 1 && lv.form.gram(r, r) == -1;
    for (std::size_t i = 0; structural && i < r; ++i) {
      structural = lv.form.gram(i, r) == 0;
      for (std::size_t j = 0; structural && j < r; ++j) structural = lv.form.gram(i, j) == prev.form.gram(i, j);
    }
    if (!structural) flag("blow_up_structure", "form is not the pullback form plus a (-1) direction", k);
    DivisorClass expected_k = pull_back(model, k - 1, k, prev.canonical);
    if (structural) {
      expected_k += lv.form.basis_vector(r);
      if (expected_k != lv.canonical) flag("canonical", "K is not pi^*K + E", k);
    }
    for (std::size_t i = 0; structural && i < r; ++i) {
      DivisorClass b = prev.form.basis_vector(i);
      if (push_forward(model, k, k - 1, pull_back(model, k - 1, k, b)) != b)
        flag("push_pull", "push_forward o pull_back is not the identity", k);
    }
  }

  std::vector<std::string> sup;
  if (support) {
    sup = *support;
  } else {
    for (const auto& c : model.catalog(model.top_level())) sup.push_back(c.id);
  }
  report.readiness_issues = log_resolution_issues(model, sup);
  report.log_resolution_ready = report.readiness_issues.empty();
  return report;
}

}  // namespace pklt
