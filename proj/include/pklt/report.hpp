#pragma once

// JSON reports (insertion-ordered, so byte-identical for identical input)
// and a plain-text renderer.

#include "pklt/locus.hpp"
#include "pklt/model_io.hpp"
#include "pklt/potential.hpp"
#include "pklt/rcc.hpp"
#include "pklt/zariski.hpp"

#include <json.hpp>

#include <ostream>
#include <string>

namespace pklt::report {

using ojson = nlohmann::ordered_json;

inline ojson header(const std::string& command) { return ojson{{"schema", kSchemaVersion}, {"command", command}}; }

/// Coefficients keyed by display name, in catalog order.
inline ojson divisor(const SurfaceModel& model, const RDivisor& d) {
  ojson out = ojson::object();
  for (const auto& c : model.catalog(d.level)) {
    Rational v = d.coefficient(c.id);
    if (v != 0) out[c.display_name()] = to_string(v);
  }
  return out;
}

inline ojson divisor_class(const IntersectionForm& form, const DivisorClass& cls) {
  ojson coeffs = ojson::array();
  for (const auto& c : cls.coeffs) coeffs.push_back(to_string(c));
  return ojson{{"basis", form.basis}, {"coeffs", coeffs}};
}

inline ojson locus(const Locus& l) { return names(l); }

inline ojson zariski(const SurfaceModel& model, const std::string& name, const ZariskiDecomposition& z) {
  const auto& form = model.form(z.level);
  ojson support = ojson::array();
  for (const auto& id : z.certificate.support) support.push_back(model.curve(z.level, id).display_name());
  Rational p2 = model.intersect(z.level, z.positive, z.positive);
  return ojson{{"divisor", name},
               {"level", z.level},
               {"P", divisor_class(form, z.positive)},
               {"N", divisor(model, z.negative)},
               {"support", support},
               {"P_squared", to_string(p2)},
               {"big", p2 > 0},
               {"rounds", z.certificate.rounds},
               {"nef_checked", z.certificate.nef_checked.size()}};
}

inline ojson ledger(const DiscrepancyLedger& l) {
  ojson out = ojson::array();
  for (const auto& e : l.entries)
    out.push_back(ojson{{"curve", e.name},
                        {"over_pair", e.exceptional_over_pair ? "exceptional" : "curve"},
                        {"genus", e.genus},
                        {"a", to_string(e.a)},
                        {"sigma_num", to_string(e.sigma_num)},
                        {"pa", to_string(e.pa)}});
  return out;
}

inline ojson pair(const PairSpec& p) {
  return ojson{{"level", p.level()}, {"top_level", p.top()}, {"delta", divisor(p.model(), p.delta())}};
}

inline ojson flags(const PairFlags& f) {
  return ojson{{"klt", f.klt}, {"lc", f.lc}, {"potentially_klt", f.potentially_klt}, {"potentially_lc", f.potentially_lc}};
}

inline ojson eps_table(const PotentialReport& r) {
  ojson out = ojson::array();
  for (const auto& [eps, l] : r.eps_table) out.push_back(ojson{{"eps", to_string(eps)}, {"components", locus(l)}});
  return out;
}

inline ojson fano(const FanoTypeResult& f, int level) {
  ojson out{{"level", level}, {"fano_type", f.fano_type}, {"reason", f.reason}, {"anti_canonical_big", f.anti_canonical_big}};
  if (f.decomposition) {
    out["pair_klt"] = f.pair_klt;
    out["N"] = ojson::object();
  }
  return out;
}

inline ojson fano(const SurfaceModel& model, const FanoTypeResult& f, int level) {
  ojson out = fano(f, level);
  if (f.decomposition) out["N"] = divisor(model, f.decomposition->negative);
  return out;
}

inline ojson error(const char* kind, const std::string& message) {
  return ojson{{"schema", kSchemaVersion}, {"error", ojson{{"kind", kind}, {"message", message}}}};
}

inline ojson rcc_section(const PairSpec& p, const PotentialReport& r) {
  ojson out{{"pnklt_rcc", is_rcc_locus(incidence_graph(p, r.pnklt))}};
  ojson surface;
  try {
    auto res = surface_rcc_via_pnklt(p);
    surface = ojson{{"applicable", true}, {"rcc", res.rcc}, {"explanation", res.explanation}};
  } catch (const PreconditionError& e) {
    surface = ojson{{"applicable", false}, {"rcc", nullptr}, {"explanation", e.what()}};
  }
  out["surface_rcc_via_pnklt"] = surface;
  return out;
}

/// Everything computed for a pair: the corpus compares this document.
inline ojson classify(const PairSpec& p, const PotentialReport& r) {
  ojson out = header("classify");
  out["pair"] = pair(p);
  out["zariski"] = zariski(p.model(), "-(K+Delta)", p.top_decomposition());
  out["ledger"] = ledger(r.ledger);
  out["frakA"] = to_string(r.frak_a);
  out["eps0"] = to_string(r.eps0);
  out["loci"] = ojson{{"nklt", locus(r.nklt)}, {"pnklt", locus(r.pnklt)}, {"nnef", locus(r.nnef)}, {"eps_spnklt", eps_table(r)}};
  out["flags"] = flags(r.flags);
  out["checks"] = ojson{{"anti_log_canonical_big", r.big},
                        {"pnklt_connected", r.pnklt_connected ? ojson(*r.pnklt_connected) : ojson(nullptr)}};
  try {
    out["fano_type"] = fano(p.model(), fano_type_test(p.model(), p.level()), p.level());
  } catch (const Error& e) {
    out["fano_type"] = ojson{{"level", p.level()}, {"error", ojson{{"kind", e.kind()}, {"message", e.what()}}}};
  }
  out["rcc"] = rcc_section(p, r);
  out["disclaimer"] = kCatalogDisclaimer;
  return out;
}

struct TextStyle {
  bool color = false;
};

namespace detail {

inline std::string scalar(const ojson& v, const TextStyle& style) {
  if (v.is_boolean()) {
    if (!style.color) return v.get<bool>() ? "true" : "false";
    return v.get<bool>() ? "\x1b[32mtrue\x1b[0m" : "\x1b[31mfalse\x1b[0m";
  }
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  return v.dump();
}

inline bool flat(const ojson& v) {
  if (!v.is_array()) return false;
  for (const auto& e : v)
    if (e.is_structured()) return false;
  return true;
}

inline void render(std::ostream& os, const ojson& v, int indent, const TextStyle& style) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  for (auto it = v.begin(); it != v.end(); ++it) {
    const std::string key = v.is_object() ? it.key() : "-";
    const ojson& val = it.value();
    if (flat(val)) {
      std::string items;
      for (const auto& e : val) items += (items.empty() ? "" : ", ") + scalar(e, style);
      os << pad << key << ": [" << items << "]\n";
    } else if (val.is_object() && val.empty()) {
      os << pad << key << ": {}\n";
    } else if (val.is_structured()) {
      os << pad << key << ":\n";
      render(os, val, indent + 1, style);
    } else {
      os << pad << key << ": " << scalar(val, style) << "\n";
    }
  }
}

}  // namespace detail

inline void render_text(std::ostream& os, const ojson& doc, const TextStyle& style) { detail::render(os, doc, 0, style); }

}  // namespace pklt::report
