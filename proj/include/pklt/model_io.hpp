#pragma once

// The "pklt-lab/1" model file: base surface, blow-up tower, named divisors
// and an optional pair declaration. Rationals are "p/q" strings or JSON
// integers; floats are rejected. Unknown keys are rejected.

#include "pklt/error.hpp"
#include "pklt/potential.hpp"
#include "pklt/rational.hpp"
#include "pklt/surface_model.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace pklt {

inline constexpr const char* kSchemaVersion = "pklt-lab/1";

class ParseError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "parse"; }
};

class SchemaError : public Error {
 public:
  SchemaError(std::string pointer, const std::string& msg) : Error(msg), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }
  const char* kind() const noexcept override { return "schema"; }

 private:
  std::string pointer_;
};

struct PointedViolation {
  std::string pointer;
  std::string code;
  std::string message;
};

class ValidationFailure : public Error {
 public:
  explicit ValidationFailure(std::vector<PointedViolation> v)
      : Error(v.empty() ? "validation failed" : v.front().pointer + ": " + v.front().message), violations_(std::move(v)) {}
  const std::vector<PointedViolation>& violations() const { return violations_; }
  const char* kind() const noexcept override { return "validation"; }

 private:
  std::vector<PointedViolation> violations_;
};

struct DivisorTerm {
  std::string curve;
  Rational coeff;
  bool operator==(const DivisorTerm&) const = default;
};

struct PairDecl {
  int level = 0;
  std::optional<std::string> delta;
  bool operator==(const PairDecl&) const = default;
};

struct ModelDocument {
  SurfaceModel model;
  std::map<std::string, std::vector<DivisorTerm>> divisors;
  std::optional<PairDecl> pair;
  bool operator==(const ModelDocument&) const = default;
};

/// Names with a built-in meaning for commands taking a divisor.
inline bool is_reserved_divisor_name(std::string_view name) {
  return name == "K" || name == "antiK" || name == "-(K+Delta)";
}

namespace detail {

using json = nlohmann::json;

inline std::string escape_pointer_token(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '~')
      out += "~0";
    else if (c == '/')
      out += "~1";
    else
      out += c;
  }
  return out;
}

inline void require_object(const json& j, const std::string& ptr, std::initializer_list<std::string_view> allowed,
                           std::initializer_list<std::string_view> required = {}) {
  if (!j.is_object()) throw SchemaError(ptr, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw SchemaError(ptr + "/" + escape_pointer_token(key), "unknown field '" + key + "'");
  }
  for (auto r : required)
    if (!j.contains(std::string(r))) throw SchemaError(ptr, "missing required field '" + std::string(r) + "'");
}

inline Rational read_rational(const json& j, const std::string& ptr) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number_float()) throw SchemaError(ptr, "floating-point numbers are not allowed; write \"p/q\"");
  if (!j.is_string()) throw SchemaError(ptr, "expected a rational string \"p/q\" or an integer");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(ptr, e.what());
  }
}

inline int read_int(const json& j, const std::string& ptr, int min_value) {
  if (!j.is_number_integer()) throw SchemaError(ptr, "expected an integer");
  long long v = j.get<long long>();
  if (v < min_value || v > 1000000) throw SchemaError(ptr, "integer out of range");
  return static_cast<int>(v);
}

inline std::string read_string(const json& j, const std::string& ptr) {
  if (!j.is_string()) throw SchemaError(ptr, "expected a string");
  return j.get<std::string>();
}

inline std::vector<Rational> read_rational_array(const json& j, const std::string& ptr) {
  if (!j.is_array()) throw SchemaError(ptr, "expected an array");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_rational(j[i], ptr + "/" + std::to_string(i)));
  return out;
}

inline std::vector<CurveDecl> read_curves(const json& j, const std::string& ptr) {
  if (!j.is_array()) throw SchemaError(ptr, "expected an array");
  std::vector<CurveDecl> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = ptr + "/" + std::to_string(i);
    require_object(j[i], p, {"id", "class", "genus"}, {"id", "class"});
    CurveDecl d;
    d.id = read_string(j[i]["id"], p + "/id");
    d.cls = read_rational_array(j[i]["class"], p + "/class");
    d.genus = j[i].contains("genus") ? read_int(j[i]["genus"], p + "/genus", 0) : 0;
    out.push_back(std::move(d));
  }
  return out;
}

inline BaseSpec read_base(const json& j) {
  const std::string ptr = "/base";
  if (!j.is_object() || !j.contains("kind")) throw SchemaError(ptr, "base must be an object with a 'kind'");
  const std::string kind = read_string(j["kind"], ptr + "/kind");
  if (kind == "P2") {
    require_object(j, ptr, {"kind", "curves"});
    ProjectivePlane p;
    if (j.contains("curves")) p.curves = read_curves(j["curves"], ptr + "/curves");
    return p;
  }
  if (kind == "ruled") {
    require_object(j, ptr, {"kind", "genus", "e"}, {"genus", "e"});
    return Ruled{read_int(j["genus"], ptr + "/genus", 0), read_int(j["e"], ptr + "/e", 1)};
  }
  if (kind == "lattice") {
    require_object(j, ptr, {"kind", "gram", "K", "curves", "basis"}, {"gram", "K"});
    AbstractLattice lat;
    const json& g = j["gram"];
    if (!g.is_array() || g.empty()) throw SchemaError(ptr + "/gram", "expected a nonempty square array");
    lat.gram = Matrix(g.size(), g.size());
    for (std::size_t r = 0; r < g.size(); ++r) {
      auto row = read_rational_array(g[r], ptr + "/gram/" + std::to_string(r));
      if (row.size() != g.size()) throw SchemaError(ptr + "/gram/" + std::to_string(r), "row length differs from rank");
      for (std::size_t c = 0; c < row.size(); ++c) lat.gram(r, c) = row[c];
    }
    lat.canonical = read_rational_array(j["K"], ptr + "/K");
    if (j.contains("curves")) lat.curves = read_curves(j["curves"], ptr + "/curves");
    if (j.contains("basis")) {
      if (!j["basis"].is_array()) throw SchemaError(ptr + "/basis", "expected an array of labels");
      for (std::size_t i = 0; i < j["basis"].size(); ++i)
        lat.basis.push_back(read_string(j["basis"][i], ptr + "/basis/" + std::to_string(i)));
    }
    return lat;
  }
  throw SchemaError(ptr + "/kind", "unknown base kind '" + kind + "' (expected P2, ruled or lattice)");
}

inline std::string level_pointer(int level) {
  return level == 0 ? std::string("/base") : "/blowups/" + std::to_string(level - 1);
}

}  // namespace detail

/// Builds and validates a model. Throws ParseError / SchemaError (malformed
/// input) or ValidationFailure (well-formed but inconsistent model).
inline ModelDocument load_model(std::string_view text) {
  using detail::json;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  detail::require_object(root, "", {"version", "base", "blowups", "divisors", "pair"}, {"version", "base"});
  if (detail::read_string(root["version"], "/version") != kSchemaVersion)
    throw SchemaError("/version", std::string("unsupported version; expected \"") + kSchemaVersion + "\"");

  BaseSpec base = detail::read_base(root["base"]);

  std::vector<BlowUpCenter> centers;
  if (root.contains("blowups")) {
    const json& b = root["blowups"];
    if (!b.is_array()) throw SchemaError("/blowups", "expected an array");
    for (std::size_t i = 0; i < b.size(); ++i) {
      const std::string p = "/blowups/" + std::to_string(i);
      detail::require_object(b[i], p, {"id", "on", "near"}, {"id"});
      BlowUpCenter c;
      c.exceptional_id = detail::read_string(b[i]["id"], p + "/id");
      if (b[i].contains("on")) {
        const json& on = b[i]["on"];
        if (!on.is_array()) throw SchemaError(p + "/on", "expected an array");
        for (std::size_t k = 0; k < on.size(); ++k) {
          const std::string q = p + "/on/" + std::to_string(k);
          detail::require_object(on[k], q, {"curve", "mult"}, {"curve"});
          c.on_curves.push_back({detail::read_string(on[k]["curve"], q + "/curve"),
                                 on[k].contains("mult") ? detail::read_int(on[k]["mult"], q + "/mult", 1) : 1});
        }
      }
      if (b[i].contains("near")) c.infinitely_near = detail::read_string(b[i]["near"], p + "/near");
      centers.push_back(std::move(c));
    }
  }

  ModelDocument doc;
  if (root.contains("divisors")) {
    const json& d = root["divisors"];
    if (!d.is_object()) throw SchemaError("/divisors", "expected an object");
    for (const auto& [name, terms] : d.items()) {
      const std::string p = "/divisors/" + detail::escape_pointer_token(name);
      if (is_reserved_divisor_name(name)) throw SchemaError(p, "divisor name '" + name + "' is reserved");
      if (!terms.is_array()) throw SchemaError(p, "expected an array of terms");
      std::vector<DivisorTerm> out;
      for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string q = p + "/" + std::to_string(i);
        detail::require_object(terms[i], q, {"curve", "coeff"}, {"curve", "coeff"});
        out.push_back({detail::read_string(terms[i]["curve"], q + "/curve"), detail::read_rational(terms[i]["coeff"], q + "/coeff")});
      }
      doc.divisors.emplace(name, std::move(out));
    }
  }
  if (root.contains("pair")) {
    detail::require_object(root["pair"], "/pair", {"level", "delta"}, {"level"});
    PairDecl pd;
    pd.level = detail::read_int(root["pair"]["level"], "/pair/level", 0);
    if (root["pair"].contains("delta")) pd.delta = detail::read_string(root["pair"]["delta"], "/pair/delta");
    doc.pair = pd;
  }

  // Construction.
  SurfaceModel model;
  try {
    model = make_base(base);
  } catch (const ModelError& e) {
    throw ValidationFailure({{"/base", "invalid_base", e.what()}});
  }
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const std::string p = "/blowups/" + std::to_string(i);
    const int top = model.top_level();
    for (std::size_t k = 0; k < centers[i].on_curves.size(); ++k)
      if (!model.find_curve(top, centers[i].on_curves[k].curve))
        throw ValidationFailure({{p + "/on/" + std::to_string(k) + "/curve", "unknown_curve",
                                  "unknown curve '" + centers[i].on_curves[k].curve + "'"}});
    if (centers[i].infinitely_near && !model.find_curve(top, *centers[i].infinitely_near))
      throw ValidationFailure({{p + "/near", "unknown_curve", "unknown curve '" + *centers[i].infinitely_near + "'"}});
    try {
      model = blow_up(model, centers[i]);
    } catch (const ModelError& e) {
      throw ValidationFailure({{p, "invalid_blow_up", e.what()}});
    }
  }

  std::vector<PointedViolation> problems;
  const int top = model.top_level();
  for (const auto& [name, terms] : doc.divisors)
    for (std::size_t i = 0; i < terms.size(); ++i)
      if (!model.find_curve(top, terms[i].curve))
        problems.push_back({"/divisors/" + detail::escape_pointer_token(name) + "/" + std::to_string(i) + "/curve", "unknown_curve",
                            "unknown curve '" + terms[i].curve + "'"});
  if (doc.pair) {
    if (doc.pair->level > top) {
      problems.push_back({"/pair/level", "level_out_of_range", "pair level exceeds the top level " + std::to_string(top)});
    } else if (doc.pair->delta) {
      auto it = doc.divisors.find(*doc.pair->delta);
      if (it == doc.divisors.end()) {
        problems.push_back({"/pair/delta", "unknown_divisor", "unknown divisor '" + *doc.pair->delta + "'"});
      } else {
        for (std::size_t i = 0; i < it->second.size(); ++i) {
          const std::string q = "/divisors/" + detail::escape_pointer_token(it->first) + "/" + std::to_string(i);
          if (model.find_curve(top, it->second[i].curve) && !model.find_curve(doc.pair->level, it->second[i].curve))
            problems.push_back({q + "/curve", "not_on_pair_level", "curve '" + it->second[i].curve + "' does not exist at the pair level"});
          if (it->second[i].coeff < 0) problems.push_back({q + "/coeff", "negative_boundary", "boundary coefficients must be >= 0"});
        }
      }
    }
  }
  for (const auto& v : validate(model).violations)
    problems.push_back({detail::level_pointer(v.level), v.code, v.message});
  if (!problems.empty()) throw ValidationFailure(std::move(problems));

  doc.model = std::move(model);
  return doc;
}

inline ModelDocument load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read model file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_model(ss.str());
}

/// The divisor `name` read at `level`: each term is the named curve at that level.
inline RDivisor resolve_divisor(const ModelDocument& doc, const std::string& name, int level) {
  auto it = doc.divisors.find(name);
  if (it == doc.divisors.end()) throw ModelError("unknown divisor '" + name + "'");
  doc.model.check_level(level);
  RDivisor d{level, {}};
  for (const auto& t : it->second) d.add(doc.model.curve(level, t.curve).id, t.coeff);
  return d;
}

/// Pair level: override, else declared, else top. Boundary: declared or zero.
inline int pair_level(const ModelDocument& doc, std::optional<int> level_override) {
  int level = level_override ? *level_override : doc.pair ? doc.pair->level : doc.model.top_level();
  doc.model.check_level(level);
  return level;
}

inline RDivisor pair_boundary(const ModelDocument& doc, int level) {
  if (doc.pair && doc.pair->delta) return resolve_divisor(doc, *doc.pair->delta, level);
  return RDivisor{level, {}};
}

inline PairSpec make_pair_spec(const ModelDocument& doc, std::optional<int> level_override) {
  int level = pair_level(doc, level_override);
  return PairSpec::create(doc.model, level, pair_boundary(doc, level));
}

inline nlohmann::ordered_json model_to_json(const ModelDocument& doc) {
  using oj = nlohmann::ordered_json;
  auto rationals = [](const std::vector<Rational>& v) {
    oj a = oj::array();
    for (const auto& r : v) a.push_back(to_string(r));
    return a;
  };
  auto curves = [&](const std::vector<CurveDecl>& cs) {
    oj a = oj::array();
    for (const auto& c : cs) a.push_back(oj{{"id", c.id}, {"class", rationals(c.cls)}, {"genus", c.genus}});
    return a;
  };
  oj root;
  root["version"] = kSchemaVersion;
  oj base;
  const BaseSpec& spec = doc.model.base();
  if (const auto* p = std::get_if<ProjectivePlane>(&spec)) {
    base["kind"] = "P2";
    if (!p->curves.empty()) base["curves"] = curves(p->curves);
  } else if (const auto* r = std::get_if<Ruled>(&spec)) {
    base["kind"] = "ruled";
    base["genus"] = r->genus;
    base["e"] = r->e;
  } else {
    const auto& lat = std::get<AbstractLattice>(spec);
    base["kind"] = "lattice";
    if (!lat.basis.empty()) base["basis"] = lat.basis;
    oj gram = oj::array();
    for (std::size_t i = 0; i < lat.gram.rows(); ++i) {
      std::vector<Rational> row;
      for (std::size_t j = 0; j < lat.gram.cols(); ++j) row.push_back(lat.gram(i, j));
      gram.push_back(rationals(row));
    }
    base["gram"] = gram;
    base["K"] = rationals(lat.canonical);
    if (!lat.curves.empty()) base["curves"] = curves(lat.curves);
  }
  root["base"] = base;
  oj blowups = oj::array();
  for (int k = 1; k <= doc.model.top_level(); ++k) {
    const BlowUpCenter& c = *doc.model.level(k).center;
    oj b;
    b["id"] = c.exceptional_id;
    oj on = oj::array();
    for (const auto& inc : c.on_curves) {
      oj e{{"curve", inc.curve}};
      if (inc.multiplicity != 1) e["mult"] = inc.multiplicity;
      on.push_back(e);
    }
    b["on"] = on;
    if (c.infinitely_near) b["near"] = *c.infinitely_near;
    blowups.push_back(b);
  }
  root["blowups"] = blowups;
  oj divisors = oj::object();
  for (const auto& [name, terms] : doc.divisors) {
    oj arr = oj::array();
    for (const auto& t : terms) arr.push_back(oj{{"curve", t.curve}, {"coeff", to_string(t.coeff)}});
    divisors[name] = arr;
  }
  root["divisors"] = divisors;
  if (doc.pair) {
    oj p{{"level", doc.pair->level}};
    if (doc.pair->delta) p["delta"] = *doc.pair->delta;
    root["pair"] = p;
  }
  return root;
}

inline std::string serialize(const ModelDocument& doc) { return model_to_json(doc).dump(2) + "\n"; }

}  // namespace pklt
