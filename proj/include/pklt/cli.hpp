#pragma once

// Command dispatch for the pklt-lab tool. Reports go to `out`, diagnostics
// to `err`; the return value is the process exit code.

#include "pklt/corpus.hpp"
#include "pklt/model_io.hpp"
#include "pklt/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace pklt::cli {

enum ExitCode : int { ok = 0, computation = 1, usage = 2, validation = 3, corpus_mismatch = 4 };

struct Environment {
  bool out_is_tty = false;
  bool no_color = false;
};

struct Options {
  std::string command;
  std::string model_path;
  std::string divisor = "antiK";
  std::optional<int> level;
  std::vector<std::string> eps;
  std::string format = "json";
  std::string write_expected;
};

namespace detail {

using report::ojson;

inline std::vector<Rational> parse_eps(const std::vector<std::string>& raw) {
  std::vector<Rational> out;
  for (const auto& s : raw) {
    Rational r = parse_rational(s);
    if (r < 0) throw std::invalid_argument("--eps must be non-negative: " + s);
    out.push_back(r);
  }
  return out;
}

/// Default ε values for classify: half the threshold and the threshold itself.
inline std::vector<Rational> default_eps(const PairSpec& pair) {
  Rational eps0 = stabilization_threshold(potential_ledger(pair));
  return {eps0 / 2, eps0};
}

inline ojson classify_document(const ModelDocument& doc, std::optional<int> level, std::vector<Rational> eps) {
  PairSpec pair = make_pair_spec(doc, level);
  if (eps.empty()) eps = default_eps(pair);
  return report::classify(pair, classify_pair(pair, eps));
}

inline ojson check(const ModelDocument& doc, std::optional<int> level) {
  const auto& m = doc.model;
  ojson out = report::header("check");
  ojson levels = ojson::array();
  for (int k = 0; k <= m.top_level(); ++k) {
    ojson curves = ojson::array();
    for (const auto& c : m.catalog(k))
      curves.push_back(ojson{{"curve", c.display_name()},
                             {"kind", to_string(c.kind)},
                             {"genus", c.genus},
                             {"self_intersection", to_string(m.intersect(k, c.cls, c.cls))},
                             {"arithmetic_genus", to_string(arithmetic_genus(m, k, c.cls))}});
    levels.push_back(ojson{{"level", k}, {"rank", m.form(k).basis.size()}, {"curves", curves}});
  }
  out["levels"] = levels;
  ValidationReport v = validate(m);
  ojson violations = ojson::array();
  for (const auto& x : v.violations) violations.push_back(ojson{{"code", x.code}, {"level", x.level}, {"message", x.message}});
  out["valid"] = v.ok();
  out["violations"] = violations;
  ojson pair{{"level", pair_level(doc, level)}};
  try {
    PairSpec p = make_pair_spec(doc, level);
    ojson support = ojson::array();
    for (const auto& id : p.resolution_support()) support.push_back(m.curve(p.top(), id).display_name());
    pair["log_resolution_ready"] = true;
    pair["resolution_support"] = support;
  } catch (const PreconditionError& e) {
    pair["log_resolution_ready"] = false;
    pair["issue"] = e.what();
  }
  out["pair"] = pair;
  return out;
}

inline ojson zariski(const ModelDocument& doc, const std::string& name, std::optional<int> level) {
  const int k = level ? *level : doc.model.top_level();
  doc.model.check_level(k);
  DivisorClass cls;
  if (name == "K") {
    cls = doc.model.canonical(k);
  } else if (name == "antiK") {
    cls = -doc.model.canonical(k);
  } else if (name == "-(K+Delta)") {
    int pl = pair_level(doc, std::nullopt);
    if (k < pl) throw ModelError("-(K+Delta) is defined from the pair level " + std::to_string(pl) + " upward");
    RDivisor delta = pair_boundary(doc, pl);
    cls = pull_back(doc.model, pl, k, -(doc.model.canonical(pl) + divisor_class(doc.model, delta)));
  } else {
    cls = divisor_class(doc.model, resolve_divisor(doc, name, k));
  }
  ojson out = report::header("zariski");
  out["zariski"] = report::zariski(doc.model, name, zariski_decompose(doc.model, k, cls));
  out["disclaimer"] = kCatalogDisclaimer;
  return out;
}

inline ojson potential(const ModelDocument& doc, std::optional<int> level) {
  PairSpec pair = make_pair_spec(doc, level);
  PotentialReport r = classify_pair(pair);
  ojson out = report::header("potential");
  out["pair"] = report::pair(pair);
  out["ledger"] = report::ledger(r.ledger);
  out["frakA"] = to_string(r.frak_a);
  out["flags"] = report::flags(r.flags);
  out["disclaimer"] = kCatalogDisclaimer;
  return out;
}

inline ojson pnklt(const ModelDocument& doc, std::optional<int> level, const std::vector<Rational>& eps) {
  PairSpec pair = make_pair_spec(doc, level);
  PotentialReport r = classify_pair(pair, eps);
  ojson out = report::header("pnklt");
  out["pair"] = report::pair(pair);
  out["pnklt"] = report::locus(r.pnklt);
  out["eps0"] = to_string(r.eps0);
  out["frakA"] = to_string(r.frak_a);
  if (!eps.empty()) out["eps_spnklt"] = report::eps_table(r);
  out["disclaimer"] = kCatalogDisclaimer;
  return out;
}

inline ojson fano(const ModelDocument& doc, std::optional<int> level) {
  const int k = level ? *level : doc.model.top_level();
  ojson out = report::header("fano");
  out["fano_type"] = report::fano(doc.model, fano_type_test(doc.model, k), k);
  out["disclaimer"] = kCatalogDisclaimer;
  return out;
}

inline ojson rcc(const ModelDocument& doc, std::optional<int> level) {
  PairSpec pair = make_pair_spec(doc, level);
  PotentialReport r = classify_pair(pair);
  ojson out = report::header("rcc");
  out["pair"] = report::pair(pair);
  out["pnklt"] = report::locus(r.pnklt);
  out["rcc"] = report::rcc_section(pair, r);
  out["disclaimer"] = kCatalogDisclaimer;
  return out;
}

struct CorpusOutcome {
  std::string name;
  std::string status;  // match | mismatch | error
  ojson detail;
  std::string actual;
};

inline CorpusOutcome run_corpus_entry(const CorpusEntry& entry) {
  CorpusOutcome o{std::string(entry.name), "match", ojson::array(), {}};
  try {
    ojson actual = classify_document(load_model(entry.model_json), std::nullopt, {});
    o.actual = actual.dump(2) + "\n";
    nlohmann::json expected = nlohmann::json::parse(entry.expected_json);
    nlohmann::json diff = nlohmann::json::diff(expected, nlohmann::json::parse(o.actual));
    if (!diff.empty()) {
      o.status = "mismatch";
      for (const auto& op : diff) o.detail.push_back(ojson::parse(op.dump()));
    }
  } catch (const std::exception& e) {
    o.status = "error";
    o.detail = ojson{{"message", e.what()}};
  }
  return o;
}

/// Entries run concurrently; results are reported in corpus order.
inline int examples(const Options& opt, ojson& out, std::ostream& err) {
  std::vector<std::future<CorpusOutcome>> jobs;
  for (const auto& entry : kCorpus) jobs.push_back(std::async(std::launch::async, run_corpus_entry, entry));
  out = report::header("examples");
  ojson entries = ojson::array();
  bool all_match = true;
  for (auto& job : jobs) {
    CorpusOutcome o = job.get();
    all_match = all_match && o.status == "match";
    ojson e{{"name", o.name}, {"status", o.status}};
    if (o.status != "match") e["diff"] = o.detail;
    entries.push_back(e);
    if (!opt.write_expected.empty() && !o.actual.empty()) {
      std::ofstream f(std::filesystem::path(opt.write_expected) / (o.name + ".json"), std::ios::binary);
      f << o.actual;
    }
    if (o.status != "match") err << "corpus entry " << o.name << ": " << o.status << "\n";
  }
  out["entries"] = entries;
  out["all_match"] = all_match;
  return all_match ? ok : corpus_mismatch;
}

inline void emit(const ojson& doc, const Options& opt, const Environment& env, std::ostream& out) {
  if (opt.format == "text")
    report::render_text(out, doc, report::TextStyle{env.out_is_tty && !env.no_color});
  else
    out << doc.dump(2) << "\n";
}

inline int fail(std::ostream& out, std::ostream& err, int code, ojson doc) {
  err << "pklt-lab: " << doc["error"]["message"].get<std::string>() << "\n";
  out << doc.dump(2) << "\n";
  return code;
}

}  // namespace detail

inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Environment& env = {}) {
  Options opt;
  CLI::App app{"Potential discrepancies and pNklt loci on blow-up towers of surfaces", "pklt-lab"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub, bool needs_model) {
    if (needs_model) sub->add_option("model", opt.model_path, "model file (schema pklt-lab/1)")->required();
    sub->add_option("--format", opt.format, "report format")->check(CLI::IsMember({"json", "text"}));
  };
  auto with_level = [&](CLI::App* sub) { sub->add_option("--level", opt.level, "level of the tower")->check(CLI::NonNegativeNumber); };

  auto* check = app.add_subcommand("check", "validate a model and summarize its levels");
  common(check, true);
  with_level(check);
  auto* zar = app.add_subcommand("zariski", "Zariski decomposition of a divisor");
  common(zar, true);
  with_level(zar);
  zar->add_option("--divisor", opt.divisor, "K, antiK, -(K+Delta) or a divisor declared in the model");
  for (const char* name : {"potential", "classify", "rcc"}) {
    auto* sub = app.add_subcommand(name, "");
    common(sub, true);
    with_level(sub);
  }
  app.get_subcommand("potential")->description("discrepancy and potential discrepancy ledger");
  app.get_subcommand("classify")->description("full report for the pair");
  app.get_subcommand("rcc")->description("rational chain connectedness through pNklt");
  auto* pn = app.add_subcommand("pnklt", "potentially non-klt locus and its threshold");
  common(pn, true);
  with_level(pn);
  pn->add_option("--eps", opt.eps, "evaluate the eps-locus at p/q (repeatable)");
  app.get_subcommand("classify")->add_option("--eps", opt.eps, "evaluate the eps-locus at p/q (repeatable)");
  auto* fano = app.add_subcommand("fano", "Fano type test at a level");
  common(fano, true);
  with_level(fano);
  auto* ex = app.add_subcommand("examples", "run the embedded golden corpus");
  common(ex, false);
  ex->add_option("--write-expected", opt.write_expected)->group("");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    return detail::fail(out, err, usage, report::error("usage", e.what()));
  }
  opt.command = app.get_subcommands().front()->get_name();

  using report::ojson;
  try {
    std::vector<Rational> eps;
    try {
      eps = detail::parse_eps(opt.eps);
    } catch (const std::invalid_argument& e) {
      return detail::fail(out, err, usage, report::error("usage", std::string("bad --eps value: ") + e.what()));
    }
    if (opt.command == "examples") {
      ojson doc;
      int code = detail::examples(opt, doc, err);
      detail::emit(doc, opt, env, out);
      return code;
    }
    ModelDocument doc = load_model_file(opt.model_path);
    ojson result;
    if (opt.command == "check") result = detail::check(doc, opt.level);
    else if (opt.command == "zariski") result = detail::zariski(doc, opt.divisor, opt.level);
    else if (opt.command == "potential") result = detail::potential(doc, opt.level);
    else if (opt.command == "pnklt") result = detail::pnklt(doc, opt.level, eps);
    else if (opt.command == "classify") result = detail::classify_document(doc, opt.level, eps);
    else if (opt.command == "fano") result = detail::fano(doc, opt.level);
    else result = detail::rcc(doc, opt.level);
    detail::emit(result, opt, env, out);
    return ok;
  } catch (const ParseError& e) {
    return detail::fail(out, err, usage, report::error(e.kind(), e.what()));
  } catch (const SchemaError& e) {
    ojson doc = report::error(e.kind(), e.what());
    doc["error"]["pointer"] = e.pointer();
    return detail::fail(out, err, usage, doc);
  } catch (const ValidationFailure& e) {
    ojson doc = report::error(e.kind(), e.what());
    ojson vs = ojson::array();
    for (const auto& v : e.violations()) vs.push_back(ojson{{"pointer", v.pointer}, {"code", v.code}, {"message", v.message}});
    doc["error"]["violations"] = vs;
    return detail::fail(out, err, validation, doc);
  } catch (const Error& e) {
    return detail::fail(out, err, computation, report::error(e.kind(), e.what()));
  }
}

}  // namespace pklt::cli
