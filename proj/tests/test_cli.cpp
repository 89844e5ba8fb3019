#include "pklt/cli.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using nlohmann::json;

namespace {

const std::string kModels = PKLT_MODELS_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

Run run(std::vector<std::string> args, pklt::cli::Environment env = {}) {
  std::ostringstream out, err;
  int code = pklt::cli::run_command(args, out, err, env);
  return {code, out.str(), err.str()};
}

std::string model(const std::string& name) { return kModels + "/" + name + ".json"; }

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("pklt_cli_" + name + ".json");
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST(Cli, ZariskiAntiCanonicalAfterBlowUp) {
  auto r = run({"zariski", model("improvebp"), "--divisor", "antiK", "--level", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto d = r.doc();
  EXPECT_EQ(d["zariski"]["N"], (json{{"C0~", "5/3"}, {"E1", "2/3"}}));
  EXPECT_EQ(d["disclaimer"], pklt::kCatalogDisclaimer);
}

TEST(Cli, ZariskiOnBaseAndNamedDivisors) {
  auto base = run({"zariski", model("improvebp"), "--level", "0"}).doc();
  EXPECT_EQ(base["zariski"]["N"], (json{{"C0", "5/3"}}));
  auto anti = run({"zariski", model("klt_weak_del_pezzo"), "--divisor", "-(K+Delta)"}).doc();
  EXPECT_TRUE(anti["zariski"]["N"].empty());
  auto named = run({"zariski", model("klt_weak_del_pezzo"), "--divisor", "N"}).doc();
  EXPECT_EQ(named["zariski"]["N"], (json{{"C0", "1/3"}}));
  auto missing = run({"zariski", model("klt_weak_del_pezzo"), "--divisor", "nope"});
  EXPECT_EQ(missing.code, 1);
  EXPECT_EQ(missing.doc()["error"]["kind"], "model_error");
}

TEST(Cli, PnkltOfBlownUpRuledSurface) {
  auto r = run({"pnklt", model("improvebp")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto d = r.doc();
  EXPECT_EQ(d["pnklt"], (json{"C0~"}));
  EXPECT_EQ(d["eps0"], "1/3");
  EXPECT_FALSE(d.contains("eps_spnklt"));

  auto e = run({"pnklt", model("improvebp"), "--eps", "1/2", "--eps", "1/6"}).doc();
  ASSERT_EQ(e["eps_spnklt"].size(), 2u);
  EXPECT_EQ(e["eps_spnklt"][0]["components"], (json{"C0~", "E1"}));
  EXPECT_EQ(e["eps_spnklt"][1]["components"], (json{"C0~"}));
}

TEST(Cli, BadEpsIsUsageError) {
  EXPECT_EQ(run({"pnklt", model("improvebp"), "--eps", "0.5"}).code, 2);
  EXPECT_EQ(run({"pnklt", model("improvebp"), "--eps", "-1/2"}).code, 2);
}

TEST(Cli, ExamplesPassOnPristineCorpus) {
  auto r = run({"examples"});
  EXPECT_EQ(r.code, 0) << r.out;
  auto d = r.doc();
  EXPECT_TRUE(d["all_match"].get<bool>());
  EXPECT_EQ(d["entries"].size(), pklt::kCorpus.size());
  EXPECT_EQ(d["entries"][0]["name"], "improvebp");
}

TEST(Cli, CorpusMismatchIsReported) {
  pklt::CorpusEntry tampered = pklt::kCorpus.front();
  std::string expected(tampered.expected_json);
  auto pos = expected.find("\"eps0\": \"1/3\"");
  ASSERT_NE(pos, std::string::npos);
  expected.replace(pos, 13, "\"eps0\": \"1/4\"");
  tampered.expected_json = expected;
  auto o = pklt::cli::detail::run_corpus_entry(tampered);
  EXPECT_EQ(o.status, "mismatch");
  ASSERT_EQ(o.detail.size(), 1u);
  EXPECT_EQ(o.detail[0]["path"], "/eps0");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"check"}).code, 2);
  EXPECT_EQ(run({"check", "/nonexistent/model.json"}).code, 2);

  auto schema = write_temp("schema", R"({"version": "pklt-lab/1", "base": {"kind": "P2"}, "divisors": {"D": [{"curve": "L", "coeff": 1.5}]}})");
  auto s = run({"check", schema.string()});
  EXPECT_EQ(s.code, 2);
  EXPECT_EQ(s.doc()["error"]["pointer"], "/divisors/D/0/coeff");

  auto bad = write_temp("validation", R"({"version": "pklt-lab/1", "base": {"kind": "P2"}, "blowups": [{"id": "E1", "on": [{"curve": "Q"}]}]})");
  auto v = run({"check", bad.string()});
  EXPECT_EQ(v.code, 3);
  EXPECT_EQ(v.doc()["error"]["violations"][0]["pointer"], "/blowups/0/on/0/curve");

  auto nonpseff = write_temp("pseff", R"({"version": "pklt-lab/1", "base": {"kind": "P2"}, "divisors": {"B": [{"curve": "L", "coeff": 4}]},
                                          "pair": {"level": 0, "delta": "B"}})");
  auto c = run({"classify", nonpseff.string()});
  EXPECT_EQ(c.code, 1);
  EXPECT_EQ(c.doc()["error"]["kind"], "not_pseudoeffective");

  EXPECT_EQ(run({"potential", model("improvebp"), "--level", "7"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, EveryCommandRuns) {
  for (const char* cmd : {"check", "zariski", "potential", "pnklt", "classify", "fano", "rcc"}) {
    auto r = run({cmd, model("p2_cubic_12pts")});
    EXPECT_EQ(r.code, 0) << cmd << ": " << r.out;
    auto d = r.doc();
    EXPECT_EQ(d["schema"], "pklt-lab/1");
    EXPECT_EQ(d["command"], cmd);
  }
}

TEST(Cli, ReportContents) {
  auto cubic = run({"classify", model("p2_cubic_12pts")}).doc();
  EXPECT_EQ(cubic["frakA"], "-1");
  EXPECT_EQ(cubic["loci"]["pnklt"], (json{"C~"}));
  EXPECT_FALSE(cubic["fano_type"]["fano_type"].get<bool>());
  EXPECT_FALSE(cubic["rcc"]["pnklt_rcc"].get<bool>());
  EXPECT_FALSE(cubic["rcc"]["surface_rcc_via_pnklt"]["applicable"].get<bool>());

  auto potential = run({"potential", model("hirzebruch_f3")}).doc();
  EXPECT_EQ(potential["frakA"], "-1/3");
  EXPECT_TRUE(potential["flags"]["potentially_klt"].get<bool>());

  auto rcc = run({"rcc", model("improvebp")}).doc();
  EXPECT_FALSE(rcc["rcc"]["surface_rcc_via_pnklt"]["rcc"].get<bool>());

  auto check = run({"check", model("improvebp")}).doc();
  EXPECT_TRUE(check["valid"].get<bool>());
  EXPECT_TRUE(check["pair"]["log_resolution_ready"].get<bool>());
  EXPECT_EQ(check["levels"][1]["curves"][0]["self_intersection"], "-4");
}

TEST(Cli, DeterministicOutput) {
  for (const char* cmd : {"classify", "check", "zariski"}) {
    auto a = run({cmd, model("improvebp")});
    auto b = run({cmd, model("improvebp")});
    EXPECT_EQ(a.out, b.out) << cmd;
  }
  EXPECT_EQ(run({"examples"}).out, run({"examples"}).out);
}

TEST(Cli, TextFormatAndColor) {
  auto plain = run({"fano", model("hirzebruch_f3"), "--format", "text"}, {true, true});
  EXPECT_NE(plain.out.find("fano_type: true"), std::string::npos);
  EXPECT_EQ(plain.out.find("\x1b["), std::string::npos);
  auto colored = run({"fano", model("hirzebruch_f3"), "--format", "text"}, {true, false});
  EXPECT_NE(colored.out.find("\x1b[32mtrue"), std::string::npos);
  auto piped = run({"fano", model("hirzebruch_f3"), "--format", "text"}, {false, false});
  EXPECT_EQ(piped.out.find("\x1b["), std::string::npos);
  EXPECT_EQ(run({"fano", model("hirzebruch_f3"), "--format", "yaml"}).code, 2);
}

// The installed binary, to cover argv handling and process exit status.
TEST(Cli, BinaryExitStatus) {
  auto status = [](const std::string& args) {
    std::string cmd = std::string(PKLT_TOOL) + " " + args + " > /dev/null 2>&1";
    int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status("pnklt " + model("improvebp")), 0);
  EXPECT_EQ(status("examples"), 0);
  EXPECT_EQ(status("nonsense"), 2);
}
