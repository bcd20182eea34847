#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "grunsky/cli.hpp"
#include "schema_check.hpp"

using namespace grunsky;
namespace fs = std::filesystem;
using cli::json;

namespace {

const fs::path source_dir = GRUNSKY_SOURCE_DIR;
const fs::path fixture_dir = source_dir / "fixtures";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Outcome {
  int code = -1;
  std::string out, err;
};

Outcome run_inprocess(const std::string& text, const cli::Overrides& ov = {}) {
  std::ostringstream out, err;
  Outcome o;
  o.code = cli::run(text, ov, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

Outcome run_binary(const std::string& args, const std::string& env = "") {
  const fs::path tmp = fs::temp_directory_path() / ("grunsky_cli_" + std::to_string(::getpid()));
  fs::create_directories(tmp);
  const std::string cmd = env + " \"" + std::string(GRUNSKY_CLI_PATH) + "\" " + args + " > \"" + (tmp / "out").string() +
                          "\" 2> \"" + (tmp / "err").string() + "\"";
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.out = slurp(tmp / "out");
  o.err = slurp(tmp / "err");
  return o;
}

std::vector<fs::path> valid_fixtures() {
  std::vector<fs::path> v;
  for (const auto& e : fs::directory_iterator(fixture_dir))
    if (e.is_regular_file() && e.path().extension() == ".json") v.push_back(e.path());
  std::sort(v.begin(), v.end());
  return v;
}

json schema_for(const std::string& command) {
  return json::parse(slurp(source_dir / "schemas" / "reports" / (command + ".schema.json")));
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += x + "\n";
  return s;
}

} // namespace

TEST(CliFixtures, EveryFixtureMatchesItsGoldenReport) {
  const auto fixtures = valid_fixtures();
  ASSERT_GE(fixtures.size(), 10u);
  for (const auto& f : fixtures) {
    const json cfg = json::parse(slurp(f));
    const std::string ext = cfg.contains("output") && cfg["output"].value("format", "json") == "csv" ? ".csv" : ".json";
    const fs::path golden = fixture_dir / "golden" / (f.stem().string() + ext);
    const Outcome o = run_inprocess(slurp(f));
    EXPECT_EQ(o.code, 0) << f << "\n" << o.err;
    ASSERT_TRUE(fs::exists(golden)) << golden;
    EXPECT_EQ(o.out, slurp(golden)) << f;
  }
}

TEST(CliFixtures, ReportsAreDeterministicAcrossRunsAndProcesses) {
  for (const auto& f : valid_fixtures()) {
    const Outcome a = run_inprocess(slurp(f));
    const Outcome b = run_inprocess(slurp(f));
    EXPECT_EQ(a.out, b.out) << f;
  }
  const Outcome bin = run_binary("\"" + (fixture_dir / "moser_z2.json").string() + "\"");
  EXPECT_EQ(bin.code, 0);
  EXPECT_EQ(bin.out, run_inprocess(slurp(fixture_dir / "moser_z2.json")).out);
}

TEST(CliFixtures, JsonReportsReparseUnderTheirSchemas) {
  for (const auto& f : valid_fixtures()) {
    const json cfg = json::parse(slurp(f));
    cli::Overrides ov;
    ov.format = "json";
    const Outcome o = run_inprocess(slurp(f), ov);
    ASSERT_EQ(o.code, 0) << f;
    const json report = json::parse(o.out);
    const auto errors = schema::validate(schema_for(cfg["command"].get<std::string>()), report);
    EXPECT_TRUE(errors.empty()) << f << "\n" << join(errors);
  }
}

TEST(CliFixtures, ConfigsConformToTheConfigSchema) {
  const json s = json::parse(slurp(source_dir / "schemas" / "config.schema.json"));
  for (const auto& f : valid_fixtures()) EXPECT_TRUE(schema::validate(s, json::parse(slurp(f))).empty()) << f;
  EXPECT_FALSE(schema::validate(s, json::parse(slurp(fixture_dir / "invalid" / "unknown_field.json"))).empty());
}

TEST(CliSchema, ValidatorRejectsMalformedReports) {
  json r = json::parse(run_inprocess(slurp(fixture_dir / "fredholm_exemplar.json")).out);
  EXPECT_TRUE(schema::validate(schema_for("fredholm"), r).empty());
  json missing = r;
  missing.erase("kappa");
  EXPECT_FALSE(schema::validate(schema_for("fredholm"), missing).empty());
  json extra = r;
  extra["surprise"] = 1;
  EXPECT_FALSE(schema::validate(schema_for("fredholm"), extra).empty());
  json wrong = r;
  wrong["ahlfors_ok"] = "yes";
  EXPECT_FALSE(schema::validate(schema_for("fredholm"), wrong).empty());
}

TEST(CliCommands, NormOnExemplar) {
  const Outcome o = run_inprocess(slurp(fixture_dir / "norm_exemplar.json"));
  ASSERT_EQ(o.code, 0);
  const json r = json::parse(o.out);
  EXPECT_EQ(r["estimate"]["value"].get<double>(), 0.5);
  EXPECT_EQ(r["estimate"]["order"].get<int>(), 8);
}

TEST(CliCommands, CoeffsOnIdentityIsZeroCsv) {
  const Outcome o = run_inprocess(slurp(fixture_dir / "coeffs_identity.json"));
  ASSERT_EQ(o.code, 0);
  std::istringstream in(o.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "m,n,re,im");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_NE(line.find(",0.00000000000000000e+00,0.00000000000000000e+00"), std::string::npos) << line;
  }
  EXPECT_EQ(rows, 16u);
}

TEST(CliCommands, FredholmReportFields) {
  const json r = json::parse(run_inprocess(slurp(fixture_dir / "fredholm_exemplar.json")).out);
  EXPECT_NEAR(r["kappa"].get<double>(), 0.1, 1e-12);
  EXPECT_NEAR(r["rho"].get<double>(), 10.0, 1e-10);
  EXPECT_NEAR(r["qL"].get<double>(), 0.1, 0.0);
  EXPECT_TRUE(r["ahlfors_ok"].get<bool>());
  const Outcome id = run_inprocess(R"({"command": "fredholm", "function": {"b": []}, "order": 4})");
  ASSERT_EQ(id.code, 0);
  EXPECT_TRUE(json::parse(id.out)["rho"].is_null());
}

TEST(CliCommands, HomotopyProfileCsvColumns) {
  const Outcome o = run_inprocess(slurp(fixture_dir / "homotopy_profile.json"));
  ASSERT_EQ(o.code, 0);
  EXPECT_EQ(o.out.substr(0, o.out.find('\n')), "r,kappa,k_known,ratio");
}

TEST(CliExitCodes, ValidationFailuresBeforeComputation) {
  for (const char* name : {"unknown_field", "unknown_param", "irrelevant_field", "missing_function", "bad_beltrami"}) {
    const Outcome o = run_inprocess(slurp(fixture_dir / "invalid" / (std::string(name) + ".json")));
    EXPECT_EQ(o.code, cli::exit_validation) << name << ": " << o.err;
    EXPECT_TRUE(o.out.empty()) << name;
    EXPECT_EQ(o.err.rfind("error: ", 0), 0u) << name;
  }
  EXPECT_EQ(run_inprocess(R"({"command": "homotopy", "function": {"b": []}, "params": {"t": 0.5, "grid": [0.5]}})").code,
            cli::exit_validation);
  EXPECT_EQ(run_inprocess(R"({"command": "domain-basis", "domain": {"type": "cassini", "c": 2}, "params": {"basis": "chebyshev"}})").code,
            cli::exit_validation);
  EXPECT_EQ(run_inprocess(R"({"command": "norm", "function": {"b": []}, "order": 0})").code, cli::exit_validation);
  EXPECT_EQ(run_inprocess(R"({"command": "nrom", "function": {"b": []}})").code, cli::exit_validation);
}

TEST(CliExitCodes, MalformedJsonAndMissingFiles) {
  EXPECT_EQ(run_inprocess(slurp(fixture_dir / "invalid" / "truncated.json")).code, cli::exit_io);
  EXPECT_EQ(run_binary("/nonexistent/config.json").code, cli::exit_io);
  EXPECT_EQ(run_binary("").code, cli::exit_validation);  // missing positional argument
}

TEST(CliExitCodes, NumericalFailureCarriesModuleDiagnostic) {
  const Outcome o = run_inprocess(slurp(fixture_dir / "invalid" / "not_univalent.json"));
  EXPECT_EQ(o.code, cli::exit_numerical);
  EXPECT_NE(o.err.find("schwarzian: f' vanishes"), std::string::npos) << o.err;
}

TEST(CliExitCodes, InvariantViolationStillWritesTheReport) {
  const fs::path out = fs::temp_directory_path() / ("grunsky_corrupted_" + std::to_string(::getpid()) + ".json");
  fs::remove(out);
  const Outcome o = run_binary("\"" + (fixture_dir / "invalid" / "bound_check_corrupted.json").string() + "\" --out \"" +
                               out.string() + "\"");
  EXPECT_EQ(o.code, cli::exit_invariant);
  EXPECT_NE(o.err.find("invariant violation"), std::string::npos);
  ASSERT_TRUE(fs::exists(out));
  const json r = json::parse(slurp(out));
  EXPECT_FALSE(r["upper_ok"].get<bool>());
  EXPECT_FALSE(r["ok"].get<bool>());
  EXPECT_TRUE(schema::validate(schema_for("bound-check"), r).empty());
  fs::remove(out);
}

TEST(CliOverrides, OrderAndFormatFlags) {
  const std::string path = "\"" + (fixture_dir / "alpha_z.json").string() + "\"";
  const Outcome o = run_binary(path + " --order 3");
  ASSERT_EQ(o.code, 0) << o.err;
  const json r = json::parse(o.out);
  EXPECT_EQ(r["order"].get<int>(), 3);
  EXPECT_EQ(r["moments"].size(), 5u);
  const Outcome c = run_binary(path + " --order 3 --format csv");
  EXPECT_EQ(c.out.substr(0, c.out.find('\n')), "p,re,im");
  EXPECT_EQ(run_binary(path + " --format xml").code, cli::exit_validation);
}

TEST(CliOverrides, TolerancePrecedence) {
  const std::string base = R"({"command": "norm", "function": {"b": [[0, 0], [0.3, 0]]}, "order": 4)";
  auto tol_of = [](const Outcome& o) { return json::parse(o.out)["estimate"]["tolerance"].get<double>(); };
  const std::string path = (fs::temp_directory_path() / ("grunsky_tol_" + std::to_string(::getpid()) + ".json")).string();
  {
    std::ofstream(path) << base << "}";
  }
  EXPECT_EQ(tol_of(run_binary("\"" + path + "\"")), default_norm_tolerance);
  EXPECT_EQ(tol_of(run_binary("\"" + path + "\"", "GRUNSKY_TOL=1e-6")), 1e-6);
  EXPECT_EQ(tol_of(run_binary("\"" + path + "\" --tol 1e-4", "GRUNSKY_TOL=1e-6")), 1e-4);
  {
    std::ofstream(path) << base << R"(, "tolerances": {"norm": 1e-8}})";
  }
  EXPECT_EQ(tol_of(run_binary("\"" + path + "\"", "GRUNSKY_TOL=1e-6")), 1e-8);
  EXPECT_EQ(tol_of(run_binary("\"" + path + "\" --tol 1e-3", "GRUNSKY_TOL=1e-6")), 1e-3);
  EXPECT_EQ(run_binary("\"" + path + "\"", "GRUNSKY_TOL=abc").code, cli::exit_validation);
  fs::remove(path);
}

TEST(CliFormatting, SeventeenDigitsAndNullForNonFinite) {
  EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(io::format_csv_double(0.1), "1.00000000000000006e-01");
  json j;
  j["x"] = std::numeric_limits<double>::quiet_NaN();
  j["y"] = std::numeric_limits<double>::infinity();
  j["z"] = 2.5;
  const json back = json::parse(io::dump(j));
  EXPECT_TRUE(back["x"].is_null());
  EXPECT_TRUE(back["y"].is_null());
  EXPECT_EQ(back["z"].get<double>(), 2.5);
}
