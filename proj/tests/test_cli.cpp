#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hillq/cli.hpp"
#include "hillq/errors.hpp"
#include "hillq/problem.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string problem(const std::string& name) {
  return std::string(HILLQ_SOURCE_DIR) + "/problems/" + name + ".json";
}

struct Outcome {
  int code;
  std::string out, err;
  json report() const { return json::parse(out); }
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "hillq");
  std::ostringstream out, err;
  const int code = hillq::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "hillq_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string write_problem(const std::string& name, const json& doc) {
  const fs::path p = scratch(name);
  std::ofstream(p) << doc.dump();
  return p.string();
}

json smoke_doc() {
  std::ifstream in(problem("smoke"));
  return json::parse(in);
}

}  // namespace

TEST_CASE("floquet command") {
  const Outcome o = run({"floquet", "--problem", problem("smoke")});
  REQUIRE(o.code == 0);
  CHECK(o.report()["Omega0"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(o.report()["trace_abs"].get<double>() < 2.0);

  const Outcome u = run({"floquet", "--problem", problem("unstable")});
  CHECK(u.code == hillq::cli::kUnstable);
  CHECK(u.err.find("trace") != std::string::npos);

  const double a = run({"floquet", "--problem", problem("mathieu"), "--grid", "1024"}).report()["Omega0"];
  const double b = run({"floquet", "--problem", problem("mathieu"), "--grid", "4096"}).report()["Omega0"];
  CHECK(std::abs(a - b) < 1e-8);
}

TEST_CASE("expand command") {
  const Outcome o = run({"expand", "--problem", problem("smoke"), "--order", "6"});
  REQUIRE(o.code == 0);
  const json r = o.report();
  CHECK(std::abs(r["G1"]["re"].get<double>()) < 1e-12);
  CHECK(std::abs(r["G1"]["im"].get<double>()) < 1e-12);
  CHECK(r["j0"] == 2);
  CHECK(r["n2_support_violations"] == 0);
  CHECK(r["orders"].size() == 7);
  CHECK(r["Omega_eps"].size() == 3);

  const json k0 = run({"expand", "--problem", problem("smoke"), "--order", "0"}).report();
  CHECK(k0["orders"].size() == 1);
  CHECK(k0["G"].size() == 1);

  const json t = run({"expand", "--problem", problem("smoke"), "--eps", "0.01,0.02"}).report();
  REQUIRE(t["Omega_eps"].size() == 2);
  CHECK(t["Omega_eps"][0]["Omega_eps"].get<double>() == doctest::Approx(1.0 - 1e-4 / 8).epsilon(1e-9));
}

TEST_CASE("resonance exits with code 3 and names the mode") {
  json doc = smoke_doc();
  doc["omega1"] = {2.0};
  const Outcome o = run({"expand", "--problem", write_problem("resonant.json", doc)});
  CHECK(o.code == hillq::cli::kResonance);
  CHECK(o.err.find("(-1;0;2)") != std::string::npos);
}

TEST_CASE("schema errors exit with code 1") {
  json doc = smoke_doc();
  doc["bogus"] = 1;
  CHECK(run({"floquet", "--problem", write_problem("bogus.json", doc)}).code == 1);

  doc = smoke_doc();
  doc["p1_coeffs"] = json::array({json::array({json::array({1}), 0.5, 0.0})});
  const Outcome o = run({"floquet", "--problem", write_problem("complex.json", doc)});
  CHECK(o.code == 1);
  CHECK(o.err.find("not real") != std::string::npos);

  doc = smoke_doc();
  doc["order"] = -1;
  CHECK(run({"expand", "--problem", write_problem("order.json", doc)}).code == 1);

  CHECK(run({"floquet", "--problem", "/nonexistent/problem.json"}).code == 1);
  CHECK(run({"floquet"}).code == 1);
  CHECK(run({"--problem", problem("smoke")}).code == 1);
  CHECK_THROWS_AS(hillq::parse_problem("{"), hillq::SchemaError);
}

TEST_CASE("scan command writes CSV") {
  const fs::path out = scratch("scan_out");
  fs::remove_all(out);
  const Outcome o = run({"scan", "--problem", problem("smoke"), "--grid", "64", "--out", out.string()});
  REQUIRE(o.code == 0);
  const json r = o.report();
  CHECK(r["bands"].size() == 9);
  CHECK(r["grid"] == 64);
  std::ifstream csv(out / "scan.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "eps,excluded,witness_nu,band");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  CHECK(rows == 2 * 64 * 9);
  CHECK(fs::exists(out / "scan.json"));

  const json n = run({"scan", "--problem", problem("null"), "--grid", "64"}).report();
  CHECK(n["excluded_points"] == 0);
  CHECK(n["j0_used"].is_null());
}

TEST_CASE("verify command") {
  const fs::path out = scratch("verify_out");
  const Outcome o = run({"verify", "--problem", problem("smoke"), "--horizon", "200", "--out", out.string()});
  REQUIRE(o.code == 0);
  const json r = o.report();
  CHECK(r["pass"] == true);
  CHECK(r["rotation"]["pass"] == true);
  CHECK(fs::exists(out / "probe.csv"));

  // an impossible tolerance turns into exit code 4
  json doc = smoke_doc();
  doc["tolerances"] = {{"reconstruction", 1e-30}};
  const Outcome f = run({"verify", "--problem", write_problem("strict.json", doc), "--horizon", "200"});
  CHECK(f.code == hillq::cli::kVerificationFailed);
  CHECK(f.report()["reconstruction"]["pass"] == false);
}

TEST_CASE("reports are deterministic") {
  const std::vector<std::string> args{"all", "--problem", problem("smoke"), "--horizon", "100", "--grid", "64", "--seed", "5"};
  const Outcome a = run(args), b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const json r = a.report();
  for (const char* k : {"floquet", "expand", "scan", "verify"}) CHECK(r.contains(k));
}
