#include "hillq/problem.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hillq/errors.hpp"

namespace hillq {

using nlohmann::json;

PeriodicPotential ProblemSpec::p0() const {
  PeriodicPotential p{omega0, {}};
  for (const auto& [n, c] : p0_coeffs) p.coeffs[n] = c;
  return p;
}

FourierSeries ProblemSpec::p1() const {
  FourierSeries f(A);
  for (const auto& [m, c] : p1_coeffs) f.set(MultiIndex(m, 0, 0), c);
  f.mark_real_valued(true);
  return f;
}

HillProblem ProblemSpec::hill() const { return {p0(), p1(), omega1}; }

namespace {

[[noreturn]] void fail(const std::string& what) { throw SchemaError("problem: " + what); }

double real_of(const json& j, const std::string& key) {
  if (!j.is_number()) fail("'" + key + "' must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail("'" + key + "' must be finite");
  return v;
}

int int_of(const json& j, const std::string& key) {
  if (!j.is_number_integer()) fail("'" + key + "' must be an integer");
  return j.get<int>();
}

Complex coeff_of(const json& row, std::size_t at, const std::string& key) {
  return {real_of(row[at], key), real_of(row[at + 1], key)};
}

bool close(Complex a, Complex b, double scale) { return std::abs(a - b) <= 1e-12 * std::max(1.0, scale); }

void read_tolerances(const json& j, Tolerances& t) {
  if (!j.is_object()) fail("'tolerances' must be an object");
  const std::map<std::string, double*> slots{
      {"rotation", &t.rotation},
      {"rotation_se_factor", &t.rotation_se_factor},
      {"lyapunov", &t.lyapunov},
      {"reconstruction", &t.reconstruction},
      {"reconstruction_window", &t.reconstruction_window},
      {"step_check", &t.step_check},
      {"compat", &t.compat},
      {"reality", &t.reality},
      {"residual_slope", &t.residual_slope},
  };
  for (const auto& [k, v] : j.items()) {
    auto it = slots.find(k);
    if (it == slots.end()) fail("unknown tolerance '" + k + "'");
    *it->second = real_of(v, "tolerances." + k);
    if (!(*it->second > 0.0)) fail("tolerance '" + k + "' must be positive");
  }
}

}  // namespace

ProblemSpec parse_problem(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("top level must be an object");

  static const std::set<std::string> known{
      "name", "A", "omega1", "omega0", "p0_coeffs", "p1_coeffs", "eps", "order", "cutoff",
      "tau", "tau1", "C1_factor", "n0", "tolerances", "seed", "floquet_grid", "eps0", "bands",
      "scan_grid", "scan_box", "horizon", "step"};
  for (const auto& [k, v] : doc.items())
    if (!known.count(k)) fail("unknown key '" + k + "'");
  for (const char* k : {"A", "omega1", "omega0", "p0_coeffs", "p1_coeffs"})
    if (!doc.contains(k)) fail(std::string("missing key '") + k + "'");

  ProblemSpec s;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) fail("'name' must be a string");
    s.name = doc["name"].get<std::string>();
  }
  const int A = int_of(doc["A"], "A");
  if (A < 0) fail("'A' must be nonnegative");
  s.A = static_cast<std::size_t>(A);

  if (!doc["omega1"].is_array() || doc["omega1"].size() != s.A)
    fail("'omega1' must be an array of length A");
  for (const auto& w : doc["omega1"]) s.omega1.push_back(real_of(w, "omega1"));
  s.omega0 = real_of(doc["omega0"], "omega0");
  if (!(s.omega0 > 0.0)) fail("'omega0' must be positive");

  if (!doc["p0_coeffs"].is_array() || doc["p0_coeffs"].empty())
    fail("'p0_coeffs' must be a nonempty array");
  std::map<int, Complex> p0;
  for (const auto& row : doc["p0_coeffs"]) {
    if (!row.is_array() || row.size() != 3) fail("'p0_coeffs' rows are [n, re, im]");
    const int n = int_of(row[0], "p0_coeffs");
    if (p0.count(n)) fail("duplicate p0 mode " + std::to_string(n));
    p0[n] = coeff_of(row, 1, "p0_coeffs");
    s.p0_coeffs.emplace_back(n, p0[n]);
  }
  double p0_scale = 0.0;
  for (const auto& [n, c] : p0) p0_scale = std::max(p0_scale, std::abs(c));
  for (const auto& [n, c] : p0) {
    auto it = p0.find(-n);
    const Complex partner = it == p0.end() ? Complex{} : it->second;
    if (!close(partner, std::conj(c), p0_scale))
      fail("p0 is not real: P_{-n} != conj(P_n) at n = " + std::to_string(n));
  }

  if (!doc["p1_coeffs"].is_array()) fail("'p1_coeffs' must be an array");
  std::map<std::vector<int>, Complex> p1;
  for (const auto& row : doc["p1_coeffs"]) {
    if (!row.is_array() || row.size() != 3 || !row[0].is_array())
      fail("'p1_coeffs' rows are [[m...], re, im]");
    if (row[0].size() != s.A) fail("'p1_coeffs' mode vectors must have length A");
    std::vector<int> m;
    for (const auto& x : row[0]) m.push_back(int_of(x, "p1_coeffs"));
    if (p1.count(m)) fail("duplicate p1 mode");
    p1[m] = coeff_of(row, 1, "p1_coeffs");
    s.p1_coeffs.emplace_back(m, p1[m]);
  }
  double p1_scale = 0.0;
  for (const auto& [m, c] : p1) p1_scale = std::max(p1_scale, std::abs(c));
  for (const auto& [m, c] : p1) {
    std::vector<int> neg(m);
    for (int& x : neg) x = -x;
    auto it = p1.find(neg);
    const Complex partner = it == p1.end() ? Complex{} : it->second;
    if (!close(partner, std::conj(c), p1_scale)) fail("p1 is not real: p_{-m} != conj(p_m)");
  }

  if (doc.contains("eps")) {
    s.eps.clear();
    const json& e = doc["eps"];
    if (e.is_array()) {
      if (e.empty()) fail("'eps' must not be empty");
      for (const auto& x : e) s.eps.push_back(real_of(x, "eps"));
    } else {
      s.eps.push_back(real_of(e, "eps"));
    }
  }
  if (doc.contains("order")) s.order = int_of(doc["order"], "order");
  if (s.order < 0) fail("'order' must be >= 0");
  if (doc.contains("cutoff") && !doc["cutoff"].is_null()) {
    s.cutoff = int_of(doc["cutoff"], "cutoff");
    if (*s.cutoff < 1) fail("'cutoff' must be >= 1");
  }
  if (doc.contains("tau")) s.tau = real_of(doc["tau"], "tau");
  if (doc.contains("tau1") && !doc["tau1"].is_null()) s.tau1 = real_of(doc["tau1"], "tau1");
  if (doc.contains("C1_factor")) s.C1_factor = real_of(doc["C1_factor"], "C1_factor");
  if (!(s.C1_factor > 0.0 && s.C1_factor <= 1.0)) fail("'C1_factor' must lie in (0, 1]");
  if (doc.contains("n0") && !doc["n0"].is_null()) {
    s.n0 = int_of(doc["n0"], "n0");
    if (*s.n0 < 0) fail("'n0' must be >= 0");
  }
  if (doc.contains("tolerances")) read_tolerances(doc["tolerances"], s.tolerances);
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) fail("'seed' must be a nonnegative integer");
    s.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("floquet_grid")) s.floquet_grid = int_of(doc["floquet_grid"], "floquet_grid");
  if (doc.contains("eps0")) s.eps0 = real_of(doc["eps0"], "eps0");
  if (doc.contains("bands")) s.bands = int_of(doc["bands"], "bands");
  if (doc.contains("scan_grid")) s.scan_grid = int_of(doc["scan_grid"], "scan_grid");
  if (doc.contains("scan_box")) s.scan_box = int_of(doc["scan_box"], "scan_box");
  if (doc.contains("horizon")) s.horizon = real_of(doc["horizon"], "horizon");
  if (doc.contains("step")) s.step = real_of(doc["step"], "step");
  if (s.floquet_grid < 16) fail("'floquet_grid' must be >= 16");
  if (!(s.eps0 > 0.0)) fail("'eps0' must be positive");
  if (s.bands < 1 || s.scan_grid < 1 || s.scan_box < 1) fail("scan sizes must be positive");
  if (!(s.horizon > 0.0) || !(s.step > 0.0)) fail("'horizon' and 'step' must be positive");
  return s;
}

ProblemSpec load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("problem: cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

}  // namespace hillq
