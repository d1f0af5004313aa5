#include "hillq/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "hillq/errors.hpp"
#include "hillq/floquet.hpp"
#include "hillq/lindstedt.hpp"
#include "hillq/problem.hpp"
#include "hillq/smalldiv.hpp"
#include "hillq/verify.hpp"

namespace hillq::cli {

namespace {

using json = nlohmann::ordered_json;

struct Overrides {
  std::string problem;
  std::optional<int> order, cutoff, grid, bands;
  std::vector<double> eps;
  std::optional<double> eps0, horizon, step;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
};

json cjson(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

std::ofstream open_out(const Overrides& o, const std::string& file) {
  std::filesystem::create_directories(*o.out_dir);
  const auto path = std::filesystem::path(*o.out_dir) / file;
  std::ofstream os(path);
  if (!os) throw SchemaError("cannot write '" + path.string() + "'");
  return os;
}

/// Shared state of one pipeline run.
struct Pipeline {
  ProblemSpec spec;
  std::optional<FloquetData> fd;
  std::optional<QR> qr;
  std::optional<PerturbationResult> result;

  int cutoff() const { return spec.cutoff.value_or(kNoCutoff); }
  FrequencyVector omega() const { return fd->frequencies(spec.omega1); }

  void floquet() {
    if (fd) return;
    const PeriodicPotential p0 = spec.p0();
    FloquetOptions fo;
    fo.grid_size = spec.floquet_grid;
    fd = solve_floquet(p0, fo);
  }
  void expand_all() {
    if (result) return;
    floquet();
    qr = build_QR(*fd, spec.p1(), spec.omega1, cutoff());
    ExpandOptions eo;
    eo.order = spec.order;
    eo.cutoff = cutoff();
    result = hillq::expand(qr->Q, qr->R, omega(), eo);
  }
};

json floquet_report(Pipeline& p) {
  p.floquet();
  const FloquetData& fd = *p.fd;
  json r;
  r["command"] = "floquet";
  r["problem"] = p.spec.name;
  r["omega0"] = fd.omega0;
  r["grid_size"] = p.spec.floquet_grid;
  r["Omega0"] = fd.Omega0;
  r["Omega0_principal"] = fd.Omega0_principal;
  r["monodromy_trace"] = cjson(fd.monodromy_trace);
  r["trace_abs"] = std::abs(fd.monodromy_trace);
  FourierSeries f2(0);
  for (const auto& [n, c] : fd.F2) f2.set(MultiIndex::periodic(0, n, 0), c);
  r["F2_modes"] = fd.F2.size();
  try {
    const DecayEstimate d = fit_decay(f2);
    r["F2_decay"] = {{"kappa", d.kappa}, {"envelope", d.envelope}, {"decaying", d.decaying}};
  } catch (const InsufficientSupport&) {
    r["F2_decay"] = nullptr;
  }
  r["diagnostics"] = {{"wronskian_drift", fd.wronskian_drift},
                      {"min_modulus", fd.min_modulus},
                      {"max_modulus", fd.max_modulus},
                      {"reconstruction_error", fd.reconstruction_error}};
  return r;
}

json expand_report(Pipeline& p) {
  p.expand_all();
  const PerturbationResult& res = *p.result;
  json r;
  r["command"] = "expand";
  r["problem"] = p.spec.name;
  r["order"] = p.spec.order;
  r["cutoff"] = opt(p.spec.cutoff);
  r["Omega0"] = p.fd->Omega0;
  r["Q_l1"] = p.qr->Q.l1_norm();
  r["R_l1"] = p.qr->R.l1_norm();

  long n2_violations = 0;
  json orders = json::array();
  for (std::size_t k = 0; k < res.orders.size(); ++k) {
    const FourierSeries& u = res.orders[k];
    for (const auto& [nu, c] : u.terms())
      if (nu.n2() != 2) ++n2_violations;
    json o{{"k", k}, {"l1", u.l1_norm()}, {"support", u.size()}, {"max_order", u.max_order()}};
    o["discarded"] = k < res.discarded_mass.size() ? res.discarded_mass[k] : 0.0;
    if (k >= 1) {
      o["compat_residual"] = res.compat_residuals[k - 1];
      o["compat_scale"] = res.compat_scales[k - 1];
    }
    orders.push_back(o);
  }
  r["orders"] = orders;
  r["n2_support_violations"] = n2_violations;

  json G = json::array();
  for (std::size_t j = 0; j < res.G.size(); ++j) {
    json g = cjson(res.G[j]);
    g["j"] = j + 1;
    G.push_back(g);
  }
  r["G"] = G;
  r["G1"] = res.G.empty() ? json(nullptr) : cjson(res.G[0]);
  r["g_tol"] = default_g_tol(res.G);
  r["j0"] = opt(res.j0);

  json table = json::array();
  for (double eps : p.spec.eps) {
    const Complex w = omega_eps_complex(res, p.fd->Omega0, eps);
    table.push_back({{"eps", eps}, {"Omega_eps", w.real()}, {"imag_residue", w.imag()}});
  }
  r["Omega_eps"] = table;
  return r;
}

json scan_report(Pipeline& p, const Overrides& o) {
  p.expand_all();
  const ProblemSpec& s = p.spec;
  const FrequencyVector omega = p.omega();
  const double C0 = diophantine_constant(omega, s.tau, s.scan_box);
  ScaleConfig cfg = ScaleConfig::from_diophantine(C0, s.tau, s.A, s.C1_factor, s.tau1);
  cfg.n0 = s.n0;

  ScanOptions so;
  so.eps0 = s.eps0;
  so.bands = s.bands;
  so.grid = s.scan_grid;
  so.N = s.scan_box;
  const auto& res = *p.result;
  const Complex Gj0 = res.j0 ? res.G[*res.j0 - 1] : Complex{};
  const ScanReport rep = scan_admissible(Gj0, res.j0, omega, cfg, so);

  json r;
  r["command"] = "scan";
  r["problem"] = s.name;
  r["C0"] = C0;
  r["C1"] = cfg.C1;
  r["tau"] = s.tau;
  r["tau1"] = cfg.tau1;
  r["n0"] = opt(cfg.n0);
  r["eps0"] = so.eps0;
  r["grid"] = so.grid;
  r["box"] = so.N;
  r["j0_used"] = opt(rep.j0_used);
  r["G_j0"] = cjson(rep.G_j0);
  long excluded = 0;
  for (const auto& pt : rep.points) excluded += pt.excluded;
  r["points"] = rep.points.size();
  r["excluded_points"] = excluded;
  json bands = json::array();
  for (const auto& b : rep.bands)
    bands.push_back({{"m", b.m},
                     {"lo", b.lo},
                     {"hi", b.hi},
                     {"n0", b.n0},
                     {"admissible_fraction", b.admissible_fraction},
                     {"measure_fraction", b.measure_fraction}});
  r["bands"] = bands;
  r["fit"] = {{"b", opt(rep.fit_b)}, {"xi", opt(rep.fit_xi)}, {"bands_used", rep.fit_bands}};
  r["caveat"] = rep.caveat;

  if (o.out_dir) {
    std::ofstream csv = open_out(o, "scan.csv");
    csv.precision(17);
    csv << "eps,excluded,witness_nu,band\n";
    for (const auto& pt : rep.points)
      csv << pt.eps << ',' << (pt.excluded ? 1 : 0) << ','
          << (pt.witness ? pt.witness->compact() : std::string()) << ',' << pt.band << '\n';
    open_out(o, "scan.json") << r.dump(2) << '\n';
  }
  return r;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - sx / n;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - sy / n);
  }
  return sxy / sxx;
}

json verify_report(Pipeline& p, const Overrides& o, bool& ok) {
  p.expand_all();
  const ProblemSpec& s = p.spec;
  const Tolerances& tol = s.tolerances;
  const PerturbationResult& res = *p.result;
  const FrequencyVector omega = p.omega();
  const double eps = s.eps.front();
  ok = true;

  json r;
  r["command"] = "verify";
  r["problem"] = s.name;
  r["eps"] = eps;
  r["order"] = s.order;

  // algebraic checks on the series
  double compat = 0.0;
  for (std::size_t k = 0; k < res.compat_residuals.size(); ++k) {
    const double scale = res.compat_scales[k];
    const double rel = scale > 0.0 ? res.compat_residuals[k] / scale
                                   : (res.compat_residuals[k] > 0.0 ? 1.0 : 0.0);
    compat = std::max(compat, rel);
  }
  double max_re = 0.0, max_abs = 0.0;
  for (Complex g : res.G) {
    max_re = std::max(max_re, std::abs(g.real()));
    max_abs = std::max(max_abs, std::abs(g));
  }
  const double reality = max_re / std::max(1.0, max_abs);
  r["compat"] = {{"max_relative", compat}, {"tolerance", tol.compat}, {"pass", compat < tol.compat}};
  r["reality"] = {{"max_relative_real_part", reality}, {"tolerance", tol.reality},
                  {"pass", reality < tol.reality}};
  ok = ok && compat < tol.compat && reality < tol.reality;

  // Riccati residual and its order scaling
  const FourierSeries u = res.u_sum(eps);
  const double residual = riccati_residual(u, p.qr->Q, p.qr->R, omega, eps, 512);
  std::vector<double> es, rs;
  for (int j = 0; j < 3; ++j) {
    const double e = eps * std::ldexp(1.0, -j);
    es.push_back(e);
    rs.push_back(riccati_residual(res.u_sum(e), p.qr->Q, p.qr->R, omega, e, 512));
  }
  json rr{{"value", residual}, {"eps", es}, {"values", rs}};
  const double floor = 1e-13 * std::max(1.0, p.qr->R.l1_norm());
  if (*std::min_element(rs.begin(), rs.end()) > floor) {
    const double slope = fit_slope(es, rs);
    const bool pass = std::abs(slope - (s.order + 1)) <= tol.residual_slope;
    rr["slope"] = slope;
    rr["expected_slope"] = s.order + 1;
    rr["pass"] = pass;
    ok = ok && pass;
  } else {
    rr["slope"] = nullptr;
    rr["note"] = "residuals at roundoff level; slope not tested";
  }
  // residual at seeded random times spread over the horizon
  std::mt19937_64 rng(s.seed);
  double random_residual = 0.0;
  const FourierSeries du = u.derivative(omega);
  for (int i = 0; i < 64; ++i) {
    const double t = std::ldexp(static_cast<double>(rng() >> 11), -53) * s.horizon;
    const Complex uv = evaluate(u, omega, t);
    const Complex d = evaluate(du, omega, t) - evaluate(p.qr->R, omega, t) -
                      eps * evaluate(p.qr->Q, omega, t) * uv * uv;
    random_residual = std::max(random_residual, std::abs(d));
  }
  rr["random_times_max"] = random_residual;
  r["riccati_residual"] = rr;

  // frequency prediction and the ODE oracle
  const Complex w = omega_eps_complex(res, p.fd->Omega0, eps);
  const double Omega_eps = omega_eps(res, p.fd->Omega0, eps);
  const PhiReconstruction rec(*p.fd, res, p.qr->Q, s.omega1, eps);
  const TrajectoryProbe probe =
      integrate_hill(s.hill(), eps, rec.initial_state(), s.horizon, s.step, tol.step_check);
  r["step_check"] = probe.step_check;

  const RotationFit fit = extract_rotation(probe);
  const double diff = std::abs(Omega_eps - fit.rotation);
  const double rot_tol = std::max(tol.rotation, tol.rotation_se_factor * fit.std_error);
  r["rotation"] = {{"predicted", Omega_eps},     {"imag_residue", w.imag()},
                   {"measured", fit.rotation},   {"std_error", fit.std_error},
                   {"difference", diff},         {"tolerance", rot_tol},
                   {"pass", diff < rot_tol}};
  ok = ok && diff < rot_tol;

  const double lyap = lyapunov_estimate(probe);
  r["lyapunov"] = {{"value", lyap}, {"tolerance", tol.lyapunov}, {"pass", std::abs(lyap) < tol.lyapunov}};
  ok = ok && std::abs(lyap) < tol.lyapunov;

  double rec_err = 0.0;
  for (const auto& smp : probe.samples) {
    if (smp.t > tol.reconstruction_window) break;
    rec_err = std::max(rec_err, std::abs(rec(smp.t) - smp.phi) / std::abs(smp.phi));
  }
  double rec_far = 0.0;
  for (int i = 0; i < 64; ++i) {
    const auto& smp = probe.samples[rng() % probe.samples.size()];
    rec_far = std::max(rec_far, std::abs(rec(smp.t) - smp.phi) / std::abs(smp.phi));
  }
  r["reconstruction"] = {{"window", tol.reconstruction_window},
                         {"max_relative", rec_err},
                         {"random_times_max_relative", rec_far},
                         {"tolerance", tol.reconstruction},
                         {"pass", rec_err < tol.reconstruction}};
  ok = ok && rec_err < tol.reconstruction;
  r["pass"] = ok;

  if (o.out_dir) {
    std::ofstream csv = open_out(o, "probe.csv");
    write_probe_csv(csv, probe, std::max<std::size_t>(1, probe.samples.size() / 10000));
    open_out(o, "verify.json") << r.dump(2) << '\n';
  }
  return r;
}

void apply(const Overrides& o, const std::string& command, ProblemSpec& s) {
  if (o.order) {
    if (*o.order < 0) throw SchemaError("--order must be >= 0");
    s.order = *o.order;
  }
  if (o.cutoff) {
    if (*o.cutoff < 1) throw SchemaError("--cutoff must be >= 1");
    s.cutoff = *o.cutoff;
  }
  if (!o.eps.empty()) s.eps = o.eps;
  for (double e : s.eps)
    if (!std::isfinite(e)) throw SchemaError("--eps must be finite");
  if (o.eps0) s.eps0 = *o.eps0;
  if (o.bands) s.bands = *o.bands;
  if (o.grid) {
    if (command == "floquet")
      s.floquet_grid = *o.grid;
    else
      s.scan_grid = *o.grid;
  }
  if (o.horizon) s.horizon = *o.horizon;
  if (o.step) s.step = *o.step;
  if (o.seed) s.seed = *o.seed;
  if (s.floquet_grid < 16 || s.scan_grid < 1 || s.bands < 1 || !(s.eps0 > 0.0) ||
      !(s.horizon > 0.0) || !(s.step > 0.0))
    throw SchemaError("command-line override out of range");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quasi-periodic Hill equation: Floquet data, Lindstedt series, admissible-set scan"};
  app.name(args.empty() ? "hillq" : args.front());
  app.require_subcommand(1, 1);
  Overrides o;
  app.add_option("--problem", o.problem, "problem JSON file")->required();
  app.add_option("--order", o.order, "perturbation order K");
  app.add_option("--cutoff", o.cutoff, "convolution cutoff N");
  app.add_option("--eps", o.eps, "epsilon value(s); the first is used by verify")->delimiter(',');
  app.add_option("--eps0", o.eps0, "scan: top of band 0");
  app.add_option("--grid", o.grid, "floquet: integration grid; scan: points per band");
  app.add_option("--bands", o.bands, "scan: number of dyadic bands");
  app.add_option("--horizon", o.horizon, "verify: integration horizon");
  app.add_option("--step", o.step, "verify: integration step");
  app.add_option("--out", o.out_dir, "directory for CSV and JSON files");
  app.add_option("--seed", o.seed, "seed for randomized test times");
  const std::pair<const char*, const char*> commands[] = {
      {"floquet", "Floquet exponent and solution of the unperturbed equation"},
      {"expand", "Lindstedt series, G coefficients and Omega_eps table"},
      {"scan", "admissible-set scan over dyadic eps bands"},
      {"verify", "Riccati residuals and comparison with direct integration"},
      {"all", "run every stage and combine the reports"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("hillq");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kIoOrSchema;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    Pipeline p{load_problem(o.problem), {}, {}, {}};
    apply(o, command, p.spec);
    json report;
    bool ok = true;
    if (command == "floquet") {
      report = floquet_report(p);
    } else if (command == "expand") {
      report = expand_report(p);
    } else if (command == "scan") {
      report = scan_report(p, o);
    } else if (command == "verify") {
      report = verify_report(p, o, ok);
    } else {
      report["command"] = "all";
      report["floquet"] = floquet_report(p);
      report["expand"] = expand_report(p);
      report["scan"] = scan_report(p, o);
      report["verify"] = verify_report(p, o, ok);
    }
    out << report.dump(2) << '\n';
    if (!ok) {
      err << "verification failed: at least one tolerance was violated\n";
      return kVerificationFailed;
    }
    return kOk;
  } catch (const UnstableUnperturbed& e) {
    err << "error: " << e.what() << '\n';
    return kUnstable;
  } catch (const ResonantMode& e) {
    err << "error: " << e.what() << "\nwitness nu = " << e.nu().str() << ", |omega.nu| = "
        << e.divisor();
    if (e.order()) err << ", order " << *e.order();
    err << '\n';
    return kResonance;
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << '\n';
    return kIoOrSchema;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kVerificationFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoOrSchema;
  }
}

}  // namespace hillq::cli
