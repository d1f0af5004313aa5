#include "hillq/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hillq/errors.hpp"
#include "hillq/rk8.hpp"

namespace hillq {

double HillProblem::potential(double t, double eps) const {
  double p = p0(t);
  if (eps != 0.0 && !p1.empty()) {
    double s = 0.0;
    for (const auto& [nu, c] : p1.terms()) {
      double phase = 0.0;
      const auto m = nu.m();
      for (std::size_t i = 0; i < m.size(); ++i) phase += m[i] * omega1[i];
      s += (c * std::polar(1.0, phase * t)).real();
    }
    p += eps * s;
  }
  return p;
}

namespace {

using State = Pair<Complex>;

struct Run {
  std::vector<ProbeSample> samples;
  State end;
};

Run run(const HillProblem& problem, double eps, const InitialState& init, int steps, double h,
        bool keep_samples) {
  if (problem.omega1.size() != problem.p1.A())
    throw DimensionMismatch("integrate_hill: omega1 length differs from p1 dimension");
  auto rhs = [&](double t, const State& y) -> State {
    return {y.dy, -problem.potential(t, eps) * y.y};
  };
  Run r;
  State y{init.phi, init.dphi};
  if (keep_samples) {
    r.samples.reserve(steps + 1);
    r.samples.push_back({0.0, y.y, y.dy});
  }
  for (int i = 0; i < steps; ++i) {
    y = rk8_step(rhs, i * h, y, h);
    if (!std::isfinite(std::abs(y.y)) || !std::isfinite(std::abs(y.dy)))
      throw std::overflow_error("integrate_hill: solution overflowed");
    if (keep_samples) r.samples.push_back({(i + 1) * h, y.y, y.dy});
  }
  r.end = y;
  return r;
}

}  // namespace

TrajectoryProbe integrate_hill(const HillProblem& problem, double eps, const InitialState& init,
                               double horizon, double step, double check_tol) {
  if (!(horizon > 0.0) || !(step > 0.0))
    throw std::invalid_argument("integrate_hill: horizon and step must be positive");
  const int steps = std::max(1, static_cast<int>(std::llround(horizon / step)));
  const double h = horizon / steps;

  Run coarse = run(problem, eps, init, steps, h, true);
  Run fine = run(problem, eps, init, 2 * steps, h / 2, false);

  TrajectoryProbe probe;
  probe.horizon = horizon;
  probe.step = h;
  probe.step_check = std::abs(coarse.end.y - fine.end.y) / std::max(std::abs(fine.end.y), 1e-300);
  if (probe.step_check > check_tol) {
    std::ostringstream os;
    os << "integrate_hill: halving the step changes the endpoint by " << probe.step_check
       << " (relative), above " << check_tol;
    throw StepTooLarge(os.str());
  }
  probe.samples = std::move(coarse.samples);
  return probe;
}

TrajectoryProbe integrate_hill(const HillProblem& problem, double eps, const FloquetData& fd,
                               double horizon, double step, double check_tol) {
  return integrate_hill(problem, eps, InitialState{fd.phi0(0.0), fd.dphi0(0.0)}, horizon, step,
                        check_tol);
}

double riccati_residual(const FourierSeries& u, const FourierSeries& Q, const FourierSeries& R,
                        const FrequencyVector& omega, double eps, int grid, double span) {
  if (grid < 1) throw std::invalid_argument("riccati_residual: grid must be positive");
  if (span <= 0.0) {
    double wmin = omega.omega0();
    for (double w : omega.omega1())
      if (w != 0.0) wmin = std::min(wmin, std::abs(w));
    span = 2.0 * std::numbers::pi / wmin;
  }
  const FourierSeries du = u.derivative(omega);
  double sup = 0.0;
  for (int j = 0; j < grid; ++j) {
    const double t = j * span / grid;
    const Complex uv = evaluate(u, omega, t);
    const Complex r = evaluate(du, omega, t) - evaluate(R, omega, t) - eps * evaluate(Q, omega, t) * uv * uv;
    sup = std::max(sup, std::abs(r));
  }
  return sup;
}

RotationFit extract_rotation(const TrajectoryProbe& probe, FitWindow window) {
  const auto& s = probe.samples;
  if (s.size() < 3) throw std::invalid_argument("extract_rotation: need at least three samples");
  RotationFit fit;
  double max_mod = 0.0, min_mod = std::numeric_limits<double>::infinity();
  for (const auto& p : s) {
    max_mod = std::max(max_mod, std::abs(p.phi));
    min_mod = std::min(min_mod, std::abs(p.phi));
  }
  fit.min_modulus = min_mod;
  if (min_mod < 1e-6 * max_mod)
    throw PhaseWindingAmbiguous("extract_rotation: |phi| approaches zero, phase is ill-defined");

  const std::size_t n = s.size();
  std::vector<double> theta(n);
  theta[0] = std::arg(s[0].phi);
  for (std::size_t i = 1; i < n; ++i)
    theta[i] = theta[i - 1] + std::remainder(std::arg(s[i].phi) - std::arg(s[i - 1].phi),
                                             2.0 * std::numbers::pi);

  const double t0 = s.front().t, span = s.back().t - t0;
  std::vector<double> w(n, 1.0);
  if (window == FitWindow::hann)
    for (std::size_t i = 0; i < n; ++i) {
      const double x = std::sin(std::numbers::pi * (s[i].t - t0) / span);
      w[i] = x * x;
    }

  double sw = 0, st = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += w[i];
    st += w[i] * s[i].t;
    sy += w[i] * theta[i];
  }
  const double tbar = st / sw, ybar = sy / sw;
  double sxx = 0, sxy = 0, sww = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dt = s[i].t - tbar;
    sxx += w[i] * dt * dt;
    sxy += w[i] * dt * (theta[i] - ybar);
    sww += w[i] * w[i] * dt * dt;
  }
  fit.rotation = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = theta[i] - ybar - fit.rotation * (s[i].t - tbar);
    rss += r * r;
  }
  const double sigma2 = rss / static_cast<double>(n - 2);
  fit.std_error = std::sqrt(sigma2 * sww) / sxx;
  return fit;
}

double lyapunov_estimate(const TrajectoryProbe& probe) {
  const auto& s = probe.samples;
  if (s.size() < 2) throw std::invalid_argument("lyapunov_estimate: need samples");
  double st = 0, sy = 0;
  const double n = static_cast<double>(s.size());
  std::vector<double> y(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    y[i] = 0.5 * std::log(std::norm(s[i].phi) + std::norm(s[i].dphi));
    st += s[i].t;
    sy += y[i];
  }
  const double tbar = st / n, ybar = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    sxx += (s[i].t - tbar) * (s[i].t - tbar);
    sxy += (s[i].t - tbar) * (y[i] - ybar);
  }
  return sxy / sxx;
}

PhiReconstruction::PhiReconstruction(const FloquetData& fd, const PerturbationResult& result,
                                     const FourierSeries& Q, const std::vector<double>& omega1,
                                     double eps)
    : fd_(&fd), omega_(fd.frequencies(omega1)), g_(Q.A()), g_primitive_(Q.A()) {
  if (!result.orders.empty()) {
    const FourierSeries u = result.u_sum(eps);
    g_ = mul(Q, u).series.scaled(Complex(0.0, eps));
  }
  mean_ = average(g_);
  FourierSeries osc = g_;
  osc.set(MultiIndex::zero(g_.A()), 0.0);
  g_primitive_ = primitive(osc, omega_);
  primitive_at_zero_ = evaluate(g_primitive_, omega_, 0.0);
}

Complex PhiReconstruction::operator()(double t) const {
  const Complex phase = mean_ * t + evaluate(g_primitive_, omega_, t) - primitive_at_zero_;
  return fd_->phi0(t) * std::exp(Complex(0.0, 1.0) * phase);
}

Complex PhiReconstruction::derivative(double t) const {
  const Complex g0 = evaluate(fd_->g0, fd_->periodic_frequencies(), t);
  return Complex(0.0, 1.0) * (g0 + evaluate(g_, omega_, t)) * (*this)(t);
}

Complex reconstruct_phi(const FloquetData& fd, const PerturbationResult& result,
                        const FourierSeries& Q, const std::vector<double>& omega1, double eps,
                        double t) {
  return PhiReconstruction(fd, result, Q, omega1, eps)(t);
}

void write_probe_csv(std::ostream& os, const TrajectoryProbe& probe, std::size_t stride) {
  stride = std::max<std::size_t>(stride, 1);
  const auto old = os.precision(17);
  os << "t,re_phi,im_phi,abs_phi\n";
  for (std::size_t i = 0; i < probe.samples.size(); i += stride) {
    const auto& p = probe.samples[i];
    os << p.t << ',' << p.phi.real() << ',' << p.phi.imag() << ',' << std::abs(p.phi) << '\n';
  }
  os.precision(old);
}

}  // namespace hillq
