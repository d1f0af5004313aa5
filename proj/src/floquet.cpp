#include "hillq/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hillq/errors.hpp"
#include "hillq/rk8.hpp"

namespace hillq {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Fundamental {
  Pair<double> a;
  Pair<double> b;

  friend Fundamental operator+(const Fundamental& x, const Fundamental& y) {
    return {x.a + y.a, x.b + y.b};
  }
  friend Fundamental operator*(double s, const Fundamental& x) { return {s * x.a, s * x.b}; }
};

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// c_n = (1/M) Σ_j x_j e^{−2πi nj/M} for |n| < M/2, small entries dropped.
std::map<int, Complex> dft(const std::vector<Complex>& x, double rel_floor) {
  const int M = static_cast<int>(x.size());
  std::vector<Complex> twiddle(M);
  for (int k = 0; k < M; ++k) twiddle[k] = std::polar(1.0, -kTwoPi * k / M);

  std::map<int, Complex> raw;
  double biggest = 0.0;
  for (int n = -(M / 2 - 1); n <= M / 2 - 1; ++n) {
    const int step = ((n % M) + M) % M;
    Complex s{};
    int k = 0;
    for (int j = 0; j < M; ++j) {
      s += x[j] * twiddle[k];
      k += step;
      if (k >= M) k -= M;
    }
    s /= static_cast<double>(M);
    raw[n] = s;
    biggest = std::max(biggest, std::abs(s));
  }
  std::map<int, Complex> out;
  for (const auto& [n, c] : raw)
    if (std::abs(c) >= rel_floor * biggest && std::abs(c) >= kUnderflowFloor) out[n] = c;
  return out;
}

double wrap(double a) { return std::remainder(a, kTwoPi); }

}  // namespace

double PeriodicPotential::period() const { return kTwoPi / omega0; }

double PeriodicPotential::operator()(double t) const {
  double s = 0.0;
  for (const auto& [n, c] : coeffs) s += (c * std::polar(1.0, n * omega0 * t)).real();
  return s;
}

bool PeriodicPotential::is_real_valued(double tol) const {
  double scale = 0.0;
  for (const auto& [n, c] : coeffs) scale = std::max(scale, std::abs(c));
  for (const auto& [n, c] : coeffs) {
    auto it = coeffs.find(-n);
    const Complex partner = it == coeffs.end() ? Complex{} : it->second;
    if (std::abs(partner - std::conj(c)) > tol * std::max(scale, 1.0)) return false;
  }
  return true;
}

FourierSeries PeriodicPotential::as_series(std::size_t A) const {
  FourierSeries f(A);
  for (const auto& [n, c] : coeffs) f.set(MultiIndex::periodic(A, n, 0), c);
  f.mark_real_valued(true);
  return f;
}

double fold_frequency(double Omega, double omega0) {
  double r = std::fmod(std::abs(Omega), omega0);
  if (r > omega0 / 2) r = omega0 - r;
  return r;
}

Complex FloquetData::phi0(double t) const {
  const Complex psi = evaluate(psi0, periodic_frequencies(), t);
  return std::exp(Complex(0.0, 1.0) * (Omega0 * t + psi));
}

Complex FloquetData::dphi0(double t) const {
  return Complex(0.0, 1.0) * evaluate(g0, periodic_frequencies(), t) * phi0(t);
}

FloquetData solve_floquet(const PeriodicPotential& p0, const FloquetOptions& opts) {
  if (!is_power_of_two(opts.grid_size) || opts.grid_size < 256)
    throw std::invalid_argument("solve_floquet: grid_size must be a power of two >= 256");
  if (!(p0.omega0 > 0.0) || !std::isfinite(p0.omega0))
    throw std::invalid_argument("solve_floquet: omega0 must be positive");
  if (!p0.is_real_valued()) throw std::invalid_argument("solve_floquet: p0 must be real-valued");

  const int M = opts.grid_size;
  const double T = p0.period();
  const double h = T / M;

  auto rhs = [&p0](double t, const Fundamental& y) -> Fundamental {
    const double p = p0(t);
    return {{y.a.dy, -p * y.a.y}, {y.b.dy, -p * y.b.y}};
  };

  std::vector<Fundamental> samples;
  samples.reserve(M + 1);
  Fundamental y{{1.0, 0.0}, {0.0, 1.0}};
  samples.push_back(y);
  for (int j = 0; j < M; ++j) {
    y = rk8_step(rhs, j * h, y, h);
    samples.push_back(y);
  }

  FloquetData fd;
  fd.omega0 = p0.omega0;

  double drift = 0.0;
  for (const auto& s : samples) {
    const double W = s.a.y * s.b.dy - s.b.y * s.a.dy;
    drift = std::max(drift, std::abs(W - 1.0));
  }
  fd.wronskian_drift = drift;

  // Monodromy [[a, b], [c, d]] maps (φ(0), φ̇(0)) to (φ(T), φ̇(T)).
  const double a = y.a.y, b = y.b.y, c = y.a.dy, d = y.b.dy;
  const double trace = a + d;
  fd.monodromy_trace = trace;
  if (!(std::abs(trace) < 2.0)) throw UnstableUnperturbed(std::abs(trace));
  const double disc = 4.0 - trace * trace;
  if (std::sqrt(disc) < 1e-7)
    throw DegenerateEigenvector("solve_floquet: Floquet multipliers coincide to tolerance");

  const Complex lambda(trace / 2, std::sqrt(disc) / 2);
  // Eigenvector from whichever row of (M − λI) is better conditioned.
  const Complex v_row1[2] = {b, lambda - a};
  const Complex v_row2[2] = {lambda - d, c};
  const auto quality = [](const Complex* v) {
    return std::abs(v[0]) / std::hypot(std::abs(v[0]), std::abs(v[1]));
  };
  const Complex* v = quality(v_row1) >= quality(v_row2) ? v_row1 : v_row2;
  if (std::abs(v[0]) == 0.0) throw DegenerateEigenvector("solve_floquet: eigenvector has phi(0) = 0");
  const Complex v2 = v[1] / v[0];

  std::vector<Complex> phi(M + 1), dphi(M + 1);
  for (int j = 0; j <= M; ++j) {
    phi[j] = samples[j].a.y + v2 * samples[j].b.y;
    dphi[j] = samples[j].a.dy + v2 * samples[j].b.dy;
  }

  const double Omega_p = std::arg(lambda) / T;
  double unwrapped = 0.0;
  for (int j = 0; j < M; ++j) unwrapped += wrap(std::arg(phi[j + 1]) - std::arg(phi[j]));
  const double winding = std::round((unwrapped - Omega_p * T) / kTwoPi);
  double rho = Omega_p + winding * p0.omega0;

  // Keep the solution that rotates positively (or negatively when asked);
  // for real p₀ the other one is the complex conjugate.
  const bool flip = (rho < 0.0) != opts.conjugate;
  if (flip) {
    rho = -rho;
    for (int j = 0; j <= M; ++j) {
      phi[j] = std::conj(phi[j]);
      dphi[j] = std::conj(dphi[j]);
    }
  }
  fd.Omega0 = rho;
  fd.Omega0_principal = fold_frequency(rho, p0.omega0);

  std::vector<Complex> P2(M), P2inv(M), g0(M);
  double min_mod = std::abs(phi[0]), max_mod = min_mod;
  for (int j = 0; j < M; ++j) {
    const double t = j * h;
    const Complex P = phi[j] * std::polar(1.0, -rho * t);
    P2[j] = P * P;
    P2inv[j] = 1.0 / P2[j];
    g0[j] = Complex(0.0, -1.0) * dphi[j] / phi[j];
    min_mod = std::min(min_mod, std::abs(phi[j]));
    max_mod = std::max(max_mod, std::abs(phi[j]));
  }
  fd.min_modulus = min_mod;
  fd.max_modulus = max_mod;
  fd.F2 = dft(P2, opts.coeff_floor);
  fd.F2inv = dft(P2inv, opts.coeff_floor);

  const auto g0c = dft(g0, opts.coeff_floor);
  fd.g0 = FourierSeries(0);
  for (const auto& [n, cn] : g0c) fd.g0.set(MultiIndex::periodic(0, n, 0), cn);

  // ψ₀ = ∫(g₀ − Ω₀), shifted so that ψ₀(0) = 0.
  FourierSeries oscillating = fd.g0;
  oscillating.set(MultiIndex::zero(0), 0.0);
  const FrequencyVector w = fd.periodic_frequencies();
  fd.psi0 = primitive(oscillating, w);
  fd.psi0.accumulate(MultiIndex::zero(0), -evaluate(fd.psi0, w, 0.0));

  double recon = 0.0;
  for (int j = 0; j <= M; ++j) recon = std::max(recon, std::abs(fd.phi0(j * h) - phi[j]));
  fd.reconstruction_error = recon;
  return fd;
}

std::map<int, Complex> convolve_periodic(const std::map<int, Complex>& a,
                                         const std::map<int, Complex>& b) {
  std::map<int, Complex> out;
  for (const auto& [n, x] : a)
    for (const auto& [k, y] : b) out[n + k] += x * y;
  return out;
}

namespace {

void enumerate_box(std::vector<int>& c, std::size_t pos, int budget,
                   const std::function<void(const std::vector<int>&)>& fn) {
  if (pos == c.size()) {
    fn(c);
    return;
  }
  for (int v = -budget; v <= budget; ++v) {
    c[pos] = v;
    enumerate_box(c, pos + 1, budget - std::abs(v), fn);
  }
  c[pos] = 0;
}

}  // namespace

QR build_QR(const FloquetData& fd, const FourierSeries& p1, const std::vector<double>& omega1,
            int cutoff, double divisor_floor) {
  const std::size_t A = p1.A();
  if (omega1.size() != A) throw DimensionMismatch("build_QR: omega1 length differs from p1 dimension");
  for (const auto& [nu, c] : p1.terms())
    if (nu.n1() != 0 || nu.n2() != 0)
      throw std::invalid_argument("build_QR: p1 must only carry omega1 modes");

  const FrequencyVector w = fd.frequencies(omega1);
  const double floor = divisor_floor < 0.0 ? w.default_divisor_floor() : divisor_floor;

  if (cutoff >= 2 && cutoff != kNoCutoff) {
    std::vector<int> c(A + 1, 0);
    enumerate_box(c, 0, cutoff - 2, [&](const std::vector<int>& mn) {
      MultiIndex nu(std::vector<int>(mn.begin(), mn.end() - 1), mn.back(), 2);
      const double x = w.dot(nu);
      if (std::abs(x) < floor) throw NonResonanceViolation(nu, std::abs(x));
    });
  }

  QR qr{FourierSeries(A), FourierSeries(A)};
  for (const auto& [n, c] : fd.F2inv) qr.Q.set(MultiIndex::periodic(A, n, -2), c);
  for (const auto& [nu, pm] : p1.terms()) {
    const std::vector<int> m(nu.m().begin(), nu.m().end());
    for (const auto& [n, f] : fd.F2) qr.R.accumulate(MultiIndex(m, n, 2), pm * f);
  }
  for (const auto& [nu, c] : qr.R.terms()) {
    const double x = w.dot(nu);
    if (std::abs(x) < floor) throw NonResonanceViolation(nu, std::abs(x));
  }
  return qr;
}

}  // namespace hillq
