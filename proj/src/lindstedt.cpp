#include "hillq/lindstedt.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hillq/errors.hpp"

namespace hillq {

FourierSeries PerturbationResult::u_sum(double eps) const {
  if (orders.empty()) return FourierSeries(0);
  FourierSeries u(orders.front().A());
  double power = 1.0;
  for (const auto& uk : orders) {
    u = add(u, uk.scaled(power));
    power *= eps;
  }
  return u;
}

namespace {

FourierSeries divide_by_divisors(const FourierSeries& f, const FrequencyVector& omega, double floor,
                                 int order) {
  FourierSeries u(f.A());
  for (const auto& [nu, c] : f.terms()) {
    if (nu.is_zero()) continue;  // α^(k) := 0
    const double x = omega.dot(nu);
    if (std::abs(x) < floor) throw ResonantMode(nu, std::abs(x), order);
    u.set(nu, c / Complex(0.0, x));
  }
  return u;
}

void check_truncation(double discarded, double retained, double max_fraction, int k) {
  if (discarded > max_fraction * retained && discarded > 0.0) {
    std::ostringstream os;
    os << "expand: order " << k << " discarded l1 mass " << discarded << " exceeds "
       << max_fraction << " of retained mass " << retained << "; raise the cutoff";
    throw TruncationBlowup(os.str());
  }
}

}  // namespace

PerturbationResult expand(const FourierSeries& Q, const FourierSeries& R,
                          const FrequencyVector& omega, const ExpandOptions& opts) {
  if (Q.A() != R.A() || omega.A() != R.A()) throw DimensionMismatch("expand: dimension mismatch");
  if (opts.order < 0) throw std::invalid_argument("expand: order must be nonnegative");
  const double floor =
      opts.divisor_floor < 0.0 ? omega.default_divisor_floor() : opts.divisor_floor;
  if (std::abs(average(R)) > 1e-12 * std::max(1.0, R.l1_norm()))
    throw NonzeroAverage("expand: R has a nonzero average, the order-0 equation is not solvable");

  PerturbationResult res;
  const double qnorm = Q.l1_norm();

  FourierSeries R_cut(R.A());
  double discarded0 = 0.0;
  for (const auto& [nu, c] : R.terms()) {
    if (nu.l1() > opts.cutoff)
      discarded0 += std::abs(c);
    else
      R_cut.set(nu, c);
  }
  check_truncation(discarded0, R_cut.l1_norm(), opts.max_discard_fraction, 0);
  res.orders.push_back(divide_by_divisors(R_cut, omega, floor, 0));
  res.discarded_mass.push_back(discarded0);

  for (int k = 1; k <= opts.order; ++k) {
    // S = Σ_{k₁+k₂=k−1} u^(k₁)u^(k₂), pairing k₁ < k₂ twice.
    FourierSeries S(R.A());
    double discarded = 0.0;
    double scale = 0.0;
    for (int k1 = 0; 2 * k1 <= k - 1; ++k1) {
      const int k2 = k - 1 - k1;
      const auto& a = res.orders[k1];
      const auto& b = res.orders[k2];
      const double weight = k1 == k2 ? 1.0 : 2.0;
      Product p = mul(a, b, opts.cutoff);
      S = add(S, p.series.scaled(weight));
      discarded += weight * p.discarded_l1 * qnorm;
      scale += weight * a.l1_norm() * b.l1_norm();
    }
    Product F = mul(Q, S, opts.cutoff);
    discarded += F.discarded_l1;
    check_truncation(discarded, F.series.l1_norm(), opts.max_discard_fraction, k);

    res.compat_residuals.push_back(std::abs(average(F.series)));
    res.compat_scales.push_back(qnorm * scale);
    res.orders.push_back(divide_by_divisors(F.series, omega, floor, k));
    res.discarded_mass.push_back(discarded);
  }

  for (int k = 0; k <= opts.order; ++k) res.G.push_back(compute_G(res, Q, k));
  res.j0 = detect_j0(res.G, default_g_tol(res.G));
  return res;
}

Complex compute_G(const PerturbationResult& result, const FourierSeries& Q, int k) {
  if (k < 0 || k >= static_cast<int>(result.orders.size()))
    throw std::out_of_range("compute_G: order not computed");
  // Only the ν = 0 coefficient of Q·u^(k) is needed; cutoff 0 keeps exactly that.
  return 2.0 * average(mul(Q, result.orders[k], 0).series);
}

double default_g_tol(const std::vector<Complex>& G) {
  double m = 1.0;
  for (const auto& g : G) m = std::max(m, std::abs(g));
  return 1e-10 * m;
}

std::optional<int> detect_j0(const std::vector<Complex>& G, double g_tol) {
  for (std::size_t j = 0; j < G.size(); ++j)
    if (std::abs(G[j]) > g_tol) return static_cast<int>(j) + 1;
  return std::nullopt;
}

Complex omega_eps_complex(const PerturbationResult& result, double Omega0, double eps) {
  // Horner on Σ_{k=0}^{K} ε^k G_{k+1}.
  Complex s{};
  for (auto it = result.G.rbegin(); it != result.G.rend(); ++it) s = s * eps + *it;
  return Omega0 + Complex(0.0, 0.5 * eps) * s;
}

double omega_eps(const PerturbationResult& result, double Omega0, double eps, double eps0) {
  if (std::abs(eps) > eps0) throw std::domain_error("omega_eps: |eps| exceeds eps0");
  const Complex z = omega_eps_complex(result, Omega0, eps);
  if (std::abs(z.imag()) > 1e-9 * (1.0 + std::abs(Omega0))) {
    std::ostringstream os;
    os.precision(17);
    os << "omega_eps: imaginary residue " << z.imag() << " at eps = " << eps;
    throw RealityViolation(os.str());
  }
  return z.real();
}

}  // namespace hillq
