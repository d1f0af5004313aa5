#include <doctest.h>

#include <cmath>

#include "hillq/errors.hpp"
#include "hillq/floquet.hpp"
#include "hillq/lindstedt.hpp"
#include "support.hpp"

using namespace hillq;
using testing::kOmega0;
using testing::kSqrt2;

namespace {

struct Setup {
  FloquetData fd;
  QR qr;
  FrequencyVector omega;
};

Setup flat_base(const FourierSeries& p1, std::vector<double> w1) {
  FloquetData fd = solve_floquet(PeriodicPotential::constant(kOmega0, 1.0));
  QR qr = build_QR(fd, p1, w1, kNoCutoff);
  FrequencyVector omega = fd.frequencies(w1);
  return {std::move(fd), std::move(qr), std::move(omega)};
}

}  // namespace

TEST_CASE("constant perturbation reproduces sqrt(1 + eps c)") {
  // φ̈ + (1 + εc)φ = 0 rotates at exactly √(1+εc).
  const double c = 0.8;
  const Setup s = flat_base(FourierSeries(1, {{MultiIndex::zero(1), c}}), {kSqrt2});
  ExpandOptions o;
  o.order = 5;
  const PerturbationResult r = expand(s.qr.Q, s.qr.R, s.omega, o);
  CHECK(std::abs(r.G[0] - Complex(0.0, -c)) < 1e-14);
  REQUIRE(r.j0);
  CHECK(*r.j0 == 1);
  for (double eps : {1e-2, 2e-2, 4e-2}) {
    const double err = std::abs(omega_eps(r, s.fd.Omega0, eps) - std::sqrt(1.0 + eps * c));
    // truncation after ε^{K+1}
    CHECK(err < 5.0 * std::pow(eps * c, 7));
  }
}

TEST_CASE("second-order shift for a cosine perturbation") {
  // Averaging for φ̈ + (1 + ε cos wt)φ = 0: Ω² = 1 + ε²/(2(w² − 4)) + O(ε⁴),
  // i.e. G₂ = i/(2(4 − w²)).
  for (double w : {kSqrt2, testing::kSqrt3, 0.5 * kSqrt2}) {
    const Setup s = flat_base(testing::cosine(), {w});
    ExpandOptions o;
    o.order = 3;
    const PerturbationResult r = expand(s.qr.Q, s.qr.R, s.omega, o);
    CHECK(std::abs(r.G[0]) < 1e-14);
    CHECK(std::abs(r.G[1] - Complex(0.0, 1.0 / (2.0 * (4.0 - w * w)))) < 1e-13);
    CHECK(std::abs(r.G[2]) < 1e-14);
    REQUIRE(r.j0);
    CHECK(*r.j0 == 2);
  }
}

TEST_CASE("supports, compatibility and reality") {
  const Setup s = flat_base(testing::cosine(), {kSqrt2});
  ExpandOptions o;
  o.order = 6;
  const PerturbationResult r = expand(s.qr.Q, s.qr.R, s.omega, o);
  CHECK(r.K() == 6);
  CHECK(r.G.size() == 7);
  for (const auto& u : r.orders) {
    CHECK(u.coeff(MultiIndex::zero(1)) == Complex{});
    for (const auto& [nu, c] : u.terms()) CHECK(nu.n2() == 2);
  }
  for (std::size_t k = 0; k < r.compat_residuals.size(); ++k)
    CHECK(r.compat_residuals[k] <= 1e-12 * r.compat_scales[k]);
  for (Complex g : r.G) CHECK(std::abs(g.real()) < 1e-12);
}

TEST_CASE("order zero only") {
  const Setup s = flat_base(testing::cosine(), {kSqrt2});
  ExpandOptions o;
  o.order = 0;
  const PerturbationResult r = expand(s.qr.Q, s.qr.R, s.omega, o);
  CHECK(r.orders.size() == 1);
  CHECK(r.G.size() == 1);
  CHECK_FALSE(r.j0);
}

TEST_CASE("null perturbation") {
  const Setup s = flat_base(FourierSeries(1), {kSqrt2});
  const PerturbationResult r = expand(s.qr.Q, s.qr.R, s.omega, {});
  for (Complex g : r.G) CHECK(g == Complex{});
  CHECK_FALSE(r.j0);
  for (double eps : {-0.3, 0.0, 0.01, 0.5}) CHECK(omega_eps(r, s.fd.Omega0, eps) == s.fd.Omega0);
}

TEST_CASE("input validation") {
  const Setup s = flat_base(testing::cosine(), {kSqrt2});
  FourierSeries R = s.qr.R;
  R.set(MultiIndex::zero(1), 0.1);
  CHECK_THROWS_AS(expand(s.qr.Q, R, s.omega, {}), NonzeroAverage);

  ExpandOptions tight;
  tight.order = 4;
  tight.cutoff = 3;
  CHECK_THROWS_AS(expand(s.qr.Q, s.qr.R, s.omega, tight), TruncationBlowup);

  const PerturbationResult r = expand(s.qr.Q, s.qr.R, s.omega, {});
  CHECK_THROWS_AS(omega_eps(r, s.fd.Omega0, 0.2, 0.1), std::domain_error);
  PerturbationResult broken = r;
  broken.G[1] += 1e-3;
  CHECK_THROWS_AS(omega_eps(broken, s.fd.Omega0, 0.1), RealityViolation);
}

TEST_CASE("resonant divisor carries index and order") {
  // Ω₀ = 1 and ω₁ = 2: R contains (−1; 0; 2) with divisor 0. Building with a
  // fake ω₁ and expanding with the resonant one reaches the check inside expand.
  const Setup s = flat_base(testing::cosine(), {kSqrt2});
  const FrequencyVector resonant({2.0}, kOmega0, 1.0);
  try {
    (void)expand(s.qr.Q, s.qr.R, resonant, {});
    FAIL("expected ResonantMode");
  } catch (const ResonantMode& e) {
    CHECK(e.nu() == MultiIndex({-1}, 0, 2));
    REQUIRE(e.order());
    CHECK(*e.order() == 0);
  }
}

TEST_CASE("scaling covariance") {
  // εΣε^k u^(k)[p₁] is invariant under (ε, p₁) → (ε/λ, λp₁).
  const double lambda = 2.5, eps = 0.03;
  const Setup a = flat_base(testing::cosine(), {kSqrt2});
  const Setup b = flat_base(testing::cosine().scaled(lambda), {kSqrt2});
  ExpandOptions o;
  o.order = 5;
  const PerturbationResult ra = expand(a.qr.Q, a.qr.R, a.omega, o);
  const PerturbationResult rb = expand(b.qr.Q, b.qr.R, b.omega, o);
  const FourierSeries ga = ra.u_sum(eps).scaled(eps);
  const FourierSeries gb = rb.u_sum(eps / lambda).scaled(eps / lambda);
  CHECK(sub(ga, gb).l1_norm() < 1e-14 * ga.l1_norm());
  CHECK(omega_eps(ra, 1.0, eps) == doctest::Approx(omega_eps(rb, 1.0, eps / lambda)).epsilon(1e-14));
}

TEST_CASE("j0 detection") {
  CHECK_FALSE(detect_j0({0.0, 0.0}, 1e-10));
  CHECK(*detect_j0({1e-12, Complex(0, 1e-3), 1.0}, 1e-10) == 2);
  CHECK(default_g_tol({Complex(0, 5.0)}) == doctest::Approx(5e-10));
  CHECK(default_g_tol({}) == doctest::Approx(1e-10));
}
