#include "hillq/smalldiv.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <stdexcept>

#include "hillq/errors.hpp"
#include "hillq/parallel.hpp"

namespace hillq {

ScaleConfig ScaleConfig::from_diophantine(double C0, double tau, std::size_t A, double C1_factor,
                                          std::optional<double> tau1) {
  ScaleConfig cfg;
  cfg.C1 = C0 * C1_factor;
  cfg.tau1 = tau1.value_or(tau + static_cast<double>(A + 2) + 1.0);
  if (!(cfg.C1 > 0.0) || cfg.C1 > C0) throw std::invalid_argument("ScaleConfig: need 0 < C1 <= C0");
  if (!(cfg.tau1 > tau)) throw std::invalid_argument("ScaleConfig: need tau1 > tau");
  return cfg;
}

double diophantine_constant(const FrequencyVector& omega, double tau, int N, double divisor_floor) {
  if (N < 1) throw std::invalid_argument("diophantine_constant: N must be >= 1");
  const double floor = divisor_floor < 0.0 ? omega.default_divisor_floor() : divisor_floor;
  double best = std::numeric_limits<double>::infinity();
  for_each_index(omega.A(), N, [&](const MultiIndex& nu) {
    const double x = std::abs(omega.dot(nu));
    if (x < floor) throw ResonanceFound(nu, x);
    best = std::min(best, x * std::pow(static_cast<double>(nu.l1()), tau));
  });
  return best;
}

int scale_of(double x, const ScaleConfig& cfg) {
  const double ax = std::abs(x);
  if (ax == 0.0) throw ZeroDivisor("scale_of: zero divisor has no scale");
  if (ax > cfg.C1 / 2) return 0;
  int n = std::max(0, static_cast<int>(std::floor(std::log2(cfg.C1 / ax))));
  // Settle the bracket with exact power-of-two comparisons.
  while (n > 0 && ax > std::ldexp(cfg.C1, -n)) --n;
  while (ax <= std::ldexp(cfg.C1, -n - 1)) ++n;
  return n;
}

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// C^k smoothstep on [0, 1].
double smoothstep(double t, int k) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double s = 0.0;
  for (int j = 0; j <= k; ++j)
    s += binomial(k + j, j) * binomial(2 * k + 1, k - j) * std::pow(-t, j);
  return std::pow(t, k + 1) * s;
}

double psi(double y, const ScaleConfig& cfg) {
  const double half = cfg.C1 / 2;
  if (y >= cfg.C1) return 1.0;
  if (y <= half) return 0.0;
  return smoothstep((y - half) / half, cfg.smoothstep_order);
}

}  // namespace

std::pair<double, double> psi_chi(double x, int n, const ScaleConfig& cfg) {
  const double p = psi(std::ldexp(std::abs(x), n), cfg);
  return {p, 1.0 - p};
}

NormalCountReport normal_count_check(const std::set<MultiIndex>& indices,
                                     const FrequencyVector& omega, const ScaleConfig& cfg, int n0,
                                     std::optional<int> n_last, double growth_limit) {
  NormalCountReport rep;
  rep.n_first = n0;
  std::vector<int> scales;
  int deepest = n0;
  for (const auto& nu : indices) {
    if (nu.is_zero()) continue;
    rep.total_norm += nu.l1();
    const double x = omega.dot(nu);
    const int s = x == 0.0 ? INT_MAX : scale_of(x, cfg);
    scales.push_back(s);
    if (s != INT_MAX) deepest = std::max(deepest, s);
  }
  const int last = std::max(n0, n_last.value_or(deepest));
  for (int n = n0; n <= last; ++n) {
    long count = 0;
    for (int s : scales) count += s >= n;
    rep.counts.push_back(count);
    rep.constants.push_back(rep.total_norm > 0.0
                                ? count * std::pow(2.0, n / cfg.tau1) / rep.total_norm
                                : 0.0);
  }
  const double base = rep.constants.empty() ? 0.0 : rep.constants.front();
  double top = 0.0;
  for (double c : rep.constants) top = std::max(top, c);
  rep.growth = base > 0.0 ? top / base : (top > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
  rep.bryuno_warning = rep.growth > growth_limit;
  return rep;
}

int n0_for_band(double eps_m, const ScaleConfig& cfg) {
  const double arg = cfg.n0_c1 + cfg.n0_c2 * std::log(2.0 / eps_m);
  if (!(arg > 1.0)) return 0;
  return std::max(0, static_cast<int>(std::ceil(cfg.tau1 * std::log2(arg))));
}

namespace {

struct Mode {
  MultiIndex nu;
  double dot;
  double width;  // C₁|ν|^{−τ₁}
};

struct BandModes {
  int n0 = 0;
  /// Modes that can ever be excluding in this band, in enumeration order,
  /// with their χ_{n₀} weight (0 for statically violating modes).
  std::vector<std::pair<const Mode*, double>> relevant;
  bool static_violation = false;
};

double signed_pow(double eps, int j) { return std::pow(eps, j); }

bool violates(const Mode& m, double chi, Complex shift_coeff, double e) {
  return std::abs(Complex(0.0, m.dot) - chi * e * shift_coeff) < m.width;
}

using Interval = std::pair<double, double>;

/// Sorted union length of intervals clipped to [lo, hi].
double union_measure(std::vector<Interval> iv, double lo, double hi) {
  for (auto& [a, b] : iv) {
    a = std::max(a, lo);
    b = std::min(b, hi);
  }
  std::sort(iv.begin(), iv.end());
  double total = 0.0, cur_a = 0.0, cur_b = 0.0;
  bool open = false;
  for (const auto& [a, b] : iv) {
    if (!(b > a)) continue;
    if (!open || a > cur_b) {
      if (open) total += cur_b - cur_a;
      cur_a = a;
      cur_b = b;
      open = true;
    } else {
      cur_b = std::max(cur_b, b);
    }
  }
  if (open) total += cur_b - cur_a;
  return total;
}

/// ε-intervals (|ε| for sign = −1) on which |i·dot − χ ε^j G| < width.
void exclusion_intervals(const Mode& m, double chi, Complex G, int j, int sign,
                         std::vector<Interval>& out) {
  const Complex a(0.0, m.dot);
  const Complex b = chi * G;
  const double bb = std::norm(b);
  if (bb == 0.0) return;
  const double p = (a * std::conj(b)).real();
  const double D = p * p - bb * (std::norm(a) - m.width * m.width);
  if (!(D > 0.0)) return;
  const double sq = std::sqrt(D);
  double e1 = (p - sq) / bb, e2 = (p + sq) / bb;
  // e = ε^j; for ε = −s (s > 0), e = (−1)^j s^j.
  if (sign < 0 && j % 2 == 1) {
    std::swap(e1, e2);
    e1 = -e1;
    e2 = -e2;
  }
  e1 = std::max(e1, 0.0);
  if (!(e2 > e1)) return;
  out.emplace_back(std::pow(e1, 1.0 / j), std::pow(e2, 1.0 / j));
}

}  // namespace

ScanReport scan_admissible(Complex G_j0, std::optional<int> j0, const FrequencyVector& omega,
                           const ScaleConfig& cfg, const ScanOptions& opts) {
  if (opts.bands < 1 || opts.grid < 1 || opts.N < 1 || !(opts.eps0 > 0.0))
    throw std::invalid_argument("scan_admissible: bad scan options");
  if (j0 && *j0 < 1) throw std::invalid_argument("scan_admissible: j0 must be >= 1");

  ScanReport rep;
  rep.j0_used = j0;
  rep.G_j0 = j0 ? G_j0 : Complex{};
  rep.caveat =
      "first-order surrogate: the resummed shift is replaced by chi_n0(|omega.nu|) eps^j0 G_j0; "
      "higher scales and exclusion centers are not computed";
  const Complex shift = j0 ? G_j0 : Complex{};
  const int j = j0.value_or(1);

  std::vector<Mode> modes;
  for_each_index(omega.A(), opts.N, [&](const MultiIndex& nu) {
    modes.push_back({nu, omega.dot(nu), cfg.C1 * std::pow(static_cast<double>(nu.l1()), -cfg.tau1)});
  });

  std::vector<BandModes> band_modes(opts.bands);
  for (int m = 0; m < opts.bands; ++m) {
    const double hi = std::ldexp(opts.eps0, -m);
    BandModes& bm = band_modes[m];
    bm.n0 = cfg.n0 ? *cfg.n0 : n0_for_band(hi, cfg);
    for (const auto& mode : modes) {
      const double chi = shift == Complex{} ? 0.0 : psi_chi(std::abs(mode.dot), bm.n0, cfg).second;
      const bool stat = chi == 0.0 && std::abs(mode.dot) < mode.width;
      if (chi > 0.0 || stat) bm.relevant.emplace_back(&mode, chi);
      bm.static_violation = bm.static_violation || stat;
    }
  }

  const int signs = opts.mirror ? 2 : 1;
  const std::size_t per_band = static_cast<std::size_t>(opts.grid) * signs;
  rep.points.resize(per_band * opts.bands);
  parallel_for(rep.points.size(), thread_count(opts.threads), [&](std::size_t idx) {
    const int m = static_cast<int>(idx / per_band);
    const std::size_t r = idx % per_band;
    const int i = static_cast<int>(r % opts.grid);
    const int sign = r / opts.grid == 0 ? 1 : -1;
    const double lo = std::ldexp(opts.eps0, -(m + 1)), hi = std::ldexp(opts.eps0, -m);
    ScanPoint pt;
    pt.band = m;
    pt.eps = sign * (lo + (i + 1) * (hi - lo) / opts.grid);
    const double e = signed_pow(pt.eps, j);
    for (const auto& [mode, chi] : band_modes[m].relevant) {
      if (violates(*mode, chi, shift, e)) {
        pt.excluded = true;
        pt.witness = mode->nu;
        break;
      }
    }
    rep.points[idx] = std::move(pt);
  });

  std::vector<double> eps_m, fractions;
  for (int m = 0; m < opts.bands; ++m) {
    BandSummary bs;
    bs.m = m;
    bs.lo = std::ldexp(opts.eps0, -(m + 1));
    bs.hi = std::ldexp(opts.eps0, -m);
    bs.n0 = band_modes[m].n0;

    long admissible = 0;
    for (std::size_t r = 0; r < per_band; ++r) admissible += !rep.points[m * per_band + r].excluded;
    bs.admissible_fraction = static_cast<double>(admissible) / per_band;

    double frac = 0.0;
    for (int s = 0; s < signs; ++s) {
      const int sign = s == 0 ? 1 : -1;
      double excluded = 0.0;
      if (band_modes[m].static_violation) {
        excluded = bs.hi - bs.lo;
      } else {
        std::vector<Interval> iv;
        for (const auto& [mode, chi] : band_modes[m].relevant)
          exclusion_intervals(*mode, chi, shift, j, sign, iv);
        excluded = union_measure(std::move(iv), bs.lo, bs.hi);
      }
      frac += 1.0 - excluded / (bs.hi - bs.lo);
    }
    bs.measure_fraction = frac / signs;
    eps_m.push_back(bs.hi);
    fractions.push_back(bs.measure_fraction);
    rep.bands.push_back(bs);
  }

  if (auto fit = fit_exclusion_law(eps_m, fractions)) {
    rep.fit_b = fit->first;
    rep.fit_xi = fit->second;
  }
  rep.fit_bands = static_cast<int>(std::count_if(fractions.begin(), fractions.end(),
                                                 [](double f) { return 1.0 - f > 0.0; }));
  return rep;
}

std::optional<std::pair<double, double>> fit_exclusion_law(const std::vector<double>& eps,
                                                           const std::vector<double>& fractions) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < eps.size() && i < fractions.size(); ++i) {
    const double ex = 1.0 - fractions[i];
    if (!(ex > 0.0) || !(eps[i] > 0.0)) continue;
    const double x = std::log(eps[i]), y = std::log(ex);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return std::nullopt;
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return std::nullopt;
  const double xi = (n * sxy - sx * sy) / den;
  const double logb = (sy - xi * sx) / n;
  return std::make_pair(std::exp(logb), xi);
}

}  // namespace hillq
