#ifndef HILLQ_SMALLDIV_HPP
#define HILLQ_SMALLDIV_HPP

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hillq/fourier.hpp"

namespace hillq {

/// Dyadic scale configuration.
struct ScaleConfig {
  double C1 = 1.0;
  double tau1 = 4.0;
  /// Base scale; std::nullopt selects the per-band default of n0_for_band().
  std::optional<int> n0;
  /// ψ is the C^k smoothstep of this order on [C₁/2, C₁] (degree 2k+1).
  int smoothstep_order = 2;
  /// Placeholders in n₀ ≥ τ₁ log₂(c₁ + c₂ log(2/ε_m)).
  double n0_c1 = 1.0;
  double n0_c2 = 1.0;

  /// C₁ = C0·factor and τ₁ = τ + d + 1 (d = A + 2). Throws
  /// std::invalid_argument unless C₁ ≤ C₀ and τ₁ > τ.
  static ScaleConfig from_diophantine(double C0, double tau, std::size_t A,
                                      double C1_factor = 1.0 / 3.0,
                                      std::optional<double> tau1 = std::nullopt);
};

/// min over 0 < |ν| ≤ N of |ω·ν|·|ν|^τ. Throws ResonanceFound when some
/// |ω·ν| is below divisor_floor (< 0: 1e-12·‖ω‖).
double diophantine_constant(const FrequencyVector& omega, double tau, int N,
                            double divisor_floor = -1.0);

/// n ≥ 0 with 2^{−n−1}C₁ < |x| ≤ 2^{−n}C₁ (n = 0 for all |x| > C₁/2).
/// Throws ZeroDivisor for x = 0.
int scale_of(double x, const ScaleConfig& cfg);

/// (ψ_n(x), χ_n(x)) with ψ_n(x) = ψ(2ⁿx), χ_n = 1 − ψ_n.
std::pair<double, double> psi_chi(double x, int n, const ScaleConfig& cfg);

struct NormalCountReport {
  int n_first = 0;
  /// Per scale n = n_first + i: number of indices whose divisor sits at scale ≥ n.
  std::vector<long> counts;
  /// Smallest c with count ≤ c·2^{−n/τ₁}·Σ|ν|.
  std::vector<double> constants;
  double total_norm = 0.0;
  /// max c_n / c_{n_first} over the scanned scales.
  double growth = 0.0;
  bool bryuno_warning = false;
};

/// Counts divisor scales over an index set (ν = 0 ignored) for scales
/// n₀ ≤ n ≤ n_last, where n_last defaults to the deepest scale present.
/// Warns when c_n grows by more than growth_limit over c_{n₀}.
NormalCountReport normal_count_check(const std::set<MultiIndex>& indices,
                                     const FrequencyVector& omega, const ScaleConfig& cfg,
                                     int n0 = 0, std::optional<int> n_last = std::nullopt,
                                     double growth_limit = 4.0);

/// n₀ for band ℰ_m = (ε_m/2, ε_m]: ceil(τ₁ log₂(c₁ + c₂ log(2/ε_m))), ≥ 0.
int n0_for_band(double eps_m, const ScaleConfig& cfg);

struct ScanOptions {
  double eps0 = 0.1;
  int bands = 9;          ///< ℰ_0 … ℰ_{bands−1}
  int grid = 512;         ///< ε points per band (and per sign)
  int N = 30;             ///< box |ν| ≤ N
  bool mirror = true;     ///< also scan −ε
  unsigned threads = 0;   ///< 0: HILLQ_THREADS or hardware concurrency
};

struct ScanPoint {
  double eps = 0.0;
  int band = 0;
  bool excluded = false;
  std::optional<MultiIndex> witness;
};

struct BandSummary {
  int m = 0;
  double lo = 0.0;  ///< 2^{−(m+1)}ε₀
  double hi = 0.0;  ///< 2^{−m}ε₀
  int n0 = 0;
  /// Fraction of admissible grid points (both signs when mirrored).
  double admissible_fraction = 1.0;
  /// 1 − meas(excluded ∩ band)/meas(band), from the exact exclusion
  /// intervals of the same first-order condition, both signs when mirrored.
  double measure_fraction = 1.0;
};

struct ScanReport {
  std::vector<ScanPoint> points;
  std::vector<BandSummary> bands;
  std::optional<int> j0_used;
  Complex G_j0{};
  /// Fit 1 − f_m ≈ b·ε_m^ξ on bands with positive excluded measure.
  std::optional<double> fit_b;
  std::optional<double> fit_xi;
  int fit_bands = 0;
  std::string caveat;
};

/// First-order surrogate of the admissible set: ε is excluded iff some
/// 0 < |ν| ≤ N has |i ω·ν − χ_{n₀}(|ω·ν|) ε^{j₀} G_{j₀}| < C₁|ν|^{−τ₁}.
/// With j0 = none (null case) no shift is applied.
ScanReport scan_admissible(Complex G_j0, std::optional<int> j0, const FrequencyVector& omega,
                           const ScaleConfig& cfg, const ScanOptions& opts);

/// Least-squares fit of log(1 − f) = log b + ξ log ε over positive entries.
/// Needs at least two; returns (b, ξ).
std::optional<std::pair<double, double>> fit_exclusion_law(
    const std::vector<double>& eps, const std::vector<double>& fractions);

}  // namespace hillq

#endif  // HILLQ_SMALLDIV_HPP
