#ifndef HILLQ_LINDSTEDT_HPP
#define HILLQ_LINDSTEDT_HPP

#include <limits>
#include <optional>
#include <vector>

#include "hillq/fourier.hpp"

namespace hillq {

struct ExpandOptions {
  int order = 4;            ///< K
  int cutoff = kNoCutoff;   ///< safety-net truncation of every convolution
  double divisor_floor = -1.0;  ///< < 0: 1e-12·‖ω‖
  /// Raise TruncationBlowup when an order's discarded mass exceeds this
  /// fraction of its retained ℓ¹ mass.
  double max_discard_fraction = 1e-3;
};

/// Formal solution u = Σ ε^k u^(k) of u̇ = R + εQu² with zero averages
/// α^(k) = 0, and the constants G_{k+1} = 2⟨Qu^(k)⟩.
struct PerturbationResult {
  std::vector<FourierSeries> orders;
  /// G[j-1] holds G_j, j = 1..K+1.
  std::vector<Complex> G;
  /// |⟨[Qu²]^(k−1)⟩| for k = 1..K (entry k−1).
  std::vector<double> compat_residuals;
  /// Scale for each residual: ‖Q‖₁·Σ_{k₁+k₂=k−1}‖u^(k₁)‖₁‖u^(k₂)‖₁.
  std::vector<double> compat_scales;
  /// Discarded convolution mass per order.
  std::vector<double> discarded_mass;
  std::optional<int> j0;

  int K() const { return static_cast<int>(orders.size()) - 1; }
  /// Σ_{k≤K} ε^k u^(k) as a single series.
  FourierSeries u_sum(double eps) const;
};

/// Runs the order-by-order recursion
///   (iω·ν) u^(0)_ν = R_ν,
///   (iω·ν) u^(k)_ν = Σ_{k₁+k₂=k−1} [Q u^(k₁) u^(k₂)]_ν,  u^(k)_0 = 0,
/// and fills G and j₀ (with the default g_tol).
///
/// Throws NonzeroAverage if R₀ ≠ 0, ResonantMode(ν, k) on a divisor below the
/// floor and TruncationBlowup when the cutoff discards too much.
PerturbationResult expand(const FourierSeries& Q, const FourierSeries& R,
                          const FrequencyVector& omega, const ExpandOptions& opts = {});

/// G_{k+1} = 2⟨Q u^(k)⟩ for the stored order k.
Complex compute_G(const PerturbationResult& result, const FourierSeries& Q, int k);

/// 1e-10·max(1, max_k |G_k|)
double default_g_tol(const std::vector<Complex>& G);

/// Smallest j (1-based) with |G_j| > g_tol, or none (null renormalization).
std::optional<int> detect_j0(const std::vector<Complex>& G, double g_tol);

/// Ω_ε = Ω₀ + iε·½·Σ_{k=0}^{K} ε^k G_{k+1}.
///
/// Throws RealityViolation when the imaginary residue exceeds
/// 1e-9·(1 + |Ω₀|) and std::domain_error when |ε| > eps0.
double omega_eps(const PerturbationResult& result, double Omega0, double eps,
                 double eps0 = std::numeric_limits<double>::infinity());

/// The complex value before the reality check.
Complex omega_eps_complex(const PerturbationResult& result, double Omega0, double eps);

}  // namespace hillq

#endif  // HILLQ_LINDSTEDT_HPP
