#ifndef HILLQ_FLOQUET_HPP
#define HILLQ_FLOQUET_HPP

#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "hillq/fourier.hpp"

namespace hillq {

/// p₀(t) = Σ P_n e^{inω₀t}, real-valued.
struct PeriodicPotential {
  double omega0 = 1.0;
  std::map<int, Complex> coeffs;

  static PeriodicPotential constant(double omega0, double c) { return {omega0, {{0, c}}}; }

  double period() const;
  double operator()(double t) const;
  bool is_real_valued(double tol = 1e-12) const;
  /// As a FourierSeries on indices (0, n, 0) in dimension A.
  FourierSeries as_series(std::size_t A) const;
};

struct FloquetOptions {
  int grid_size = 1024;
  /// Continue the conjugate solution e^{−iΩ₀t − iψ₀*} instead (Ω₀ < 0).
  bool conjugate = false;
  /// DFT coefficients below this (relative to the largest) are dropped.
  double coeff_floor = 1e-13;
};

/// Unperturbed Bohr/Floquet representation φ₀(t) = exp(iΩ₀t + iψ₀(t)),
/// normalized so that φ₀(0) = 1 (ψ₀(0) = 0).
///
/// Omega0 is the rotation number ⟨g₀⟩ of φ₀ (positive unless the conjugate
/// solution was requested), so ψ₀ is periodic. Omega0_principal is the same
/// frequency folded into (0, ω₀/2]; the two agree when |Ω₀| ≤ ω₀/2.
struct FloquetData {
  double omega0 = 1.0;
  double Omega0 = 0.0;
  double Omega0_principal = 0.0;
  /// g₀ = −iφ̇₀/φ₀ on indices (n, 0), A = 0.
  FourierSeries g0{0};
  /// ψ₀ on indices (n, 0), A = 0; complex in general.
  FourierSeries psi0{0};
  /// φ₀² = Σ F2_n e^{i(nω₀+2Ω₀)t}
  std::map<int, Complex> F2;
  /// φ₀^{−2} = Σ F2inv_n e^{i(nω₀−2Ω₀)t}
  std::map<int, Complex> F2inv;
  Complex monodromy_trace{};

  // Diagnostics measured on the integration grid.
  double wronskian_drift = 0.0;      ///< max |W(t) − W(0)| / |W(0)|
  double min_modulus = 0.0;          ///< min |φ₀(t_j)|
  double max_modulus = 0.0;          ///< max |φ₀(t_j)|
  double reconstruction_error = 0.0; ///< max |exp(iΩ₀t+iψ₀) − φ₀| on the grid

  /// Frequency vector (ω₁, ω₀, Ω₀) for a perturbation with frequencies ω₁.
  FrequencyVector frequencies(std::vector<double> omega1) const {
    return {std::move(omega1), omega0, Omega0};
  }
  FrequencyVector periodic_frequencies() const { return {{}, omega0, Omega0}; }

  /// φ₀(t) from (Ω₀, ψ₀).
  Complex phi0(double t) const;
  /// φ̇₀(t) = i g₀(t) φ₀(t).
  Complex dphi0(double t) const;
};

/// Integrates the two fundamental solutions over one period with the fixed-step
/// 8th-order scheme, takes the Floquet multiplier e^{iΩT₀} with principal
/// Ω ∈ (0, ω₀/2), builds φ₀ from the eigenvector, lifts Ω by the winding of
/// φ₀e^{−iΩt} to the rotation number and extracts the Fourier data by DFT.
///
/// Throws UnstableUnperturbed if |trace| ≥ 2 and DegenerateEigenvector when the
/// multiplier pair is numerically indistinguishable.
FloquetData solve_floquet(const PeriodicPotential& p0, const FloquetOptions& opts = {});

/// Ω folded to the principal branch (0, ω₀/2] by the symmetries Ω ↦ Ω + kω₀
/// and Ω ↦ −Ω.
double fold_frequency(double Omega, double omega0);

struct QR {
  FourierSeries Q;
  FourierSeries R;
};

/// Q on (0, n, −2) from F2inv; R = p₁·φ₀² on (m, n, 2). p₁ must only use pure
/// ω₁ modes (n₁ = n₂ = 0). Checks m·ω₁ + nω₀ + 2Ω₀ ≠ 0 on the support of R
/// and, for a finite cutoff, on every |m|+|n|+2 ≤ cutoff; throws
/// NonResonanceViolation otherwise.
QR build_QR(const FloquetData& fd, const FourierSeries& p1, const std::vector<double>& omega1,
            int cutoff, double divisor_floor = -1.0);

/// Σ_n F2_n F2inv_{k−n}; equals δ_{k,0} when both maps are accurate.
std::map<int, Complex> convolve_periodic(const std::map<int, Complex>& a,
                                         const std::map<int, Complex>& b);

}  // namespace hillq

#endif  // HILLQ_FLOQUET_HPP
