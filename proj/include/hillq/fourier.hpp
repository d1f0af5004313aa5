#ifndef HILLQ_FOURIER_HPP
#define HILLQ_FOURIER_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "hillq/multi_index.hpp"

namespace hillq {

using Complex = std::complex<double>;

/// Amplitudes below this are always dropped (underflow guard).
inline constexpr double kUnderflowFloor = 1e-300;
/// Pass as cutoff to mul() for an untruncated product.
inline constexpr int kNoCutoff = std::numeric_limits<int>::max();

/// ω = (ω₁, ω₀, Ω₀).
class FrequencyVector {
 public:
  FrequencyVector(std::vector<double> omega1, double omega0, double Omega0);

  std::size_t A() const { return omega1_.size(); }
  const std::vector<double>& omega1() const { return omega1_; }
  double omega0() const { return omega0_; }
  double Omega0() const { return Omega0_; }

  /// ω·ν = m·ω₁ + n₁ω₀ + n₂Ω₀, accumulated left to right.
  double dot(const MultiIndex& nu) const;
  /// Euclidean norm of the full vector.
  double norm() const;
  /// Default divisor floor 1e-12·‖ω‖.
  double default_divisor_floor() const { return 1e-12 * norm(); }

  FrequencyVector with_Omega0(double Omega0) const { return {omega1_, omega0_, Omega0}; }

 private:
  std::vector<double> omega1_;
  double omega0_;
  double Omega0_;
};

/// |c_ν| ≤ envelope·e^{−κ|ν|}
struct DecayEstimate {
  double envelope = 0.0;
  double kappa = 0.0;
  bool decaying = false;
};

/// Finite quasi-periodic Fourier series Σ c_ν e^{iω·ν t}, stored sparsely.
class FourierSeries {
 public:
  using Terms = std::map<MultiIndex, Complex>;

  explicit FourierSeries(std::size_t A = 0) : A_(A) {}
  FourierSeries(std::size_t A, std::initializer_list<std::pair<MultiIndex, Complex>> terms);

  /// Constant series c (the δ₀ series when c = 1).
  static FourierSeries constant(std::size_t A, Complex c);

  std::size_t A() const { return A_; }
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Complex coeff(const MultiIndex& nu) const;
  /// Replaces the coefficient; magnitudes ≤ prune_tol (or below the
  /// underflow floor) remove the entry.
  void set(const MultiIndex& nu, Complex c, double prune_tol = 0.0);
  /// Adds into the coefficient, then prunes that entry.
  void accumulate(const MultiIndex& nu, Complex c, double prune_tol = 0.0);

  double l1_norm() const;
  double max_abs() const;
  /// Largest |ν| in the support (0 if empty).
  int max_order() const;

  /// Marks (or unmarks) the series as the expansion of a real function.
  void mark_real_valued(bool flag) { real_valued_ = flag; }
  bool marked_real_valued() const { return real_valued_; }
  /// c_{−ν} = conj(c_ν) for every stored ν, to tol·max|c|.
  bool is_conjugate_symmetric(double tol = 1e-12) const;

  const std::optional<DecayEstimate>& decay_estimate() const { return decay_; }
  void set_decay_estimate(DecayEstimate d) { decay_ = d; }

  FourierSeries scaled(Complex s) const;
  /// Series of the complex conjugate function: ν ↦ conj(c_{−ν}).
  FourierSeries conj_reversed() const;
  /// Time derivative: c_ν ↦ i(ω·ν)c_ν.
  FourierSeries derivative(const FrequencyVector& omega) const;
  /// Same series in dimension A' ≥ A (indices padded with zeros).
  FourierSeries lifted(std::size_t A) const;
  /// Drops coefficients with magnitude ≤ tol.
  FourierSeries pruned(double tol) const;

  bool operator==(const FourierSeries& o) const { return A_ == o.A_ && terms_ == o.terms_; }

 private:
  std::size_t A_;
  Terms terms_;
  bool real_valued_ = false;
  std::optional<DecayEstimate> decay_;
};

struct Product {
  FourierSeries series;
  /// Σ|f_μ||g_ρ| over pairs whose sum index exceeds the cutoff.
  double discarded_l1 = 0.0;
};

FourierSeries add(const FourierSeries& f, const FourierSeries& g, double prune_tol = 0.0);
FourierSeries sub(const FourierSeries& f, const FourierSeries& g, double prune_tol = 0.0);

/// Convolution restricted to |ν| ≤ cutoff. Each output coefficient is
/// accumulated in the fixed (f-index, g-index) order, so the result does not
/// depend on how the work is split.
Product mul(const FourierSeries& f, const FourierSeries& g, int cutoff = kNoCutoff,
            double prune_tol = 0.0);

/// ⟨f⟩ = f₀.
Complex average(const FourierSeries& f);

/// Zero-average primitive Σ_{ν≠0} f_ν/(iω·ν) e^{iω·ν t}.
///
/// Throws NonzeroAverage when |f₀| > average_tol and ResonantMode when some
/// stored ν has |ω·ν| < divisor_floor. A negative divisor_floor selects the
/// default 1e-12·‖ω‖.
FourierSeries primitive(const FourierSeries& f, const FrequencyVector& omega,
                        double divisor_floor = -1.0, double average_tol = 1e-12);

Complex evaluate(const FourierSeries& f, const FrequencyVector& omega, double t);

/// Least-squares fit of log|c_ν| against |ν|. κ is minus the slope; the
/// envelope is the smallest constant making the bound hold at every stored ν.
/// Needs at least three distinct |ν| shells.
DecayEstimate fit_decay(const FourierSeries& f);

}  // namespace hillq

#endif  // HILLQ_FOURIER_HPP
