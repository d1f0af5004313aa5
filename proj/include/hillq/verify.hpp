#ifndef HILLQ_VERIFY_HPP
#define HILLQ_VERIFY_HPP

#include <iosfwd>
#include <vector>

#include "hillq/floquet.hpp"
#include "hillq/fourier.hpp"
#include "hillq/lindstedt.hpp"

namespace hillq {

struct ProbeSample {
  double t = 0.0;
  Complex phi{};
  Complex dphi{};
};

struct TrajectoryProbe {
  double horizon = 0.0;
  double step = 0.0;
  std::vector<ProbeSample> samples;
  /// |φ(T)| relative change when the step is halved (self-check).
  double step_check = 0.0;
};

struct InitialState {
  Complex phi{1.0, 0.0};
  Complex dphi{0.0, 1.0};
};

/// Hill equation φ̈ + (p₀(t) + εp₁(t))φ = 0 with p₀ on ω₀ and p₁ on ω₁.
struct HillProblem {
  PeriodicPotential p0;
  FourierSeries p1{0};
  std::vector<double> omega1;

  double potential(double t, double eps) const;
};

/// Fixed-step 8th-order integration over [0, horizon]; every step is
/// sampled. Repeats with step/2 and throws StepTooLarge when the endpoint
/// changes by more than check_tol relative.
TrajectoryProbe integrate_hill(const HillProblem& problem, double eps, const InitialState& init,
                               double horizon, double step, double check_tol = 1e-8);

/// Same, starting from φ₀(0) = 1, φ̇₀(0) = i g₀(0).
TrajectoryProbe integrate_hill(const HillProblem& problem, double eps, const FloquetData& fd,
                               double horizon, double step, double check_tol = 1e-8);

/// sup over `grid` times t_j = j·span/grid of |u̇ − R − εQu²|, evaluating u,
/// Q, R and the derivative series of u pointwise. span ≤ 0 picks
/// 2π/min(ω₀, |ω₁|).
double riccati_residual(const FourierSeries& u, const FourierSeries& Q, const FourierSeries& R,
                        const FrequencyVector& omega, double eps, int grid, double span = -1.0);

enum class FitWindow { uniform, hann };

struct RotationFit {
  double rotation = 0.0;
  double std_error = 0.0;
  double min_modulus = 0.0;
};

/// Slope of the unwrapped arg φ(t) against t by (weighted) least squares.
/// The Hann window suppresses the end effects of bounded quasi-periodic phase
/// oscillations. Throws PhaseWindingAmbiguous if |φ| dips below 1e-6·max|φ|.
RotationFit extract_rotation(const TrajectoryProbe& probe, FitWindow window = FitWindow::hann);

/// Least-squares slope of log‖(φ, φ̇)‖ against t.
double lyapunov_estimate(const TrajectoryProbe& probe);

/// φ(t) = φ₀(t)·exp(i∫₀ᵗ g) with g = iεQ·Σε^k u^(k), split into the linear
/// phase (Ω_ε − Ω₀)t and a zero-average primitive.
class PhiReconstruction {
 public:
  PhiReconstruction(const FloquetData& fd, const PerturbationResult& result, const FourierSeries& Q,
                    const std::vector<double>& omega1, double eps);

  Complex operator()(double t) const;
  Complex derivative(double t) const;
  InitialState initial_state() const { return {(*this)(0.0), derivative(0.0)}; }

  /// g = iεQu with every index on n₂ = 0.
  const FourierSeries& g() const { return g_; }
  /// ⟨g⟩ = Ω_ε − Ω₀.
  Complex mean_g() const { return mean_; }
  const FrequencyVector& frequencies() const { return omega_; }

 private:
  const FloquetData* fd_;
  FrequencyVector omega_;
  FourierSeries g_;
  FourierSeries g_primitive_;
  Complex mean_{};
  Complex primitive_at_zero_{};
};

/// Convenience wrapper over PhiReconstruction.
Complex reconstruct_phi(const FloquetData& fd, const PerturbationResult& result,
                        const FourierSeries& Q, const std::vector<double>& omega1, double eps,
                        double t);

/// Writes "t,re_phi,im_phi,abs_phi" rows.
void write_probe_csv(std::ostream& os, const TrajectoryProbe& probe, std::size_t stride = 1);

}  // namespace hillq

#endif  // HILLQ_VERIFY_HPP
