#ifndef HILLQ_PROBLEM_HPP
#define HILLQ_PROBLEM_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hillq/floquet.hpp"
#include "hillq/fourier.hpp"
#include "hillq/verify.hpp"

namespace hillq {

/// Acceptance tolerances used by the verify command.
struct Tolerances {
  double rotation = 5e-8;          ///< floor of the rotation-number test
  double rotation_se_factor = 3.0; ///< ... or this many fit standard errors
  double lyapunov = 1e-3;
  double reconstruction = 1e-5;    ///< relative, sup over the reconstruction window
  double reconstruction_window = 100.0;
  double step_check = 1e-8;
  double compat = 1e-12;           ///< compatibility residual relative to its scale
  double reality = 1e-10;          ///< max|Re G| / max(1, max|G|)
  double residual_slope = 0.3;
};

/// A Hill problem with everything the pipeline needs, as read from JSON.
struct ProblemSpec {
  std::string name;
  std::size_t A = 0;
  std::vector<double> omega1;
  double omega0 = 1.0;
  /// (n, P_n)
  std::vector<std::pair<int, Complex>> p0_coeffs;
  /// (m, p_m)
  std::vector<std::pair<std::vector<int>, Complex>> p1_coeffs;
  std::vector<double> eps{0.01};
  int order = 4;
  std::optional<int> cutoff;
  double tau = 2.5;
  std::optional<double> tau1;
  double C1_factor = 1.0 / 3.0;
  std::optional<int> n0;
  Tolerances tolerances;
  std::uint64_t seed = 0;

  int floquet_grid = 1024;
  double eps0 = 0.1;
  int bands = 9;
  int scan_grid = 512;
  int scan_box = 30;
  double horizon = 1000.0;
  double step = 0.01;

  PeriodicPotential p0() const;
  FourierSeries p1() const;
  HillProblem hill() const;
};

/// Parses and validates a problem document. Unknown keys, wrong types,
/// broken conjugate symmetry and out-of-range values raise SchemaError.
ProblemSpec parse_problem(const std::string& json_text);
/// Reads a file and parses it; unreadable files raise SchemaError too.
ProblemSpec load_problem(const std::string& path);

}  // namespace hillq

#endif  // HILLQ_PROBLEM_HPP
