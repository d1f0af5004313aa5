#ifndef HILLQ_TESTS_SUPPORT_HPP
#define HILLQ_TESTS_SUPPORT_HPP

#include <cmath>
#include <vector>

#include "hillq/floquet.hpp"
#include "hillq/fourier.hpp"

namespace testing {

inline const double kSqrt2 = std::sqrt(2.0);
inline const double kSqrt3 = std::sqrt(3.0);
/// Base frequency of the smoke problem; keeps (ω₁, ω₀, Ω₀) = (√2, 1+√5, 1)
/// rationally independent.
inline const double kOmega0 = 1.0 + std::sqrt(5.0);

/// cos(w·t) on the first of A quasi-periodic frequencies.
inline hillq::FourierSeries cosine(std::size_t A = 1, std::size_t which = 0) {
  std::vector<int> m(A, 0);
  m[which] = 1;
  std::vector<int> mm(A, 0);
  mm[which] = -1;
  return hillq::FourierSeries(A, {{hillq::MultiIndex(m, 0, 0), 0.5}, {hillq::MultiIndex(mm, 0, 0), 0.5}});
}

/// p₀ = a + 2b·cos(ω₀t)
inline hillq::PeriodicPotential mathieu(double omega0, double a, double b) {
  return {omega0, {{-1, b}, {0, a}, {1, b}}};
}

}  // namespace testing

#endif
