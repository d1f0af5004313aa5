#include "hillq/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hillq/errors.hpp"

namespace hillq {

FrequencyVector::FrequencyVector(std::vector<double> omega1, double omega0, double Omega0)
    : omega1_(std::move(omega1)), omega0_(omega0), Omega0_(Omega0) {
  for (double w : omega1_)
    if (!std::isfinite(w)) throw std::invalid_argument("FrequencyVector: non-finite omega1 entry");
  if (!std::isfinite(omega0_) || !(omega0_ > 0.0))
    throw std::invalid_argument("FrequencyVector: omega0 must be finite and positive");
  if (!std::isfinite(Omega0_)) throw std::invalid_argument("FrequencyVector: non-finite Omega0");
}

double FrequencyVector::dot(const MultiIndex& nu) const {
  if (nu.A() != omega1_.size()) throw DimensionMismatch("FrequencyVector::dot: dimension mismatch");
  double s = 0.0;
  const auto m = nu.m();
  for (std::size_t i = 0; i < m.size(); ++i) s += m[i] * omega1_[i];
  s += nu.n1() * omega0_;
  s += nu.n2() * Omega0_;
  return s;
}

double FrequencyVector::norm() const {
  double s = omega0_ * omega0_ + Omega0_ * Omega0_;
  for (double w : omega1_) s += w * w;
  return std::sqrt(s);
}

namespace {

bool keep(Complex c, double prune_tol) {
  const double a = std::abs(c);
  return a >= kUnderflowFloor && a > prune_tol;
}

void check_dim(const FourierSeries& f, const MultiIndex& nu) {
  if (nu.A() != f.A()) throw DimensionMismatch("FourierSeries: index dimension does not match series");
}

}  // namespace

FourierSeries::FourierSeries(std::size_t A,
                             std::initializer_list<std::pair<MultiIndex, Complex>> terms)
    : A_(A) {
  for (const auto& [nu, c] : terms) accumulate(nu, c);
}

FourierSeries FourierSeries::constant(std::size_t A, Complex c) {
  FourierSeries f(A);
  f.set(MultiIndex::zero(A), c);
  return f;
}

Complex FourierSeries::coeff(const MultiIndex& nu) const {
  auto it = terms_.find(nu);
  return it == terms_.end() ? Complex{} : it->second;
}

void FourierSeries::set(const MultiIndex& nu, Complex c, double prune_tol) {
  check_dim(*this, nu);
  if (keep(c, prune_tol))
    terms_[nu] = c;
  else
    terms_.erase(nu);
}

void FourierSeries::accumulate(const MultiIndex& nu, Complex c, double prune_tol) {
  check_dim(*this, nu);
  auto [it, inserted] = terms_.try_emplace(nu, c);
  if (!inserted) it->second += c;
  if (!keep(it->second, prune_tol)) terms_.erase(it);
}

double FourierSeries::l1_norm() const {
  double s = 0.0;
  for (const auto& [nu, c] : terms_) s += std::abs(c);
  return s;
}

double FourierSeries::max_abs() const {
  double s = 0.0;
  for (const auto& [nu, c] : terms_) s = std::max(s, std::abs(c));
  return s;
}

int FourierSeries::max_order() const {
  int s = 0;
  for (const auto& [nu, c] : terms_) s = std::max(s, nu.l1());
  return s;
}

bool FourierSeries::is_conjugate_symmetric(double tol) const {
  const double scale = std::max(max_abs(), kUnderflowFloor);
  for (const auto& [nu, c] : terms_) {
    if (std::abs(coeff(-nu) - std::conj(c)) > tol * scale) return false;
  }
  return true;
}

FourierSeries FourierSeries::scaled(Complex s) const {
  FourierSeries r(A_);
  for (const auto& [nu, c] : terms_) r.set(nu, s * c);
  r.real_valued_ = real_valued_ && s.imag() == 0.0;
  return r;
}

FourierSeries FourierSeries::conj_reversed() const {
  FourierSeries r(A_);
  for (const auto& [nu, c] : terms_) r.set(-nu, std::conj(c));
  r.real_valued_ = real_valued_;
  return r;
}

FourierSeries FourierSeries::derivative(const FrequencyVector& omega) const {
  if (omega.A() != A_) throw DimensionMismatch("derivative: frequency dimension mismatch");
  FourierSeries r(A_);
  for (const auto& [nu, c] : terms_) r.set(nu, Complex(0.0, omega.dot(nu)) * c);
  r.real_valued_ = real_valued_;
  return r;
}

FourierSeries FourierSeries::lifted(std::size_t A) const {
  FourierSeries r(A);
  for (const auto& [nu, c] : terms_) r.set(nu.lifted(A), c);
  r.real_valued_ = real_valued_;
  r.decay_ = decay_;
  return r;
}

FourierSeries FourierSeries::pruned(double tol) const {
  FourierSeries r(A_);
  for (const auto& [nu, c] : terms_) r.set(nu, c, tol);
  r.real_valued_ = real_valued_;
  return r;
}

FourierSeries add(const FourierSeries& f, const FourierSeries& g, double prune_tol) {
  if (f.A() != g.A()) throw DimensionMismatch("add: series dimensions differ");
  FourierSeries r = f.pruned(prune_tol);
  for (const auto& [nu, c] : g.terms()) r.accumulate(nu, c, prune_tol);
  r.mark_real_valued(f.marked_real_valued() && g.marked_real_valued());
  return r;
}

FourierSeries sub(const FourierSeries& f, const FourierSeries& g, double prune_tol) {
  return add(f, g.scaled(-1.0), prune_tol);
}

Product mul(const FourierSeries& f, const FourierSeries& g, int cutoff, double prune_tol) {
  if (f.A() != g.A()) throw DimensionMismatch("mul: series dimensions differ");
  if (cutoff < 0) throw std::invalid_argument("mul: cutoff must be nonnegative");
  std::map<MultiIndex, Complex> acc;
  double discarded = 0.0;
  for (const auto& [mu, a] : f.terms()) {
    for (const auto& [rho, b] : g.terms()) {
      MultiIndex nu = mu + rho;
      if (nu.l1() > cutoff) {
        discarded += std::abs(a) * std::abs(b);
        continue;
      }
      acc[std::move(nu)] += a * b;
    }
  }
  Product p{FourierSeries(f.A()), discarded};
  for (const auto& [nu, c] : acc) p.series.set(nu, c, prune_tol);
  p.series.mark_real_valued(f.marked_real_valued() && g.marked_real_valued());
  return p;
}

Complex average(const FourierSeries& f) { return f.coeff(MultiIndex::zero(f.A())); }

FourierSeries primitive(const FourierSeries& f, const FrequencyVector& omega, double divisor_floor,
                        double average_tol) {
  if (omega.A() != f.A()) throw DimensionMismatch("primitive: frequency dimension mismatch");
  const double floor = divisor_floor < 0.0 ? omega.default_divisor_floor() : divisor_floor;
  const Complex avg = average(f);
  if (std::abs(avg) > average_tol) throw NonzeroAverage("primitive: series has nonzero average");
  FourierSeries r(f.A());
  for (const auto& [nu, c] : f.terms()) {
    if (nu.is_zero()) continue;
    const double x = omega.dot(nu);
    if (std::abs(x) < floor) throw ResonantMode(nu, std::abs(x));
    r.set(nu, c / Complex(0.0, x));
  }
  r.mark_real_valued(f.marked_real_valued());
  return r;
}

Complex evaluate(const FourierSeries& f, const FrequencyVector& omega, double t) {
  if (omega.A() != f.A()) throw DimensionMismatch("evaluate: frequency dimension mismatch");
  Complex s{};
  for (const auto& [nu, c] : f.terms()) s += c * std::polar(1.0, omega.dot(nu) * t);
  return s;
}

DecayEstimate fit_decay(const FourierSeries& f) {
  std::set<int> shells;
  for (const auto& [nu, c] : f.terms()) shells.insert(nu.l1());
  if (shells.size() < 3) throw InsufficientSupport("fit_decay: need at least three |nu| shells");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(f.size());
  for (const auto& [nu, c] : f.terms()) {
    const double x = nu.l1();
    const double y = std::log(std::abs(c));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  DecayEstimate d;
  d.kappa = -slope;
  double env = 0.0;
  for (const auto& [nu, c] : f.terms()) env = std::max(env, std::abs(c) * std::exp(d.kappa * nu.l1()));
  d.envelope = env;
  d.decaying = d.kappa > 1e-8;
  return d;
}

}  // namespace hillq
