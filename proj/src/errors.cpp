#include "hillq/errors.hpp"

#include <sstream>

namespace hillq {

namespace {

std::string resonant_message(const MultiIndex& nu, double divisor, std::optional<int> order) {
  std::ostringstream os;
  os.precision(17);
  os << "resonant mode " << nu.str() << ": |omega.nu| = " << divisor;
  if (order) os << " at order " << *order;
  return os.str();
}

std::string trace_message(double trace) {
  std::ostringstream os;
  os.precision(17);
  os << "unperturbed equation is not elliptic: |trace(monodromy)| = " << trace << " >= 2";
  return os.str();
}

}  // namespace

ResonantMode::ResonantMode(MultiIndex nu, double divisor, std::optional<int> order)
    : Error(resonant_message(nu, divisor, order)),
      nu_(std::move(nu)),
      divisor_(divisor),
      order_(order) {}

UnstableUnperturbed::UnstableUnperturbed(double trace) : Error(trace_message(trace)), trace_(trace) {}

}  // namespace hillq
