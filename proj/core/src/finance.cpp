#include "cctskit/finance.hpp"

#include <cmath>

#include "cctskit/error.hpp"

namespace cctskit::finance {

double annuity_factor(double rate, double years) {
  if (years < 0.0) throw DomainError("annuity horizon must be nonnegative");
  if (rate <= -1.0) throw DomainError("discount rate must exceed -100%");
  if (std::abs(rate) < 1e-12) return years;
  return (1.0 - std::pow(1.0 + rate, -years)) / rate;
}

double capital_recovery_factor(double rate, double years) {
  const double a = annuity_factor(rate, years);
  if (!(a > 0.0)) throw DomainError("capital recovery needs a positive horizon");
  return 1.0 / a;
}

double discount_factor(double rate, double years) {
  if (rate <= -1.0) throw DomainError("discount rate must exceed -100%");
  return std::pow(1.0 + rate, -years);
}

}  // namespace cctskit::finance
