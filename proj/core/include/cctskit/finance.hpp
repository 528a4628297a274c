#pragma once

namespace cctskit::finance {

/// Present value of 1 $/y paid at the end of years 1..years. Zero rate gives `years`.
double annuity_factor(double rate, double years);

/// Inverse of annuity_factor: the capital recovery factor.
double capital_recovery_factor(double rate, double years);

/// (1 + rate)^-years.
double discount_factor(double rate, double years);

}  // namespace cctskit::finance
