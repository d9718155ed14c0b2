#pragma once

namespace evt {

// Standard normal CDF via erfc; accurate in both tails.
double norm_cdf(double x);

// -log(1 - Phi(x)), evaluated as -log(erfc(x/sqrt(2))/2). Stable far into
// the upper tail (x up to ~37) where 1 - Phi underflows in direct form.
double norm_logsf(double x);

// Upper-tail inverse: x with 1 - Phi(x) = p, valid for p in (0, 1).
// Acklam's rational initial guess refined by Newton on the log-survival
// function; relative error at double precision over the full range.
double norm_ppf_upper(double p);

// Phi^{-1}(p) for p in (0, 1).
double norm_ppf(double p);

} // namespace evt
