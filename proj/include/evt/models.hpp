#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>

namespace evt {

// Analytic test distribution exposing the tail quantile function
// U (left-continuous inverse of 1/(1-F)), q = U o exp, its inverse and a
// numeric derivative, plus the true tail indices where defined.
// Immutable after construction.
class TailModel {
  public:
    std::string name;
    std::function<double(double)> q_fn;              // y > 0 -> quantile
    std::function<double(double)> q_inv_fn;          // closed form; may be empty
    double q_sup = std::numeric_limits<double>::infinity(); // q(inf)
    std::optional<double> gamma_true;      // GP index
    std::optional<double> rho_gw_true;     // index of q in ERV
    std::optional<double> rho_loggw_true;  // index of log q in ERV

    double U(double t) const;        // t > 1
    double q(double y) const;        // y > 0
    // q^{-1}: closed form when available, otherwise bracketed monotone
    // root finding to |q(y) - x| <= 1e-12 * (1 + |x|).
    double q_inv(double x) const;
    // Central finite difference with relative step 1e-6 * y.
    double q_prime(double y) const;
};

// name in {normal, lognormal, pareto_like, burr, slowvar_exp,
//          exact_weibull(theta), exact_gw(alpha,beta,rho), exact_loggw(c,rho)}.
// Parameterised names carry their arguments in parentheses.
TailModel make_model(const std::string& name);

// Root-finding fallback behind TailModel::q_inv; exposed for tests.
double q_inv_numeric(const TailModel& model, double x);

} // namespace evt
