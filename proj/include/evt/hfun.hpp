#pragma once

namespace evt {

// Box-Cox-type function h_rho(lambda) = (lambda^rho - 1)/rho, log(lambda) at
// rho = 0, evaluated as expm1(rho*log(lambda))/rho so the two branches agree
// near rho = 0. Strictly increasing in lambda, h_rho(1) = 0.
// Throws DomainError for lambda <= 0.
double h(double rho, double lambda);

// Inverse of h_rho: (1 + rho*x)^(1/rho), exp(x) at rho = 0.
// Requires 1 + rho*x > 0; throws DomainError otherwise.
double h_inv(double rho, double x);

// kappa_rho(lambda, iota) = d/drho [ h_rho(lambda) / h_rho(iota) ].
// Closed form away from zero; second-order series in rho for
// |rho| < 1e-4 where the closed form is 0/0.
double kappa(double rho, double lambda, double iota);

} // namespace evt
