#include "evt/hfun.hpp"
#include "evt/errors.hpp"

#include <cmath>

namespace evt {

double h(double rho, double lambda) {
    if (!(lambda > 0.0)) {
        throw DomainError("h: lambda must be positive");
    }
    const double ln = std::log(lambda);
    if (rho == 0.0) {
        return ln;
    }
    return std::expm1(rho * ln) / rho;
}

double h_inv(double rho, double x) {
    if (rho == 0.0) {
        return std::exp(x);
    }
    const double arg = 1.0 + rho * x;
    if (!(arg > 0.0)) {
        throw DomainError("h_inv: x outside h_rho(R+)");
    }
    return std::exp(std::log1p(rho * x) / rho);
}

namespace {

// d/drho h_rho(lambda) = (rho*lambda^rho*log(lambda) - (lambda^rho - 1))/rho^2
double dh_drho(double rho, double ln) {
    const double lr = std::exp(rho * ln);
    return (rho * lr * ln - std::expm1(rho * ln)) / (rho * rho);
}

} // namespace

double kappa(double rho, double lambda, double iota) {
    if (!(lambda > 0.0)) {
        throw DomainError("kappa: lambda must be positive");
    }
    if (!(iota > 1.0)) {
        throw DomainError("kappa: iota must exceed 1");
    }
    const double L = std::log(lambda);
    const double I = std::log(iota);
    if (std::abs(rho) < 1e-4) {
        // ratio h_rho(lambda)/h_rho(iota) = (L/I)(1 + c1*rho + c2*rho^2 + c3*rho^3 + ...)
        //   c1 = (L-I)/2, c2 = L^2/6 - L*I/4 + I^2/12, c3 = L(L-I)^2/24
        const double c1 = 0.5 * (L - I);
        const double c2 = L * L / 6.0 - L * I / 4.0 + I * I / 12.0;
        const double c3 = L * (L - I) * (L - I) / 24.0;
        return (L / I) * (c1 + 2.0 * c2 * rho + 3.0 * c3 * rho * rho);
    }
    const double hl = std::expm1(rho * L) / rho;
    const double hi = std::expm1(rho * I) / rho;
    return (dh_drho(rho, L) * hi - hl * dh_drho(rho, I)) / (hi * hi);
}

} // namespace evt
