#pragma once

#include "evt/models.hpp"

#include <utility>

namespace evt {

enum class Family { GW, LogGW, GP };

const char* family_name(Family f);
Family family_from_name(const std::string& s); // gw | loggw | gp

// Penultimate quantile approximation anchored at base_y:
//   GW:    base_q + g_tilde * h(rho_tilde, z/base_y)
//   logGW: base_q * exp(g_tilde * h(rho_tilde, z/base_y))
struct PenultimateApprox {
    Family family;
    double base_y;
    double rho_tilde;
    double g_tilde;
    double base_q;
};

// Finite-difference slope functionals whose limits are the GW / log-GW
// indices, and the matching scale functionals.
double a_gw(const TailModel& model, double iota, double y);
double a_loggw(const TailModel& model, double iota, double y);
double g_gw(const TailModel& model, double iota, double y);
double g_loggw(const TailModel& model, double iota, double y);

// Approximation with (a_iota, g_iota) anchors at y.
PenultimateApprox make_approx(const TailModel& model, Family family, double iota, double y);

double approx_eval(const PenultimateApprox& a, double z);

// Probability-based approximation error: q_inv(approx(z))/z - 1 for the
// continuous models supplied here; +inf when the approximation exceeds q(inf).
double nu(const TailModel& model, const PenultimateApprox& a, double z);

// Survival-form convergence diagnostic:
//   lhs = exp(-q_inv(x*g_of_y + q(y))/y), rhs = exp(-h_inv(rho, x)).
std::pair<double, double> survival_form(const TailModel& model, double rho, double g_of_y,
                                        double y, double x);

} // namespace evt
