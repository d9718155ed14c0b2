#include "evt/approx.hpp"
#include "evt/errors.hpp"
#include "evt/hfun.hpp"

#include <cmath>
#include <limits>

namespace evt {

const char* family_name(Family f) {
    switch (f) {
        case Family::GW: return "gw";
        case Family::LogGW: return "loggw";
        case Family::GP: return "gp";
    }
    return "?";
}

Family family_from_name(const std::string& s) {
    if (s == "gw" || s == "GW") return Family::GW;
    if (s == "loggw" || s == "logGW" || s == "log-gw") return Family::LogGW;
    if (s == "gp" || s == "GP") return Family::GP;
    throw ConfigError("unknown estimator family '" + s + "'");
}

namespace {

double slope_from_values(double q0, double q1, double q2, double iota, const char* what) {
    const double s1 = std::abs(q1 - q0);
    const double s2 = std::abs(q2 - q1);
    if (s1 == 0.0 || s2 == 0.0) {
        throw DegenerateSpacing(std::string(what) + ": zero spacing");
    }
    return (std::log(s2) - std::log(s1)) / std::log(iota);
}

void check_iota_y(double iota, double y) {
    if (!(iota > 1.0)) {
        throw DomainError("iota must exceed 1");
    }
    if (!(y > 0.0)) {
        throw DomainError("y must be positive");
    }
}

} // namespace

double a_gw(const TailModel& model, double iota, double y) {
    check_iota_y(iota, y);
    return slope_from_values(model.q(y), model.q(y * iota), model.q(y * iota * iota), iota,
                             "a_gw");
}

double a_loggw(const TailModel& model, double iota, double y) {
    check_iota_y(iota, y);
    const double q0 = model.q(y);
    const double q1 = model.q(y * iota);
    const double q2 = model.q(y * iota * iota);
    if (!(q0 > 0.0) || !(q1 > 0.0) || !(q2 > 0.0)) {
        throw DomainError("a_loggw: q must be positive on the spacing grid");
    }
    return slope_from_values(std::log(q0), std::log(q1), std::log(q2), iota, "a_loggw");
}

double g_gw(const TailModel& model, double iota, double y) {
    const double rho = a_gw(model, iota, y);
    return (model.q(y * iota) - model.q(y)) / h(rho, iota);
}

double g_loggw(const TailModel& model, double iota, double y) {
    const double rho = a_loggw(model, iota, y);
    return (std::log(model.q(y * iota)) - std::log(model.q(y))) / h(rho, iota);
}

PenultimateApprox make_approx(const TailModel& model, Family family, double iota, double y) {
    if (family == Family::GW) {
        return {Family::GW, y, a_gw(model, iota, y), g_gw(model, iota, y), model.q(y)};
    }
    if (family == Family::LogGW) {
        return {Family::LogGW, y, a_loggw(model, iota, y), g_loggw(model, iota, y), model.q(y)};
    }
    throw ConfigError("make_approx: no deterministic GP approximation");
}

double approx_eval(const PenultimateApprox& a, double z) {
    if (!(z > 0.0)) {
        throw DomainError("approx_eval: z must be positive");
    }
    const double hz = h(a.rho_tilde, z / a.base_y);
    if (a.family == Family::LogGW) {
        return a.base_q * std::exp(a.g_tilde * hz);
    }
    return a.base_q + a.g_tilde * hz;
}

double nu(const TailModel& model, const PenultimateApprox& a, double z) {
    const double value = approx_eval(a, z);
    if (value >= model.q_sup) {
        return std::numeric_limits<double>::infinity();
    }
    // continuous F: q_inv(q(z)) = z
    return model.q_inv(value) / z - 1.0;
}

std::pair<double, double> survival_form(const TailModel& model, double rho, double g_of_y,
                                        double y, double x) {
    if (!(g_of_y > 0.0)) {
        throw DomainError("survival_form: scale must be positive");
    }
    const double lhs = std::exp(-model.q_inv(x * g_of_y + model.q(y)) / y);
    const double rhs = std::exp(-h_inv(rho, x));
    return {lhs, rhs};
}

} // namespace evt
