#include "evt/models.hpp"
#include "evt/errors.hpp"
#include "evt/hfun.hpp"
#include "evt/normal.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace evt {

double TailModel::U(double t) const {
    if (!(t > 1.0)) {
        throw DomainError(name + ": U defined on (1,inf)");
    }
    return q_fn(std::log(t));
}

double TailModel::q(double y) const {
    if (!(y > 0.0)) {
        throw DomainError(name + ": q defined on (0,inf)");
    }
    return q_fn(y);
}

double TailModel::q_inv(double x) const {
    if (q_inv_fn) {
        return q_inv_fn(x);
    }
    return q_inv_numeric(*this, x);
}

double TailModel::q_prime(double y) const {
    if (!(y > 0.0)) {
        throw DomainError(name + ": q_prime defined on (0,inf)");
    }
    const double step = 1e-6 * y;
    return (q_fn(y + step) - q_fn(y - step)) / (2.0 * step);
}

double q_inv_numeric(const TailModel& model, double x) {
    // Monotone bisection safeguarded Newton on y with q(y) = x,
    // bracket grown inside (1e-12, 700].
    double lo = 1e-12;
    double hi = 1.0;
    if (model.q_fn(lo) > x) {
        throw DomainError(model.name + ": q_inv argument below q(0+)");
    }
    while (model.q_fn(hi) < x) {
        hi *= 2.0;
        if (hi > 700.0) {
            throw NumericError(model.name + ": q_inv bracket not found below y=700");
        }
    }
    double y = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double fy = model.q_fn(y) - x;
        if (std::abs(fy) <= 1e-12 * (1.0 + std::abs(x))) {
            return y;
        }
        if (fy > 0.0) {
            hi = y;
        } else {
            lo = y;
        }
        const double step = 1e-7 * y;
        const double deriv = (model.q_fn(y + step) - model.q_fn(y - step)) / (2.0 * step);
        double next = deriv > 0.0 ? y - fy / deriv : y;
        if (!(next > lo) || !(next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (next == y) {
            return y; // interval exhausted at double precision
        }
        y = next;
    }
    return y;
}

namespace {

std::vector<double> parse_params(const std::string& name, std::size_t open) {
    if (name.back() != ')') {
        throw ConfigError("model '" + name + "': malformed parameter list");
    }
    std::vector<double> out;
    std::stringstream ss(name.substr(open + 1, name.size() - open - 2));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(tok, &pos);
        } catch (const std::exception&) {
            throw ConfigError("model '" + name + "': bad parameter '" + tok + "'");
        }
        while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
        if (pos != tok.size()) {
            throw ConfigError("model '" + name + "': bad parameter '" + tok + "'");
        }
        out.push_back(v);
    }
    return out;
}

TailModel make_normal() {
    TailModel m;
    m.name = "normal";
    m.q_fn = [](double y) { return norm_ppf_upper(std::exp(-y)); };
    m.q_inv_fn = [](double x) { return norm_logsf(x); };
    m.gamma_true = 0.0;
    m.rho_gw_true = 0.5;
    m.rho_loggw_true = 0.0;
    return m;
}

TailModel make_lognormal() {
    TailModel m;
    m.name = "lognormal";
    m.q_fn = [](double y) { return std::exp(norm_ppf_upper(std::exp(-y))); };
    m.q_inv_fn = [](double x) {
        if (!(x > 0.0)) {
            throw DomainError("lognormal: q_inv argument must be positive");
        }
        return norm_logsf(std::log(x));
    };
    m.gamma_true = 0.0;
    m.rho_loggw_true = 0.5;
    return m;
}

TailModel make_pareto_like() {
    TailModel m;
    m.name = "pareto_like";
    // U(t) = t(1 + 2(log t)^2) - 1
    m.q_fn = [](double y) { return std::exp(y) * (1.0 + 2.0 * y * y) - 1.0; };
    m.gamma_true = 1.0;
    m.rho_loggw_true = 1.0;
    return m;
}

TailModel make_burr() {
    TailModel m;
    m.name = "burr";
    // Burr(1, 1/4, 4): U(t) = (t^{1/4} - 1)^4
    m.q_fn = [](double y) {
        const double e = std::expm1(y / 4.0);
        return e * e * e * e;
    };
    m.q_inv_fn = [](double x) {
        if (!(x >= 0.0)) {
            throw DomainError("burr: q_inv argument must be nonnegative");
        }
        return 4.0 * std::log1p(std::pow(x, 0.25));
    };
    m.gamma_true = 1.0;
    m.rho_loggw_true = 1.0;
    return m;
}

TailModel make_slowvar_exp() {
    TailModel m;
    m.name = "slowvar_exp";
    m.q_fn = [](double y) { return std::exp(y / std::log(y + 1.0) - 1.0); };
    m.gamma_true = 0.0;
    m.rho_loggw_true = 1.0;
    return m;
}

TailModel make_exact_weibull(double theta) {
    if (!(theta > 0.0)) {
        throw ConfigError("exact_weibull: theta must be positive");
    }
    TailModel m;
    m.name = "exact_weibull(" + std::to_string(theta) + ")";
    m.q_fn = [theta](double y) { return std::pow(y, theta); };
    m.q_inv_fn = [theta, name = m.name](double x) {
        if (!(x > 0.0)) {
            throw DomainError(name + ": q_inv argument must be positive");
        }
        return std::pow(x, 1.0 / theta);
    };
    m.rho_gw_true = theta;
    return m;
}

TailModel make_exact_gw(double alpha, double beta, double rho) {
    if (!(beta > 0.0)) {
        throw ConfigError("exact_gw: beta must be positive");
    }
    TailModel m;
    m.name = "exact_gw(" + std::to_string(alpha) + "," + std::to_string(beta) + "," +
             std::to_string(rho) + ")";
    m.q_fn = [alpha, beta, rho](double y) { return alpha + beta * h(rho, y); };
    m.q_inv_fn = [alpha, beta, rho](double x) { return h_inv(rho, (x - alpha) / beta); };
    if (rho < 0.0) {
        m.q_sup = alpha + beta * (-1.0 / rho); // h_rho(inf) = -1/rho
    }
    m.rho_gw_true = rho;
    return m;
}

TailModel make_exact_loggw(double c, double rho) {
    if (!(c > 0.0)) {
        throw ConfigError("exact_loggw: c must be positive");
    }
    TailModel m;
    m.name = "exact_loggw(" + std::to_string(c) + "," + std::to_string(rho) + ")";
    m.q_fn = [c, rho](double y) { return std::exp(c * h(rho, y)); };
    m.q_inv_fn = [c, rho, name = m.name](double x) {
        if (!(x > 0.0)) {
            throw DomainError(name + ": q_inv argument must be positive");
        }
        return h_inv(rho, std::log(x) / c);
    };
    if (rho < 0.0) {
        m.q_sup = std::exp(c * (-1.0 / rho));
    }
    m.rho_loggw_true = rho;
    return m;
}

} // namespace

TailModel make_model(const std::string& name) {
    const std::size_t open = name.find('(');
    const std::string base = name.substr(0, open);
    std::vector<double> par;
    if (open != std::string::npos) {
        par = parse_params(name, open);
    }
    auto expect = [&](std::size_t k) {
        if (par.size() != k) {
            throw ConfigError("model '" + name + "': expected " + std::to_string(k) +
                              " parameter(s)");
        }
    };
    if (base == "normal") {
        expect(0);
        return make_normal();
    }
    if (base == "lognormal") {
        expect(0);
        return make_lognormal();
    }
    if (base == "pareto_like") {
        expect(0);
        return make_pareto_like();
    }
    if (base == "burr") {
        expect(0);
        return make_burr();
    }
    if (base == "slowvar_exp") {
        expect(0);
        return make_slowvar_exp();
    }
    if (base == "exact_weibull") {
        expect(1);
        return make_exact_weibull(par[0]);
    }
    if (base == "exact_gw") {
        expect(3);
        return make_exact_gw(par[0], par[1], par[2]);
    }
    if (base == "exact_loggw") {
        expect(2);
        return make_exact_loggw(par[0], par[1]);
    }
    throw ConfigError("unknown model '" + name + "'");
}

} // namespace evt
