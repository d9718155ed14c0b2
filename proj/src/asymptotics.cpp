#include "evt/asymptotics.hpp"
#include "evt/errors.hpp"
#include "evt/estimators.hpp"
#include "evt/hfun.hpp"
#include "evt/normal.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace evt {

namespace {

// sd of Z_{n,iota} = (rho_hat - a_iota(y_n)) y_n sqrt(k2) h_rho(iota)
double z_sd(double rho, double iota) {
    return std::pow(iota, rho - 2.0) / std::log(iota);
}

AsymptoticBand band_from(double center, double sd, double level) {
    AsymptoticBand b;
    b.center = center;
    b.sd = sd;
    b.level = level;
    const double zq = norm_ppf(0.5 * (1.0 + level));
    b.low = center - zq * sd;
    b.high = center + zq * sd;
    return b;
}

} // namespace

double rho_sd(double rho, double iota, double y_n, long k2) {
    if (k2 < 1) {
        throw DomainError("rho_sd: k2 must be at least 1");
    }
    return z_sd(rho, iota) /
           (y_n * std::sqrt(static_cast<double>(k2)) * h(rho, iota));
}

AsymptoticBand nu_band(double rho, double iota, double lambda, double y_n, long k2,
                       double center, double level) {
    if (!(lambda > 0.0)) {
        throw DomainError("nu_band: lambda must be positive");
    }
    const double sd = std::pow(lambda, -rho) * std::abs(kappa(rho, lambda, iota)) *
                      z_sd(rho, iota) / (y_n * std::sqrt(static_cast<double>(k2)));
    return band_from(center, sd, level);
}

AsymptoticBand q_band(double rho, double iota, double lambda, double y_n, long k2,
                      double q_prime_at_yn, double center, Family family, double q_at_yn,
                      double level) {
    if (!(q_prime_at_yn > 0.0)) {
        throw DomainError("q_band: q'(y_n) must be positive");
    }
    const double base =
        std::abs(kappa(rho, lambda, iota)) * z_sd(rho, iota) / std::sqrt(static_cast<double>(k2));
    if (family == Family::LogGW) {
        if (!(q_at_yn > 0.0) || !(center > 0.0)) {
            throw DomainError("q_band: logGW band needs positive q(y_n) and center");
        }
        const double sd_log = (q_prime_at_yn / q_at_yn) * base;
        AsymptoticBand b;
        b.center = center;
        b.sd = sd_log;
        b.level = level;
        const double zq = norm_ppf(0.5 * (1.0 + level));
        b.low = center * std::exp(-zq * sd_log);
        b.high = center * std::exp(zq * sd_log);
        return b;
    }
    return band_from(center, q_prime_at_yn * base, level);
}

double smirnov_stat(const TailModel& model, int m, const KSchedule& sched,
                    std::span<const double> sample) {
    if (m < 0 || m > 2) {
        throw DomainError("smirnov_stat: m must be 0, 1 or 2");
    }
    const long k_m = m == 0 ? sched.k0 : (m == 1 ? sched.k1 : sched.k2);
    const long ks[1] = {k_m};
    const double x = select_order_stats(sample, ks)[0];
    const double iota_hat = model.q_inv(x) / sched.y_n;
    const double iota_m = std::pow(sched.iota, static_cast<double>(m));
    return sched.y_n * (iota_hat - iota_m) * std::sqrt(static_cast<double>(k_m));
}

double kolmogorov_sf(double x) {
    if (x <= 0.0) {
        return 1.0;
    }
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * x * x);
        sum += (j % 2 == 1 ? term : -term);
        if (term < 1e-16) {
            break;
        }
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KSResult ks_test_normal(std::span<const double> values) {
    if (values.empty()) {
        throw DomainError("ks_test_normal: empty sample");
    }
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double f = norm_cdf(v[i]);
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    }
    KSResult r;
    r.statistic = d;
    r.p_value = kolmogorov_sf(std::sqrt(n) * d);
    return r;
}

} // namespace evt
