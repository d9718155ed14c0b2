#include "evt/estimators.hpp"
#include "evt/asymptotics.hpp"
#include "evt/errors.hpp"
#include "evt/hfun.hpp"
#include "evt/normal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace evt {

namespace {

long floor_root_pow(long n, double exponent) {
    // floor(n^exponent) with an integer adjustment against pow rounding
    long k = static_cast<long>(std::floor(std::pow(static_cast<double>(n), exponent) + 1e-9));
    auto fits = [&](long c) {
        return c >= 1 && std::pow(static_cast<double>(c), 1.0 / exponent) <=
                             static_cast<double>(n) * (1.0 + 1e-12);
    };
    while (fits(k + 1)) ++k;
    while (k > 1 && !fits(k)) --k;
    return k;
}

long apply_eta(long n, long k2, double eta) {
    if (eta == 1.0) {
        return k2;
    }
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw ConfigError("eta must lie in (0,1]");
    }
    const double frac = std::pow(static_cast<double>(k2) / static_cast<double>(n), eta);
    return static_cast<long>(std::ceil(static_cast<double>(n) * frac - 1e-9));
}

void validate(KSchedule& s) {
    if (!(s.k2 >= 1 && s.k2 < s.k1)) {
        throw ConfigError("schedule collapse: k2=" + std::to_string(s.k2) +
                          " !< k1=" + std::to_string(s.k1));
    }
    if (!(s.k1 < s.k0)) {
        throw ConfigError("schedule collapse: k1=" + std::to_string(s.k1) +
                          " !< k0=" + std::to_string(s.k0));
    }
    if (!(s.k0 <= s.n - 1)) {
        throw ConfigError("schedule collapse: k0=" + std::to_string(s.k0) +
                          " > n-1=" + std::to_string(s.n - 1));
    }
    s.y_n = std::log(static_cast<double>(s.n) / static_cast<double>(s.k0));
}

} // namespace

KSchedule schedule_base(long n, double iota, double eta) {
    if (n < 32) {
        throw ConfigError("schedule_base: n must be at least 32");
    }
    if (!(iota > 1.0)) {
        throw ConfigError("schedule_base: iota must exceed 1");
    }
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw ConfigError("schedule_base: eta must lie in (0,1]");
    }
    KSchedule s;
    s.iota = iota;
    s.n = n;
    s.eta = eta;
    s.gp_rule = false;
    s.k2 = apply_eta(n, floor_root_pow(n, 0.25), eta);
    const double frac = static_cast<double>(s.k2) / static_cast<double>(n);
    s.k1 = static_cast<long>(
        std::floor(std::pow(frac, 1.0 / iota) * static_cast<double>(n) + 1e-9));
    s.k0 = static_cast<long>(
        std::floor(std::pow(frac, 1.0 / (iota * iota)) * static_cast<double>(n) + 1e-9));
    validate(s);
    return s;
}

KSchedule schedule_gp(long n, double iota, double eta) {
    if (n < 32) {
        throw ConfigError("schedule_gp: n must be at least 32");
    }
    if (!(iota > 1.0)) {
        throw ConfigError("schedule_gp: iota must exceed 1");
    }
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw ConfigError("schedule_gp: eta must lie in (0,1]");
    }
    KSchedule s;
    s.iota = iota;
    s.n = n;
    s.eta = eta;
    s.gp_rule = true;
    const long k0_target = floor_root_pow(n, 13.0 / 16.0);
    long k2 = static_cast<long>(std::floor(static_cast<double>(k0_target) / (iota * iota)));
    k2 = std::max<long>(k2, 1);
    s.k2 = apply_eta(n, k2, eta);
    s.k1 = static_cast<long>(std::floor(static_cast<double>(s.k2) * iota));
    s.k0 = static_cast<long>(std::floor(static_cast<double>(s.k2) * iota * iota));
    validate(s);
    return s;
}

std::vector<double> select_order_stats(std::span<const double> sample,
                                       std::span<const long> ks) {
    const long n = static_cast<long>(sample.size());
    if (n == 0) {
        throw DomainError("select_order_stats: empty sample");
    }
    for (long k : ks) {
        if (k < 1 || k > n) {
            throw DomainError("select_order_stats: k=" + std::to_string(k) +
                              " out of range for n=" + std::to_string(n));
        }
    }
    std::vector<double> work(sample.begin(), sample.end());
    // positions in ascending order so each nth_element narrows the range
    std::vector<std::pair<long, std::size_t>> pos; // (index in sorted order, output slot)
    pos.reserve(ks.size() + 1);
    for (std::size_t i = 0; i < ks.size(); ++i) {
        pos.emplace_back(n - ks[i], i);
    }
    pos.emplace_back(n - 1, ks.size()); // the maximum
    std::sort(pos.begin(), pos.end());
    std::vector<double> out(ks.size() + 1);
    long done = 0;
    for (const auto& [p, slot] : pos) {
        if (p >= done) {
            std::nth_element(work.begin() + done, work.begin() + p, work.end());
            done = p;
        }
        out[slot] = work[p];
    }
    return out;
}

OrderStats select_schedule_stats(std::span<const double> sample, const KSchedule& sched) {
    const long ks[3] = {sched.k2, sched.k1, sched.k0};
    const auto vals = select_order_stats(sample, ks);
    return OrderStats{vals[0], vals[1], vals[2], vals[3]};
}

TailEstimate estimate_gw(const OrderStats& os, const KSchedule& sched) {
    const double s2 = os.x_k2 - os.x_k1;
    const double s1 = os.x_k1 - os.x_k0;
    if (!(s1 > 0.0) || !(s2 > 0.0)) {
        throw DegenerateSpacing("estimate_gw: tied or non-increasing order statistics");
    }
    TailEstimate e;
    e.family = Family::GW;
    e.rho_hat = std::log(s2 / s1) / std::log(sched.iota);
    e.g_hat = s1 / h(e.rho_hat, sched.iota);
    e.x_k0 = os.x_k0;
    e.sample_max = os.max;
    e.schedule = sched;
    return e;
}

TailEstimate estimate_loggw(const OrderStats& os, const KSchedule& sched) {
    if (!(os.x_k0 > 0.0)) {
        throw NonpositiveThreshold("estimate_loggw: threshold order statistic must be positive");
    }
    const double l2 = std::log(os.x_k2) - std::log(os.x_k1);
    const double l1 = std::log(os.x_k1) - std::log(os.x_k0);
    if (!(l1 > 0.0) || !(l2 > 0.0)) {
        throw DegenerateSpacing("estimate_loggw: tied or non-increasing order statistics");
    }
    TailEstimate e;
    e.family = Family::LogGW;
    e.rho_hat = (std::log(l2) - std::log(l1)) / std::log(sched.iota);
    e.g_hat = l1 / h(e.rho_hat, sched.iota);
    e.x_k0 = os.x_k0;
    e.sample_max = os.max;
    e.schedule = sched;
    return e;
}

TailEstimate estimate_gp(const OrderStats& os, const KSchedule& sched) {
    if (!sched.gp_rule) {
        throw ConfigError("estimate_gp: schedule must use the GP k-rule");
    }
    TailEstimate e = estimate_gw(os, sched);
    e.family = Family::GP;
    return e;
}

TailEstimate estimate(Family family, const OrderStats& os, const KSchedule& sched) {
    switch (family) {
        case Family::GW: return estimate_gw(os, sched);
        case Family::LogGW: return estimate_loggw(os, sched);
        case Family::GP: return estimate_gp(os, sched);
    }
    throw ConfigError("estimate: unknown family");
}

TailEstimate estimate_gw(std::span<const double> sample, const KSchedule& sched) {
    return estimate_gw(select_schedule_stats(sample, sched), sched);
}

TailEstimate estimate_loggw(std::span<const double> sample, const KSchedule& sched) {
    return estimate_loggw(select_schedule_stats(sample, sched), sched);
}

TailEstimate estimate_gp(std::span<const double> sample, const KSchedule& sched) {
    return estimate_gp(select_schedule_stats(sample, sched), sched);
}

double quantile_at(const TailEstimate& est, double z, bool floor_at_max) {
    if (!(z > 0.0)) {
        throw DomainError("quantile_at: z must be positive");
    }
    double value = 0.0;
    switch (est.family) {
        case Family::GW:
            value = est.g_hat * h(est.rho_hat, z / est.schedule.y_n) + est.x_k0;
            break;
        case Family::LogGW:
            value = est.x_k0 * std::exp(est.g_hat * h(est.rho_hat, z / est.schedule.y_n));
            break;
        case Family::GP:
            value = est.g_hat * h(est.rho_hat, std::exp(z - est.schedule.y_n)) + est.x_k0;
            break;
    }
    if (floor_at_max) {
        value = std::max(value, est.sample_max);
    }
    return value;
}

double nu_hat(const TailModel& model, const TailEstimate& est, double z, bool floor_at_max) {
    const double value = quantile_at(est, z, floor_at_max);
    if (value >= model.q_sup) {
        return std::numeric_limits<double>::infinity();
    }
    double numerator;
    try {
        numerator = model.q_inv(value);
    } catch (const DomainError&) {
        numerator = 0.0; // below the support: -log(1-F) = 0
    }
    return numerator / z - 1.0;
}

std::vector<StabilityPoint> stability_profile(std::span<const double> sample, double iota,
                                              std::span<const double> eta_grid, Family family,
                                              double level) {
    std::vector<StabilityPoint> out;
    out.reserve(eta_grid.size());
    const double zq = norm_ppf(0.5 * (1.0 + level));
    for (double eta : eta_grid) {
        StabilityPoint p;
        p.eta = eta;
        try {
            const KSchedule sched = family == Family::GP
                                        ? schedule_gp(static_cast<long>(sample.size()), iota, eta)
                                        : schedule_base(static_cast<long>(sample.size()), iota, eta);
            const TailEstimate est = estimate(family, select_schedule_stats(sample, sched), sched);
            const double sd = rho_sd(est.rho_hat, iota, sched.y_n, sched.k2);
            p.ok = true;
            p.rho_hat = est.rho_hat;
            p.ci_low = est.rho_hat - zq * sd;
            p.ci_high = est.rho_hat + zq * sd;
        } catch (const std::exception& e) {
            p.ok = false;
            p.note = e.what();
        }
        out.push_back(p);
    }
    return out;
}

} // namespace evt
