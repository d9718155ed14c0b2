#pragma once

#include "evt/approx.hpp"
#include "evt/models.hpp"

#include <span>

namespace evt {

struct AsymptoticBand {
    double center = 0.0;
    double sd = 0.0;    // on the native scale (log-quantile scale for logGW q-bands)
    double level = 0.90;
    double low = 0.0;
    double high = 0.0;
};

// Standard deviation of rho_hat - a_iota(y_n) from the spacing-ratio CLT:
// (iota^{rho-2}/log iota) / (y_n sqrt(k2) h_rho(iota)).
double rho_sd(double rho, double iota, double y_n, long k2);

// Band for nu_hat centered on the deterministic nu; lambda = z/y_n.
// sd = lambda^{-rho} |kappa(rho,lambda,iota)| (iota^{rho-2}/log iota) / (y_n sqrt(k2)).
AsymptoticBand nu_band(double rho, double iota, double lambda, double y_n, long k2,
                       double center, double level = 0.90);

// Band for the quantile estimate centered on the deterministic approximation.
// GW: sd(q_hat - q_tilde) = q'(y_n) |kappa| (iota^{rho-2}/log iota) / sqrt(k2),
// additive edges. logGW: the same with q'/q on the log-quantile scale; the
// returned low/high are the exponentiated (quantile-scale) edges.
AsymptoticBand q_band(double rho, double iota, double lambda, double y_n, long k2,
                      double q_prime_at_yn, double center, Family family, double q_at_yn,
                      double level = 0.90);

struct KSchedule; // estimators.hpp

// Standardized intermediate order-statistic deviation
// y_n (iota_hat_m - iota^m) sqrt(k_m); asymptotically standard normal across
// replications. m selects k0/k1/k2.
double smirnov_stat(const TailModel& model, int m, const KSchedule& sched,
                    std::span<const double> sample);

// Two-sided Kolmogorov-Smirnov test of a sample against the standard normal.
struct KSResult {
    double statistic = 0.0;
    double p_value = 0.0;
};
KSResult ks_test_normal(std::span<const double> values);

// Asymptotic Kolmogorov survival function Q(x) = 2 sum_j (-1)^{j-1} exp(-2 j^2 x^2).
double kolmogorov_sf(double x);

} // namespace evt
