#pragma once

#include "evt/approx.hpp"
#include "evt/models.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace evt {

// Three-order-statistic schedule. GW/log-GW rule: k_j = floor((k2/n)^{iota^{j-2}} n);
// GP rule: k_j = floor(k2 * iota^{2-j}). y_n = log(n/k0).
struct KSchedule {
    double iota = 2.0;
    long n = 0;
    long k2 = 0;
    long k1 = 0;
    long k0 = 0;
    double y_n = 0.0;
    double eta = 1.0;
    bool gp_rule = false;
};

// Base rule k2 = floor(n^{1/4}); eta in (0,1] applies the threshold-stability
// transform k2 -> ceil(n (k2/n)^eta) before deriving k1, k0.
KSchedule schedule_base(long n, double iota, double eta = 1.0);

// GP comparison schedule with k0 matching floor(n^{13/16}) up to flooring.
KSchedule schedule_gp(long n, double iota, double eta = 1.0);

// k-th largest element for each requested k, plus the sample maximum appended.
// O(n) expected per k via selection; identical to a full-sort oracle.
std::vector<double> select_order_stats(std::span<const double> sample,
                                       std::span<const long> ks);

// The three intermediate order statistics a schedule needs, highest first.
struct OrderStats {
    double x_k2 = 0.0; // X_{n-k2+1,n}
    double x_k1 = 0.0;
    double x_k0 = 0.0;
    double max = 0.0;
};

OrderStats select_schedule_stats(std::span<const double> sample, const KSchedule& sched);

struct TailEstimate {
    Family family = Family::GW;
    double rho_hat = 0.0;
    double g_hat = 0.0;
    double x_k0 = 0.0; // threshold order statistic X_{n-k0+1,n}
    double sample_max = 0.0;
    KSchedule schedule;
};

// Spacing-ratio estimators on precomputed order statistics. Used both for the
// sample path and for exact-quantile plug-in checks.
TailEstimate estimate_gw(const OrderStats& os, const KSchedule& sched);
TailEstimate estimate_loggw(const OrderStats& os, const KSchedule& sched);
TailEstimate estimate_gp(const OrderStats& os, const KSchedule& sched);

TailEstimate estimate_gw(std::span<const double> sample, const KSchedule& sched);
TailEstimate estimate_loggw(std::span<const double> sample, const KSchedule& sched);
TailEstimate estimate_gp(std::span<const double> sample, const KSchedule& sched);

TailEstimate estimate(Family family, const OrderStats& os, const KSchedule& sched);

// Family-appropriate quantile evaluator at z; optionally floored at the
// sample maximum.
double quantile_at(const TailEstimate& est, double z, bool floor_at_max = false);

// Probability-based estimation error against the truth model:
// q_inv(q_hat(z))/z - 1; +inf when the estimate exceeds q(inf).
double nu_hat(const TailModel& model, const TailEstimate& est, double z,
              bool floor_at_max = false);

struct StabilityPoint {
    double eta = 1.0;
    bool ok = false;
    double rho_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::string note; // set when this eta was skipped
};

// Threshold-stability profile: per-eta estimate with the plug-in asymptotic
// confidence interval for rho_hat. Collapsed schedules are skipped, not fatal.
std::vector<StabilityPoint> stability_profile(std::span<const double> sample, double iota,
                                              std::span<const double> eta_grid, Family family,
                                              double level = 0.90);

} // namespace evt
