#include "evt/normal.hpp"
#include "evt/errors.hpp"

#include <cmath>

namespace evt {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

// Acklam's rational approximation to Phi^{-1}(p), |relative error| < 1.2e-9.
double acklam_ppf(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

} // namespace

double norm_cdf(double x) {
    return 0.5 * std::erfc(-x * M_SQRT1_2);
}

double norm_logsf(double x) {
    return -std::log(0.5 * std::erfc(x * M_SQRT1_2));
}

double norm_ppf_upper(double p) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw DomainError("norm_ppf_upper: p must be in (0,1)");
    }
    double x = -acklam_ppf(p);
    // Newton on g(x) = -log(sf(x)) + log(p); g'(x) = pdf(x)/sf(x).
    const double target = -std::log(p);
    for (int it = 0; it < 3; ++it) {
        const double lsf = norm_logsf(x);
        const double hazard = std::exp(-0.5 * x * x - kLogSqrt2Pi + lsf);
        const double step = (lsf - target) / hazard;
        x -= step;
        if (std::abs(step) <= 1e-15 * (1.0 + std::abs(x))) {
            break;
        }
    }
    return x;
}

double norm_ppf(double p) {
    return -norm_ppf_upper(p);
}

} // namespace evt
