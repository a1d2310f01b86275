#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

namespace raris {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2*pi))

// Standard normal helpers. `log_normal_sf` stays accurate far into the upper
// tail where 1 - cdf underflows.
double normal_pdf(double z);
double normal_cdf(double z);
double normal_sf(double z);
double log_normal_sf(double z);
double normal_quantile(double p);

/// log of the N(mean, var) density at x.
inline double log_normal_pdf(double x, double mean, double var) {
    const double d = x - mean;
    return -0.5 * d * d / var - 0.5 * std::log(var) - kLogSqrt2Pi;
}

/// Regularized upper incomplete gamma Q(shape, x) = P(Gamma(shape,1) > x).
double gamma_sf(double shape, double x);
/// log density of Gamma(shape, 1) at x.
double gamma_log_pdf(double shape, double x);

/// log(sum(exp(v))), returns -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> v);

/// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double x) {
        if (!std::isfinite(x)) {
            special_ += x;
            return;
        }
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return special_ != 0.0 || std::isnan(special_) ? special_ : sum_ + comp_; }

private:
    double special_ = 0.0;  // sum of the non-finite terms
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Adaptive quadrature of f over (lo, hi); either bound may be infinite.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double rel_tol = 1e-10);

/// Kolmogorov-Smirnov distance between the empirical CDF of `sample` and `cdf`.
/// The sample is sorted in place.
double ks_distance(std::vector<double>& sample, const std::function<double(double)>& cdf);

/// Two-sample KS statistic; both inputs are sorted in place.
double ks_two_sample(std::vector<double>& a, std::vector<double>& b);

/// Asymptotic two-sided KS critical value c(alpha)/sqrt(n_eff).
double ks_critical(double alpha, double n_eff);

}  // namespace raris
