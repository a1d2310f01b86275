#include "raris/numerics.hpp"

#include <algorithm>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace raris {

double normal_pdf(double z) { return std::exp(-0.5 * z * z - kLogSqrt2Pi); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0); }

double normal_sf(double z) { return 0.5 * std::erfc(z * std::numbers::sqrt2 / 2.0); }

double log_normal_sf(double z) {
    if (z < 35.0) {
        return std::log(normal_sf(z));
    }
    // Mills-ratio asymptotic series; at z >= 35 four terms are exact to
    // double precision.
    const double r = 1.0 / (z * z);
    const double series = 1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r)));
    return -0.5 * z * z - std::log(z) - kLogSqrt2Pi + std::log(series);
}

double normal_quantile(double p) {
    static const boost::math::normal_distribution<double> standard{};
    return boost::math::quantile(standard, p);
}

double gamma_sf(double shape, double x) {
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(shape, x);
}

double gamma_log_pdf(double shape, double x) {
    if (x <= 0.0) return -kInf;
    return (shape - 1.0) * std::log(x) - x - std::lgamma(shape);
}

double log_sum_exp(std::span<const double> v) {
    if (v.empty()) return -kInf;
    const double mx = *std::max_element(v.begin(), v.end());
    if (!std::isfinite(mx)) return mx;
    double s = 0.0;
    for (double x : v) s += std::exp(x - mx);
    return mx + std::log(s);
}

double integrate(const std::function<double(double)>& f, double lo, double hi, double rel_tol) {
    using namespace boost::math::quadrature;
    const bool lo_inf = std::isinf(lo);
    const bool hi_inf = std::isinf(hi);
    if (lo_inf && hi_inf) {
        sinh_sinh<double> q;
        return q.integrate(f, rel_tol);
    }
    if (lo_inf || hi_inf) {
        // exp_sinh handles one infinite endpoint.
        exp_sinh<double> q;
        return q.integrate(f, lo, hi, rel_tol);
    }
    tanh_sinh<double> q;
    return q.integrate(f, lo, hi, rel_tol);
}

double ks_distance(std::vector<double>& sample, const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double ks_two_sample(std::vector<double>& a, std::vector<double>& b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_critical(double alpha, double n_eff) {
    return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(n_eff);
}

}  // namespace raris
