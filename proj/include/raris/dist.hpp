#pragma once

#include <functional>
#include <optional>
#include <string>

#include "raris/rng.hpp"

namespace raris {

/// Open interval (lo, hi); bounds may be infinite.
struct Interval {
    double lo;
    double hi;

    bool contains(double x) const { return x > lo && x < hi; }
};

/// Callables describing a summand law. The first block is required; the
/// optional block holds closed forms that the built-in models provide and that
/// the library otherwise replaces with numerical fallbacks (or rejects).
struct ModelFunctions {
    std::string name;
    std::function<double(double)> log_density;
    std::function<double(double)> log_mgf;
    std::function<double(double)> mean_tilted;
    std::function<double(double)> var_tilted;
    std::function<double(double)> mu3_tilted;
    std::function<double(Rng&)> sample;
    /// Exact draw from the tilted law with tilt parameter t.
    std::function<double(double, Rng&)> sample_tilted;
    Interval tilt_domain{0.0, 0.0};
    Interval support{0.0, 0.0};
    /// Range of tilted means reachable from tilt_domain. Defaults to `support`
    /// (correct for steep families) when left empty.
    std::optional<Interval> mean_range;
    double density_sup = 0.0;

    // Optional closed forms.
    std::function<double(double)> inverse_mean;                   ///< alpha -> t
    std::function<double(double, double)> log_gauss_convolution;  ///< (mu, var) -> log ∫ p(x) N(mu,var;x) dx
    std::function<double(double, double)> tilted_cdf;             ///< (t, x) -> CDF of the tilted law
    std::function<double(int, double)> sum_mean_log_density;       ///< (n, a) -> log density of S_n/n at a
    std::function<double(int, double)> sum_mean_tail;              ///< (n, a) -> P(S_n/n > a)
};

/// Immutable description of the summand law p: density, cumulant generating
/// function and its first three derivatives, exact sampler, tilt domain.
///
/// Construction enforces the standing assumptions: the law is centred with
/// unit variance (m(0) = 0, s²(0) = 1), 0 lies in the tilt domain, and the
/// density is bounded (the acceptance-rejection envelope needs sup p).
class DistributionModel {
public:
    explicit DistributionModel(ModelFunctions f);

    const std::string& name() const { return f_.name; }

    double density(double x) const { return std::exp(log_density(x)); }
    double log_density(double x) const { return f_.log_density(x); }
    double log_mgf(double t) const;
    double mean_tilted(double t) const { return f_.mean_tilted(t); }
    double var_tilted(double t) const { return f_.var_tilted(t); }
    double mu3_tilted(double t) const { return f_.mu3_tilted(t); }
    double sample(Rng& rng) const { return f_.sample(rng); }

    const Interval& tilt_domain() const { return f_.tilt_domain; }
    const Interval& support() const { return f_.support; }
    const Interval& mean_range() const { return *f_.mean_range; }
    double density_sup() const { return f_.density_sup; }

    const ModelFunctions& functions() const { return f_; }

private:
    ModelFunctions f_;
};

/// Standard normal summands.
DistributionModel make_normal();

/// X = E - 1 with E ~ Exp(1): centred, unit variance, support (-1, inf).
DistributionModel make_centered_exponential();

/// Extension point for user-supplied closed forms. `sample_tilted` is
/// required; `log_gauss_convolution` may be omitted (quadrature is then used).
DistributionModel make_custom(ModelFunctions f);

/// Built-in model by CLI identifier: "normal" or "cexp".
DistributionModel make_model(const std::string& id);

}  // namespace raris
