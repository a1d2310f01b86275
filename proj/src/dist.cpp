#include "raris/dist.hpp"

#include <cmath>
#include <sstream>

#include "raris/errors.hpp"
#include "raris/numerics.hpp"

namespace raris {

DistributionModel::DistributionModel(ModelFunctions f) : f_(std::move(f)) {
    auto fail = [this](const std::string& what) {
        throw ConfigError("distribution '" + f_.name + "': " + what);
    };
    if (!f_.log_density || !f_.log_mgf || !f_.mean_tilted || !f_.var_tilted || !f_.mu3_tilted ||
        !f_.sample || !f_.sample_tilted) {
        fail("missing a required callable");
    }
    if (!(std::isfinite(f_.density_sup) && f_.density_sup > 0.0)) {
        fail("density_sup must be finite and positive");
    }
    if (!f_.tilt_domain.contains(0.0)) {
        fail("tilt domain must contain 0");
    }
    if (!(f_.support.lo < f_.support.hi)) {
        fail("empty support");
    }
    if (!f_.mean_range) {
        f_.mean_range = f_.support;
    }
    if (std::abs(f_.mean_tilted(0.0)) > 1e-8 || std::abs(f_.var_tilted(0.0) - 1.0) > 1e-8) {
        fail("summands must be centred with unit variance");
    }
}

double DistributionModel::log_mgf(double t) const {
    if (!f_.tilt_domain.contains(t)) {
        std::ostringstream os;
        os << "log_mgf(" << t << ") outside tilt domain (" << f_.tilt_domain.lo << ", "
           << f_.tilt_domain.hi << ") of '" << f_.name << "'";
        throw DomainError(os.str());
    }
    return f_.log_mgf(t);
}

DistributionModel make_normal() {
    ModelFunctions f;
    f.name = "normal";
    f.log_density = [](double x) { return -0.5 * x * x - kLogSqrt2Pi; };
    f.log_mgf = [](double t) { return 0.5 * t * t; };
    f.mean_tilted = [](double t) { return t; };
    f.var_tilted = [](double) { return 1.0; };
    f.mu3_tilted = [](double) { return 0.0; };
    f.sample = [](Rng& rng) { return rng.normal(); };
    f.sample_tilted = [](double t, Rng& rng) { return t + rng.normal(); };
    f.tilt_domain = {-kInf, kInf};
    f.support = {-kInf, kInf};
    f.density_sup = std::exp(-kLogSqrt2Pi);
    f.inverse_mean = [](double alpha) { return alpha; };
    f.log_gauss_convolution = [](double mu, double var) { return log_normal_pdf(mu, 0.0, 1.0 + var); };
    f.tilted_cdf = [](double t, double x) { return normal_cdf(x - t); };
    f.sum_mean_log_density = [](int n, double a) { return log_normal_pdf(a, 0.0, 1.0 / n); };
    f.sum_mean_tail = [](int n, double a) { return normal_sf(a * std::sqrt(static_cast<double>(n))); };
    return DistributionModel(std::move(f));
}

DistributionModel make_centered_exponential() {
    ModelFunctions f;
    f.name = "cexp";
    f.log_density = [](double x) { return x > -1.0 ? -(x + 1.0) : -kInf; };
    f.log_mgf = [](double t) { return -t - std::log1p(-t); };
    f.mean_tilted = [](double t) { return t / (1.0 - t); };
    f.var_tilted = [](double t) { return 1.0 / ((1.0 - t) * (1.0 - t)); };
    f.mu3_tilted = [](double t) {
        const double r = 1.0 / (1.0 - t);
        return 2.0 * r * r * r;
    };
    f.sample = [](Rng& rng) { return rng.exponential(1.0) - 1.0; };
    // Tilting Exp(1) by t gives Exp(1 - t).
    f.sample_tilted = [](double t, Rng& rng) { return rng.exponential(1.0 - t) - 1.0; };
    f.tilt_domain = {-kInf, 1.0};
    f.support = {-1.0, kInf};
    f.mean_range = Interval{-1.0, kInf};
    f.density_sup = 1.0;
    f.inverse_mean = [](double alpha) { return alpha / (1.0 + alpha); };
    // ∫_{-1}^∞ e^{-(x+1)} N(mu,var;x) dx = e^{-1-mu+var/2} P(N(mu-var,var) > -1)
    f.log_gauss_convolution = [](double mu, double var) {
        return -1.0 - mu + 0.5 * var + log_normal_sf((var - mu - 1.0) / std::sqrt(var));
    };
    f.tilted_cdf = [](double t, double x) {
        return x > -1.0 ? -std::expm1(-(1.0 - t) * (x + 1.0)) : 0.0;
    };
    // S_n + n ~ Gamma(n, 1).
    f.sum_mean_log_density = [](int n, double a) {
        return std::log(static_cast<double>(n)) + gamma_log_pdf(n, n * (1.0 + a));
    };
    f.sum_mean_tail = [](int n, double a) { return gamma_sf(n, n * (1.0 + a)); };
    return DistributionModel(std::move(f));
}

DistributionModel make_custom(ModelFunctions f) { return DistributionModel(std::move(f)); }

DistributionModel make_model(const std::string& id) {
    if (id == "normal") return make_normal();
    if (id == "cexp") return make_centered_exponential();
    throw ConfigError("unknown distribution '" + id + "' (expected normal or cexp)");
}

}  // namespace raris
