#include "raris/diag.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "raris/atis.hpp"
#include "raris/errors.hpp"
#include "raris/numerics.hpp"
#include "raris/tilt.hpp"

namespace raris {

namespace {

double median(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + mid));
    }
    return m;
}

DiagReport make_report(std::string name, double stat, double threshold, std::int64_t used,
                       std::string notes) {
    return DiagReport{std::move(name), stat, threshold, stat <= threshold, used, std::move(notes)};
}

std::function<double(double)> tilted_cdf_fn(const DistributionModel& model, const TiltSolution& sol) {
    if (const auto& cdf = model.functions().tilted_cdf) {
        return [cdf, t = sol.t](double x) { return cdf(t, x); };
    }
    return [&model, sol](double x) {
        const Interval& sup = model.support();
        if (x <= sup.lo) return 0.0;
        if (x >= sup.hi) return 1.0;
        return integrate([&](double y) { return std::exp(tilted_log_density(model, sol, y)); }, sup.lo, x,
                         1e-10);
    };
}

}  // namespace

ConditionedSampler::ConditionedSampler(const DistributionModel& model, int n, double a,
                                       std::int64_t attempt_budget)
    : model_(model), n_(n), a_(a), budget_(attempt_budget) {
    if (n < 1) throw ConfigError("conditioned sampler needs n >= 1");
    if (model.name() == "normal") {
        kind_ = Kind::normal;
    } else if (model.name() == "cexp") {
        kind_ = Kind::cexp;
    } else {
        kind_ = Kind::generic;
    }
}

Eigen::VectorXd ConditionedSampler::draw(Rng& rng) {
    Eigen::VectorXd x(n_);
    switch (kind_) {
        case Kind::normal: {
            // T ~ N(0, 1/n) restricted to T > a, by inversion in the upper tail.
            const double z = a_ * std::sqrt(static_cast<double>(n_));
            const double u = rng.uniform() * normal_sf(z);
            const double t = -normal_quantile(u) / std::sqrt(static_cast<double>(n_));
            for (int i = 0; i < n_; ++i) x[i] = rng.normal();
            x.array() += t - x.mean();
            ++attempts_;
            break;
        }
        case Kind::cexp: {
            const double cut = n_ * (1.0 + a_);
            double g = 0.0;
            do {
                if (attempts_ >= budget_) throw NumericalError("conditioned sampler: attempt budget exhausted");
                ++attempts_;
                g = rng.gamma(static_cast<double>(n_));
            } while (!(g > cut));
            double total = 0.0;
            for (int i = 0; i < n_; ++i) {
                x[i] = rng.exponential(1.0);
                total += x[i];
            }
            x.array() = x.array() * (g / total) - 1.0;
            break;
        }
        case Kind::generic: {
            for (;;) {
                if (attempts_ >= budget_) throw NumericalError("conditioned sampler: attempt budget exhausted");
                ++attempts_;
                for (int i = 0; i < n_; ++i) x[i] = model_.sample(rng);
                if (x.sum() > n_ * a_) break;
            }
            break;
        }
    }
    ++accepted_;
    return x;
}

DiagReport endpoint_law_check(const DistributionModel& model, int n, double a_n, int n_samples,
                              std::uint64_t seed, double threshold) {
    if (n_samples < 1) throw ConfigError("samples must be >= 1");
    const TiltSolution sol = solve_tilt(model, a_n);
    ConditionedSampler sampler(model, n, a_n);
    Rng rng(seed);
    std::vector<double> z(static_cast<std::size_t>(n_samples));
    try {
        for (double& v : z) v = n * sol.t * (sampler.draw(rng).mean() - a_n);
    } catch (const NumericalError& e) {
        DiagReport r = make_report("endpoint_law", kInf, threshold, sampler.accepted(), e.what());
        r.pass = false;
        return r;
    }
    CompensatedSum mean;
    for (double v : z) mean.add(v);
    const double zbar = mean.value() / n_samples;
    const double ks = ks_distance(z, [](double u) { return u <= 0.0 ? 0.0 : -std::expm1(-u); });
    std::ostringstream notes;
    notes << std::setprecision(6) << "Z = n t_a (T - a) vs Exp(1); mean(Z) = " << zbar
          << "; attempts = " << sampler.attempts() << "; threshold is an engineering tolerance";
    return make_report("endpoint_law", ks, threshold, n_samples, notes.str());
}

DiagReport gibbs_marginal_check(const DistributionModel& model, int n, double a_n, int n_samples,
                                std::uint64_t seed, double threshold) {
    if (n_samples < 1) throw ConfigError("samples must be >= 1");
    if (threshold < 0.0) threshold = model.name() == "normal" ? 0.05 : 0.08;
    const TiltSolution sol = solve_tilt(model, a_n);
    ConditionedSampler sampler(model, n, a_n);
    Rng rng(seed);
    std::vector<double> x1(static_cast<std::size_t>(n_samples));
    try {
        for (double& v : x1) v = sampler.draw(rng)[0];
    } catch (const NumericalError& e) {
        DiagReport r = make_report("gibbs_marginal", kInf, threshold, sampler.accepted(), e.what());
        r.pass = false;
        return r;
    }
    const double ks = ks_distance(x1, tilted_cdf_fn(model, sol));
    std::ostringstream notes;
    notes << std::setprecision(6) << "X_1 under conditioning vs tilted law with mean " << a_n
          << "; attempts = " << sampler.attempts() << "; acceptance = "
          << static_cast<double>(sampler.accepted()) / static_cast<double>(sampler.attempts());
    return make_report("gibbs_marginal", ks, threshold, n_samples, notes.str());
}

MaxPathResult max_path_check(const DistributionModel& model, const MaxPathOptions& opts,
                             std::uint64_t seed) {
    if (opts.n_grid.size() < 3) throw ConfigError("max-path check needs at least 3 values of n");
    if (opts.n_samples < 1) throw ConfigError("samples must be >= 1");
    MaxPathResult res;
    const int g = static_cast<int>(opts.n_grid.size());
    Eigen::MatrixXd design(g, 3);
    Eigen::VectorXd y(g);
    std::int64_t used = 0;
    for (int r = 0; r < g; ++r) {
        const int n = opts.n_grid[r];
        const double a = opts.a_scale * std::pow(static_cast<double>(n), -opts.a_power);
        const int k = std::clamp(static_cast<int>(std::lround(opts.k_fraction * n)), 1, n);
        ConditionedSampler sampler(model, n, a);
        Rng rng(seed, static_cast<std::uint64_t>(n));
        std::vector<double> maxima(static_cast<std::size_t>(opts.n_samples));
        for (double& m : maxima) m = sampler.draw(rng).head(k).maxCoeff();
        used += opts.n_samples;
        res.k_values.push_back(k);
        res.medians.push_back(median(std::move(maxima)));
        const double ln = std::log(static_cast<double>(n));
        design.row(r) << 1.0, ln, ln * ln;
        y[r] = res.medians.back();
    }
    const Eigen::VectorXd lin = design.leftCols(2).colPivHouseholderQr().solve(y);
    const Eigen::VectorXd quad = design.colPivHouseholderQr().solve(y);
    res.slope = lin[1];
    res.curvature = g >= 3 ? quad[2] : 0.0;
    const double stat = std::max(std::abs(res.slope) / opts.slope_cap, std::abs(res.curvature) / opts.curvature_cap);
    std::ostringstream notes;
    notes << std::setprecision(6) << "median max vs log n: slope = " << res.slope
          << " (cap " << opts.slope_cap << "), curvature = " << res.curvature << " (cap "
          << opts.curvature_cap << ")";
    res.report = make_report("max_path", stat, 1.0, used, notes.str());
    return res;
}

std::vector<PathRow> dump_typical_paths(const DistributionModel& model, const ExperimentConfig& cfg,
                                        int count) {
    validate(cfg);
    if (count < 0) throw ConfigError("count must be >= 0");
    std::vector<PathRow> rows;
    rows.reserve(static_cast<std::size_t>(2) * count * cfg.n);
    auto emit = [&](int run, const char* method, const Eigen::VectorXd& v) {
        double s = 0.0;
        for (int i = 0; i < v.size(); ++i) {
            s += v[i];
            rows.push_back({run, method, i + 1, v[i], s / (i + 1)});
        }
    };
    const std::vector<double> endpoints = draw_mixture_endpoints(cfg);
    for (int r = 0; r < count; ++r) {
        Rng rng(cfg.seed, static_cast<std::uint64_t>(r));
        const double e = cfg.endpoint_sampling == EndpointSampling::mixture
                             ? endpoints[rng.below(endpoints.size())]
                             : sample_endpoint(cfg.n, cfg.a_n, rng);
        emit(r, "atis", sample_trajectory(model, cfg, e, rng).values);
    }
    const TiltSolution tilt = solve_tilt(model, cfg.a_n);
    for (int r = 0; r < count; ++r) {
        Rng rng(cfg.seed, static_cast<std::uint64_t>(r));
        Eigen::VectorXd v(cfg.n);
        for (int i = 0; i < cfg.n; ++i) v[i] = sample_tilted(model, tilt, rng);
        emit(r, "cis", v);
    }
    return rows;
}

void write_paths_csv(std::ostream& os, const std::vector<PathRow>& rows) {
    os << "run_id,method,step,value,running_mean\n";
    os << std::setprecision(17);
    for (const PathRow& r : rows) {
        os << r.run_id << ',' << r.method << ',' << r.step << ',' << r.value << ',' << r.running_mean << '\n';
    }
}

}  // namespace raris
