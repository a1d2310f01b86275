#include "raris/estimate.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "raris/atis.hpp"
#include "raris/errors.hpp"
#include "raris/numerics.hpp"
#include "raris/parallel.hpp"
#include "raris/rng.hpp"
#include "raris/tilt.hpp"

namespace raris {

namespace {

constexpr std::int64_t kBatch = 1 << 15;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Replicate {
    double log_weight = 0.0;
    bool hit = false;
    double endpoint = kNaN;
    std::uint64_t clamps = 0;
    std::uint64_t fallbacks = 0;
};

/// Streaming mean / sum of squared deviations, merged batch by batch in a
/// fixed order (Chan et al.).
struct Moments {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void merge(const std::vector<double>& w) {
        if (w.empty()) return;
        CompensatedSum s;
        for (double x : w) s.add(x);
        const double nb = static_cast<double>(w.size());
        const double mb = s.value() / nb;
        CompensatedSum d2;
        for (double x : w) d2.add((x - mb) * (x - mb));
        const double total = count + nb;
        const double delta = mb - mean;
        mean += delta * nb / total;
        m2 += d2.value() + delta * delta * count * nb / total;
        count = total;
    }
};

template <class Fn>
EstimateSummary run_replicates(Method method, const ExperimentConfig& cfg, bool keep_records,
                               Fn&& replicate) {
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    EstimateSummary out;
    out.method = method;
    out.L = cfg.L;
    if (keep_records) out.records.reserve(static_cast<std::size_t>(cfg.L));

    Moments mom;
    std::int64_t hits = 0;
    std::vector<double> w;
    for (std::int64_t lo = 0; lo < cfg.L; lo += kBatch) {
        const std::int64_t hi = std::min(cfg.L, lo + kBatch);
        const auto reps = parallel_map<Replicate>(lo, hi, cfg.workers, replicate);
        w.assign(reps.size(), 0.0);
        for (std::size_t j = 0; j < reps.size(); ++j) {
            const Replicate& r = reps[j];
            if (r.hit) {
                w[j] = std::exp(r.log_weight);
                ++hits;
            }
            out.clamp_count += r.clamps;
            out.fallback_count += r.fallbacks;
            if (keep_records) {
                out.records.push_back({lo + static_cast<std::int64_t>(j), r.log_weight, r.hit, r.endpoint});
            }
        }
        mom.merge(w);
    }

    out.p_hat = mom.mean;
    const double L = static_cast<double>(cfg.L);
    out.var_hat = cfg.L > 1 ? mom.m2 / (L - 1.0) / L : 0.0;
    out.re_hat = out.p_hat > 0.0 ? out.var_hat / (out.p_hat * out.p_hat) : kNaN;
    out.hit_rate = static_cast<double>(hits) / L;
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace

double EstimateSummary::relative_second_moment() const {
    if (!(p_hat > 0.0) || L < 1) return kNaN;
    const double Ld = static_cast<double>(L);
    // var_hat uses the L-1 denominator; undo it to get E[w²] / p².
    const double second = var_hat * Ld * (Ld - 1.0) / Ld + p_hat * p_hat;
    return second / (p_hat * p_hat);
}

EstimateSummary naive_estimate(const DistributionModel& model, const ExperimentConfig& cfg,
                               bool keep_records) {
    return run_replicates(Method::naive, cfg, keep_records, [&](std::int64_t idx) {
        Rng rng(cfg.seed, static_cast<std::uint64_t>(idx));
        double s = 0.0;
        for (int i = 0; i < cfg.n; ++i) s += model.sample(rng);
        Replicate r;
        r.hit = s > cfg.n * cfg.a_n;
        return r;
    });
}

EstimateSummary classical_is_estimate(const DistributionModel& model, const ExperimentConfig& cfg,
                                      bool keep_records) {
    const TiltSolution tilt = solve_tilt(model, cfg.a_n);
    return run_replicates(Method::cis, cfg, keep_records, [&](std::int64_t idx) {
        Rng rng(cfg.seed, static_cast<std::uint64_t>(idx));
        double s = 0.0;
        for (int i = 0; i < cfg.n; ++i) s += sample_tilted(model, tilt, rng);
        Replicate r;
        r.hit = s > cfg.n * cfg.a_n;
        r.log_weight = -(tilt.t * s - cfg.n * tilt.log_mgf_at_t);
        return r;
    });
}

EstimateSummary atis_estimate(const DistributionModel& model, const ExperimentConfig& cfg,
                              bool keep_records) {
    validate(cfg);
    const std::vector<double> endpoints = draw_mixture_endpoints(cfg);
    return run_replicates(Method::atis, cfg, keep_records, [&](std::int64_t idx) {
        Rng rng(cfg.seed, static_cast<std::uint64_t>(idx));
        const double e = cfg.endpoint_sampling == EndpointSampling::mixture
                             ? endpoints[rng.below(endpoints.size())]
                             : sample_endpoint(cfg.n, cfg.a_n, rng);
        Trajectory tr = sample_trajectory(model, cfg, e, rng);
        StepCounters counters = tr.counters;
        const std::span<const double> values(tr.values.data(), static_cast<std::size_t>(tr.values.size()));
        tr.log_gbar = log_gbar_mixture(model, cfg, values, endpoints, rng, counters);
        if (!std::isfinite(tr.log_gbar)) {
            throw NumericalError("mixture density vanished at a sampled trajectory (replicate " +
                                 std::to_string(idx) + ")");
        }
        Replicate r;
        r.hit = tr.hit;
        r.log_weight = tr.log_p - tr.log_gbar;
        r.endpoint = e;
        r.clamps = counters.clamps;
        r.fallbacks = counters.fallbacks;
        return r;
    });
}

EstimateSummary run_estimate(const DistributionModel& model, const ExperimentConfig& cfg,
                             bool keep_records) {
    switch (cfg.method) {
        case Method::naive: return naive_estimate(model, cfg, keep_records);
        case Method::cis: return classical_is_estimate(model, cfg, keep_records);
        case Method::atis: return atis_estimate(model, cfg, keep_records);
    }
    throw ConfigError("unknown method");
}

double theoretical_re_classical(int n, double a_n, std::int64_t L) {
    return std::sqrt(2.0 * std::numbers::pi) * std::sqrt(static_cast<double>(n)) * a_n /
           static_cast<double>(L);
}

double theoretical_re_atis(int n, int k, double a_n, std::int64_t L) {
    if (k > n - 2) throw ConfigError("k must satisfy k <= n-2");
    return std::sqrt(2.0 * std::numbers::pi) * std::sqrt(static_cast<double>(n - k - 1)) * a_n /
           static_cast<double>(L);
}

double mse_ratio_prediction(int n, int k) {
    if (k > n) throw ConfigError("k must satisfy k <= n");
    return std::sqrt(static_cast<double>(n - k)) / std::sqrt(static_cast<double>(n));
}

}  // namespace raris
