#include "raris/atis.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "raris/errors.hpp"
#include "raris/numerics.hpp"

namespace raris {

namespace {

constexpr int kMaxRejections = 1'000'000;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

TiltState base_law_state(const DistributionModel& model, int n, double sigma, double partial_sum,
                         int i, double target) {
    TiltState s;
    s.n = n;
    s.i = i;
    s.sigma = sigma;
    s.partial_sum = partial_sum;
    s.t_in = 0.0;
    s.m_in = target;
    s.s2_in = model.var_tilted(0.0);
    s.mu3_in = model.mu3_tilted(0.0);
    s.residual = model.mean_tilted(0.0) - target;
    s.clamped = true;
    return s;
}

double target_mean(int n, double sigma, double partial_sum, int i) {
    return (n * sigma - partial_sum) / (n - i);
}

/// Gaussian factor of g_i: (a, b) with the factor N(ab, a).
std::pair<double, double> gi_shape(const TiltState& s) {
    const int r = s.n - s.i - 1;
    if (r < 1) {
        std::ostringstream os;
        os << "g_i needs n - i - 1 >= 1 (n=" << s.n << ", i=" << s.i << ")";
        throw DomainError(os.str());
    }
    // Mean actually carried by the tilt (equals m_in in exact mode).
    const double m_eff = s.m_in + s.residual;
    const double a = s.s2_in * r;
    const double b = s.t_in + m_eff / a + s.mu3_in / (2.0 * s.s2_in * s.s2_in * r);
    return {a, b};
}

}  // namespace

double sample_endpoint(int n, double a_n, Rng& rng) { return a_n + rng.exponential(n * a_n); }

TiltState tilt_exact(const DistributionModel& model, int n, double sigma, double partial_sum, int i) {
    const double m = target_mean(n, sigma, partial_sum, i);
    if (!model.mean_range().contains(m)) {
        return base_law_state(model, n, sigma, partial_sum, i, m);
    }
    const TiltSolution sol = solve_tilt(model, m);
    TiltState s;
    s.n = n;
    s.i = i;
    s.sigma = sigma;
    s.partial_sum = partial_sum;
    s.t_in = sol.t;
    s.m_in = m;
    s.s2_in = sol.s2;
    s.mu3_in = sol.mu3;
    s.residual = model.mean_tilted(sol.t) - m;
    return s;
}

TiltState tilt_update(const DistributionModel& model, const TiltState& state, double x_new) {
    const int i = state.i + 1;
    const double ps = state.partial_sum + x_new;
    const double m = target_mean(state.n, state.sigma, ps, i);
    if (!model.mean_range().contains(m)) {
        return base_law_state(model, state.n, state.sigma, ps, i, m);
    }
    if (state.clamped) {
        return tilt_exact(model, state.n, state.sigma, ps, i);
    }
    const double m_now = state.m_in + state.residual;
    const double t = state.t_in + (m - m_now) / state.s2_in;
    if (!model.tilt_domain().contains(t)) {
        TiltState s = tilt_exact(model, state.n, state.sigma, ps, i);
        s.fallback = true;
        return s;
    }
    TiltState s;
    s.n = state.n;
    s.i = i;
    s.sigma = state.sigma;
    s.partial_sum = ps;
    s.t_in = t;
    s.m_in = m;
    s.s2_in = model.var_tilted(t);
    s.mu3_in = model.mu3_tilted(t);
    s.residual = model.mean_tilted(t) - m;
    return s;
}

GiParams gi_params(const DistributionModel& model, const TiltState& state, NormalizerMode mode,
                   int n_c, Rng& rng) {
    const auto [a, b] = gi_shape(state);
    GiParams p{a, b, 0.0};
    const double mu = a * b;
    switch (mode) {
        case NormalizerMode::closed: {
            const auto& conv = model.functions().log_gauss_convolution;
            if (!conv) {
                throw ConfigError("closed normalizer unavailable for '" + model.name() +
                                  "'; use ci_mode quadrature or mc");
            }
            p.log_c = -conv(mu, a);
            break;
        }
        case NormalizerMode::mc: {
            if (n_c < 1) throw ConfigError("nc must be >= 1 in mc mode");
            const double sd = std::sqrt(a);
            CompensatedSum acc;
            for (int j = 0; j < n_c; ++j) acc.add(model.density(mu + sd * rng.normal()));
            const double mean = acc.value() / n_c;
            if (!(mean > 0.0)) {
                throw NumericalError("Monte Carlo normalizer is zero; increase nc");
            }
            p.log_c = -std::log(mean);
            break;
        }
        case NormalizerMode::quadrature: {
            const Interval& sup = model.support();
            const double z = integrate(
                [&](double x) { return std::exp(model.log_density(x) + log_normal_pdf(x, mu, a)); },
                sup.lo, sup.hi, 1e-12);
            if (!(z > 0.0) || !std::isfinite(z)) {
                throw NumericalError("quadrature normalizer failed");
            }
            p.log_c = -std::log(z);
            break;
        }
    }
    return p;
}

double gi_log_density(const DistributionModel& model, const GiParams& params, double y) {
    return model.log_density(y) + log_normal_pdf(y, params.a * params.b, params.a) + params.log_c;
}

double sample_gi(const DistributionModel& model, const GiParams& params, Rng& rng) {
    const double theta = gi_proposal_tilt(model, params);
    if (std::isfinite(theta)) {
        // p(y) N(ab, a; y) is proportional to pi_theta(y) exp(-(y - c)^2 / (2a))
        // with c = a(b - theta): propose from the law tilted by theta.
        const double c = params.a * (params.b - theta);
        const auto& draw = model.functions().sample_tilted;
        for (int it = 0; it < kMaxRejections; ++it) {
            const double y = draw(theta, rng);
            const double d = y - c;
            if (std::log(rng.uniform()) <= -0.5 * d * d / params.a) return y;
        }
    } else {
        // Gaussian proposal N(ab, a), accepted with probability p(x) / sup p.
        const double mu = params.a * params.b;
        const double sd = std::sqrt(params.a);
        const double log_sup = std::log(model.density_sup());
        for (int it = 0; it < kMaxRejections; ++it) {
            const double x = mu + sd * rng.normal();
            const double lp = model.log_density(x);
            if (std::log(rng.uniform()) + log_sup <= lp) return x;
        }
    }
    throw NumericalError("sample_gi: acceptance-rejection exceeded 1e6 iterations");
}

double gi_proposal_tilt(const DistributionModel& model, const GiParams& params) {
    // Root of h(theta) = m(theta) + a theta - a b, increasing in theta.
    const Interval& dom = model.tilt_domain();
    const double a = params.a;
    const double ab = a * params.b;
    auto h = [&](double th) { return model.mean_tilted(th) + a * th - ab; };
    double lo = std::min(0.0, params.b);
    double hi = std::max(0.0, params.b);
    double step = 1.0;
    for (int it = 0; h(lo) > 0.0; ++it) {
        if (it > 200) return kNaN;
        lo = std::isfinite(dom.lo) ? 0.5 * (lo + dom.lo) : lo - step;
        step *= 2.0;
    }
    if (!dom.contains(hi)) hi = std::isfinite(dom.hi) ? 0.5 * (lo + dom.hi) : hi;
    step = 1.0;
    for (int it = 0; h(hi) < 0.0; ++it) {
        if (it > 200) return kNaN;
        hi = std::isfinite(dom.hi) ? 0.5 * (hi + dom.hi) : hi + step;
        step *= 2.0;
    }
    double th = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
        const double v = h(th);
        if (v > 0.0) {
            hi = th;
        } else {
            lo = th;
        }
        double next = th - v / (model.var_tilted(th) + a);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - th) <= 1e-12 * (1.0 + std::abs(th))) return next;
        th = next;
    }
    return dom.contains(th) ? th : kNaN;
}

double log_g_sigma(const DistributionModel& model, const ExperimentConfig& cfg,
                   std::span<const double> head, double sigma, Rng& rng, StepCounters& counters) {
    const int n = cfg.n;
    const int k = static_cast<int>(head.size());
    TiltState state = tilt_exact(model, n, sigma, 0.0, 0);
    double total = 0.0;
    double ps = 0.0;
    for (int i = 0; i < k; ++i) {
        counters.record(state);
        const GiParams p = gi_params(model, state, cfg.ci_mode, cfg.n_c, rng);
        total += gi_log_density(model, p, head[i]);
        ps += head[i];
        if (i + 1 < k) {
            state = cfg.tilt_mode == TiltMode::exact ? tilt_exact(model, n, sigma, ps, i + 1)
                                                     : tilt_update(model, state, head[i]);
        }
    }
    return total;
}

TiltSolution tail_tilt(const DistributionModel& model, int n, int k, double a_n, double s_k,
                       bool& clamped) {
    const double alpha = (n * a_n - s_k) / (n - k);
    clamped = !model.mean_range().contains(alpha);
    if (clamped) return tilt_at(model, 0.0);
    return solve_tilt(model, alpha);
}

std::vector<double> sample_head(const DistributionModel& model, const ExperimentConfig& cfg,
                                double endpoint, int j, Rng& rng, StepCounters& counters) {
    const int n = cfg.n;
    std::vector<double> head(static_cast<std::size_t>(j));
    TiltState state = tilt_exact(model, n, endpoint, 0.0, 0);
    double ps = 0.0;
    for (int i = 0; i < j; ++i) {
        counters.record(state);
        const auto [a, b] = gi_shape(state);
        const double x = sample_gi(model, GiParams{a, b, 0.0}, rng);
        head[i] = x;
        ps += x;
        if (i + 1 < j) {
            state = cfg.tilt_mode == TiltMode::exact ? tilt_exact(model, n, endpoint, ps, i + 1)
                                                     : tilt_update(model, state, x);
        }
    }
    return head;
}

Trajectory sample_trajectory(const DistributionModel& model, const ExperimentConfig& cfg,
                             double endpoint, Rng& rng) {
    const int n = cfg.n;
    const int k = cfg.k;
    Trajectory tr;
    tr.values.resize(n);
    tr.endpoint = endpoint;

    const std::vector<double> head = sample_head(model, cfg, endpoint, k, rng, tr.counters);
    double ps = 0.0;
    for (int i = 0; i < k; ++i) {
        tr.values[i] = head[i];
        ps += head[i];
    }

    bool clamped = false;
    const TiltSolution tail = tail_tilt(model, n, k, cfg.a_n, ps, clamped);
    tr.counters.clamps += clamped ? 1 : 0;
    tr.alpha_k = tail.alpha;
    double sum = ps;
    for (int i = k; i < n; ++i) {
        const double x = sample_tilted(model, tail, rng);
        tr.values[i] = x;
        sum += x;
    }

    CompensatedSum lp;
    for (int i = 0; i < n; ++i) lp.add(model.log_density(tr.values[i]));
    tr.log_p = lp.value();
    tr.hit = sum > n * cfg.a_n;
    return tr;
}

Trajectory sample_trajectory(const DistributionModel& model, const ExperimentConfig& cfg, Rng& rng) {
    const double e = sample_endpoint(cfg.n, cfg.a_n, rng);
    return sample_trajectory(model, cfg, e, rng);
}

double log_gbar_mixture(const DistributionModel& model, const ExperimentConfig& cfg,
                        std::span<const double> values, std::span<const double> mixture_endpoints,
                        Rng& rng, StepCounters& counters) {
    if (mixture_endpoints.empty()) throw ConfigError("mixture needs at least one endpoint (M >= 1)");
    const int n = cfg.n;
    const int k = cfg.k;
    if (static_cast<int>(values.size()) != n) throw ConfigError("trajectory length differs from n");
    const auto head = values.first(static_cast<std::size_t>(k));

    double s_k = 0.0;
    for (double x : head) s_k += x;
    bool clamped = false;
    const TiltSolution tail = tail_tilt(model, n, k, cfg.a_n, s_k, clamped);
    counters.clamps += clamped ? 1 : 0;
    double tail_log = 0.0;
    for (int i = k; i < n; ++i) tail_log += tilted_log_density(model, tail, values[i]);

    std::vector<double> comps(mixture_endpoints.size());
    for (std::size_t m = 0; m < mixture_endpoints.size(); ++m) {
        comps[m] = log_g_sigma(model, cfg, head, mixture_endpoints[m], rng, counters);
    }
    return log_sum_exp(comps) - std::log(static_cast<double>(comps.size())) + tail_log;
}

std::vector<double> draw_mixture_endpoints(const ExperimentConfig& cfg) {
    Rng rng(cfg.seed, kMixtureStream);
    std::vector<double> e(static_cast<std::size_t>(cfg.M));
    for (double& x : e) x = sample_endpoint(cfg.n, cfg.a_n, rng);
    return e;
}

}  // namespace raris
