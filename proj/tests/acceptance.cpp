// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bridge.hpp"
#include "raris/atis.hpp"
#include "raris/diag.hpp"
#include "raris/estimate.hpp"
#include "raris/ktune.hpp"
#include "raris/numerics.hpp"
#include "raris/rng.hpp"
#include "raris/tilt.hpp"

using namespace raris;

namespace {

constexpr double kGaussA = 0.232635;
constexpr double kExpA = 0.232;
constexpr double kExpReference = 0.013887;

struct Outcome {
    bool pass;
    std::string detail;
};

ExperimentConfig cfg(const char* dist, Method method, int n, double a, std::int64_t L, int k = 1, int M = 30,
                     std::uint64_t seed = 1) {
    ExperimentConfig c;
    c.dist = dist;
    c.method = method;
    c.n = n;
    c.a_n = a;
    c.L = L;
    c.k = k;
    c.M = M;
    c.seed = seed;
    return c;
}

double se(const EstimateSummary& s) { return std::sqrt(s.var_hat); }

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

Outcome criterion1() {
    const DistributionModel m = make_centered_exponential();
    const auto t0 = std::chrono::steady_clock::now();
    const EstimateSummary s = atis_estimate(m, cfg("cexp", Method::atis, 100, kExpA, 10000, 60, 30));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double rel = std::abs(s.p_hat - kExpReference) / kExpReference;
    const double z = std::abs(s.p_hat - kExpReference) / se(s);
    return {rel <= 0.05 && z <= 3.0 && secs < 60.0,
            fmt("p_hat=%.6f se=%.6f rel_dev=%.4f z=%.2f", s.p_hat, se(s), rel, z) + fmt(" time=%.1fs", secs)};
}

Outcome criterion2() {
    const DistributionModel m = make_normal();
    const double truth = m.functions().sum_mean_tail(100, kGaussA);
    const EstimateSummary a = atis_estimate(m, cfg("normal", Method::atis, 100, kGaussA, 2000, 60, 30));
    const EstimateSummary c = classical_is_estimate(m, cfg("normal", Method::cis, 100, kGaussA, 2000));
    const double za = std::abs(a.p_hat - truth) / se(a);
    const double zc = std::abs(c.p_hat - truth) / se(c);
    return {za <= 3.0 && zc <= 3.0,
            fmt("truth=%.6f atis=%.6f (z=%.2f) cis=%.6f", truth, a.p_hat, za, c.p_hat) + fmt(" (z=%.2f)", zc)};
}

Outcome criterion3() {
    const DistributionModel m = make_normal();
    const double truth = m.functions().sum_mean_tail(100, kGaussA);
    const int runs = 50;
    double mse_a = 0.0, mse_c = 0.0;
    for (int r = 0; r < runs; ++r) {
        const std::uint64_t seed = stream_seed(1, static_cast<std::uint64_t>(r));
        const double ea = atis_estimate(m, cfg("normal", Method::atis, 100, kGaussA, 5000, 60, 30, seed)).p_hat - truth;
        const double ec = classical_is_estimate(m, cfg("normal", Method::cis, 100, kGaussA, 5000, 1, 30, seed)).p_hat - truth;
        mse_a += ea * ea / runs;
        mse_c += ec * ec / runs;
    }
    const double ratio = mse_a / mse_c;
    return {ratio >= 0.45 && ratio <= 0.85,
            fmt("MSE(atis)/MSE(cis)=%.4f predicted=%.4f band=[0.45,0.85] runs=50 L=5000", ratio,
                mse_ratio_prediction(100, 60))};
}

Outcome criterion4() {
    const DistributionModel m = make_normal();
    const int runs = 20;
    double mean = 0.0;
    for (int r = 0; r < runs; ++r) {
        const std::uint64_t seed = stream_seed(4, static_cast<std::uint64_t>(r));
        const EstimateSummary s = classical_is_estimate(m, cfg("normal", Method::cis, 100, kGaussA, 10000, 1, 30, seed));
        mean += (s.relative_second_moment() - 1.0) / runs;
    }
    const double theory = theoretical_re_classical(100, kGaussA, 1);
    const double ratio = mean / theory;
    return {ratio >= 0.7 && ratio <= 1.3,
            fmt("empirical=%.4f theory=%.4f ratio=%.4f band=[0.7,1.3]", mean, theory, ratio)};
}

Outcome criterion5() {
    const DistributionModel m = make_normal();
    Rng rng(5);
    double worst = 0.0;
    for (int k : {1, 5, 8}) {
        for (double sigma : {0.0, 0.3}) {
            const ExperimentConfig c = cfg("normal", Method::atis, 10, 0.2, 1, k);
            for (int rep = 0; rep < 100; ++rep) {
                std::vector<double> x(static_cast<std::size_t>(k));
                for (double& v : x) v = sigma + 1.5 * rng.normal();
                StepCounters counters;
                const double lg = log_g_sigma(m, c, x, sigma, rng, counters);
                const double lb = testing_support::bridge_log_density(10, sigma, x);
                worst = std::max(worst, std::abs(std::expm1(lg - lb)));
            }
        }
    }
    return {worst < 1e-8, fmt("max relative error=%.3e over k in {1,5,8}, sigma in {0,0.3}, 100 points", worst)};
}

Outcome criterion6() {
    bool all = true;
    std::ostringstream os;
    for (const char* id : {"normal", "cexp"}) {
        const DistributionModel m = make_model(id);
        for (int n : {3, 5}) {
            const double a = std::string(id) == "normal" ? 1.2815515655446004 / std::sqrt(n) : 0.5;
            const double truth = m.functions().sum_mean_tail(n, a);
            for (Method method : {Method::naive, Method::cis, Method::atis}) {
                const EstimateSummary s = run_estimate(m, cfg(id, method, n, a, 100000, n - 2, 20));
                const double z = std::abs(s.p_hat - truth) / se(s);
                all = all && z <= 3.0;
                os << id << "/n=" << n << "/" << to_string(method) << " z=" << fmt("%.2f", z) << "; ";
            }
        }
    }
    return {all, os.str()};
}

Outcome criterion7() {
    std::ostringstream os;
    bool all = true;

    double round_trip = 0.0;
    Rng rng(7);
    for (const char* id : {"normal", "cexp"}) {
        const DistributionModel m = make_model(id);
        for (int i = 0; i < 2000; ++i) {
            const double u = rng.uniform();
            const double alpha = std::string(id) == "cexp" ? -0.99 + 50.99 * u * u : 100.0 * (u - 0.5);
            round_trip = std::max(round_trip, std::abs(m.mean_tilted(solve_tilt(m, alpha).t) - alpha));
        }
    }
    all = all && round_trip <= 1e-10;
    os << fmt("round-trip=%.1e", round_trip);

    double norm_err = 0.0;
    for (const char* id : {"normal", "cexp"}) {
        const DistributionModel m = make_model(id);
        for (int t = 0; t < 30; ++t) {
            const int n = 20 + static_cast<int>(rng.below(80));
            const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
            const double sigma = 0.05 + 0.5 * rng.uniform();
            const TiltState s = tilt_exact(m, n, sigma, i * (sigma + 0.3 * (rng.uniform() - 0.5)), i);
            const GiParams p = gi_params(m, s, NormalizerMode::closed, 0, rng);
            const double total = integrate([&](double y) { return std::exp(gi_log_density(m, p, y)); },
                                           m.support().lo, m.support().hi, 1e-10);
            norm_err = std::max(norm_err, std::abs(total - 1.0));
        }
    }
    all = all && norm_err <= 1e-4;
    os << fmt(" gi-normalization=%.1e", norm_err);

    double perm_err = 0.0;
    {
        const DistributionModel m = make_centered_exponential();
        const ExperimentConfig c = cfg("cexp", Method::atis, 30, 0.3, 1, 10, 25);
        std::vector<double> e = draw_mixture_endpoints(c);
        const Trajectory tr = sample_trajectory(m, c, e[0], rng);
        const std::span<const double> v(tr.values.data(), 30);
        StepCounters cnt;
        const double base = log_gbar_mixture(m, c, v, e, rng, cnt);
        for (int r = 0; r < 20; ++r) {
            for (std::size_t i = e.size() - 1; i > 0; --i) std::swap(e[i], e[rng.below(i + 1)]);
            perm_err = std::max(perm_err, std::abs(log_gbar_mixture(m, c, v, e, rng, cnt) - base) / std::abs(base));
        }
    }
    all = all && perm_err <= 1e-12;
    os << fmt(" permutation=%.1e", perm_err);

    double tilt_err = 0.0;
    for (const char* id : {"normal", "cexp"}) {
        const DistributionModel m = make_model(id);
        const double s = 0.6;
        const double lo = std::max(m.support().lo, s - m.support().hi);
        const double hi = std::min(m.support().hi, s - m.support().lo);
        auto cond = [&](const TiltSolution& sol, double x) {
            auto joint = [&](double y) { return std::exp(tilted_log_density(m, sol, y) + tilted_log_density(m, sol, s - y)); };
            return joint(x) / integrate(joint, lo, hi, 1e-12);
        };
        for (double alpha : {-0.5, 0.3, 2.0}) {
            const TiltSolution t = solve_tilt(m, alpha);
            for (double x : {-0.5, 0.0, 0.3, 1.0}) {
                if (x > lo && x < hi) tilt_err = std::max(tilt_err, std::abs(cond(t, x) - cond(tilt_at(m, 0.0), x)));
            }
        }
    }
    all = all && tilt_err <= 1e-6;
    os << fmt(" tilting-invariance=%.1e", tilt_err);

    bool same = true;
    for (Method method : {Method::naive, Method::cis, Method::atis}) {
        ExperimentConfig c = cfg("cexp", method, 40, 0.25, 3000, 20, 30);
        c.workers = 1;
        const EstimateSummary a = run_estimate(make_centered_exponential(), c);
        c.workers = 4;
        const EstimateSummary b = run_estimate(make_centered_exponential(), c);
        same = same && a.p_hat == b.p_hat && a.var_hat == b.var_hat;
    }
    all = all && same;
    os << " workers-determinism=" << (same ? "bit-exact" : "DIFFERS");
    return {all, os.str()};
}

Outcome criterion8() {
    const DiagReport endpoint = endpoint_law_check(make_normal(), 100, kGaussA, 10000, 1, 0.05);
    const DiagReport gn = gibbs_marginal_check(make_normal(), 100, kGaussA, 10000, 1, 0.05);
    const DiagReport gc = gibbs_marginal_check(make_centered_exponential(), 100, kExpA, 10000, 1, 0.08);
    const KScan scan = select_k(make_centered_exponential(), cfg("cexp", Method::atis, 100, kExpA, 1),
                                parse_int_grid("10:90:10"), 0.2, 500, 50);
    const bool k_ok = scan.selected_k >= 60 && scan.selected_k <= 80;
    std::ostringstream os;
    os << "endpoint KS=" << fmt("%.4f", endpoint.statistic) << (endpoint.pass ? " ok" : " FAIL")
       << "; gibbs normal KS=" << fmt("%.4f", gn.statistic) << (gn.pass ? " ok" : " FAIL")
       << "; gibbs cexp KS=" << fmt("%.4f", gc.statistic) << (gc.pass ? " ok" : " FAIL")
       << "; k-scan selected_k=" << scan.selected_k << (scan.no_departure ? " (no departure)" : "")
       << " stats=[";
    for (std::size_t i = 0; i < scan.stats.size(); ++i) os << (i ? "," : "") << fmt("%.3f", scan.stats[i]);
    os << "]" << (k_ok ? " ok" : " FAIL");
    return {endpoint.pass && gn.pass && gc.pass && k_ok, os.str()};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"1 exponential benchmark", criterion1}, {"2 gaussian truth", criterion2},
        {"3 mse ratio", criterion3},             {"4 classical relative error", criterion4},
        {"5 normal exactness", criterion5},      {"6 small-n unbiasedness", criterion6},
        {"7 property suites", criterion7},       {"8 diagnostics", criterion8},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("criterion %s: %s | %s\n", name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
