#include "benchmark.hpp"

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include "raris/dist.hpp"
#include "raris/errors.hpp"
#include "raris/estimate.hpp"
#include "raris/rng.hpp"

namespace raris::tool {

namespace {

constexpr double kGaussA = 0.232635;
constexpr double kExpA = 0.232;
constexpr double kExpReference = 0.013887;

ExperimentConfig base(const std::string& dist, double a, const BenchmarkOptions& o) {
    ExperimentConfig c;
    c.dist = dist;
    c.n = 100;
    c.a_n = a;
    c.seed = o.seed;
    c.workers = o.workers;
    return c;
}

double se(const EstimateSummary& s) { return std::sqrt(s.var_hat); }

json check(const std::string& name, bool pass, json detail) {
    return json{{"criterion", name}, {"pass", pass}, {"detail", std::move(detail)}};
}

struct Output {
    std::string dir;
    Manifest& manifest;
    void csv(const std::string& name, const std::string& text) {
        const std::string p = (std::filesystem::path(dir) / name).string();
        write_text(p, text);
        manifest.add_output(p);
    }
};

json fig1(const BenchmarkOptions& o, Output& out) {
    const DistributionModel model = make_normal();
    ExperimentConfig c = base("normal", kGaussA, o);
    c.M = 30;
    c.L = 2000;
    const double truth = model.functions().sum_mean_tail(c.n, c.a_n);
    std::ostringstream tab, trace;
    tab << "method,k,M,L,p_hat,se,re_hat,hit_rate\n" << std::setprecision(10);
    trace << "method,k,l,running_p_hat\n" << std::setprecision(10);
    auto add_trace = [&](const EstimateSummary& s, int k) {
        double acc = 0.0;
        for (const auto& r : s.records) {
            if (r.hit) acc += std::exp(r.log_weight);
            const auto l = r.index + 1;
            if (l % 20 == 0) trace << to_string(s.method) << ',' << k << ',' << l << ',' << acc / l << '\n';
        }
    };
    json checks = json::array();
    ExperimentConfig ci = c;
    ci.method = Method::cis;
    const EstimateSummary cis = classical_is_estimate(model, ci, true);
    tab << "cis,0,0," << cis.L << ',' << cis.p_hat << ',' << se(cis) << ',' << cis.re_hat << ',' << cis.hit_rate << '\n';
    add_trace(cis, 0);
    bool atis60 = false;
    double atis60_p = 0.0, atis60_se = 0.0;
    for (int k = 10; k <= 90; k += 10) {
        c.k = k;
        const EstimateSummary s = atis_estimate(model, c, true);
        tab << "atis," << k << ',' << c.M << ',' << s.L << ',' << s.p_hat << ',' << se(s) << ',' << s.re_hat << ','
            << s.hit_rate << '\n';
        add_trace(s, k);
        if (k == 60) {
            atis60 = std::abs(s.p_hat - truth) <= 3.0 * se(s);
            atis60_p = s.p_hat;
            atis60_se = se(s);
        }
    }
    out.csv("fig1.csv", tab.str());
    out.csv("fig1_trace.csv", trace.str());
    const bool cis_ok = std::abs(cis.p_hat - truth) <= 3.0 * se(cis);
    checks.push_back(check("gaussian_truth", atis60 && cis_ok,
                           {{"truth", truth},
                            {"atis_k60", {{"p_hat", atis60_p}, {"se", atis60_se}}},
                            {"cis", {{"p_hat", cis.p_hat}, {"se", se(cis)}}}}));
    return checks;
}

json fig2(const BenchmarkOptions& o, Output& out) {
    const DistributionModel model = make_normal();
    ExperimentConfig c = base("normal", kGaussA, o);
    c.M = 30;
    c.L = 2000;
    std::ostringstream tab;
    tab << "method,k,L,re_emp,re_theory\n" << std::setprecision(10);
    for (int k = 10; k <= 90; k += 10) {
        c.k = k;
        const EstimateSummary s = atis_estimate(model, c);
        tab << "atis," << k << ',' << s.L << ',' << s.relative_second_moment() - 1.0 << ','
            << theoretical_re_atis(c.n, k, c.a_n, 1) << '\n';
    }
    ExperimentConfig ci = c;
    ci.method = Method::cis;
    ci.L = 10000;
    const int runs = std::max(1, std::min(o.runs, 20));
    double mean_re = 0.0;
    for (int r = 0; r < runs; ++r) {
        ci.seed = stream_seed(o.seed, static_cast<std::uint64_t>(r));
        const EstimateSummary s = classical_is_estimate(model, ci);
        const double re = s.relative_second_moment() - 1.0;
        mean_re += re / runs;
        tab << "cis,0," << s.L << ',' << re << ',' << theoretical_re_classical(c.n, c.a_n, 1) << '\n';
    }
    out.csv("fig2.csv", tab.str());
    const double theory = theoretical_re_classical(c.n, c.a_n, 1);
    const double ratio = mean_re / theory;
    return json::array({check("classical_relative_error", ratio >= 0.7 && ratio <= 1.3,
                               {{"mean_empirical", mean_re}, {"theory", theory}, {"ratio", ratio}, {"runs", runs}})});
}

json fig3(const BenchmarkOptions& o, Output& out) {
    const DistributionModel model = make_normal();
    ExperimentConfig c = base("normal", kGaussA, o);
    c.k = 60;
    c.M = 30;
    const double truth = model.functions().sum_mean_tail(c.n, c.a_n);
    const double predicted = mse_ratio_prediction(c.n, c.k);
    std::ostringstream tab;
    tab << "L,runs,mse_atis,mse_cis,mse_ratio,predicted\n" << std::setprecision(10);
    double last_ratio = 0.0;
    for (std::int64_t L : {500, 1000, 2000, 5000}) {
        double mse_a = 0.0, mse_c = 0.0;
        for (int r = 0; r < o.runs; ++r) {
            ExperimentConfig ca = c;
            ca.L = L;
            ca.seed = stream_seed(o.seed, static_cast<std::uint64_t>(r));
            ExperimentConfig cc = ca;
            cc.method = Method::cis;
            const double ea = atis_estimate(model, ca).p_hat - truth;
            const double ec = classical_is_estimate(model, cc).p_hat - truth;
            mse_a += ea * ea / o.runs;
            mse_c += ec * ec / o.runs;
        }
        last_ratio = mse_a / mse_c;
        tab << L << ',' << o.runs << ',' << mse_a << ',' << mse_c << ',' << last_ratio << ',' << predicted << '\n';
    }
    out.csv("fig3.csv", tab.str());
    return json::array({check("mse_ratio", last_ratio >= 0.45 && last_ratio <= 0.85,
                              {{"L", 5000}, {"runs", o.runs}, {"mse_ratio", last_ratio}, {"predicted", predicted}})});
}

json exp_case(const BenchmarkOptions& o, Output& out) {
    const DistributionModel model = make_centered_exponential();
    ExperimentConfig c = base("cexp", kExpA, o);
    c.M = 30;
    const double exact = model.functions().sum_mean_tail(c.n, c.a_n);
    std::ostringstream tab;
    tab << "k,L,p_hat,se,reference,rel_dev_reference,exact,rel_dev_exact\n" << std::setprecision(10);
    json checks = json::array();
    for (std::int64_t L : {1000, 10000}) {
        for (int k = 20; k <= 80; k += 20) {
            c.k = k;
            c.L = L;
            const EstimateSummary s = atis_estimate(model, c);
            const double dev_ref = (s.p_hat - kExpReference) / kExpReference;
            tab << k << ',' << L << ',' << s.p_hat << ',' << se(s) << ',' << kExpReference << ',' << dev_ref << ','
                << exact << ',' << (s.p_hat - exact) / exact << '\n';
            if (k == 60 && L == 10000) {
                const bool pass = std::abs(dev_ref) <= 0.05 && std::abs(s.p_hat - kExpReference) <= 3.0 * se(s);
                checks.push_back(check("exponential_benchmark", pass,
                                       {{"p_hat", s.p_hat}, {"se", se(s)}, {"reference", kExpReference},
                                        {"exact", exact}, {"wall_seconds", s.wall_seconds}}));
            }
        }
    }
    out.csv("exp_case.csv", tab.str());
    return checks;
}

}  // namespace

json run_benchmark(const BenchmarkOptions& opts) {
    if (opts.runs < 1) throw ConfigError("runs must be >= 1");
    if (opts.workers < 1) throw ConfigError("workers must be >= 1");
    json cfg{{"preset", opts.preset}, {"seed", opts.seed}, {"workers", opts.workers}, {"runs", opts.runs}};
    Manifest manifest("benchmark", cfg, opts.seed);
    Output out{opts.out_dir, manifest};
    json checks;
    if (opts.preset == "gauss-fig1") {
        checks = fig1(opts, out);
    } else if (opts.preset == "gauss-fig2") {
        checks = fig2(opts, out);
    } else if (opts.preset == "gauss-fig3") {
        checks = fig3(opts, out);
    } else if (opts.preset == "exp-case") {
        checks = exp_case(opts, out);
    } else {
        throw ConfigError("unknown preset '" + opts.preset + "' (gauss-fig1, gauss-fig2, gauss-fig3, exp-case)");
    }
    bool all = true;
    for (const auto& ch : checks) all = all && ch["pass"].get<bool>();
    json summary{{"preset", opts.preset}, {"seed", opts.seed}, {"checks", checks}, {"all_pass", all}};
    const std::string sp = (std::filesystem::path(opts.out_dir) / "summary.json").string();
    write_json(sp, summary);
    manifest.add_output(sp);
    manifest.write((std::filesystem::path(opts.out_dir) / "manifest.json").string());
    return summary;
}

}  // namespace raris::tool
