#include <cmath>
#include <iostream>
#include <limits>
#include <string>

#include <CLI11.hpp>

#include "benchmark.hpp"
#include "output.hpp"
#include "raris/cli_options.hpp"
#include "raris/diag.hpp"
#include "raris/dist.hpp"
#include "raris/errors.hpp"
#include "raris/estimate.hpp"
#include "raris/ktune.hpp"
#include "raris/tilt.hpp"

using namespace raris;
using namespace raris::tool;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kIo = 4 };

struct EstimateCmd {
    ExperimentConfig cfg;
    ExperimentOptions opts;
    std::string out = "-";
    std::string weights;
    std::string manifest;
};

struct SelectKCmd {
    ExperimentConfig cfg;
    ExperimentOptions opts;
    std::string grid;
    double threshold = 0.2;
    int L_scan = 500;
    int M_scan = 50;
    std::string out = "kscan.csv";
    std::string summary = "-";
};

struct MScanCmd {
    ExperimentConfig cfg;
    ExperimentOptions opts;
    std::string grid = "10,30,100,300";
    std::string out = "mscan.csv";
};

struct TailCmd {
    std::string dist = "normal";
    int n = 100;
    double a = 0.0;
    std::string out = "-";
};

struct DiagnoseCmd {
    std::string check;
    std::string dist = "normal";
    int n = 100;
    double a = 0.0;
    int samples = 10000;
    std::uint64_t seed = 1;
    double threshold = std::numeric_limits<double>::quiet_NaN();
    std::string n_grid = "50,100,200,400";
    double a_scale = 2.32635;
    double a_power = 0.5;
    double k_fraction = 0.6;
    int k = 60;
    int M = 30;
    int count = 20;
    std::string out = "-";
};

int run_estimate_cmd(EstimateCmd& c) {
    finalize_experiment(c.cfg, c.opts);
    const DistributionModel model = make_model(c.cfg.dist);
    Manifest manifest("estimate", to_json(c.cfg), c.cfg.seed);
    const EstimateSummary s = run_estimate(model, c.cfg, !c.weights.empty());
    write_json(c.out, to_json(s, c.cfg));
    manifest.add_output(c.out);
    if (!c.weights.empty()) {
        write_text(c.weights, weights_csv(s));
        manifest.add_output(c.weights);
    }
    if (!c.manifest.empty()) manifest.write(c.manifest);
    return kOk;
}

int run_select_k_cmd(SelectKCmd& c) {
    finalize_experiment(c.cfg, c.opts, false, true);
    const DistributionModel model = make_model(c.cfg.dist);
    std::vector<int> grid;
    if (c.grid.empty()) {
        const int step = std::max(1, c.cfg.n / 20);
        for (int j = step; j <= c.cfg.n - 2; j += step) grid.push_back(j);
    } else {
        grid = parse_int_grid(c.grid);
    }
    const KScan scan = select_k(model, c.cfg, grid, c.threshold, c.L_scan, c.M_scan);
    std::ostringstream csv;
    csv << "j,stat\n" << std::setprecision(12);
    for (std::size_t i = 0; i < scan.j_values.size(); ++i) csv << scan.j_values[i] << ',' << scan.stats[i] << '\n';
    write_text(c.out, csv.str());
    json j = to_json(scan);
    j["L_scan"] = c.L_scan;
    j["M_scan"] = c.M_scan;
    j["config"] = to_json(c.cfg);
    write_json(c.summary, j);
    return kOk;
}

int run_m_scan_cmd(MScanCmd& c) {
    c.opts.method = "atis";
    finalize_experiment(c.cfg, c.opts, true);
    const DistributionModel model = make_model(c.cfg.dist);
    const auto rows = m_scan(model, c.cfg, parse_int_grid(c.grid));
    std::ostringstream csv;
    csv << "M,p_hat,re_hat\n" << std::setprecision(12);
    for (const auto& r : rows) csv << r.M << ',' << r.summary.p_hat << ',' << r.summary.re_hat << '\n';
    write_text(c.out, csv.str());
    return kOk;
}

int run_tail_cmd(TailCmd& c) {
    if (c.n < 1) throw ConfigError("n must be >= 1");
    const DistributionModel model = make_model(c.dist);
    const TiltSolution sol = solve_tilt(model, c.a);
    json j{{"dist", c.dist},
           {"n", c.n},
           {"a", c.a},
           {"t", sol.t},
           {"chernoff", chernoff(model, c.a)},
           {"richter_density", std::exp(richter_log_density(model, c.n, c.a))}};
    j["jensen_tail"] = c.a > 0.0 ? json(std::exp(jensen_log_tail(model, c.n, c.a))) : json(nullptr);
    const auto& f = model.functions();
    j["exact_density"] = f.sum_mean_log_density ? json(std::exp(f.sum_mean_log_density(c.n, c.a))) : json(nullptr);
    j["exact_tail"] = f.sum_mean_tail ? json(f.sum_mean_tail(c.n, c.a)) : json(nullptr);
    write_json(c.out, j);
    return kOk;
}

int run_diagnose_cmd(DiagnoseCmd& c) {
    const DistributionModel model = make_model(c.dist);
    const bool has_threshold = !std::isnan(c.threshold);
    if (c.check == "endpoint") {
        write_json(c.out, to_json(endpoint_law_check(model, c.n, c.a, c.samples, c.seed,
                                                     has_threshold ? c.threshold : 0.05)));
    } else if (c.check == "gibbs") {
        write_json(c.out, to_json(gibbs_marginal_check(model, c.n, c.a, c.samples, c.seed,
                                                       has_threshold ? c.threshold : -1.0)));
    } else if (c.check == "maxpath") {
        MaxPathOptions o;
        o.n_grid = parse_int_grid(c.n_grid);
        o.a_scale = c.a_scale;
        o.a_power = c.a_power;
        o.k_fraction = c.k_fraction;
        o.n_samples = c.samples;
        if (has_threshold) o.slope_cap = c.threshold;
        const MaxPathResult r = max_path_check(model, o, c.seed);
        json j = to_json(r.report);
        j["n_grid"] = o.n_grid;
        j["k_values"] = r.k_values;
        j["medians"] = r.medians;
        j["slope"] = r.slope;
        j["curvature"] = r.curvature;
        write_json(c.out, j);
    } else if (c.check == "paths") {
        ExperimentConfig cfg;
        cfg.dist = c.dist;
        cfg.n = c.n;
        cfg.a_n = c.a;
        cfg.k = c.k;
        cfg.M = c.M;
        cfg.seed = c.seed;
        std::ostringstream os;
        write_paths_csv(os, dump_typical_paths(model, cfg, c.count));
        write_text(c.out, os.str());
    } else {
        throw ConfigError("check must be endpoint, gibbs, maxpath or paths");
    }
    return kOk;
}

void configure(CLI::App& app, EstimateCmd& c) {
    add_experiment_options(app, c.cfg, c.opts);
    app.add_option("--out", c.out, "summary JSON ('-' for stdout)")->capture_default_str();
    app.add_option("--emit-weights", c.weights, "per-replicate weights CSV");
    app.add_option("--manifest", c.manifest, "run manifest JSON");
}

void configure(CLI::App& app, SelectKCmd& c) {
    add_experiment_options(app, c.cfg, c.opts, false);
    app.add_option("--grid", c.grid, "lo:hi:step or comma list (default step n/20)");
    app.add_option("--threshold", c.threshold, "departure threshold on |stat - 1|")->capture_default_str();
    app.add_option("--L-scan", c.L_scan, "runs per scan point")->capture_default_str();
    app.add_option("--M-scan", c.M_scan, "endpoints per mixture")->capture_default_str();
    app.add_option("--out", c.out, "CSV with columns j, stat")->capture_default_str();
    app.add_option("--summary", c.summary, "selection JSON ('-' for stdout)")->capture_default_str();
}

void configure(CLI::App& app, MScanCmd& c) {
    add_experiment_options(app, c.cfg, c.opts, false);
    app.add_option("--m-grid", c.grid, "comma list or lo:hi:step")->capture_default_str();
    app.add_option("--out", c.out, "CSV with columns M, p_hat, re_hat")->capture_default_str();
}

// CLI11 only reads config files for the top-level app, so a subcommand given --config is
// re-parsed as a standalone app; explicit flags still override file values.
template <class Cmd, class Run>
int with_config_file(CLI::App& sub, Cmd& cmd, int argc, char** argv, Run run) {
    if (sub.get_config_ptr() == nullptr || sub.get_config_ptr()->count() == 0) return run(cmd);
    Cmd fresh;
    CLI::App solo{sub.get_description(), sub.get_name()};
    configure(solo, fresh);
    try {
        solo.parse(argc - 1, argv + 1);
    } catch (const CLI::ParseError& e) {
        const int rc = solo.exit(e);
        return rc == 0 ? kOk : kConfig;
    }
    return run(fresh);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rare-event probabilities for sums of i.i.d. summands by adaptive twisted importance sampling"};
    app.set_version_flag("--version", RARIS_VERSION);
    app.require_subcommand(1);

    EstimateCmd est;
    auto* sub_est = app.add_subcommand("estimate", "estimate P(S_n/n > a) with naive, cis or atis");
    configure(*sub_est, est);

    SelectKCmd sk;
    auto* sub_sk = app.add_subcommand("select-k", "scan the conditional-density ratio statistic over k");
    configure(*sub_sk, sk);

    MScanCmd ms;
    auto* sub_ms = app.add_subcommand("m-scan", "re-run atis over a grid of mixture sizes");
    configure(*sub_ms, ms);

    TailCmd tl;
    auto* sub_tl = app.add_subcommand("tail", "saddlepoint density and tail approximations");
    sub_tl->add_option("--dist", tl.dist)->capture_default_str();
    sub_tl->add_option("--n", tl.n)->capture_default_str();
    sub_tl->add_option("--a", tl.a)->required();
    sub_tl->add_option("--out", tl.out)->capture_default_str();

    DiagnoseCmd dg;
    auto* sub_dg = app.add_subcommand("diagnose", "empirical checks of the conditioned random walk");
    sub_dg->add_option("--check", dg.check, "{endpoint, gibbs, maxpath, paths}")->required();
    sub_dg->add_option("--dist", dg.dist)->capture_default_str();
    sub_dg->add_option("--n", dg.n)->capture_default_str();
    sub_dg->add_option("--a", dg.a, "threshold a_n (endpoint, gibbs, paths)");
    sub_dg->add_option("--samples", dg.samples)->capture_default_str();
    sub_dg->add_option("--seed", dg.seed)->capture_default_str();
    sub_dg->add_option("--threshold", dg.threshold, "pass threshold (slope cap for maxpath)");
    sub_dg->add_option("--n-grid", dg.n_grid, "maxpath: values of n")->capture_default_str();
    sub_dg->add_option("--a-scale", dg.a_scale, "maxpath: a_n = scale * n^-power")->capture_default_str();
    sub_dg->add_option("--a-power", dg.a_power)->capture_default_str();
    sub_dg->add_option("--k-fraction", dg.k_fraction, "maxpath: k = fraction * n")->capture_default_str();
    sub_dg->add_option("--k", dg.k, "paths: adaptive block length")->capture_default_str();
    sub_dg->add_option("--M", dg.M, "paths: mixture size")->capture_default_str();
    sub_dg->add_option("--count", dg.count, "paths: trajectories per method")->capture_default_str();
    sub_dg->add_option("--out", dg.out)->capture_default_str();

    BenchmarkOptions bo;
    bo.workers = default_workers();
    auto* sub_bm = app.add_subcommand("benchmark", "run a reference experiment grid");
    sub_bm->add_option("--preset", bo.preset, "{gauss-fig1, gauss-fig2, gauss-fig3, exp-case}")->required();
    sub_bm->add_option("--out-dir", bo.out_dir)->capture_default_str();
    sub_bm->add_option("--seed", bo.seed)->capture_default_str();
    sub_bm->add_option("--workers", bo.workers);
    sub_bm->add_option("--runs", bo.runs, "repetitions for the variance presets")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        if (sub_est->parsed()) return with_config_file(*sub_est, est, argc, argv, run_estimate_cmd);
        if (sub_sk->parsed()) return with_config_file(*sub_sk, sk, argc, argv, run_select_k_cmd);
        if (sub_ms->parsed()) return with_config_file(*sub_ms, ms, argc, argv, run_m_scan_cmd);
        if (sub_tl->parsed()) return run_tail_cmd(tl);
        if (sub_dg->parsed()) return run_diagnose_cmd(dg);
        if (sub_bm->parsed()) {
            const json s = run_benchmark(bo);
            std::cout << s.dump(2) << '\n';
            return kOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kNumerical;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    }
    return kOk;
}
