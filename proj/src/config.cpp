#include "raris/config.hpp"

#include <cstdlib>
#include <sstream>

#include "raris/cli_options.hpp"
#include "raris/errors.hpp"

namespace raris {

std::string to_string(Method m) {
    switch (m) {
        case Method::naive: return "naive";
        case Method::cis: return "cis";
        case Method::atis: return "atis";
    }
    return "?";
}

std::string to_string(TiltMode m) { return m == TiltMode::exact ? "exact" : "first-order"; }

std::string to_string(NormalizerMode m) {
    switch (m) {
        case NormalizerMode::closed: return "closed";
        case NormalizerMode::mc: return "mc";
        case NormalizerMode::quadrature: return "quadrature";
    }
    return "?";
}

std::string to_string(EndpointSampling m) {
    return m == EndpointSampling::mixture ? "mixture" : "fresh";
}

Method parse_method(const std::string& s) {
    if (s == "naive") return Method::naive;
    if (s == "cis") return Method::cis;
    if (s == "atis") return Method::atis;
    throw ConfigError("method must be one of naive, cis, atis (got '" + s + "')");
}

TiltMode parse_tilt_mode(const std::string& s) {
    if (s == "exact") return TiltMode::exact;
    if (s == "first-order") return TiltMode::first_order;
    throw ConfigError("tilt_mode must be exact or first-order (got '" + s + "')");
}

NormalizerMode parse_normalizer_mode(const std::string& s) {
    if (s == "closed") return NormalizerMode::closed;
    if (s == "mc") return NormalizerMode::mc;
    if (s == "quadrature") return NormalizerMode::quadrature;
    throw ConfigError("ci_mode must be closed, mc or quadrature (got '" + s + "')");
}

EndpointSampling parse_endpoint_sampling(const std::string& s) {
    if (s == "mixture") return EndpointSampling::mixture;
    if (s == "fresh") return EndpointSampling::fresh;
    throw ConfigError("endpoint_sampling must be mixture or fresh (got '" + s + "')");
}

void validate(const ExperimentConfig& cfg) {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (cfg.dist != "normal" && cfg.dist != "cexp") fail("dist must be normal or cexp");
    if (cfg.n < 1) fail("n must be >= 1");
    if (cfg.L < 1) fail("L must be >= 1");
    if (cfg.workers < 1) fail("workers must be >= 1");
    if (cfg.method == Method::cis && !(cfg.a_n >= 0.0)) fail("a_n must be >= 0 for cis");
    if (cfg.method == Method::atis) {
        if (cfg.n < 3) fail("n must be >= 3 for atis (need 1 <= k <= n-2)");
        if (!(cfg.a_n > 0.0)) fail("a_n must be > 0 for atis");
        if (cfg.k < 1) fail("k must satisfy k >= 1");
        if (cfg.k > cfg.n - 2) fail("k must satisfy k <= n-2");
        if (cfg.M < 1) fail("M must be >= 1");
        if (cfg.ci_mode == NormalizerMode::mc && cfg.n_c < 1) fail("nc must be >= 1 in mc mode");
    }
}

int default_workers() {
    if (const char* env = std::getenv("RARIS_WORKERS")) {
        const int w = std::atoi(env);
        if (w > 0) return w;
    }
    return 1;
}

void add_experiment_options(CLI::App& app, ExperimentConfig& cfg, ExperimentOptions& opts,
                            bool with_method) {
    app.set_config("--config", "", "flat key = value configuration file");
    app.add_option("--dist", cfg.dist, "summand law {normal, cexp}")->capture_default_str();
    app.add_option("--n", cfg.n, "number of summands")->capture_default_str();
    opts.a = app.add_option("--a", cfg.a_n, "threshold a_n on S_n/n");
    opts.k = app.add_option("--k", cfg.k, "adaptive block length (atis)");
    app.add_option("--M", cfg.M, "mixture size (atis)")->capture_default_str();
    app.add_option("--L", cfg.L, "number of replicates")->capture_default_str();
    app.add_option("--nc", cfg.n_c, "Monte Carlo normalizer sample size")->capture_default_str();
    app.add_option("--seed", cfg.seed, "master seed")->capture_default_str();
    cfg.workers = default_workers();
    app.add_option("--workers", cfg.workers, "worker threads (default $RARIS_WORKERS or 1)");
    app.add_option("--tilt-mode", opts.tilt_mode, "{exact, first-order}")->capture_default_str();
    app.add_option("--ci-mode", opts.ci_mode, "{closed, mc, quadrature}")->capture_default_str();
    app.add_option("--endpoint-sampling", opts.endpoint_sampling, "{mixture, fresh}")
        ->capture_default_str();
    if (with_method) {
        app.add_option("--method", opts.method, "{naive, cis, atis}")->capture_default_str();
    }
}

void finalize_experiment(ExperimentConfig& cfg, const ExperimentOptions& opts, bool require_k,
                         bool k_optional) {
    cfg.method = parse_method(opts.method);
    cfg.tilt_mode = parse_tilt_mode(opts.tilt_mode);
    cfg.ci_mode = parse_normalizer_mode(opts.ci_mode);
    cfg.endpoint_sampling = parse_endpoint_sampling(opts.endpoint_sampling);
    if (opts.a == nullptr || opts.a->count() == 0) {
        throw ConfigError("missing required field a_n (--a)");
    }
    if (!k_optional && (require_k || cfg.method == Method::atis) &&
        (opts.k == nullptr || opts.k->count() == 0)) {
        throw ConfigError("missing required field k (--k)");
    }
    validate(cfg);
}

ExperimentConfig parse_config(const std::vector<std::string>& args) {
    ExperimentConfig cfg;
    ExperimentOptions opts;
    CLI::App app{"experiment configuration"};
    add_experiment_options(app, cfg, opts);
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }
    finalize_experiment(cfg, opts);
    return cfg;
}

}  // namespace raris
