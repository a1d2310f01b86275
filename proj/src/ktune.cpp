#include "raris/ktune.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "raris/atis.hpp"
#include "raris/errors.hpp"
#include "raris/numerics.hpp"
#include "raris/parallel.hpp"
#include "raris/rng.hpp"
#include "raris/tilt.hpp"

namespace raris {

namespace {

std::vector<double> endpoint_set(const ExperimentConfig& cfg, std::uint64_t base, std::uint64_t tag,
                                 int count) {
    Rng rng(stream_seed(base, tag), 0);
    std::vector<double> e(static_cast<std::size_t>(count));
    for (double& x : e) x = sample_endpoint(cfg.n, cfg.a_n, rng);
    return e;
}

}  // namespace

double phat_richter(const DistributionModel& model, int n, std::span<const double> values,
                    double endpoint, std::uint64_t& clamps) {
    const int j = static_cast<int>(values.size());
    if (j == 0) return 0.0;
    if (j >= n) throw DomainError("phat_richter needs j < n");
    double s = 0.0;
    double log_p = 0.0;
    for (double x : values) {
        s += x;
        log_p += model.log_density(x);
    }
    const double alpha = (n * endpoint - s) / (n - j);
    if (!model.mean_range().contains(alpha) || !model.mean_range().contains(endpoint)) {
        ++clamps;
        return -kInf;
    }
    return log_p + 0.5 * std::log(static_cast<double>(n) / (n - j)) - (n - j) * chernoff(model, alpha) +
           n * chernoff(model, endpoint);
}

double khat_statistic(const DistributionModel& model, const ExperimentConfig& cfg, int j,
                      int L_scan, int M_scan, std::uint64_t* clamps) {
    if (j < 1 || j > cfg.n - 2) throw ConfigError("scan j must satisfy 1 <= j <= n-2");
    if (L_scan < 1) throw ConfigError("L-scan must be >= 1");
    if (M_scan < 1) throw ConfigError("M-scan must be >= 1");
    const std::uint64_t base = stream_seed(stream_seed(cfg.seed, kScanStream), static_cast<std::uint64_t>(j));
    const std::vector<double> set_g = endpoint_set(cfg, base, 1, M_scan);
    const std::vector<double> set_p = endpoint_set(cfg, base, 2, M_scan);
    const double log_m = std::log(static_cast<double>(M_scan));

    struct Run {
        double ratio;
        std::uint64_t clamps;
    };
    const auto runs = parallel_map<Run>(0, L_scan, cfg.workers, [&](std::int64_t l) {
        Rng rng(base, static_cast<std::uint64_t>(l) + 16);
        StepCounters counters;
        const double e = sample_endpoint(cfg.n, cfg.a_n, rng);
        const std::vector<double> head = sample_head(model, cfg, e, j, rng, counters);
        std::vector<double> lg(set_g.size());
        std::vector<double> lp(set_p.size());
        std::uint64_t c = 0;
        for (std::size_t m = 0; m < set_g.size(); ++m) {
            lg[m] = log_g_sigma(model, cfg, head, set_g[m], rng, counters);
        }
        for (std::size_t m = 0; m < set_p.size(); ++m) {
            lp[m] = phat_richter(model, cfg.n, head, set_p[m], c);
        }
        const double diff = (log_sum_exp(lg) - log_m) - (log_sum_exp(lp) - log_m);
        return Run{std::exp(diff), c + counters.clamps};
    });
    CompensatedSum acc;
    std::uint64_t total_clamps = 0;
    for (const Run& r : runs) {
        acc.add(r.ratio);
        total_clamps += r.clamps;
    }
    if (clamps) *clamps += total_clamps;
    return acc.value() / L_scan;
}

void apply_selection_rule(KScan& scan) {
    scan.first_departure = -1;
    scan.no_departure = true;
    scan.selected_k = scan.j_values.empty() ? 0 : scan.j_values.back();
    for (std::size_t i = 0; i < scan.stats.size(); ++i) {
        if (!(std::abs(scan.stats[i] - 1.0) <= scan.threshold)) {
            scan.first_departure = scan.j_values[i];
            scan.no_departure = false;
            scan.selected_k = i > 0 ? scan.j_values[i - 1] : scan.j_values[0];
            break;
        }
    }
}

KScan select_k(const DistributionModel& model, const ExperimentConfig& cfg,
               const std::vector<int>& j_grid, double threshold, int L_scan, int M_scan) {
    if (j_grid.empty()) throw ConfigError("k grid is empty");
    for (std::size_t i = 0; i < j_grid.size(); ++i) {
        if (j_grid[i] < 1 || j_grid[i] > cfg.n - 2) throw ConfigError("k grid values must lie in [1, n-2]");
        if (i > 0 && j_grid[i] <= j_grid[i - 1]) throw ConfigError("k grid must be strictly increasing");
    }
    if (!(threshold >= 0.0)) throw ConfigError("threshold must be >= 0");
    KScan scan;
    scan.j_values = j_grid;
    scan.threshold = threshold;
    for (int j : j_grid) scan.stats.push_back(khat_statistic(model, cfg, j, L_scan, M_scan, &scan.clamp_count));
    apply_selection_rule(scan);
    return scan;
}

std::vector<MScanRow> m_scan(const DistributionModel& model, const ExperimentConfig& cfg,
                             const std::vector<int>& m_grid) {
    if (m_grid.empty()) throw ConfigError("M grid is empty");
    std::vector<MScanRow> rows;
    for (int m : m_grid) {
        ExperimentConfig c = cfg;
        c.method = Method::atis;
        c.M = m;
        rows.push_back({m, atis_estimate(model, c)});
    }
    return rows;
}

std::vector<int> parse_int_grid(const std::string& text) {
    auto to_int = [&](const std::string& s) {
        std::size_t pos = 0;
        int v = 0;
        try {
            v = std::stoi(s, &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != s.size()) throw ConfigError("bad integer '" + s + "' in grid '" + text + "'");
        return v;
    };
    std::vector<int> out;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) throw ConfigError("grid must be lo:hi:step (got '" + text + "')");
        const int lo = to_int(parts[0]);
        const int hi = to_int(parts[1]);
        const int step = to_int(parts[2]);
        if (step <= 0 || hi < lo) throw ConfigError("grid needs lo <= hi and step > 0");
        for (int v = lo; v <= hi; v += step) out.push_back(v);
    } else {
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ',');) out.push_back(to_int(p));
    }
    if (out.empty()) throw ConfigError("grid is empty");
    return out;
}

}  // namespace raris
