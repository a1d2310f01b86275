#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "raris/config.hpp"
#include "raris/dist.hpp"
#include "raris/estimate.hpp"

namespace raris {

/// Result of scanning the ratio statistic over a grid of block lengths.
struct KScan {
    std::vector<int> j_values;
    std::vector<double> stats;
    int selected_k = 0;
    double threshold = 0.2;
    bool no_departure = false;
    int first_departure = -1;  ///< first j with |stat - 1| > threshold, -1 if none
    std::uint64_t clamp_count = 0;
};

/// Saddlepoint approximation of log p(x_1..x_j | S_n = n * endpoint):
///   log p(x_1^j) + 0.5 log(n/(n-j)) - (n-j) I(alpha) + n I(endpoint),
/// alpha = (n endpoint - s_j)/(n-j). Returns -inf (and bumps `clamps`) when
/// alpha is not an attainable mean. An empty block gives 0.
double phat_richter(const DistributionModel& model, int n, std::span<const double> values,
                    double endpoint, std::uint64_t& clamps);

/// Mean over `L_scan` runs of gbar(X_1^j) / phat(X_1^j), each run driven by a
/// fresh endpoint, with independent M_scan-endpoint sets for the two mixtures.
/// Deterministic in (cfg.seed, j).
double khat_statistic(const DistributionModel& model, const ExperimentConfig& cfg, int j,
                      int L_scan, int M_scan, std::uint64_t* clamps = nullptr);

/// Scans `j_grid` (strictly increasing, within [1, n-2]) and returns the last
/// j before the first departure |stat - 1| > threshold, or max(j_grid) with
/// `no_departure` set.
KScan select_k(const DistributionModel& model, const ExperimentConfig& cfg,
               const std::vector<int>& j_grid, double threshold, int L_scan, int M_scan);

/// Picks k from precomputed statistics (same rule as select_k).
void apply_selection_rule(KScan& scan);

struct MScanRow {
    int M = 0;
    EstimateSummary summary;
};

/// Re-runs the ATIS estimator for every M in `m_grid` on the same seed.
std::vector<MScanRow> m_scan(const DistributionModel& model, const ExperimentConfig& cfg,
                             const std::vector<int>& m_grid);

/// "lo:hi:step" or "v1,v2,..." into a list of integers.
std::vector<int> parse_int_grid(const std::string& text);

}  // namespace raris
