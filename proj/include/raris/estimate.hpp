#pragma once

#include <cstdint>
#include <vector>

#include "raris/config.hpp"
#include "raris/dist.hpp"

namespace raris {

struct ReplicateRecord {
    std::int64_t index = 0;
    double log_weight = 0.0;  ///< log p/g of the trajectory, hit or not
    bool hit = false;
    double endpoint = 0.0;    ///< ATIS driving endpoint; NaN for other methods
};

struct EstimateSummary {
    Method method = Method::atis;
    double p_hat = 0.0;
    double var_hat = 0.0;  ///< empirical variance of the weights / L
    double re_hat = 0.0;   ///< var_hat / p_hat²
    double hit_rate = 0.0;
    std::int64_t L = 0;
    std::uint64_t clamp_count = 0;
    std::uint64_t fallback_count = 0;
    double wall_seconds = 0.0;
    std::vector<ReplicateRecord> records;  ///< filled when requested

    /// Empirical second moment of the weights divided by p_hat².
    double relative_second_moment() const;
};

/// (1/L) Σ 1{S_n/n > a_n}, summands drawn from p.
EstimateSummary naive_estimate(const DistributionModel& model, const ExperimentConfig& cfg,
                               bool keep_records = false);
/// Classical tilted IS: i.i.d. draws from the tilt with mean a_n.
EstimateSummary classical_is_estimate(const DistributionModel& model, const ExperimentConfig& cfg,
                                      bool keep_records = false);
/// Adaptive twisted IS with an M-component endpoint mixture.
EstimateSummary atis_estimate(const DistributionModel& model, const ExperimentConfig& cfg,
                              bool keep_records = false);
/// Dispatches on cfg.method.
EstimateSummary run_estimate(const DistributionModel& model, const ExperimentConfig& cfg,
                             bool keep_records = false);

/// Leading-order relative error of classical IS: sqrt(2π) sqrt(n) a_n / L.
double theoretical_re_classical(int n, double a_n, std::int64_t L);
/// Leading-order relative error of ATIS: sqrt(2π) sqrt(n-k-1) a_n / L.
double theoretical_re_atis(int n, int k, double a_n, std::int64_t L);
/// Predicted MSE(atis)/MSE(cis): sqrt(n-k)/sqrt(n).
double mse_ratio_prediction(int n, int k);

}  // namespace raris
