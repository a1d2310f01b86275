#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "raris/config.hpp"
#include "raris/dist.hpp"
#include "raris/rng.hpp"

namespace raris {

struct DiagReport {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;  ///< statistic <= threshold
    std::int64_t samples_used = 0;
    std::string notes;
};

/// Exact sampler of X_1..X_n conditioned on S_n/n > a.
///
/// normal: T = S_n/n is drawn from its truncated law and the path is the
/// Gaussian bridge X - mean(X) + T. cexp: S_n + n ~ Gamma(n) is drawn by
/// rejection above n(1 + a) and split by normalized exponentials. Other models
/// reject whole unconditioned paths.
class ConditionedSampler {
public:
    ConditionedSampler(const DistributionModel& model, int n, double a,
                       std::int64_t attempt_budget = 10'000'000);

    /// One conditioned path; throws NumericalError once the attempt budget is spent.
    Eigen::VectorXd draw(Rng& rng);

    std::int64_t attempts() const { return attempts_; }
    std::int64_t accepted() const { return accepted_; }

private:
    enum class Kind { normal, cexp, generic };
    const DistributionModel& model_;
    int n_;
    double a_;
    Kind kind_;
    std::int64_t budget_;
    std::int64_t attempts_ = 0;
    std::int64_t accepted_ = 0;
};

/// Z = n t_a (T - a) under the conditioned law vs Exp(1); statistic is the KS distance.
DiagReport endpoint_law_check(const DistributionModel& model, int n, double a_n, int n_samples,
                              std::uint64_t seed, double threshold = 0.05);

/// X_1 under the conditioned law vs the tilted law with mean a_n (KS distance).
/// A negative threshold selects the default: 0.05 for normal, 0.08 otherwise.
DiagReport gibbs_marginal_check(const DistributionModel& model, int n, double a_n, int n_samples,
                                std::uint64_t seed, double threshold = -1.0);

struct MaxPathOptions {
    std::vector<int> n_grid{50, 100, 200, 400};
    double a_scale = 2.32635;  ///< a_n = a_scale * n^(-a_power)
    double a_power = 0.5;
    double k_fraction = 0.6;
    int n_samples = 2000;
    double slope_cap = 2.0;
    double curvature_cap = 1.0;
};

struct MaxPathResult {
    DiagReport report;
    std::vector<int> k_values;
    std::vector<double> medians;
    double slope = 0.0;      ///< d median / d log n, linear fit
    double curvature = 0.0;  ///< quadratic coefficient of the fit in log n
};

/// Median of max(X_1..X_k) under conditioning vs log n. statistic =
/// max(|slope|/slope_cap, |curvature|/curvature_cap); passes below 1.
MaxPathResult max_path_check(const DistributionModel& model, const MaxPathOptions& opts,
                             std::uint64_t seed);

struct PathRow {
    int run_id = 0;
    std::string method;
    int step = 0;
    double value = 0.0;
    double running_mean = 0.0;
};

/// `count` ATIS trajectories followed by `count` classical IS trajectories.
std::vector<PathRow> dump_typical_paths(const DistributionModel& model, const ExperimentConfig& cfg,
                                        int count);

void write_paths_csv(std::ostream& os, const std::vector<PathRow>& rows);

}  // namespace raris
