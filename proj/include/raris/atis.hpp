#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "raris/config.hpp"
#include "raris/dist.hpp"
#include "raris/rng.hpp"
#include "raris/tilt.hpp"

namespace raris {

/// Per-step state of the adaptive sampler while generating or replaying
/// X_1..X_k against an endpoint sigma.
///
/// m_in is the conditional target mean of the next summand,
///   m_in = n/(n-i) * (sigma - partial_sum/n),
/// and t_in the tilt whose mean is m_in (exactly in exact mode, to first order
/// otherwise; `residual` holds mean_tilted(t_in) - m_in).
struct TiltState {
    int n = 0;
    int i = 0;
    double partial_sum = 0.0;
    double sigma = 0.0;
    double t_in = 0.0;
    double m_in = 0.0;
    double s2_in = 1.0;
    double mu3_in = 0.0;
    double residual = 0.0;
    /// Target left the attainable mean range; the step uses the base law.
    bool clamped = false;
    /// First-order update left the tilt domain; the step was solved exactly.
    bool fallback = false;
};

/// Event counters accumulated over a run.
struct StepCounters {
    std::size_t clamps = 0;
    std::size_t fallbacks = 0;

    void record(const TiltState& s) {
        clamps += s.clamped ? 1 : 0;
        fallbacks += s.fallback ? 1 : 0;
    }
    StepCounters& operator+=(const StepCounters& o) {
        clamps += o.clamps;
        fallbacks += o.fallbacks;
        return *this;
    }
};

/// One-step conditional density g_i(y) = C p(y) N(ab, a; y).
struct GiParams {
    double a = 1.0;      ///< variance of the Gaussian factor, s²(n-i-1)
    double b = 0.0;      ///< Gaussian factor mean is a*b
    double log_c = 0.0;  ///< -log ∫ p(x) N(ab, a; x) dx
};

/// A simulated run x_1..x_n.
struct Trajectory {
    Eigen::VectorXd values;
    double endpoint = 0.0;  ///< endpoint used to drive the first k steps
    double log_p = 0.0;     ///< log Π p(x_i)
    double log_gbar = 0.0;  ///< filled by log_gbar_mixture
    bool hit = false;       ///< S_n/n > a_n
    double alpha_k = 0.0;   ///< tilted mean of the tail block
    StepCounters counters;
};

/// Endpoint law: a_n + Exp(rate n a_n).
double sample_endpoint(int n, double a_n, Rng& rng);

/// State at step i with exactly solved tilt.
TiltState tilt_exact(const DistributionModel& model, int n, double sigma, double partial_sum, int i);

/// Advances `state` past x_new with one Newton step warm-started at the
/// current tilt (no root solve). Falls back to tilt_exact when the step
/// leaves the tilt domain.
TiltState tilt_update(const DistributionModel& model, const TiltState& state, double x_new);

/// Parameters of g_i at `state`. `rng` is used only in mc mode.
GiParams gi_params(const DistributionModel& model, const TiltState& state, NormalizerMode mode,
                   int n_c, Rng& rng);

/// log g_i(y).
double gi_log_density(const DistributionModel& model, const GiParams& params, double y);

/// Exact draw from g_i by acceptance-rejection. The proposal is the law tilted
/// by gi_proposal_tilt(); if that fails, N(ab, a) with a flat envelope at sup p.
double sample_gi(const DistributionModel& model, const GiParams& params, Rng& rng);
/// Tilt theta with m(theta) = a (b - theta): the proposal whose mean matches
/// the centre of the Gaussian factor. NaN when no root is found.
double gi_proposal_tilt(const DistributionModel& model, const GiParams& params);

/// log g_sigma(x_1..x_k) = Σ_{i<k} log g_i(x_{i+1} | x_1..x_i), replaying the
/// tilt recursion against endpoint sigma.
double log_g_sigma(const DistributionModel& model, const ExperimentConfig& cfg,
                   std::span<const double> head, double sigma, Rng& rng, StepCounters& counters);

/// Tilt of the tail block: m(t_k) = n/(n-k) (a_n - s_k/n). Reverts to the base
/// law (t = 0) when the target is not attainable; `clamped` reports that.
TiltSolution tail_tilt(const DistributionModel& model, int n, int k, double a_n, double s_k,
                       bool& clamped);

/// Generates one trajectory driven by `endpoint` (log_gbar left at 0).
Trajectory sample_trajectory(const DistributionModel& model, const ExperimentConfig& cfg,
                             double endpoint, Rng& rng);

/// First `j` summands of a trajectory driven by `endpoint`.
std::vector<double> sample_head(const DistributionModel& model, const ExperimentConfig& cfg,
                                double endpoint, int j, Rng& rng, StepCounters& counters);
/// Same, drawing the endpoint from the endpoint law first.
Trajectory sample_trajectory(const DistributionModel& model, const ExperimentConfig& cfg, Rng& rng);

/// log of the M-component mixture density at a full trajectory.
double log_gbar_mixture(const DistributionModel& model, const ExperimentConfig& cfg,
                        std::span<const double> values, std::span<const double> mixture_endpoints,
                        Rng& rng, StepCounters& counters);

/// Mixture endpoints shared by all replicates of a run.
std::vector<double> draw_mixture_endpoints(const ExperimentConfig& cfg);

}  // namespace raris
