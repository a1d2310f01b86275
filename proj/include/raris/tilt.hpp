#pragma once

#include "raris/dist.hpp"
#include "raris/rng.hpp"

namespace raris {

/// Solution of m(t) = alpha with the tilted-law moments cached.
struct TiltSolution {
    double alpha = 0.0;  ///< target mean
    double t = 0.0;      ///< tilt parameter
    double s2 = 1.0;     ///< variance of the tilted law
    double mu3 = 0.0;    ///< third central moment of the tilted law
    double log_mgf_at_t = 0.0;
};

/// Absolute tolerance on |m(t) - alpha| after solving.
inline constexpr double kTiltTolerance = 1e-10;

/// Solves m(t) = alpha by safeguarded Newton (bisection fallback inside a
/// maintained bracket). Throws DomainError when alpha is not an attainable
/// mean and NumericalError if 100 iterations do not converge.
TiltSolution solve_tilt(const DistributionModel& model, double alpha);

/// Moments of the tilted law at a given tilt parameter.
TiltSolution tilt_at(const DistributionModel& model, double t);

/// log π^alpha(x) = t x - log Φ(t) + log p(x); -inf outside the support.
double tilted_log_density(const DistributionModel& model, const TiltSolution& sol, double x);

/// Exact draw from π^alpha.
double sample_tilted(const DistributionModel& model, const TiltSolution& sol, Rng& rng);

/// Chernoff function I(x) = sup_t { t x - log Φ(t) }.
double chernoff(const DistributionModel& model, double x);

/// Leading-order log density of S_n/n at a: log( sqrt(n) exp(-n I(a)) / sqrt(2π) ).
double richter_log_density(const DistributionModel& model, int n, double a);

/// Leading-order log tail log P(S_n/n > a) = -n I(a) - log( sqrt(2π n) t_a s(t_a) ).
/// Requires a > 0.
double jensen_log_tail(const DistributionModel& model, int n, double a);

}  // namespace raris
