#include "raris/tilt.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "raris/errors.hpp"
#include "raris/numerics.hpp"

namespace raris {

namespace {

void require_attainable(const DistributionModel& model, double alpha) {
    const Interval& r = model.mean_range();
    if (!r.contains(alpha)) {
        std::ostringstream os;
        os << "mean " << alpha << " is outside the attainable range (" << r.lo << ", " << r.hi
           << ") of '" << model.name() << "'";
        throw DomainError(os.str());
    }
}

}  // namespace

TiltSolution tilt_at(const DistributionModel& model, double t) {
    TiltSolution s;
    s.t = t;
    s.alpha = model.mean_tilted(t);
    s.s2 = model.var_tilted(t);
    s.mu3 = model.mu3_tilted(t);
    s.log_mgf_at_t = model.log_mgf(t);
    return s;
}

TiltSolution solve_tilt(const DistributionModel& model, double alpha) {
    require_attainable(model, alpha);
    const Interval& dom = model.tilt_domain();
    const auto& fn = model.functions();

    double lo = dom.lo;
    double hi = dom.hi;
    double t = fn.inverse_mean ? fn.inverse_mean(alpha) : std::clamp(alpha, lo, hi);
    if (!dom.contains(t)) t = 0.0;

    const double tol = std::max(1e-13, 1e-15 * std::abs(alpha));
    for (int iter = 0; iter < 100; ++iter) {
        const double f = model.mean_tilted(t) - alpha;
        if (std::abs(f) <= tol) {
            TiltSolution s = tilt_at(model, t);
            s.alpha = alpha;
            return s;
        }
        if (f < 0.0) {
            lo = t;
        } else {
            hi = t;
        }
        double next = t - f / model.var_tilted(t);
        if (!(next > lo && next < hi) || !std::isfinite(next)) {
            if (std::isfinite(lo) && std::isfinite(hi)) {
                next = 0.5 * (lo + hi);
            } else if (std::isfinite(hi)) {
                // Only the upper side is bracketed: step halfway toward it, or
                // expand downward.
                next = f < 0.0 ? 0.5 * (t + hi) : t - std::max(1.0, std::abs(t));
            } else if (std::isfinite(lo)) {
                next = f > 0.0 ? 0.5 * (t + lo) : t + std::max(1.0, std::abs(t));
            } else {
                next = f < 0.0 ? t + std::max(1.0, std::abs(t)) : t - std::max(1.0, std::abs(t));
            }
        }
        if (next == t) {
            break;
        }
        t = next;
    }
    const double resid = std::abs(model.mean_tilted(t) - alpha);
    if (resid < kTiltTolerance) {
        TiltSolution s = tilt_at(model, t);
        s.alpha = alpha;
        return s;
    }
    std::ostringstream os;
    os << "solve_tilt did not converge for alpha=" << alpha << " (residual " << resid << ")";
    throw NumericalError(os.str());
}

double tilted_log_density(const DistributionModel& model, const TiltSolution& sol, double x) {
    if (!model.support().contains(x)) return -kInf;
    return sol.t * x - sol.log_mgf_at_t + model.log_density(x);
}

double sample_tilted(const DistributionModel& model, const TiltSolution& sol, Rng& rng) {
    return model.functions().sample_tilted(sol.t, rng);
}

double chernoff(const DistributionModel& model, double x) {
    const TiltSolution s = solve_tilt(model, x);
    return s.t * x - s.log_mgf_at_t;
}

double richter_log_density(const DistributionModel& model, int n, double a) {
    if (n < 1) throw DomainError("richter_log_density requires n >= 1");
    return 0.5 * std::log(static_cast<double>(n)) - n * chernoff(model, a) - kLogSqrt2Pi;
}

double jensen_log_tail(const DistributionModel& model, int n, double a) {
    if (n < 1) throw DomainError("jensen_log_tail requires n >= 1");
    if (!(a > 0.0)) throw DomainError("jensen_log_tail requires a > 0 (psi(a) vanishes at 0)");
    const TiltSolution s = solve_tilt(model, a);
    const double rate = s.t * a - s.log_mgf_at_t;
    const double psi = s.t * std::sqrt(s.s2);
    return -n * rate - kLogSqrt2Pi - 0.5 * std::log(static_cast<double>(n)) - std::log(psi);
}

}  // namespace raris
