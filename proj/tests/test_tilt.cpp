#include <gtest/gtest.h>

#include <cmath>

#include "raris/errors.hpp"
#include "raris/numerics.hpp"
#include "raris/rng.hpp"
#include "raris/tilt.hpp"

using namespace raris;

TEST(Tilt, RoundTripProperty) {
    Rng rng(11);
    for (const char* id : {"normal", "cexp"}) {
        const DistributionModel m = make_model(id);
        for (int i = 0; i < 2000; ++i) {
            // alpha spread over (-0.99, 50) for cexp, (-50, 50) for normal
            const double u = rng.uniform();
            const double alpha = std::string(id) == "cexp" ? -0.99 + 50.99 * u * u : 100.0 * (u - 0.5);
            const TiltSolution s = solve_tilt(m, alpha);
            ASSERT_NEAR(m.mean_tilted(s.t), alpha, kTiltTolerance) << id << " alpha=" << alpha;
            ASSERT_TRUE(m.tilt_domain().contains(s.t));
        }
    }
}

TEST(Tilt, WithoutClosedInverseUsesNewton) {
    ModelFunctions f = make_centered_exponential().functions();
    f.inverse_mean = nullptr;
    const DistributionModel m = make_custom(f);
    for (double alpha : {-0.9, -0.3, 0.0, 0.232, 3.0, 40.0}) {
        const TiltSolution s = solve_tilt(m, alpha);
        EXPECT_NEAR(s.t, alpha / (1.0 + alpha), 1e-10);
    }
}

TEST(Tilt, UnattainableMeanIsDomainError) {
    const DistributionModel m = make_centered_exponential();
    EXPECT_THROW(solve_tilt(m, -1.0), DomainError);
    EXPECT_THROW(solve_tilt(m, -2.0), DomainError);
    try {
        solve_tilt(m, -1.5);
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("-1"), std::string::npos);
    }
}

TEST(Tilt, TiltAtZeroIsBaseLaw) {
    for (const char* id : {"normal", "cexp"}) {
        const DistributionModel m = make_model(id);
        const TiltSolution s = solve_tilt(m, 0.0);
        EXPECT_NEAR(s.t, 0.0, 1e-14);
        EXPECT_NEAR(tilted_log_density(m, s, 0.3), m.log_density(0.3), 1e-14);
    }
}

TEST(Tilt, ChernoffValues) {
    EXPECT_NEAR(chernoff(make_normal(), 0.232635), 0.232635 * 0.232635 / 2, 1e-15);
    // x - log(1 + x), scipy oracle.
    EXPECT_NEAR(chernoff(make_centered_exponential(), 0.232), 0.023361134888671975, 1e-14);
    EXPECT_NEAR(chernoff(make_centered_exponential(), 0.0), 0.0, 1e-15);
}

TEST(Tilt, RichterDensity) {
    // Exact for the normal law.
    const DistributionModel nm = make_normal();
    for (int n : {10, 100, 1000}) {
        const double a = 2.0 / std::sqrt(n);
        const double exact = std::sqrt(n) * normal_pdf(a * std::sqrt(n));
        EXPECT_NEAR(std::exp(richter_log_density(nm, n, a)) / exact, 1.0, 1e-12);
    }
    // cexp: the leading term omits 1/s(t) and overshoots the Gamma density.
    const DistributionModel cm = make_centered_exponential();
    EXPECT_NEAR(std::exp(richter_log_density(cm, 100, 0.232)), 0.38578813661353334, 1e-12);
}

TEST(Tilt, JensenTail) {
    const DistributionModel nm = make_normal();
    // For the normal law the leading-term ratio depends on n only through a sqrt(n).
    for (int n : {25, 100, 400}) {
        const double a = 2.32635 / std::sqrt(n);
        EXPECT_NEAR(std::exp(jensen_log_tail(nm, n, a)) / normal_sf(a * std::sqrt(n)), 1.1456642983252365, 1e-9);
    }
    EXPECT_NEAR(std::exp(jensen_log_tail(make_centered_exponential(), 100, 0.232)), 0.01662879899196264, 1e-12);
    EXPECT_THROW(jensen_log_tail(nm, 100, 0.0), DomainError);
    EXPECT_THROW(jensen_log_tail(nm, 100, -0.1), DomainError);
}

TEST(Tilt, JensenImprovesWithDepthAtFixedA) {
    // At fixed a the relative error of the leading term shrinks as n grows.
    const DistributionModel cm = make_centered_exponential();
    double prev = 1e9;
    for (int n : {50, 100, 200, 400, 800}) {
        const double ratio = std::exp(jensen_log_tail(cm, n, 0.232) - std::log(cm.functions().sum_mean_tail(n, 0.232)));
        EXPECT_LT(std::abs(ratio - 1.0), prev);
        prev = std::abs(ratio - 1.0);
    }
}
