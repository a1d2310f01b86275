#include <gtest/gtest.h>

#include <cmath>

#include "raris/dist.hpp"
#include "raris/errors.hpp"
#include "raris/numerics.hpp"

using namespace raris;

TEST(Dist, BuiltinsAreCentredAndScaled) {
    for (const char* id : {"normal", "cexp"}) {
        const DistributionModel m = make_model(id);
        EXPECT_NEAR(m.mean_tilted(0.0), 0.0, 1e-15) << id;
        EXPECT_NEAR(m.var_tilted(0.0), 1.0, 1e-15) << id;
        EXPECT_NEAR(m.log_mgf(0.0), 0.0, 1e-15) << id;
        const Interval& sup = m.support();
        EXPECT_NEAR(integrate([&](double x) { return m.density(x); }, sup.lo, sup.hi), 1.0, 1e-10) << id;
    }
    EXPECT_THROW(make_model("cauchy"), ConfigError);
}

TEST(Dist, CexpClosedForms) {
    const DistributionModel m = make_centered_exponential();
    EXPECT_DOUBLE_EQ(m.density(-1.5), 0.0);
    EXPECT_NEAR(m.log_mgf(0.5), -0.5 + std::log(2.0), 1e-15);
    EXPECT_THROW(m.log_mgf(1.0), DomainError);
    EXPECT_NEAR(m.mean_tilted(0.5), 1.0, 1e-15);
    EXPECT_NEAR(m.var_tilted(0.5), 4.0, 1e-15);
    EXPECT_NEAR(m.mu3_tilted(0.5), 16.0, 1e-15);
    // scipy/mpmath quadrature oracle.
    EXPECT_NEAR(m.functions().log_gauss_convolution(2.0, 5.0), -2.184448758725697, 1e-12);
    EXPECT_NEAR(m.functions().sum_mean_tail(100, 0.232), 0.014107890377504297, 1e-12);
    EXPECT_NEAR(std::exp(m.functions().sum_mean_log_density(100, 0.232)), 0.31287888107745376, 1e-12);
    EXPECT_NEAR(m.functions().tilted_cdf(0.25, 0.0), 1.0 - std::exp(-0.75), 1e-15);
}

TEST(Dist, ConvolutionMatchesQuadrature) {
    for (const char* id : {"normal", "cexp"}) {
        const DistributionModel m = make_model(id);
        for (double mu : {-2.0, 0.0, 3.0, 20.0}) {
            for (double var : {0.5, 4.0, 60.0}) {
                const double q = integrate([&](double x) { return m.density(x) * std::exp(log_normal_pdf(x, mu, var)); },
                                           m.support().lo, m.support().hi, 1e-12);
                EXPECT_NEAR(m.functions().log_gauss_convolution(mu, var), std::log(q), 1e-8) << id << ' ' << mu << ' ' << var;
            }
        }
    }
}

TEST(Dist, NormalExactTail) {
    const DistributionModel m = make_normal();
    EXPECT_NEAR(m.functions().sum_mean_tail(100, 0.232635), 0.00999994333877429, 1e-15);
}

TEST(Dist, TiltedSamplerMatchesTiltedMean) {
    const DistributionModel m = make_centered_exponential();
    Rng rng(5);
    double s = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) s += m.functions().sample_tilted(0.3, rng);
    EXPECT_NEAR(s / n, m.mean_tilted(0.3), 4.0 * std::sqrt(m.var_tilted(0.3) / n));
}

TEST(Dist, ConstructorRejectsBadModels) {
    ModelFunctions f = make_normal().functions();
    f.density_sup = 0.0;
    EXPECT_THROW(make_custom(f), ConfigError);

    f = make_normal().functions();
    f.var_tilted = [](double) { return 2.0; };
    EXPECT_THROW(make_custom(f), ConfigError);

    f = make_normal().functions();
    f.sample_tilted = nullptr;
    EXPECT_THROW(make_custom(f), ConfigError);

    f = make_normal().functions();
    f.tilt_domain = {0.5, 1.0};
    EXPECT_THROW(make_custom(f), ConfigError);
}
