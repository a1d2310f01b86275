#pragma once

#include <cmath>
#include <span>

#include <Eigen/Dense>

namespace testing_support {

/// Log density of (X_1..X_k) given X_1 + ... + X_n = n sigma, X_i i.i.d. N(0,1):
/// Gaussian with mean sigma and covariance I - 11'/n (k < n).
inline double bridge_log_density(int n, double sigma, std::span<const double> x) {
    const int k = static_cast<int>(x.size());
    Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(k, k);
    cov.array() -= 1.0 / n;
    Eigen::VectorXd d(k);
    for (int i = 0; i < k; ++i) d[i] = x[i] - sigma;
    const Eigen::LLT<Eigen::MatrixXd> llt(cov);
    const Eigen::VectorXd z = llt.matrixL().solve(d);
    const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    return -0.5 * z.squaredNorm() - 0.5 * log_det - 0.5 * k * std::log(2.0 * M_PI);
}

}  // namespace testing_support
