#pragma once

#include <Eigen/Core>

namespace wcbo {

struct GramFactor {
    Eigen::MatrixXd lower;  ///< L with L L^T = K + jitter I
    double jitter = 0.0;    ///< absolute jitter added to the diagonal
};

/// Cholesky factor of a Gram matrix. Tries the plain factorization first and
/// keeps it if no pivot falls below kMinRelativePivot * trace(K)/t; otherwise
/// walks the jitter ladder 1e-12 .. 1e-6 (times trace(K)/t, factor 10 per
/// rung). Throws IllConditioned when every rung fails.
GramFactor factorize_gram(const Eigen::MatrixXd& K);

}  // namespace wcbo
