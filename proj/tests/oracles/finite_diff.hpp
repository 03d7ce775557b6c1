// Central finite differences, independent of every analytic gradient in core.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include "sentpw/linalg.hpp"

namespace sentpw::oracle {

// d f / d X(i,j) for every entry, perturbing one entry at a time.
inline Matrix numeric_gradient(const std::function<double(const Matrix&)>& f, const Matrix& X,
                               double h) {
    Matrix grad = Matrix::Zero(X.rows(), X.cols());
    Matrix probe = X;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (Eigen::Index j = 0; j < X.cols(); ++j) {
            const double orig = probe(i, j);
            probe(i, j) = orig + h;
            const double up = f(probe);
            probe(i, j) = orig - h;
            const double down = f(probe);
            probe(i, j) = orig;
            grad(i, j) = (up - down) / (2.0 * h);
        }
    }
    return grad;
}

// max |a - b| / max(|a|, |b|, floor); floor keeps near-zero entries from
// dominating through cancellation noise.
inline double max_relative_error(const Matrix& analytic, const Matrix& numeric, double floor) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < analytic.rows(); ++i) {
        for (Eigen::Index j = 0; j < analytic.cols(); ++j) {
            const double a = analytic(i, j);
            const double n = numeric(i, j);
            const double scale = std::max({std::abs(a), std::abs(n), floor});
            worst = std::max(worst, std::abs(a - n) / scale);
        }
    }
    return worst;
}

}  // namespace sentpw::oracle
