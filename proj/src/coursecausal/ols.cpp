// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

#include "coursecausal/ols.hpp"

#include "coursecausal/error.hpp"

#include <cmath>

namespace coursecausal {

OlsFit fit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    if (x.rows() < 2) throw NotEstimable(Stage::Regression, "fewer than two rows");
    if (x.rows() != y.size()) throw ConfigError("design and response row counts differ");

    OlsFit fit;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    fit.rank = qr.rank();
    if (fit.rank == x.cols()) {
        fit.beta = qr.solve(y);
        return fit;
    }

    // Augmented rows [X; sqrt(lambda) P] with P selecting the penalized columns.
    const Eigen::Index p = x.cols();
    const Eigen::Index penalized = p > 0 ? p - 1 : 0;
    Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(x.rows() + penalized, p);
    aug.topRows(x.rows()) = x;
    const double root = std::sqrt(kRidgeLambda);
    for (Eigen::Index j = 1; j < p; ++j) aug(x.rows() + j - 1, j) = root;
    Eigen::VectorXd aug_y = Eigen::VectorXd::Zero(x.rows() + penalized);
    aug_y.head(x.rows()) = y;

    fit.beta = Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(aug).solve(aug_y);
    fit.regularized = true;
    return fit;
}

} // namespace coursecausal
