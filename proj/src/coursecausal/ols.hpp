// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

namespace coursecausal {

inline constexpr double kRidgeLambda = 1e-8;

struct OlsFit {
    Eigen::VectorXd beta;
    Eigen::Index rank = 0;
    bool regularized = false;
};

/// Least squares via column-pivoted Householder QR. When the design is rank deficient a
/// ridge penalty of kRidgeLambda is placed on every column except column 0 (the intercept)
/// and the fit is flagged as regularized. Throws NotEstimable with fewer than two rows.
OlsFit fit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

} // namespace coursecausal
