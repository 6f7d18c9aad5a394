#pragma once

#include "admatch/design.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace admatch {

/// Score clamp: fitted propensities stay strictly inside (0, 1).
inline constexpr double kScoreClamp = 1e-10;

struct PropensityFit {
    Eigen::VectorXd beta;
    std::vector<std::string> column_names;
    std::vector<double> e_hat; // clamped to [kScoreClamp, 1 - kScoreClamp]
    double deviance = 0.0;
    std::vector<double> deviance_trace; // accepted deviance per iteration
    bool converged = false;
    int n_iter = 0;
    std::string warning; // nonempty on separation or non-convergence
};

/// Maximum-likelihood logistic fit by iteratively reweighted least
/// squares. Converges when |delta deviance| < 1e-8 (at most 100
/// iterations), halving the step whenever the deviance would increase.
/// Any |linear predictor| > 30 marks the fit non-converged (separation).
/// Throws on single-class w or rank-deficient Z.
PropensityFit fit_logistic_irls(const std::vector<int>& w, const DesignMatrix& design);

/// Inverse-logit of Z beta, clamped; column names must match the fit.
std::vector<double> predict_propensity(const PropensityFit& fit, const DesignMatrix& design);

double logistic_deviance(const std::vector<int>& w, const std::vector<double>& mu);

} // namespace admatch
