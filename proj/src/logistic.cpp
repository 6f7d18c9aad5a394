#include "admatch/logistic.hpp"

#include "admatch/errors.hpp"

#include <algorithm>
#include <cmath>

namespace admatch {

namespace {

constexpr double kDevTol = 1e-8;
constexpr int kMaxIter = 100;
constexpr double kSeparationEta = 30.0;

double inv_logit(double eta) { return 1.0 / (1.0 + std::exp(-eta)); }

double clamp_score(double p) {
    return std::clamp(p, kScoreClamp, 1.0 - kScoreClamp);
}

std::vector<double> mean_vector(const Eigen::VectorXd& eta) {
    std::vector<double> mu(static_cast<std::size_t>(eta.size()));
    for (Eigen::Index i = 0; i < eta.size(); ++i) mu[static_cast<std::size_t>(i)] = clamp_score(inv_logit(eta[i]));
    return mu;
}

} // namespace

double logistic_deviance(const std::vector<int>& w, const std::vector<double>& mu) {
    double loglik = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        loglik += w[i] ? std::log(mu[i]) : std::log(1.0 - mu[i]);
    }
    return -2.0 * loglik;
}

PropensityFit fit_logistic_irls(const std::vector<int>& w, const DesignMatrix& design) {
    const Eigen::Index n = design.n_rows();
    const Eigen::Index p = design.n_cols();
    if (static_cast<std::size_t>(n) != w.size()) {
        throw ValidationError("fit_logistic_irls: response/design length mismatch");
    }
    const long ones = std::count(w.begin(), w.end(), 1);
    if (ones == 0) throw ValidationError("fit_logistic_irls: no treated days");
    if (ones == static_cast<long>(w.size())) {
        throw ValidationError("fit_logistic_irls: no control days");
    }

    const Eigen::MatrixXd& Z = design.values;
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd eta = Eigen::VectorXd::Zero(n);
    std::vector<double> mu = mean_vector(eta);
    double deviance = logistic_deviance(w, mu);

    PropensityFit fit;
    fit.column_names = design.names;

    int iter = 0;
    bool converged = false;
    while (iter < kMaxIter) {
        ++iter;
        Eigen::VectorXd sqw(n), rhs(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double m = mu[static_cast<std::size_t>(i)];
            const double var = std::max(m * (1.0 - m), 1e-10);
            const double z_work = eta[i] + (w[static_cast<std::size_t>(i)] - m) / var;
            sqw[i] = std::sqrt(var);
            rhs[i] = sqw[i] * z_work;
        }
        const Eigen::MatrixXd wz = sqw.asDiagonal() * Z;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(wz);
        qr.setThreshold(1e-10);
        if (qr.rank() < p) {
            throw NumericalError("fit_logistic_irls: weighted design became rank deficient");
        }
        Eigen::VectorXd beta_new = qr.solve(rhs);

        Eigen::VectorXd eta_new = Z * beta_new;
        std::vector<double> mu_new = mean_vector(eta_new);
        double dev_new = logistic_deviance(w, mu_new);
        int halvings = 0;
        while (dev_new > deviance + 1e-12 && halvings < 30) {
            beta_new = 0.5 * (beta_new + beta);
            eta_new = Z * beta_new;
            mu_new = mean_vector(eta_new);
            dev_new = logistic_deviance(w, mu_new);
            ++halvings;
        }

        const double delta = std::abs(deviance - dev_new);
        beta = beta_new;
        eta = eta_new;
        mu = mu_new;
        deviance = dev_new;
        fit.deviance_trace.push_back(deviance);
        if (delta < kDevTol) {
            converged = true;
            break;
        }
    }

    fit.beta = beta;
    fit.e_hat = mu;
    fit.deviance = deviance;
    fit.n_iter = iter;
    fit.converged = converged;
    if (!converged) {
        fit.warning = "IRLS did not converge within " + std::to_string(kMaxIter) + " iterations";
    }
    const double max_eta = eta.cwiseAbs().maxCoeff();
    if (max_eta > kSeparationEta) {
        fit.converged = false;
        fit.warning = "possible separation: |linear predictor| reached " +
                      std::to_string(max_eta) + " (threshold " +
                      std::to_string(kSeparationEta) + ")";
    }
    return fit;
}

std::vector<double> predict_propensity(const PropensityFit& fit, const DesignMatrix& design) {
    if (fit.column_names != design.names) {
        throw ValidationError("predict_propensity: design columns do not match the fit");
    }
    const Eigen::VectorXd eta = design.values * fit.beta;
    return mean_vector(eta);
}

} // namespace admatch
