#pragma once

#include "admatch/matching.hpp"
#include "admatch/stats.hpp"

#include <optional>
#include <string>
#include <vector>

namespace admatch {

enum class CovariateKind { continuous, binary, circular_month };

struct BalanceCovariate {
    std::string name;
    CovariateKind kind;
    std::vector<double> values; // binary as 0/1, months as 1..12
};

/// One Table-1-style row. Circular covariates carry only the test
/// p-values; standardized differences are undefined when the pooled
/// pre-matching variance vanishes.
struct BalanceRow {
    std::string name;
    CovariateKind kind = CovariateKind::continuous;
    double treated_mean = 0.0;
    double control_mean = 0.0;
    double matched_mean = 0.0;
    double p_pre = 1.0;
    double p_post = 1.0;
    std::optional<double> delta_pre;
    std::optional<double> delta_post;
    std::optional<double> pct_bias;
    bool degenerate_test = false;
};

/// Pre-matching standardized mean difference:
/// (mean_treated - mean_control) / sqrt((var_treated + var_control) / 2),
/// sample variances with n-1 denominators. nullopt when the pooled
/// variance is zero.
std::optional<double> std_diff_pre(const std::vector<double>& x, const std::vector<int>& w);

/// Post-matching standardized difference: the matched-control mean (with
/// multiplicity K) replaces the control mean in the numerator; the
/// denominator reuses the pre-matching variances.
std::optional<double> std_diff_post(const std::vector<double>& x, const std::vector<int>& w,
                                    const MatchMap& match);

/// 100 * (delta_pre - delta_post) / delta_pre; requires delta_pre != 0.
std::optional<double> pct_bias(double delta_pre, double delta_post);

/// One row per covariate, with the estimated propensity score always
/// prepended as the first row.
std::vector<BalanceRow> balance_table(const std::vector<BalanceCovariate>& covariates,
                                      const std::vector<double>& e_hat,
                                      const std::vector<int>& w, const MatchMap& match);

} // namespace admatch
