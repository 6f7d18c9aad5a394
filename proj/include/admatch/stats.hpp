#pragma once

#include <optional>
#include <vector>

namespace admatch {
namespace stats {

double mean(const std::vector<double>& x);
/// Sample variance, n-1 denominator. Requires size >= 2.
double sample_variance(const std::vector<double>& x);

/// Two-sided Welch t-test p-value (Welch-Satterthwaite df). Both groups
/// need >= 2 observations. Zero variance in both groups: p = 1 when the
/// means agree, 0 otherwise.
double welch_t_pvalue(const std::vector<double>& a, const std::vector<double>& b);

/// Two-sided two-sample z-test for proportions, pooled variance, no
/// continuity correction. Degenerate pooled proportion (0 or 1) forces
/// equal observed proportions and yields p = 1.
double two_prop_pvalue(long count_a, long n_a, long count_b, long n_b);

/// Month (1..12) mapped to its mid-month angle 2*pi*(month - 0.5)/12.
double month_to_angle(int month);

struct CircularMedianTest {
    double statistic = 0.0;
    double p_value = 1.0;
    double median_angle = 0.0;
    bool degenerate = false; // contingency margin vanished; p undefined
};

/// Common circular-median test: combined-sample circular median theta, per
/// group the count of angles in the half circle (theta, theta + pi],
/// Pearson chi-square on the 2 x g table with g-1 df.
CircularMedianTest circular_median_test(const std::vector<std::vector<double>>& angles_by_group);

/// Upper-tail quantile of the standard normal.
double normal_quantile(double p);
double chi_squared_upper_p(double statistic, int df);

} // namespace stats
} // namespace admatch
