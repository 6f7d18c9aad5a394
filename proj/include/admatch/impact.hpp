#pragma once

#include "admatch/matching.hpp"
#include "admatch/series.hpp"

#include <string>
#include <vector>

namespace admatch {

/// Day-level impact on a treated day: observed count minus the count on
/// the matched control day. Negative values are legitimate.
struct DayImpact {
    std::size_t treated_day;
    long y_obs;
    long y_control;
    long ad; // y_obs - y_control
};

struct Interval {
    double low;
    double high;
};

struct ImpactEstimate {
    std::string cause; // "all" marks a marginal
    std::string age;
    long ad = 0;
    double s2 = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t n_treated_used = 0;
    bool empty_warning = false; // sensitivity analysis left no treated days
};

struct ImpactTable {
    double level = 0.90;
    std::vector<ImpactEstimate> estimates; // cells, then marginals, then all:all
};

/// Impute Y(0) on each treated day from its matched control and take the
/// difference. Throws if a treated day is missing from the MatchMap.
std::vector<DayImpact> impute_and_diff(const std::vector<long>& outcomes,
                                       const std::vector<int>& w, const MatchMap& match);

long total_ad(const std::vector<DayImpact>& impacts);

/// Indices of the M closest same-treatment-group neighbors of each day on
/// the score scale (ties to the earlier day). Shared across outcome
/// strata. Throws if a treatment group has a single member.
std::vector<std::vector<std::size_t>> variance_neighbor_sets(const std::vector<double>& e_hat,
                                                             const std::vector<int>& w,
                                                             int m_neighbors = 1);

/// Heterogeneity-robust conditional outcome variance per day:
/// (1/M) * sum over the day and its M neighbors of squared deviations
/// from their common mean. With M=1 this is (Y_i - Y_j)^2 / 2.
std::vector<double> conditional_variance(const std::vector<long>& outcomes,
                                         const std::vector<std::vector<std::size_t>>& neighbors);
std::vector<double> conditional_variance(const std::vector<long>& outcomes,
                                         const std::vector<double>& e_hat,
                                         const std::vector<int>& w, int m_neighbors = 1);

/// Matching-estimator sample variance: treated days enter with weight 1,
/// control days with K(i)^2, never-used controls contribute nothing.
double variance_ad(const MatchMap& match, const std::vector<double>& sigma2,
                   const std::vector<int>& w);

/// Symmetric normal-approximation interval ad +/- z * sqrt(s2).
Interval ci(double ad_hat, double s2, double level = 0.90);

/// One estimate per cell stratum, per cause/age marginal, and the total;
/// every stratum reuses the same MatchMap, so the table is exactly
/// additive.
ImpactTable stratified_impact(const DailySeries& series, const MatchMap& match,
                              const std::vector<double>& e_hat, const std::vector<int>& w,
                              double level = 0.90);

/// Re-estimate over the treated days that survive the exclusion flag
/// (and, optionally, whose matched control also survives). No
/// re-matching. An empty surviving set yields zero estimates with a
/// warning.
ImpactTable sensitivity_exclude(const DailySeries& series, const MatchMap& match,
                                const std::vector<double>& e_hat, const std::vector<int>& w,
                                const std::vector<int>& exclude_flag, bool exclude_matched_too,
                                double level = 0.90);

/// Difference-in-means baseline: n_treated * (mean treated - mean control).
double naive_total_ad(const std::vector<long>& outcomes, const std::vector<int>& w);

} // namespace admatch
