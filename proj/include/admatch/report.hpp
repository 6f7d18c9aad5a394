#pragma once

#include "admatch/balance.hpp"
#include "admatch/impact.hpp"
#include "admatch/logistic.hpp"
#include "admatch/matching.hpp"
#include "admatch/series.hpp"
#include "admatch/treatment.hpp"

#include <map>
#include <string>
#include <vector>

namespace admatch {
namespace report {

/// Per-day design-phase artifact row (scores.csv). e_hat and eta are
/// written at full precision so downstream stages reproduce the in-memory
/// pipeline exactly.
struct ScoreRow {
    Date date;
    double x_lagged = 0.0;
    int w = 0;
    double eta = 0.0;
    double e_hat = 0.5;
};

void write_scores_csv(const std::string& path, const std::vector<ScoreRow>& rows);
std::vector<ScoreRow> read_scores_csv(const std::string& path);

void write_fit_summary(const std::string& path, const PropensityFit& fit,
                       const TreatmentAssignment& assignment,
                       const std::vector<std::string>& dropped_columns);

void write_matchmap_csv(const std::string& path, const MatchMap& match,
                        const std::vector<Date>& dates);
/// Rebuilds day indices (and K) from the audit file against the given
/// date axis.
MatchMap read_matchmap_csv(const std::string& path, const std::vector<Date>& dates);

void write_multiplicity_csv(const std::string& path, const std::map<int, long>& histogram);
void write_overlap_report(const std::string& path, const OverlapReport& overlap,
                          const std::vector<Date>& dates);

void write_balance_csv(const std::string& path, const std::vector<BalanceRow>& rows);
void write_balance_txt(const std::string& path, const std::vector<BalanceRow>& rows);

void write_impact_csv(const std::string& path, const ImpactTable& table);
void write_impact_txt(const std::string& path, const ImpactTable& table,
                      const std::string& title);

/// Kernel density of the scores on a fixed [0,1] grid for treated,
/// control and matched-control (K-weighted) groups.
void write_propensity_density_plot(const std::string& path, const std::vector<double>& e_hat,
                                   const std::vector<int>& w, const MatchMap& match);
void write_month_distribution_plot(const std::string& path, const std::vector<int>& month,
                                   const std::vector<int>& w, const MatchMap& match);
void write_daily_series_plot(const std::string& path, const std::vector<Date>& dates,
                             const TreatmentAssignment& assignment,
                             const std::vector<long>& total_outcomes,
                             const std::vector<DayImpact>& impacts);

/// 3-significant-digit p-value with the "<0.001" display convention.
std::string format_pvalue(double p);

} // namespace report
} // namespace admatch
