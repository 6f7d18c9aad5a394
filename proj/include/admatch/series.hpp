#pragma once

#include "admatch/date.hpp"

#include <map>
#include <string>
#include <vector>

namespace admatch {

/// One outcome cell: cause stratum crossed with age stratum.
/// The label "all" is reserved for marginals and may not appear in data.
struct StratumKey {
    std::string cause;
    std::string age;

    auto operator<=>(const StratumKey&) const = default;

    std::string label() const { return cause + ":" + age; }
};

/// One day of input: exposure, weather, flags and (optionally) the
/// outcome counts. Design-phase code never reads `outcomes`; the
/// covariates-only loader leaves it empty.
struct DailyRecord {
    Date date;
    double exposure = 0.0;     // PM10 daily mean, ug/m3
    double temperature = 0.0;  // degrees C
    double humidity = 0.0;     // percent, [0,100]
    bool influenza = false;
    bool holiday = false;
    std::map<StratumKey, long> outcomes;
};

/// Ordered daily time series. After validation dates are strictly
/// increasing and contiguous.
struct DailySeries {
    std::vector<DailyRecord> records;
    /// Cell strata present in the data, in input column order.
    std::vector<StratumKey> strata;

    std::size_t size() const { return records.size(); }
    bool has_outcomes() const { return !strata.empty(); }

    std::vector<double> exposures() const;
    std::vector<double> temperatures() const;
    std::vector<double> humidities() const;

    /// Per-day counts for one cell stratum. Throws if the stratum is absent.
    std::vector<long> outcome_series(const StratumKey& key) const;
    /// Per-day counts summed over all cell strata matched by cause/age
    /// ("all" selects every label).
    std::vector<long> outcome_series_marginal(const std::string& cause,
                                              const std::string& age) const;

    /// Cause labels (then age labels) in first-appearance order.
    std::vector<std::string> cause_labels() const;
    std::vector<std::string> age_labels() const;
};

/// Per-day derived values used by the design and balance stages.
struct DerivedCovariates {
    std::vector<double> temperature_lagged; // moving average, lag window from config
    std::vector<int> heat;                  // temperature > 28 C (strict)
    std::vector<int> july_august;           // month in {7, 8}
    std::vector<int> warm_season;           // May 1 .. Sep 30
    std::vector<int> weekend;               // Saturday or Sunday
    std::vector<int> month;                 // 1..12
};

struct IndicatorRules {
    double heat_threshold_c = 28.0;
    int temperature_lag_window = 4; // lag 0-3
};

/// Heat / season / weekend flags plus the lagged temperature series.
DerivedCovariates derive_indicators(const DailySeries& series, const IndicatorRules& rules);

} // namespace admatch
