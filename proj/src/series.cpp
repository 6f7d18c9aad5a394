#include "admatch/series.hpp"

#include "admatch/errors.hpp"
#include "admatch/treatment.hpp"

#include <algorithm>

namespace admatch {

std::vector<double> DailySeries::exposures() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.exposure);
    return out;
}

std::vector<double> DailySeries::temperatures() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.temperature);
    return out;
}

std::vector<double> DailySeries::humidities() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.humidity);
    return out;
}

std::vector<long> DailySeries::outcome_series(const StratumKey& key) const {
    std::vector<long> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        auto it = r.outcomes.find(key);
        if (it == r.outcomes.end()) {
            throw ValidationError("stratum '" + key.label() + "' missing on " + r.date.to_iso());
        }
        out.push_back(it->second);
    }
    return out;
}

std::vector<long> DailySeries::outcome_series_marginal(const std::string& cause,
                                                       const std::string& age) const {
    std::vector<long> out(records.size(), 0);
    bool any = false;
    for (const auto& key : strata) {
        if (cause != "all" && key.cause != cause) continue;
        if (age != "all" && key.age != age) continue;
        any = true;
        for (std::size_t i = 0; i < records.size(); ++i) {
            auto it = records[i].outcomes.find(key);
            if (it == records[i].outcomes.end()) {
                throw ValidationError("stratum '" + key.label() + "' missing on " +
                                      records[i].date.to_iso());
            }
            out[i] += it->second;
        }
    }
    if (!any) {
        throw ValidationError("no outcome stratum matches cause='" + cause + "' age='" + age + "'");
    }
    return out;
}

namespace {

std::vector<std::string> first_appearance(const std::vector<StratumKey>& strata, bool causes) {
    std::vector<std::string> out;
    for (const auto& key : strata) {
        const std::string& label = causes ? key.cause : key.age;
        if (std::find(out.begin(), out.end(), label) == out.end()) out.push_back(label);
    }
    return out;
}

} // namespace

std::vector<std::string> DailySeries::cause_labels() const {
    return first_appearance(strata, true);
}

std::vector<std::string> DailySeries::age_labels() const {
    return first_appearance(strata, false);
}

DerivedCovariates derive_indicators(const DailySeries& series, const IndicatorRules& rules) {
    DerivedCovariates out;
    const std::size_t n = series.size();
    out.temperature_lagged = lag_mean(series.temperatures(), rules.temperature_lag_window);
    out.heat.reserve(n);
    out.july_august.reserve(n);
    out.warm_season.reserve(n);
    out.weekend.reserve(n);
    out.month.reserve(n);
    for (const auto& r : series.records) {
        const unsigned m = r.date.month();
        out.heat.push_back(r.temperature > rules.heat_threshold_c ? 1 : 0);
        out.july_august.push_back((m == 7 || m == 8) ? 1 : 0);
        out.warm_season.push_back((m >= 5 && m <= 9) ? 1 : 0);
        out.weekend.push_back(r.date.is_weekend() ? 1 : 0);
        out.month.push_back(static_cast<int>(m));
    }
    return out;
}

} // namespace admatch
