#include "admatch/validate.hpp"

#include "admatch/errors.hpp"

#include <cmath>

namespace admatch {

namespace {

void fill_gaps(std::vector<DailyRecord>& records, double DailyRecord::* field, const char* name,
               int max_gap, std::vector<std::string>& notes) {
    const std::size_t n = records.size();
    std::size_t i = 0;
    while (i < n) {
        if (!std::isnan(records[i].*field)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && std::isnan(records[j].*field)) ++j;
        const std::size_t gap = j - i;
        const std::string range = records[i].date.to_iso() + ".." + records[j - 1].date.to_iso();
        if (i == 0 || j == n) {
            throw ValidationError(std::string("missing ") + name + " at series boundary (" +
                                  range + "), cannot interpolate");
        }
        if (gap > static_cast<std::size_t>(max_gap)) {
            throw ValidationError(std::string(name) + " gap of " + std::to_string(gap) +
                                  " days (" + range + ") exceeds the " +
                                  std::to_string(max_gap) + "-day interpolation limit");
        }
        const double lo = records[i - 1].*field;
        const double hi = records[j].*field;
        for (std::size_t k = i; k < j; ++k) {
            const double frac = static_cast<double>(k - i + 1) / static_cast<double>(gap + 1);
            records[k].*field = lo + frac * (hi - lo);
        }
        notes.push_back(std::string(name) + " interpolated over " + std::to_string(gap) +
                        " day(s): " + range);
        i = j;
    }
}

} // namespace

ValidatedSeries validate(DailySeries series, const GapPolicy& policy) {
    if (series.records.empty()) throw ValidationError("validate: empty series");
    for (std::size_t i = 1; i < series.records.size(); ++i) {
        const Date prev = series.records[i - 1].date;
        const Date cur = series.records[i].date;
        const long step = cur.days_since(prev);
        if (step <= 0) {
            throw ValidationError("dates not strictly increasing at " + cur.to_iso());
        }
        if (step != 1) {
            throw ValidationError("date gap: " + std::to_string(step - 1) +
                                  " missing day(s) between " + prev.to_iso() + " and " +
                                  cur.to_iso());
        }
    }
    ValidationReport report;
    fill_gaps(series.records, &DailyRecord::exposure, "exposure", policy.max_interpolation_gap,
              report.interpolation_notes);
    fill_gaps(series.records, &DailyRecord::temperature, "temperature",
              policy.max_interpolation_gap, report.interpolation_notes);
    fill_gaps(series.records, &DailyRecord::humidity, "humidity", policy.max_interpolation_gap,
              report.interpolation_notes);
    for (const auto& r : series.records) {
        for (const auto& [key, count] : r.outcomes) {
            if (count < 0) {
                throw ValidationError("negative count for '" + key.label() + "' on " +
                                      r.date.to_iso());
            }
        }
    }
    report.n_days = series.records.size();
    return ValidatedSeries{std::move(series), std::move(report)};
}

} // namespace admatch
