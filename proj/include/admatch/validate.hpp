#pragma once

#include "admatch/series.hpp"

#include <string>
#include <vector>

namespace admatch {

struct GapPolicy {
    /// Covariate gaps up to this many consecutive days are linearly
    /// interpolated; longer gaps are hard errors. Outcome counts are never
    /// interpolated.
    int max_interpolation_gap = 3;
};

struct ValidationReport {
    std::size_t n_days = 0;
    std::vector<std::string> interpolation_notes; // one per filled gap
};

struct ValidatedSeries {
    DailySeries series;
    ValidationReport report;
};

/// Check date monotonicity/contiguity and fill short covariate gaps per
/// the policy. Throws ValidationError with day-indexed messages on
/// non-monotone dates, date gaps, over-long value gaps, or missing values
/// at the series boundary.
ValidatedSeries validate(DailySeries series, const GapPolicy& policy);

} // namespace admatch
