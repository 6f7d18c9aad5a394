#pragma once

#include "admatch/series.hpp"

#include <string>

namespace admatch {

/// Design-phase loads never read outcome columns; the analysis phase is
/// the only consumer of `full`.
enum class LoadMode { covariates_only, full };

/// Read the daily input file. Comma-delimited, one row per day, header:
///
///   date,exposure,temperature,humidity,influenza,holiday[,deaths:<cause>:<age>...]
///
/// - date: ISO-8601 (YYYY-MM-DD)
/// - exposure/temperature/humidity: numeric; empty or NA marks a missing
///   value to be handled by validate()
/// - influenza/holiday: 0 or 1
/// - deaths:<cause>:<age>: nonnegative integer count per cell stratum;
///   "all" in either position denotes an optional marginal column, checked
///   against the sum of the matching cells and then dropped.
///
/// Malformed rows abort with the row number. In covariates_only mode the
/// outcome columns are skipped entirely.
DailySeries read_daily_csv(const std::string& path, LoadMode mode);

/// Write a series in the ingestion schema (round-trips through
/// read_daily_csv).
void write_daily_csv(const std::string& path, const DailySeries& series);

} // namespace admatch
