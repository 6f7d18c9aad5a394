#pragma once

#include "admatch/balance.hpp"
#include "admatch/csv.hpp"
#include "admatch/design.hpp"
#include "admatch/impact.hpp"
#include "admatch/logistic.hpp"
#include "admatch/matching.hpp"
#include "admatch/synth.hpp"
#include "admatch/treatment.hpp"
#include "admatch/validate.hpp"

#include <cstdint>
#include <string>

namespace admatch {

struct SensitivityConfig {
    std::string flag_column = "influenza"; // "influenza", "holiday" or "none"
    bool exclude_matched = true;           // also drop days whose match is flagged
};

/// Every default reproduces the reference configuration: threshold 40
/// ug/m3 on the lag 0-1 exposure, lag 0-3 temperature, heat above 28 C,
/// 90% intervals.
struct RunConfig {
    std::string input_path;
    std::string output_dir = "out";
    double threshold = 40.0;
    int exposure_lag_window = 2;
    IndicatorRules indicators;
    GapPolicy gap_policy;
    DesignSpec design;
    double ci_level = 0.90;
    double caliper_warn = 0.1;
    bool match_on_linear_predictor = false;
    SensitivityConfig sensitivity;
    SynthSpec synth;
    double synth_tau_scale = 1.0;
    std::uint64_t seed = 1;
};

/// Parse a JSON config file; unknown keys are errors. Values not present
/// keep their defaults.
RunConfig load_config(const std::string& path);

/// In-memory design phase: validate covariates, assign treatment, fit the
/// propensity model, match, and compute diagnostics. Never touches
/// outcome data (the series passed in carries none when loaded in
/// covariates_only mode).
struct DesignPhaseResult {
    DailySeries series; // validated, outcome-free when loaded as covariates
    ValidationReport validation;
    DerivedCovariates derived;
    TreatmentAssignment assignment;
    DesignMatrix design;
    PropensityFit fit;
    std::vector<double> eta;          // linear predictor per day
    std::vector<double> match_scores; // e_hat, or eta when configured
    MatchMap match;
    OverlapReport overlap;
    std::vector<BalanceRow> balance;
};

DesignPhaseResult run_design_phase(const RunConfig& config, DailySeries covariates);

/// Table-1-style covariate list for the balance report.
std::vector<BalanceCovariate> default_balance_covariates(const DailySeries& series,
                                                         const DerivedCovariates& derived);

// Staged subcommands. Each one reads its inputs (raw input file and/or
// prior artifacts in output_dir) and writes fixed-name artifacts.
// `cmd_impact` is the only stage that loads outcome columns.
void cmd_ingest_check(const RunConfig& config);
void cmd_design(const RunConfig& config);
void cmd_match(const RunConfig& config);
void cmd_balance(const RunConfig& config);
void cmd_impact(const RunConfig& config);
void cmd_synth(const RunConfig& config);
/// design -> match -> balance -> impact, in that order; all design-phase
/// artifacts are on disk before the first outcome column is read.
void cmd_all(const RunConfig& config);

} // namespace admatch
