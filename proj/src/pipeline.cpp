#include "admatch/pipeline.hpp"

#include "admatch/errors.hpp"
#include "admatch/report.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace admatch {

namespace {

using nlohmann::json;

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ValidationError("config: unknown key '" + key + "' in " + where);
    }
}

template <typename T> void maybe(const json& obj, const char* key, T& target) {
    if (obj.contains(key)) target = obj.at(key).get<T>();
}

std::vector<Date> dates_of(const DailySeries& series) {
    std::vector<Date> out;
    out.reserve(series.size());
    for (const auto& r : series.records) out.push_back(r.date);
    return out;
}

std::string artifact(const RunConfig& config, const char* name) {
    return (std::filesystem::path(config.output_dir) / name).string();
}

void ensure_outdir(const RunConfig& config) {
    std::filesystem::create_directories(config.output_dir);
}

std::vector<int> flag_column(const DailySeries& series, const std::string& name) {
    std::vector<int> out(series.size(), 0);
    if (name == "none") return out;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (name == "influenza") {
            out[i] = series.records[i].influenza ? 1 : 0;
        } else if (name == "holiday") {
            out[i] = series.records[i].holiday ? 1 : 0;
        } else {
            throw ValidationError("unknown sensitivity flag column '" + name +
                                  "' (use influenza, holiday or none)");
        }
    }
    return out;
}

/// Shared by staged subcommands: reconstruct w/x_lagged/e_hat from the
/// scores artifact and sanity-check them against the input dates.
struct ScoresBundle {
    TreatmentAssignment assignment;
    std::vector<double> e_hat;
    std::vector<double> eta;
};

ScoresBundle load_scores(const RunConfig& config, const std::vector<Date>& dates) {
    const auto rows = report::read_scores_csv(artifact(config, "scores.csv"));
    if (rows.size() != dates.size()) {
        throw ValidationError("scores artifact covers " + std::to_string(rows.size()) +
                              " days but the input has " + std::to_string(dates.size()));
    }
    ScoresBundle out;
    out.assignment.threshold = config.threshold;
    out.assignment.lag_window = config.exposure_lag_window;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].date != dates[i]) {
            throw ValidationError("scores artifact date mismatch on row " + std::to_string(i + 1) +
                                  " (" + rows[i].date.to_iso() + " vs " + dates[i].to_iso() + ")");
        }
        out.assignment.x_lagged.push_back(rows[i].x_lagged);
        out.assignment.w.push_back(rows[i].w);
        out.e_hat.push_back(rows[i].e_hat);
        out.eta.push_back(rows[i].eta);
    }
    return out;
}

} // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("config parse error: " + std::string(e.what()));
    }
    check_keys(doc,
               {"input", "output_dir", "threshold", "exposure_lag_window",
                "temperature_lag_window", "heat_threshold_c", "max_interpolation_gap", "ci_level",
                "caliper_warn", "match_scale", "design", "sensitivity", "synth", "seed"},
               "top level");
    RunConfig config;
    maybe(doc, "input", config.input_path);
    maybe(doc, "output_dir", config.output_dir);
    maybe(doc, "threshold", config.threshold);
    maybe(doc, "exposure_lag_window", config.exposure_lag_window);
    maybe(doc, "temperature_lag_window", config.indicators.temperature_lag_window);
    maybe(doc, "heat_threshold_c", config.indicators.heat_threshold_c);
    maybe(doc, "max_interpolation_gap", config.gap_policy.max_interpolation_gap);
    maybe(doc, "ci_level", config.ci_level);
    maybe(doc, "caliper_warn", config.caliper_warn);
    maybe(doc, "seed", config.seed);
    if (doc.contains("match_scale")) {
        const std::string scale = doc.at("match_scale").get<std::string>();
        if (scale == "probability") {
            config.match_on_linear_predictor = false;
        } else if (scale == "linear") {
            config.match_on_linear_predictor = true;
        } else {
            throw ValidationError("config: match_scale must be 'probability' or 'linear'");
        }
    }
    if (doc.contains("design")) {
        const json& d = doc.at("design");
        check_keys(d,
                   {"day_of_week_by_season", "include_holiday", "holiday_by_season",
                    "include_influenza", "include_heat", "include_july_august",
                    "calendar_df_per_year", "include_tensor_smooth", "tprs_k_temperature",
                    "tprs_k_humidity", "include_linear_weather"},
                   "design");
        maybe(d, "day_of_week_by_season", config.design.day_of_week_by_season);
        maybe(d, "include_holiday", config.design.include_holiday);
        maybe(d, "holiday_by_season", config.design.holiday_by_season);
        maybe(d, "include_influenza", config.design.include_influenza);
        maybe(d, "include_heat", config.design.include_heat);
        maybe(d, "include_july_august", config.design.include_july_august);
        maybe(d, "calendar_df_per_year", config.design.calendar_df_per_year);
        maybe(d, "include_tensor_smooth", config.design.include_tensor_smooth);
        maybe(d, "tprs_k_temperature", config.design.tprs_k_temperature);
        maybe(d, "tprs_k_humidity", config.design.tprs_k_humidity);
        maybe(d, "include_linear_weather", config.design.include_linear_weather);
    }
    if (doc.contains("sensitivity")) {
        const json& s = doc.at("sensitivity");
        check_keys(s, {"flag", "exclude_matched"}, "sensitivity");
        maybe(s, "flag", config.sensitivity.flag_column);
        maybe(s, "exclude_matched", config.sensitivity.exclude_matched);
    }
    if (doc.contains("synth")) {
        const json& s = doc.at("synth");
        check_keys(s,
                   {"n_days", "start_year", "confounding_strength", "tau_scale", "exposure_base",
                    "exposure_seasonal", "exposure_noise_sd", "mortality_seasonal_amplitude"},
                   "synth");
        maybe(s, "n_days", config.synth.n_days);
        maybe(s, "start_year", config.synth.start_year);
        maybe(s, "confounding_strength", config.synth.confounding_strength);
        maybe(s, "tau_scale", config.synth_tau_scale);
        maybe(s, "exposure_base", config.synth.exposure_base);
        maybe(s, "exposure_seasonal", config.synth.exposure_seasonal);
        maybe(s, "exposure_noise_sd", config.synth.exposure_noise_sd);
        maybe(s, "mortality_seasonal_amplitude", config.synth.mortality_seasonal_amplitude);
    }
    return config;
}

std::vector<BalanceCovariate> default_balance_covariates(const DailySeries& series,
                                                         const DerivedCovariates& derived) {
    const auto to_double = [](const std::vector<int>& v) {
        return std::vector<double>(v.begin(), v.end());
    };
    std::vector<double> flu(series.size()), hum(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        flu[i] = series.records[i].influenza ? 1.0 : 0.0;
        hum[i] = series.records[i].humidity;
    }
    return {
        {"temperature_lag", CovariateKind::continuous, derived.temperature_lagged},
        {"humidity", CovariateKind::continuous, hum},
        {"weekend", CovariateKind::binary, to_double(derived.weekend)},
        {"calendar_month", CovariateKind::circular_month, to_double(derived.month)},
        {"influenza", CovariateKind::binary, flu},
        {"heat", CovariateKind::binary, to_double(derived.heat)},
        {"warm_season", CovariateKind::binary, to_double(derived.warm_season)},
    };
}

DesignPhaseResult run_design_phase(const RunConfig& config, DailySeries covariates) {
    DesignPhaseResult r;
    auto validated = validate(std::move(covariates), config.gap_policy);
    r.series = std::move(validated.series);
    r.validation = std::move(validated.report);

    const auto x_lagged = lag_mean(r.series.exposures(), config.exposure_lag_window);
    r.assignment = assign_treatment(x_lagged, config.threshold, config.exposure_lag_window);
    if (r.assignment.n_treated() == 0) {
        throw ValidationError("no treated days: every lagged exposure is below the threshold " +
                              std::to_string(config.threshold));
    }
    if (r.assignment.n_control() == 0) {
        throw ValidationError("no control days: every lagged exposure reaches the threshold " +
                              std::to_string(config.threshold));
    }

    r.derived = derive_indicators(r.series, config.indicators);
    r.design = assemble_design(r.series, r.derived, config.design);
    r.fit = fit_logistic_irls(r.assignment.w, r.design);
    const Eigen::VectorXd eta = r.design.values * r.fit.beta;
    r.eta.assign(eta.data(), eta.data() + eta.size());
    r.match_scores = config.match_on_linear_predictor ? r.eta : r.fit.e_hat;
    r.match = nn_match(r.match_scores, r.assignment.w);
    r.overlap = overlap_check(r.fit.e_hat, r.assignment.w, config.caliper_warn);
    r.balance = balance_table(default_balance_covariates(r.series, r.derived), r.fit.e_hat,
                              r.assignment.w, r.match);
    return r;
}

void cmd_ingest_check(const RunConfig& config) {
    const auto raw = read_daily_csv(config.input_path, LoadMode::full);
    const auto validated = validate(raw, config.gap_policy);
    const auto& s = validated.series;
    std::cout << "input OK: " << s.size() << " days, " << s.records.front().date.to_iso() << " .. "
              << s.records.back().date.to_iso() << "\n";
    std::cout << "outcome strata: " << s.strata.size() << "\n";
    for (const auto& note : validated.report.interpolation_notes) {
        std::cout << "note: " << note << "\n";
    }
}

void cmd_design(const RunConfig& config) {
    ensure_outdir(config);
    auto result =
        run_design_phase(config, read_daily_csv(config.input_path, LoadMode::covariates_only));
    const auto dates = dates_of(result.series);

    std::vector<report::ScoreRow> rows(result.series.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i] = {dates[i], result.assignment.x_lagged[i], result.assignment.w[i], result.eta[i],
                   result.fit.e_hat[i]};
    }
    report::write_scores_csv(artifact(config, "scores.csv"), rows);
    report::write_fit_summary(artifact(config, "fit_summary.txt"), result.fit, result.assignment,
                              result.design.dropped);
    if (!result.fit.converged) {
        std::cerr << "warning: " << result.fit.warning << "\n";
    }
}

void cmd_match(const RunConfig& config) {
    ensure_outdir(config);
    const auto covariates = read_daily_csv(config.input_path, LoadMode::covariates_only);
    const auto series = validate(covariates, config.gap_policy).series;
    const auto dates = dates_of(series);
    const auto scores = load_scores(config, dates);

    const std::vector<double>& match_scores =
        config.match_on_linear_predictor ? scores.eta : scores.e_hat;
    const MatchMap match = nn_match(match_scores, scores.assignment.w);
    const auto histogram = match_multiplicity(match, scores.assignment.n_control());
    const auto overlap = overlap_check(scores.e_hat, scores.assignment.w, config.caliper_warn);

    report::write_matchmap_csv(artifact(config, "matchmap.csv"), match, dates);
    report::write_multiplicity_csv(artifact(config, "plot_match_multiplicity.csv"), histogram);
    report::write_overlap_report(artifact(config, "overlap.txt"), overlap, dates);
}

void cmd_balance(const RunConfig& config) {
    ensure_outdir(config);
    const auto covariates = read_daily_csv(config.input_path, LoadMode::covariates_only);
    const auto series = validate(covariates, config.gap_policy).series;
    const auto dates = dates_of(series);
    const auto scores = load_scores(config, dates);
    const MatchMap match = report::read_matchmap_csv(artifact(config, "matchmap.csv"), dates);

    const auto derived = derive_indicators(series, config.indicators);
    const auto rows = balance_table(default_balance_covariates(series, derived), scores.e_hat,
                                    scores.assignment.w, match);
    report::write_balance_csv(artifact(config, "balance.csv"), rows);
    report::write_balance_txt(artifact(config, "balance.txt"), rows);
    report::write_propensity_density_plot(artifact(config, "plot_propensity_density.csv"),
                                          scores.e_hat, scores.assignment.w, match);
    report::write_month_distribution_plot(artifact(config, "plot_month_distribution.csv"),
                                          derived.month, scores.assignment.w, match);
}

void cmd_impact(const RunConfig& config) {
    ensure_outdir(config);
    // Analysis phase: the only stage that reads outcome columns.
    const auto full = read_daily_csv(config.input_path, LoadMode::full);
    const auto series = validate(full, config.gap_policy).series;
    if (!series.has_outcomes()) {
        throw ValidationError("impact: input file has no outcome columns");
    }
    const auto dates = dates_of(series);
    const auto scores = load_scores(config, dates);
    const MatchMap match = report::read_matchmap_csv(artifact(config, "matchmap.csv"), dates);

    const ImpactTable table = stratified_impact(series, match, scores.e_hat, scores.assignment.w,
                                                config.ci_level);
    report::write_impact_csv(artifact(config, "impact.csv"), table);
    report::write_impact_txt(artifact(config, "impact.txt"), table,
                             "attributable deaths by cause and age");

    if (config.sensitivity.flag_column != "none") {
        const auto flags = flag_column(series, config.sensitivity.flag_column);
        const ImpactTable sens =
            sensitivity_exclude(series, match, scores.e_hat, scores.assignment.w, flags,
                                config.sensitivity.exclude_matched, config.ci_level);
        report::write_impact_csv(artifact(config, "sensitivity.csv"), sens);
        report::write_impact_txt(artifact(config, "sensitivity.txt"), sens,
                                 "attributable deaths excluding " +
                                     config.sensitivity.flag_column + "-flagged days");
    }

    const auto total = series.outcome_series_marginal("all", "all");
    const auto impacts = impute_and_diff(total, scores.assignment.w, match);
    report::write_daily_series_plot(artifact(config, "plot_daily_series.csv"), dates,
                                    scores.assignment, total, impacts);
}

void cmd_synth(const RunConfig& config) {
    ensure_outdir(config);
    SynthSpec spec = config.synth;
    if (spec.strata.empty()) spec.strata = default_synth_strata();
    for (auto& s : spec.strata) s.tau *= config.synth_tau_scale;
    auto [series, oracle] = generate(spec, config.seed);

    write_daily_csv(artifact(config, "synth_data.csv"), series);

    std::ofstream truth(artifact(config, "synth_truth.csv"));
    truth << "cause,age,true_satt\n";
    for (const auto& key : oracle.strata) {
        truth << key.cause << ',' << key.age << ','
              << true_satt(oracle, oracle.w, key.cause, key.age) << "\n";
    }
    truth << "all,all," << true_satt(oracle, oracle.w) << "\n";
    std::cout << "synthetic series written: " << series.size() << " days, true total SATT "
              << true_satt(oracle, oracle.w) << "\n";
}

void cmd_all(const RunConfig& config) {
    cmd_design(config);
    cmd_match(config);
    cmd_balance(config);
    cmd_impact(config);
}

} // namespace admatch
