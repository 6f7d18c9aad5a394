#pragma once

#include "admatch/series.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace admatch {

struct SynthStratum {
    std::string cause;
    std::string age;
    double base_rate; // expected daily count at seasonal midpoint
    double tau;       // mean additive effect per treated day
};

/// Generator parameters. Exposure is tied to season and temperature with
/// weight `confounding_strength`; at 0 the exposure is pure noise around
/// its base level, independent of weather.
struct SynthSpec {
    int n_days = 365;
    int start_year = 2003;

    // weather
    double temp_mean_c = 14.0;
    double temp_amplitude_c = 9.0;
    double temp_noise_sd = 2.2;
    double temp_ar1 = 0.7;
    double humidity_mean = 62.0;
    double humidity_amplitude = 8.0; // winter high
    double humidity_noise_sd = 7.0;

    // exposure
    double exposure_base = 40.0;
    double exposure_seasonal = 14.0;  // winter-peak amplitude (x confounding)
    double exposure_temp_coef = 0.9;  // per degree C below the seasonal norm (x confounding)
    double exposure_noise_sd = 9.0;
    double exposure_ar1 = 0.5;
    double confounding_strength = 1.0;

    // treatment rule applied when materializing observed outcomes
    double threshold = 40.0;
    int exposure_lag_window = 2;

    // mortality
    double mortality_seasonal_amplitude = 0.10; // log scale, winter peak
    double mortality_cold_coef = 0.06;          // per 10 C below 15 C, log scale
    double mortality_heat_coef = 0.08;          // per 10 C above 24 C, log scale
    double mortality_flu_boost = 0.15;          // log scale on influenza days

    std::vector<SynthStratum> strata; // empty -> default 3 causes x 3 ages
};

/// Ground truth: both potential outcomes for every day and stratum, plus
/// the treatment indicator the generator applied.
struct Oracle {
    std::vector<StratumKey> strata;
    std::vector<std::vector<long>> y0; // [stratum][day]
    std::vector<std::vector<long>> y1;
    std::vector<int> w;
    std::vector<double> x_lagged;
};

std::vector<SynthStratum> default_synth_strata();

/// Deterministic in (spec, seed). Observed counts follow the generator's
/// own treatment indicator: Y_obs = Y(1) on treated days, Y(0) otherwise.
std::pair<DailySeries, Oracle> generate(const SynthSpec& spec, std::uint64_t seed);

/// Exact ground-truth attributable count over treated days, optionally
/// restricted by cause/age ("all" matches every label).
long true_satt(const Oracle& oracle, const std::vector<int>& w);
long true_satt(const Oracle& oracle, const std::vector<int>& w, const std::string& cause,
               const std::string& age);

/// Seed for replicate r of a batch: seed + r.
std::uint64_t replicate_seed(std::uint64_t base_seed, int replicate);

} // namespace admatch
