#include "admatch/synth.hpp"

#include "admatch/errors.hpp"
#include "admatch/treatment.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace admatch {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Winter-peaking seasonal shape: +1 on Jan 1, -1 at midsummer.
double winter_cos(int day_of_run) {
    return std::cos(kTwoPi * static_cast<double>(day_of_run) / 365.25);
}

} // namespace

std::vector<SynthStratum> default_synth_strata() {
    return {
        {"cardio", "15-64", 1.2, 0.0}, {"cardio", "65-74", 2.2, 0.0}, {"cardio", "75+", 6.9, 0.8},
        {"resp", "15-64", 0.3, 0.0},   {"resp", "65-74", 0.5, 0.1},   {"resp", "75+", 1.7, 0.4},
        {"other", "15-64", 3.5, 0.0},  {"other", "65-74", 3.7, 0.0},  {"other", "75+", 11.2, 0.2},
    };
}

std::uint64_t replicate_seed(std::uint64_t base_seed, int replicate) {
    return base_seed + static_cast<std::uint64_t>(replicate);
}

std::pair<DailySeries, Oracle> generate(const SynthSpec& spec, std::uint64_t seed) {
    if (spec.n_days < 30) throw ValidationError("synth: n_days must be >= 30");
    if (spec.confounding_strength < 0.0) {
        throw ValidationError("synth: confounding_strength must be >= 0");
    }
    const auto strata = spec.strata.empty() ? default_synth_strata() : spec.strata;
    for (const auto& s : strata) {
        if (s.base_rate < 0.0 || s.tau < 0.0) {
            throw ValidationError("synth: stratum rates and effects must be nonnegative");
        }
        if (s.cause == "all" || s.age == "all") {
            throw ValidationError("synth: stratum label 'all' is reserved");
        }
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n = spec.n_days;
    const Date start(spec.start_year, 1, 1);

    // Weather first, then exposure, then outcomes: draw order is part of
    // the reproducibility contract.
    std::vector<double> temperature(n), humidity(n);
    double temp_ar = 0.0;
    for (int t = 0; t < n; ++t) {
        temp_ar = spec.temp_ar1 * temp_ar +
                  std::sqrt(1.0 - spec.temp_ar1 * spec.temp_ar1) * spec.temp_noise_sd * gauss(rng);
        temperature[t] = spec.temp_mean_c - spec.temp_amplitude_c * winter_cos(t) + temp_ar;
        const double h = spec.humidity_mean + spec.humidity_amplitude * winter_cos(t) +
                         spec.humidity_noise_sd * gauss(rng);
        humidity[t] = std::clamp(h, 2.0, 100.0);
    }

    std::vector<int> influenza(n, 0);
    {
        // One winter episode per calendar year, start and length jittered.
        std::uniform_int_distribution<int> start_jitter(0, 27);
        std::uniform_int_distribution<int> length(14, 28);
        const int n_years = (n + 364) / 365;
        for (int y = 0; y < n_years; ++y) {
            const int ep_start = y * 365 + 5 + start_jitter(rng);
            const int ep_len = length(rng);
            for (int t = ep_start; t < std::min(n, ep_start + ep_len); ++t) influenza[t] = 1;
        }
    }

    std::vector<double> exposure(n);
    double pm_ar = 0.0;
    for (int t = 0; t < n; ++t) {
        pm_ar = spec.exposure_ar1 * pm_ar +
                std::sqrt(1.0 - spec.exposure_ar1 * spec.exposure_ar1) * spec.exposure_noise_sd *
                    gauss(rng);
        const double seasonal_norm = spec.temp_mean_c - spec.temp_amplitude_c * winter_cos(t);
        const double weather_part = spec.exposure_seasonal * winter_cos(t) +
                                    spec.exposure_temp_coef * (seasonal_norm - temperature[t]);
        exposure[t] =
            std::max(1.0, spec.exposure_base + spec.confounding_strength * weather_part + pm_ar);
    }

    Oracle oracle;
    for (const auto& s : strata) oracle.strata.push_back(StratumKey{s.cause, s.age});
    oracle.y0.assign(strata.size(), std::vector<long>(n, 0));
    oracle.y1.assign(strata.size(), std::vector<long>(n, 0));
    for (int t = 0; t < n; ++t) {
        const double cold = std::max(0.0, 15.0 - temperature[t]) / 10.0;
        const double heat = std::max(0.0, temperature[t] - 24.0) / 10.0;
        const double log_mult = spec.mortality_seasonal_amplitude * winter_cos(t) +
                                spec.mortality_cold_coef * cold + spec.mortality_heat_coef * heat +
                                (influenza[t] ? spec.mortality_flu_boost : 0.0);
        for (std::size_t s = 0; s < strata.size(); ++s) {
            const double lambda = strata[s].base_rate * std::exp(log_mult);
            std::poisson_distribution<long> base(lambda);
            const long y0 = base(rng);
            long delta = 0;
            if (strata[s].tau > 0.0) {
                std::poisson_distribution<long> effect(strata[s].tau);
                delta = effect(rng);
            }
            oracle.y0[s][t] = y0;
            oracle.y1[s][t] = y0 + delta;
        }
    }

    const auto x_lagged = lag_mean(exposure, spec.exposure_lag_window);
    oracle.x_lagged = x_lagged;
    oracle.w.resize(n);
    for (int t = 0; t < n; ++t) oracle.w[t] = x_lagged[t] >= spec.threshold ? 1 : 0;

    static const struct {
        unsigned month, day;
    } kHolidays[] = {{1, 1}, {1, 6}, {4, 25}, {5, 1}, {6, 2}, {8, 15}, {11, 1}, {12, 8}, {12, 25}, {12, 26}};

    DailySeries series;
    series.strata = oracle.strata;
    series.records.reserve(n);
    for (int t = 0; t < n; ++t) {
        DailyRecord rec;
        rec.date = start.plus_days(t);
        rec.exposure = exposure[t];
        rec.temperature = temperature[t];
        rec.humidity = humidity[t];
        rec.influenza = influenza[t] != 0;
        rec.holiday = false;
        for (const auto& h : kHolidays) {
            if (rec.date.month() == h.month && rec.date.day() == h.day) rec.holiday = true;
        }
        for (std::size_t s = 0; s < strata.size(); ++s) {
            rec.outcomes[oracle.strata[s]] =
                oracle.w[t] ? oracle.y1[s][t] : oracle.y0[s][t];
        }
        series.records.push_back(std::move(rec));
    }
    return {std::move(series), std::move(oracle)};
}

long true_satt(const Oracle& oracle, const std::vector<int>& w) {
    return true_satt(oracle, w, "all", "all");
}

long true_satt(const Oracle& oracle, const std::vector<int>& w, const std::string& cause,
               const std::string& age) {
    if (w.size() != oracle.w.size()) throw ValidationError("true_satt: length mismatch");
    long total = 0;
    for (std::size_t s = 0; s < oracle.strata.size(); ++s) {
        if (cause != "all" && oracle.strata[s].cause != cause) continue;
        if (age != "all" && oracle.strata[s].age != age) continue;
        for (std::size_t t = 0; t < w.size(); ++t) {
            if (w[t] == 1) total += oracle.y1[s][t] - oracle.y0[s][t];
        }
    }
    return total;
}

} // namespace admatch
