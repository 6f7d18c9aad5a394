#include "admatch/report.hpp"

#include "admatch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace admatch {
namespace report {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open output file '" + path + "'");
    return out;
}

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), format, v);
    return buf;
}

std::string full(double v) { return fmt("%.17g", v); }

std::string opt3(const std::optional<double>& v) {
    return v ? fmt("%.3f", *v) : std::string("-");
}

std::string opt_raw(const std::optional<double>& v) {
    return v ? fmt("%.10g", *v) : std::string("");
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

} // namespace

std::string format_pvalue(double p) {
    if (std::isnan(p)) return "degenerate";
    if (p < 0.001) return "<0.001";
    return fmt("%.3g", p);
}

void write_scores_csv(const std::string& path, const std::vector<ScoreRow>& rows) {
    auto out = open_out(path);
    out << "date,x_lagged,w,eta,e_hat\n";
    for (const auto& r : rows) {
        out << r.date.to_iso() << ',' << full(r.x_lagged) << ',' << r.w << ',' << full(r.eta)
            << ',' << full(r.e_hat) << "\n";
    }
}

std::vector<ScoreRow> read_scores_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("missing scores artifact '" + path +
                              "' (run the design stage first)");
    }
    std::string line;
    if (!std::getline(in, line) || line != "date,x_lagged,w,eta,e_hat") {
        throw ValidationError("scores artifact '" + path + "' has an unexpected header");
    }
    std::vector<ScoreRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split_fields(line);
        if (f.size() != 5) {
            throw ValidationError("scores artifact row " + std::to_string(lineno) +
                                  ": expected 5 fields");
        }
        ScoreRow r;
        r.date = Date::parse_iso(f[0]);
        r.x_lagged = std::stod(f[1]);
        r.w = std::stoi(f[2]);
        r.eta = std::stod(f[3]);
        r.e_hat = std::stod(f[4]);
        rows.push_back(r);
    }
    if (rows.empty()) throw ValidationError("scores artifact '" + path + "' is empty");
    return rows;
}

void write_fit_summary(const std::string& path, const PropensityFit& fit,
                       const TreatmentAssignment& assignment,
                       const std::vector<std::string>& dropped_columns) {
    auto out = open_out(path);
    out << "propensity model fit\n";
    out << "====================\n";
    out << "days:            " << assignment.w.size() << "\n";
    out << "treated days:    " << assignment.n_treated() << "\n";
    out << "control days:    " << assignment.n_control() << "\n";
    out << "threshold:       " << fmt("%.6g", assignment.threshold) << " ug/m3 (lag window "
        << assignment.lag_window << ")\n";
    out << "converged:       " << (fit.converged ? "yes" : "no") << "\n";
    out << "iterations:      " << fit.n_iter << "\n";
    out << "deviance:        " << fmt("%.10g", fit.deviance) << "\n";
    if (!fit.warning.empty()) out << "warning:         " << fit.warning << "\n";
    if (!dropped_columns.empty()) {
        out << "dropped columns:";
        for (const auto& d : dropped_columns) out << " " << d;
        out << "\n";
    }
    out << "\ncoefficients (" << fit.beta.size() << ")\n";
    for (Eigen::Index i = 0; i < fit.beta.size(); ++i) {
        out << "  " << fit.column_names[static_cast<std::size_t>(i)] << " = "
            << fmt("%.10g", fit.beta[i]) << "\n";
    }
}

void write_matchmap_csv(const std::string& path, const MatchMap& match,
                        const std::vector<Date>& dates) {
    auto out = open_out(path);
    out << "treated_date,control_date\n";
    for (const auto& [treated_day, control_day] : match.pairs) {
        out << dates[treated_day].to_iso() << ',' << dates[control_day].to_iso() << "\n";
    }
}

MatchMap read_matchmap_csv(const std::string& path, const std::vector<Date>& dates) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("missing match artifact '" + path +
                              "' (run the match stage first)");
    }
    std::map<Date, std::size_t> index;
    for (std::size_t i = 0; i < dates.size(); ++i) index.emplace(dates[i], i);
    std::string line;
    if (!std::getline(in, line) || line != "treated_date,control_date") {
        throw ValidationError("match artifact '" + path + "' has an unexpected header");
    }
    MatchMap match;
    match.k.assign(dates.size(), 0);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split_fields(line);
        if (f.size() != 2) {
            throw ValidationError("match artifact row " + std::to_string(lineno) +
                                  ": expected 2 fields");
        }
        const auto find = [&](const std::string& iso) {
            const auto it = index.find(Date::parse_iso(iso));
            if (it == index.end()) {
                throw ValidationError("match artifact row " + std::to_string(lineno) + ": date " +
                                      iso + " is not in the input series");
            }
            return it->second;
        };
        const std::size_t treated_day = find(f[0]);
        const std::size_t control_day = find(f[1]);
        match.pairs.emplace(treated_day, control_day);
        match.k[control_day] += 1;
    }
    if (match.pairs.empty()) throw ValidationError("match artifact '" + path + "' is empty");
    return match;
}

void write_multiplicity_csv(const std::string& path, const std::map<int, long>& histogram) {
    auto out = open_out(path);
    out << "k,n_controls\n";
    for (const auto& [k, count] : histogram) out << k << ',' << count << "\n";
}

void write_overlap_report(const std::string& path, const OverlapReport& overlap,
                          const std::vector<Date>& dates) {
    auto out = open_out(path);
    out << "overlap diagnostics (caliper " << fmt("%.4g", overlap.caliper_warn) << ")\n";
    out << "treated score range: [" << fmt("%.6f", overlap.treated_min) << ", "
        << fmt("%.6f", overlap.treated_max) << "]\n";
    out << "control score range: [" << fmt("%.6f", overlap.control_min) << ", "
        << fmt("%.6f", overlap.control_max) << "]\n";
    double worst = 0.0;
    for (double d : overlap.nearest_control_distance) worst = std::max(worst, d);
    out << "largest nearest-control distance: " << fmt("%.6f", worst) << "\n";
    out << "flagged treated days: " << overlap.flagged.size() << "\n";
    for (std::size_t day : overlap.flagged) {
        const auto pos = std::find(overlap.treated_days.begin(), overlap.treated_days.end(), day);
        const double dist =
            overlap.nearest_control_distance[static_cast<std::size_t>(pos - overlap.treated_days.begin())];
        out << "  " << dates[day].to_iso() << "  nearest control at distance "
            << fmt("%.6f", dist) << "\n";
    }
}

void write_balance_csv(const std::string& path, const std::vector<BalanceRow>& rows) {
    auto out = open_out(path);
    out << "covariate,kind,treated,control,matched,p_pre,p_post,delta_pre,delta_post,pct_bias\n";
    for (const auto& r : rows) {
        const char* kind = r.kind == CovariateKind::continuous ? "continuous"
                           : r.kind == CovariateKind::binary   ? "binary"
                                                               : "circular";
        const auto num = [](double v) { return std::isnan(v) ? std::string("") : fmt("%.10g", v); };
        out << r.name << ',' << kind << ',' << num(r.treated_mean) << ',' << num(r.control_mean)
            << ',' << num(r.matched_mean) << ',' << num(r.p_pre) << ',' << num(r.p_post) << ','
            << opt_raw(r.delta_pre) << ',' << opt_raw(r.delta_post) << ',' << opt_raw(r.pct_bias)
            << "\n";
    }
}

void write_balance_txt(const std::string& path, const std::vector<BalanceRow>& rows) {
    auto out = open_out(path);
    char line[256];
    std::snprintf(line, sizeof(line), "%-20s %9s %9s %9s %8s %8s %8s %8s %8s\n", "covariate",
                  "treated", "control", "matched", "p_pre", "p_post", "d_pre", "d_post", "bias%");
    out << line;
    for (const auto& r : rows) {
        const auto m3 = [](double v) { return std::isnan(v) ? std::string("-") : fmt("%.3f", v); };
        std::snprintf(line, sizeof(line), "%-20s %9s %9s %9s %8s %8s %8s %8s %8s\n",
                      r.name.c_str(), m3(r.treated_mean).c_str(), m3(r.control_mean).c_str(),
                      m3(r.matched_mean).c_str(), format_pvalue(r.p_pre).c_str(),
                      format_pvalue(r.p_post).c_str(), opt3(r.delta_pre).c_str(),
                      opt3(r.delta_post).c_str(),
                      (r.pct_bias ? fmt("%.1f", *r.pct_bias) : std::string("-")).c_str());
        out << line;
    }
}

void write_impact_csv(const std::string& path, const ImpactTable& table) {
    auto out = open_out(path);
    out << "cause,age,ad,s2,ci_low,ci_high,n_treated_used,level,warning\n";
    for (const auto& e : table.estimates) {
        out << e.cause << ',' << e.age << ',' << e.ad << ',' << fmt("%.10g", e.s2) << ','
            << fmt("%.10g", e.ci_low) << ',' << fmt("%.10g", e.ci_high) << ',' << e.n_treated_used
            << ',' << fmt("%.3g", table.level) << ',' << (e.empty_warning ? "empty_subset" : "")
            << "\n";
    }
}

void write_impact_txt(const std::string& path, const ImpactTable& table,
                      const std::string& title) {
    auto out = open_out(path);
    out << title << "\n";
    std::vector<std::string> causes, ages;
    for (const auto& e : table.estimates) {
        if (std::find(causes.begin(), causes.end(), e.cause) == causes.end()) {
            causes.push_back(e.cause);
        }
        if (std::find(ages.begin(), ages.end(), e.age) == ages.end()) ages.push_back(e.age);
    }
    const auto find = [&](const std::string& cause, const std::string& age) {
        for (const auto& e : table.estimates) {
            if (e.cause == cause && e.age == age) return &e;
        }
        return static_cast<const ImpactEstimate*>(nullptr);
    };
    char cell[80], line[1024];
    std::snprintf(line, sizeof(line), "%-14s", "cause \\ age");
    out << line;
    for (const auto& a : ages) {
        std::snprintf(line, sizeof(line), " %24s", a.c_str());
        out << line;
    }
    out << "\n";
    for (const auto& c : causes) {
        std::snprintf(line, sizeof(line), "%-14s", c.c_str());
        out << line;
        for (const auto& a : ages) {
            const auto* e = find(c, a);
            if (!e) {
                std::snprintf(cell, sizeof(cell), " %24s", "-");
            } else {
                char inner[64];
                std::snprintf(inner, sizeof(inner), "%ld (%ld, %ld)", e->ad,
                              std::lround(e->ci_low), std::lround(e->ci_high));
                std::snprintf(cell, sizeof(cell), " %24s", inner);
            }
            out << cell;
        }
        out << "\n";
    }
    bool any_warning = false;
    for (const auto& e : table.estimates) any_warning = any_warning || e.empty_warning;
    if (any_warning) {
        out << "warning: no treated days survive the exclusion; totals are over an empty set\n";
    }
    out << "AD (" << fmt("%.0f", table.level * 100.0) << "% CI low, high)\n";
}

namespace {

struct WeightedSample {
    std::vector<double> values;
    std::vector<double> weights;
};

void kde_column(const WeightedSample& sample, const std::vector<double>& grid,
                std::vector<double>& dens) {
    dens.assign(grid.size(), 0.0);
    double wsum = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < sample.values.size(); ++i) {
        wsum += sample.weights[i];
        mean += sample.weights[i] * sample.values[i];
    }
    if (wsum <= 0.0) return;
    mean /= wsum;
    double var = 0.0;
    for (std::size_t i = 0; i < sample.values.size(); ++i) {
        var += sample.weights[i] * (sample.values[i] - mean) * (sample.values[i] - mean);
    }
    var /= wsum;
    const double sd = std::sqrt(std::max(var, 1e-12));
    const double bw = std::max(0.9 * sd * std::pow(wsum, -0.2), 1e-3);
    const double norm = 1.0 / (wsum * bw * std::sqrt(2.0 * 3.14159265358979323846));
    for (std::size_t g = 0; g < grid.size(); ++g) {
        double acc = 0.0;
        for (std::size_t i = 0; i < sample.values.size(); ++i) {
            const double u = (grid[g] - sample.values[i]) / bw;
            acc += sample.weights[i] * std::exp(-0.5 * u * u);
        }
        dens[g] = acc * norm;
    }
}

} // namespace

void write_propensity_density_plot(const std::string& path, const std::vector<double>& e_hat,
                                   const std::vector<int>& w, const MatchMap& match) {
    WeightedSample treated, control, matched;
    for (std::size_t i = 0; i < e_hat.size(); ++i) {
        auto& s = (w[i] == 1) ? treated : control;
        s.values.push_back(e_hat[i]);
        s.weights.push_back(1.0);
        if (w[i] == 0 && match.k[i] > 0) {
            matched.values.push_back(e_hat[i]);
            matched.weights.push_back(static_cast<double>(match.k[i]));
        }
    }
    std::vector<double> grid;
    for (int g = 0; g <= 200; ++g) grid.push_back(static_cast<double>(g) / 200.0);
    std::vector<double> d_t, d_c, d_m;
    kde_column(treated, grid, d_t);
    kde_column(control, grid, d_c);
    kde_column(matched, grid, d_m);
    auto out = open_out(path);
    out << "e,density_treated,density_control,density_matched\n";
    for (std::size_t g = 0; g < grid.size(); ++g) {
        out << fmt("%.3f", grid[g]) << ',' << fmt("%.8g", d_t[g]) << ',' << fmt("%.8g", d_c[g])
            << ',' << fmt("%.8g", d_m[g]) << "\n";
    }
}

void write_month_distribution_plot(const std::string& path, const std::vector<int>& month,
                                   const std::vector<int>& w, const MatchMap& match) {
    std::vector<long> treated(13, 0), control(13, 0), matched(13, 0);
    for (std::size_t i = 0; i < month.size(); ++i) {
        (w[i] == 1 ? treated : control)[month[i]] += 1;
        if (w[i] == 0 && match.k[i] > 0) matched[month[i]] += match.k[i];
    }
    auto out = open_out(path);
    out << "month,treated,control,matched\n";
    for (int m = 1; m <= 12; ++m) {
        out << m << ',' << treated[m] << ',' << control[m] << ',' << matched[m] << "\n";
    }
}

void write_daily_series_plot(const std::string& path, const std::vector<Date>& dates,
                             const TreatmentAssignment& assignment,
                             const std::vector<long>& total_outcomes,
                             const std::vector<DayImpact>& impacts) {
    std::vector<std::string> ad(dates.size(), "");
    for (const auto& d : impacts) ad[d.treated_day] = std::to_string(d.ad);
    auto out = open_out(path);
    out << "date,x_lagged,w,deaths_total,ad_day\n";
    for (std::size_t i = 0; i < dates.size(); ++i) {
        out << dates[i].to_iso() << ',' << fmt("%.10g", assignment.x_lagged[i]) << ','
            << assignment.w[i] << ',' << total_outcomes[i] << ',' << ad[i] << "\n";
    }
}

} // namespace report
} // namespace admatch
