#include "admatch/impact.hpp"

#include "admatch/errors.hpp"
#include "admatch/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

namespace admatch {

namespace {

struct TreatedSubset {
    std::vector<std::size_t> days; // treated days in the estimate
    std::vector<int> k;            // per-day match multiplicity restricted to the subset
};

TreatedSubset full_subset(const MatchMap& match, std::size_t n) {
    TreatedSubset s;
    s.k.assign(n, 0);
    for (const auto& [treated_day, control_day] : match.pairs) {
        s.days.push_back(treated_day);
        s.k[control_day] += 1;
    }
    return s;
}

ImpactEstimate estimate_for(const std::vector<long>& outcomes, const MatchMap& match,
                            const TreatedSubset& subset,
                            const std::vector<std::vector<std::size_t>>& neighbors,
                            double level) {
    ImpactEstimate est;
    long total = 0;
    for (std::size_t day : subset.days) total += outcomes[day] - outcomes[match.pairs.at(day)];
    est.ad = total;
    est.n_treated_used = subset.days.size();

    const std::vector<double> sigma2 = conditional_variance(outcomes, neighbors);
    double s2 = 0.0;
    for (std::size_t day : subset.days) s2 += sigma2[day];
    for (std::size_t i = 0; i < subset.k.size(); ++i) {
        if (subset.k[i] > 0) {
            s2 += static_cast<double>(subset.k[i]) * static_cast<double>(subset.k[i]) * sigma2[i];
        }
    }
    est.s2 = s2;
    const Interval interval = ci(static_cast<double>(total), s2, level);
    est.ci_low = interval.low;
    est.ci_high = interval.high;
    est.empty_warning = subset.days.empty();
    return est;
}

ImpactTable build_table(const DailySeries& series, const MatchMap& match,
                        const TreatedSubset& subset,
                        const std::vector<std::vector<std::size_t>>& neighbors, double level) {
    if (!series.has_outcomes()) {
        throw ValidationError("impact: the input has no outcome columns");
    }
    ImpactTable table;
    table.level = level;
    const auto causes = series.cause_labels();
    const auto ages = series.age_labels();
    const auto add = [&](const std::string& cause, const std::string& age) {
        ImpactEstimate est = estimate_for(series.outcome_series_marginal(cause, age), match,
                                          subset, neighbors, level);
        est.cause = cause;
        est.age = age;
        table.estimates.push_back(std::move(est));
    };
    for (const auto& cause : causes) {
        for (const auto& age : ages) add(cause, age);
    }
    for (const auto& cause : causes) add(cause, "all");
    for (const auto& age : ages) add("all", age);
    add("all", "all");
    return table;
}

} // namespace

std::vector<DayImpact> impute_and_diff(const std::vector<long>& outcomes,
                                       const std::vector<int>& w, const MatchMap& match) {
    std::vector<DayImpact> out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] != 1) continue;
        const auto it = match.pairs.find(i);
        if (it == match.pairs.end()) {
            throw ValidationError("impute_and_diff: treated day " + std::to_string(i) +
                                  " missing from MatchMap");
        }
        const long y_obs = outcomes[i];
        const long y_control = outcomes[it->second];
        out.push_back(DayImpact{i, y_obs, y_control, y_obs - y_control});
    }
    return out;
}

long total_ad(const std::vector<DayImpact>& impacts) {
    long total = 0;
    for (const auto& d : impacts) total += d.ad;
    return total;
}

std::vector<std::vector<std::size_t>> variance_neighbor_sets(const std::vector<double>& e_hat,
                                                             const std::vector<int>& w,
                                                             int m_neighbors) {
    if (m_neighbors < 1) throw ValidationError("variance_neighbor_sets: M must be >= 1");
    std::vector<std::size_t> groups[2];
    for (std::size_t i = 0; i < w.size(); ++i) groups[w[i] == 1 ? 1 : 0].push_back(i);
    for (const auto& g : groups) {
        if (!g.empty() && g.size() < static_cast<std::size_t>(m_neighbors) + 1) {
            throw ValidationError(
                "variance_neighbor_sets: a treatment group is too small for M = " +
                std::to_string(m_neighbors));
        }
    }

    std::vector<std::vector<std::size_t>> out(w.size());
    for (const auto& group : groups) {
        for (std::size_t i : group) {
            // Keep the M smallest (|score gap|, day) pairs.
            std::vector<std::pair<double, std::size_t>> best;
            for (std::size_t j : group) {
                if (j == i) continue;
                const double dist = std::abs(e_hat[i] - e_hat[j]);
                const std::pair<double, std::size_t> cand{dist, j};
                if (best.size() < static_cast<std::size_t>(m_neighbors)) {
                    best.insert(std::upper_bound(best.begin(), best.end(), cand), cand);
                } else if (cand < best.back()) {
                    best.pop_back();
                    best.insert(std::upper_bound(best.begin(), best.end(), cand), cand);
                }
            }
            for (const auto& [dist, j] : best) out[i].push_back(j);
        }
    }
    return out;
}

std::vector<double> conditional_variance(const std::vector<long>& outcomes,
                                         const std::vector<std::vector<std::size_t>>& neighbors) {
    std::vector<double> out(outcomes.size(), 0.0);
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& h = neighbors[i];
        if (h.empty()) continue;
        double sum = static_cast<double>(outcomes[i]);
        for (std::size_t j : h) sum += static_cast<double>(outcomes[j]);
        const double mean = sum / static_cast<double>(h.size() + 1);
        double ss = (outcomes[i] - mean) * (outcomes[i] - mean);
        for (std::size_t j : h) ss += (outcomes[j] - mean) * (outcomes[j] - mean);
        out[i] = ss / static_cast<double>(h.size());
    }
    return out;
}

std::vector<double> conditional_variance(const std::vector<long>& outcomes,
                                         const std::vector<double>& e_hat,
                                         const std::vector<int>& w, int m_neighbors) {
    return conditional_variance(outcomes, variance_neighbor_sets(e_hat, w, m_neighbors));
}

double variance_ad(const MatchMap& match, const std::vector<double>& sigma2,
                   const std::vector<int>& w) {
    if (sigma2.size() != w.size()) throw ValidationError("variance_ad: length mismatch");
    double s2 = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 1) {
            s2 += sigma2[i];
        } else if (match.k[i] > 0) {
            s2 += static_cast<double>(match.k[i]) * static_cast<double>(match.k[i]) * sigma2[i];
        }
    }
    return s2;
}

Interval ci(double ad_hat, double s2, double level) {
    if (s2 < 0.0) throw ValidationError("ci: negative variance");
    if (level <= 0.0 || level >= 1.0) throw ValidationError("ci: level outside (0,1)");
    const double z = stats::normal_quantile(0.5 + level / 2.0);
    const double half = z * std::sqrt(s2);
    return Interval{ad_hat - half, ad_hat + half};
}

ImpactTable stratified_impact(const DailySeries& series, const MatchMap& match,
                              const std::vector<double>& e_hat, const std::vector<int>& w,
                              double level) {
    const auto neighbors = variance_neighbor_sets(e_hat, w, 1);
    return build_table(series, match, full_subset(match, w.size()), neighbors, level);
}

ImpactTable sensitivity_exclude(const DailySeries& series, const MatchMap& match,
                                const std::vector<double>& e_hat, const std::vector<int>& w,
                                const std::vector<int>& exclude_flag, bool exclude_matched_too,
                                double level) {
    if (exclude_flag.size() != w.size()) {
        throw ValidationError("sensitivity_exclude: flag length mismatch");
    }
    TreatedSubset subset;
    subset.k.assign(w.size(), 0);
    for (const auto& [treated_day, control_day] : match.pairs) {
        if (exclude_flag[treated_day]) continue;
        if (exclude_matched_too && exclude_flag[control_day]) continue;
        subset.days.push_back(treated_day);
        subset.k[control_day] += 1;
    }
    const auto neighbors = variance_neighbor_sets(e_hat, w, 1);
    return build_table(series, match, subset, neighbors, level);
}

double naive_total_ad(const std::vector<long>& outcomes, const std::vector<int>& w) {
    double sum_t = 0.0, sum_c = 0.0;
    long n_t = 0, n_c = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 1) {
            sum_t += static_cast<double>(outcomes[i]);
            ++n_t;
        } else {
            sum_c += static_cast<double>(outcomes[i]);
            ++n_c;
        }
    }
    if (n_t == 0 || n_c == 0) throw ValidationError("naive_total_ad: a group is empty");
    return static_cast<double>(n_t) * (sum_t / n_t - sum_c / n_c);
}

} // namespace admatch
