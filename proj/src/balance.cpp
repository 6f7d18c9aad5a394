#include "admatch/balance.hpp"

#include "admatch/errors.hpp"

#include <cmath>
#include <limits>

namespace admatch {

namespace {

struct Split {
    std::vector<double> treated;
    std::vector<double> control;
    std::vector<double> matched; // multiset: one entry per treated day
};

Split split_groups(const std::vector<double>& x, const std::vector<int>& w,
                   const MatchMap* match) {
    Split out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        (w[i] == 1 ? out.treated : out.control).push_back(x[i]);
    }
    if (match) {
        for (const auto& [treated_day, control_day] : match->pairs) {
            out.matched.push_back(x[control_day]);
        }
    }
    return out;
}

std::optional<double> std_diff_impl(const Split& s, bool post) {
    if (s.treated.size() < 2 || s.control.size() < 2) {
        throw ValidationError("standardized difference needs >= 2 observations per group");
    }
    const double denom2 =
        (stats::sample_variance(s.treated) + stats::sample_variance(s.control)) / 2.0;
    if (denom2 <= 0.0) return std::nullopt;
    const double other = post ? stats::mean(s.matched) : stats::mean(s.control);
    return (stats::mean(s.treated) - other) / std::sqrt(denom2);
}

long count_ones(const std::vector<double>& x) {
    long c = 0;
    for (double v : x) c += (v != 0.0) ? 1 : 0;
    return c;
}

std::vector<double> to_angles(const std::vector<double>& months) {
    std::vector<double> out;
    out.reserve(months.size());
    for (double m : months) out.push_back(stats::month_to_angle(static_cast<int>(m)));
    return out;
}

BalanceRow make_row(const std::string& name, CovariateKind kind, const std::vector<double>& x,
                    const std::vector<int>& w, const MatchMap& match) {
    const Split s = split_groups(x, w, &match);
    BalanceRow row;
    row.name = name;
    row.kind = kind;

    if (kind == CovariateKind::circular_month) {
        row.treated_mean = row.control_mean = row.matched_mean =
            std::numeric_limits<double>::quiet_NaN();
        const auto pre = stats::circular_median_test({to_angles(s.treated), to_angles(s.control)});
        const auto post = stats::circular_median_test({to_angles(s.treated), to_angles(s.matched)});
        row.p_pre = pre.p_value;
        row.p_post = post.p_value;
        row.degenerate_test = pre.degenerate || post.degenerate;
        return row;
    }

    row.treated_mean = stats::mean(s.treated);
    row.control_mean = stats::mean(s.control);
    row.matched_mean = stats::mean(s.matched);
    if (kind == CovariateKind::binary) {
        row.p_pre = stats::two_prop_pvalue(count_ones(s.treated),
                                           static_cast<long>(s.treated.size()),
                                           count_ones(s.control),
                                           static_cast<long>(s.control.size()));
        row.p_post = stats::two_prop_pvalue(count_ones(s.treated),
                                            static_cast<long>(s.treated.size()),
                                            count_ones(s.matched),
                                            static_cast<long>(s.matched.size()));
    } else {
        row.p_pre = stats::welch_t_pvalue(s.treated, s.control);
        row.p_post = stats::welch_t_pvalue(s.treated, s.matched);
    }
    row.delta_pre = std_diff_impl(s, false);
    row.delta_post = std_diff_impl(s, true);
    if (row.delta_pre && row.delta_post && *row.delta_pre != 0.0) {
        row.pct_bias = pct_bias(*row.delta_pre, *row.delta_post);
    }
    return row;
}

} // namespace

std::optional<double> std_diff_pre(const std::vector<double>& x, const std::vector<int>& w) {
    return std_diff_impl(split_groups(x, w, nullptr), false);
}

std::optional<double> std_diff_post(const std::vector<double>& x, const std::vector<int>& w,
                                    const MatchMap& match) {
    return std_diff_impl(split_groups(x, w, &match), true);
}

std::optional<double> pct_bias(double delta_pre, double delta_post) {
    if (delta_pre == 0.0) return std::nullopt;
    return 100.0 * (delta_pre - delta_post) / delta_pre;
}

std::vector<BalanceRow> balance_table(const std::vector<BalanceCovariate>& covariates,
                                      const std::vector<double>& e_hat,
                                      const std::vector<int>& w, const MatchMap& match) {
    std::vector<BalanceRow> rows;
    rows.push_back(
        make_row("propensity_score", CovariateKind::continuous, e_hat, w, match));
    for (const auto& cov : covariates) {
        if (cov.values.size() != w.size()) {
            throw ValidationError("balance_table: covariate '" + cov.name +
                                  "' length mismatch");
        }
        rows.push_back(make_row(cov.name, cov.kind, cov.values, w, match));
    }
    return rows;
}

} // namespace admatch
