#include "admatch/stats.hpp"

#include "admatch/errors.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace admatch {
namespace stats {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double circular_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), kTwoPi);
    return std::min(d, kTwoPi - d);
}

} // namespace

double mean(const std::vector<double>& x) {
    if (x.empty()) throw ValidationError("mean of empty sample");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_variance(const std::vector<double>& x) {
    if (x.size() < 2) throw ValidationError("sample variance needs >= 2 observations");
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

double welch_t_pvalue(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2) {
        throw ValidationError("welch_t: both groups need >= 2 observations");
    }
    const double ma = mean(a), mb = mean(b);
    const double va = sample_variance(a) / static_cast<double>(a.size());
    const double vb = sample_variance(b) / static_cast<double>(b.size());
    const double se2 = va + vb;
    if (se2 <= 0.0) return ma == mb ? 1.0 : 0.0;
    const double t = (ma - mb) / std::sqrt(se2);
    const double df = se2 * se2 /
                      (va * va / static_cast<double>(a.size() - 1) +
                       vb * vb / static_cast<double>(b.size() - 1));
    const boost::math::students_t dist(df);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

double two_prop_pvalue(long count_a, long n_a, long count_b, long n_b) {
    if (n_a < 1 || n_b < 1) throw ValidationError("two_prop: empty group");
    if (count_a < 0 || count_a > n_a || count_b < 0 || count_b > n_b) {
        throw ValidationError("two_prop: count outside [0, n]");
    }
    const double pa = static_cast<double>(count_a) / static_cast<double>(n_a);
    const double pb = static_cast<double>(count_b) / static_cast<double>(n_b);
    const double pooled =
        static_cast<double>(count_a + count_b) / static_cast<double>(n_a + n_b);
    const double se2 =
        pooled * (1.0 - pooled) * (1.0 / static_cast<double>(n_a) + 1.0 / static_cast<double>(n_b));
    if (se2 <= 0.0) return 1.0; // pooled 0 or 1 implies pa == pb
    const double z = (pa - pb) / std::sqrt(se2);
    const boost::math::normal dist;
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(z)));
}

double month_to_angle(int month) {
    if (month < 1 || month > 12) throw ValidationError("month outside 1..12");
    return kTwoPi * (static_cast<double>(month) - 0.5) / 12.0;
}

CircularMedianTest circular_median_test(const std::vector<std::vector<double>>& angles_by_group) {
    if (angles_by_group.size() < 2) {
        throw ValidationError("circular_median_test: need >= 2 groups");
    }
    std::vector<double> pooled;
    for (const auto& g : angles_by_group) {
        if (g.empty()) throw ValidationError("circular_median_test: empty group");
        pooled.insert(pooled.end(), g.begin(), g.end());
    }
    for (auto& a : pooled) a = std::fmod(std::fmod(a, kTwoPi) + kTwoPi, kTwoPi);

    // Circular median: the observed angle minimizing the summed arc
    // distance; ties broken by the smaller angle.
    std::vector<double> candidates = pooled;
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    double best = candidates.front();
    double best_sum = std::numeric_limits<double>::infinity();
    for (double c : candidates) {
        double sum = 0.0;
        for (double a : pooled) sum += circular_distance(c, a);
        if (sum < best_sum - 1e-12) {
            best_sum = sum;
            best = c;
        }
    }

    CircularMedianTest out;
    out.median_angle = best;

    // 2 x g table: in the half circle (theta, theta + pi] vs not.
    const auto g = angles_by_group.size();
    std::vector<double> in_count(g, 0.0), n_group(g, 0.0);
    for (std::size_t j = 0; j < g; ++j) {
        n_group[j] = static_cast<double>(angles_by_group[j].size());
        for (double raw : angles_by_group[j]) {
            const double a = std::fmod(std::fmod(raw, kTwoPi) + kTwoPi, kTwoPi);
            double rel = a - best;
            rel = std::fmod(std::fmod(rel, kTwoPi) + kTwoPi, kTwoPi);
            const double pi = kTwoPi / 2.0;
            const bool in = rel > 1e-12 && rel <= pi + 1e-12;
            if (in) in_count[j] += 1.0;
        }
    }
    const double total = std::accumulate(n_group.begin(), n_group.end(), 0.0);
    const double total_in = std::accumulate(in_count.begin(), in_count.end(), 0.0);
    if (total_in == 0.0 || total_in == total) {
        out.degenerate = true;
        out.p_value = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    double chi2 = 0.0;
    for (std::size_t j = 0; j < g; ++j) {
        const double e_in = n_group[j] * total_in / total;
        const double e_out = n_group[j] * (total - total_in) / total;
        const double o_in = in_count[j];
        const double o_out = n_group[j] - in_count[j];
        chi2 += (o_in - e_in) * (o_in - e_in) / e_in;
        chi2 += (o_out - e_out) * (o_out - e_out) / e_out;
    }
    out.statistic = chi2;
    out.p_value = chi_squared_upper_p(chi2, static_cast<int>(g) - 1);
    return out;
}

double normal_quantile(double p) {
    const boost::math::normal dist;
    return boost::math::quantile(dist, p);
}

double chi_squared_upper_p(double statistic, int df) {
    if (statistic <= 0.0) return 1.0;
    const boost::math::chi_squared dist(df);
    return boost::math::cdf(boost::math::complement(dist, statistic));
}

} // namespace stats
} // namespace admatch
