// Test-only reference implementations, kept deliberately independent of
// the production code paths they check.
#pragma once

#include "admatch/matching.hpp"

#include <cmath>
#include <cstddef>
#include <map>
#include <vector>

namespace testoracle {

/// Exhaustive-search nearest control per treated day; ties broken by the
/// earlier day.
inline admatch::MatchMap nn_match_bruteforce(const std::vector<double>& e_hat,
                                             const std::vector<int>& w) {
    admatch::MatchMap out;
    out.k.assign(w.size(), 0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] != 1) continue;
        bool found = false;
        double best = 0.0;
        std::size_t best_day = 0;
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (w[j] != 0) continue;
            const double dist = std::abs(e_hat[i] - e_hat[j]);
            if (!found || dist < best || (dist == best && j < best_day)) {
                found = true;
                best = dist;
                best_day = j;
            }
        }
        out.pairs.emplace(i, best_day);
        out.k[best_day] += 1;
    }
    return out;
}

/// Direct per-day evaluation of the conditional outcome variance: scan
/// the whole same-group set for the M nearest scores, then average the
/// squared deviations around the local mean.
inline std::vector<double> conditional_variance_direct(const std::vector<long>& y,
                                                       const std::vector<double>& e_hat,
                                                       const std::vector<int>& w, int m) {
    std::vector<double> out(y.size(), 0.0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        std::vector<std::size_t> same;
        for (std::size_t j = 0; j < y.size(); ++j) {
            if (j != i && w[j] == w[i]) same.push_back(j);
        }
        std::vector<std::size_t> chosen;
        std::vector<bool> used(y.size(), false);
        for (int pick = 0; pick < m; ++pick) {
            bool found = false;
            double best = 0.0;
            std::size_t best_day = 0;
            for (std::size_t j : same) {
                if (used[j]) continue;
                const double dist = std::abs(e_hat[i] - e_hat[j]);
                if (!found || dist < best || (dist == best && j < best_day)) {
                    found = true;
                    best = dist;
                    best_day = j;
                }
            }
            used[best_day] = true;
            chosen.push_back(best_day);
        }
        double mean = static_cast<double>(y[i]);
        for (std::size_t j : chosen) mean += static_cast<double>(y[j]);
        mean /= static_cast<double>(chosen.size() + 1);
        double ss = (static_cast<double>(y[i]) - mean) * (static_cast<double>(y[i]) - mean);
        for (std::size_t j : chosen) {
            ss += (static_cast<double>(y[j]) - mean) * (static_cast<double>(y[j]) - mean);
        }
        out[i] = ss / static_cast<double>(chosen.size());
    }
    return out;
}

/// Direct summation of the matching-variance weights:
/// sum_i (W_i - (1 - W_i) K(i))^2 sigma2_i.
inline double variance_ad_direct(const std::vector<int>& w, const std::vector<int>& k,
                                 const std::vector<double>& sigma2) {
    double total = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double weight = static_cast<double>(w[i]) -
                              (1.0 - static_cast<double>(w[i])) * static_cast<double>(k[i]);
        total += weight * weight * sigma2[i];
    }
    return total;
}

} // namespace testoracle
