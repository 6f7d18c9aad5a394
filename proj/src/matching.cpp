#include "admatch/matching.hpp"

#include "admatch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace admatch {

namespace {

struct ScoredDay {
    double score;
    std::size_t day;
    bool operator<(const ScoredDay& other) const {
        return score != other.score ? score < other.score : day < other.day;
    }
};

// Sorted control array plus, for each position, the start of its
// equal-score run (the run start holds the earliest day of that score).
struct ControlIndex {
    std::vector<ScoredDay> sorted;
    std::vector<std::size_t> run_start;

    explicit ControlIndex(const std::vector<double>& e_hat, const std::vector<int>& w) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (w[i] == 0) sorted.push_back({e_hat[i], i});
        }
        std::sort(sorted.begin(), sorted.end());
        run_start.resize(sorted.size());
        for (std::size_t p = 0; p < sorted.size(); ++p) {
            run_start[p] = (p > 0 && sorted[p - 1].score == sorted[p].score) ? run_start[p - 1] : p;
        }
    }

    /// Earliest-day control at minimum |score - e|.
    std::size_t nearest(double e, double* distance_out) const {
        const auto it = std::lower_bound(
            sorted.begin(), sorted.end(), e,
            [](const ScoredDay& s, double value) { return s.score < value; });
        const auto right_pos = static_cast<std::size_t>(it - sorted.begin());

        double best_dist = std::numeric_limits<double>::infinity();
        std::size_t best_day = 0;
        const auto consider = [&](std::size_t pos) {
            const double dist = std::abs(sorted[pos].score - e);
            const std::size_t day = sorted[run_start[pos]].day;
            if (dist < best_dist || (dist == best_dist && day < best_day)) {
                best_dist = dist;
                best_day = day;
            }
        };
        if (right_pos < sorted.size()) consider(right_pos);
        if (right_pos > 0) consider(right_pos - 1);
        if (distance_out) *distance_out = best_dist;
        return best_day;
    }
};

} // namespace

MatchMap nn_match(const std::vector<double>& e_hat, const std::vector<int>& w) {
    if (e_hat.size() != w.size()) throw ValidationError("nn_match: score/treatment length mismatch");
    const ControlIndex controls(e_hat, w);
    if (controls.sorted.empty()) throw ValidationError("nn_match: no control days");

    MatchMap out;
    out.k.assign(w.size(), 0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] != 1) continue;
        const std::size_t j = controls.nearest(e_hat[i], nullptr);
        out.pairs.emplace(i, j);
        out.k[j] += 1;
    }
    return out;
}

std::map<int, long> match_multiplicity(const MatchMap& match, std::size_t n_controls) {
    std::map<int, long> hist;
    long controls_seen = 0;
    for (std::size_t i = 0; i < match.k.size(); ++i) {
        if (match.pairs.contains(i)) continue; // treated day
        ++controls_seen;
        hist[match.k[i]] += 1;
    }
    if (static_cast<std::size_t>(controls_seen) != n_controls) {
        throw ValidationError("match_multiplicity: control count mismatch (" +
                              std::to_string(controls_seen) + " vs " +
                              std::to_string(n_controls) + ")");
    }
    return hist;
}

OverlapReport overlap_check(const std::vector<double>& e_hat, const std::vector<int>& w,
                            double caliper_warn) {
    OverlapReport out;
    out.caliper_warn = caliper_warn;
    const ControlIndex controls(e_hat, w);
    bool any_treated = false;
    out.treated_min = out.control_min = std::numeric_limits<double>::infinity();
    out.treated_max = out.control_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 1) {
            any_treated = true;
            out.treated_min = std::min(out.treated_min, e_hat[i]);
            out.treated_max = std::max(out.treated_max, e_hat[i]);
        } else {
            out.control_min = std::min(out.control_min, e_hat[i]);
            out.control_max = std::max(out.control_max, e_hat[i]);
        }
    }
    if (!any_treated || controls.sorted.empty()) {
        throw ValidationError("overlap_check: both groups must be nonempty");
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] != 1) continue;
        double dist = 0.0;
        controls.nearest(e_hat[i], &dist);
        out.treated_days.push_back(i);
        out.nearest_control_distance.push_back(dist);
        if (dist > caliper_warn) out.flagged.push_back(i);
    }
    return out;
}

} // namespace admatch
