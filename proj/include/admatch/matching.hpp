#pragma once

#include <cstddef>
#include <map>
#include <vector>

namespace admatch {

/// 1:1 nearest-neighbor assignment with replacement, plus the per-control
/// reuse count K(i). Day indices follow the series order (dates ascending).
struct MatchMap {
    std::map<std::size_t, std::size_t> pairs; // treated day -> matched control day
    std::vector<int> k;                       // per day; nonzero only on control days

    std::size_t n_treated() const { return pairs.size(); }
};

/// For each treated day, the control day with the closest score; ties go
/// to the earlier calendar day. Matching is with replacement. Throws when
/// there are no control days.
MatchMap nn_match(const std::vector<double>& e_hat, const std::vector<int>& w);

/// Histogram of K over control days (K = 0 included). The mass-balance
/// identity sum_K K * count(K) = number of treated days holds by
/// construction.
std::map<int, long> match_multiplicity(const MatchMap& match, std::size_t n_controls);

struct OverlapReport {
    double treated_min = 0.0, treated_max = 0.0;
    double control_min = 0.0, control_max = 0.0;
    /// Parallel arrays over treated days (in day order).
    std::vector<std::size_t> treated_days;
    std::vector<double> nearest_control_distance;
    std::vector<std::size_t> flagged; // treated days with distance > caliper
    double caliper_warn = 0.1;
};

/// Diagnostic only: flags treated days whose nearest control score is
/// farther than caliper_warn; nothing is ever dropped.
OverlapReport overlap_check(const std::vector<double>& e_hat, const std::vector<int>& w,
                            double caliper_warn = 0.1);

} // namespace admatch
