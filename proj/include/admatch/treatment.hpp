#pragma once

#include <cstddef>
#include <vector>

namespace admatch {

/// Lagged exposure and the binary high-exposure indicator per day.
/// w[i] = 1 iff x_lagged[i] >= threshold (boundary inclusive).
struct TreatmentAssignment {
    double threshold = 40.0;
    int lag_window = 2; // lag 0-1
    std::vector<double> x_lagged;
    std::vector<int> w;

    std::size_t n_treated() const;
    std::size_t n_control() const;
};

/// Trailing moving average: out[i] = mean(values[max(0, i-window+1) .. i]).
/// Leading days average over the available prefix, so the output has the
/// same length as the input. Throws ValidationError on empty input or
/// window < 1.
std::vector<double> lag_mean(const std::vector<double>& values, int window);

/// Threshold the lagged exposure (inclusive at the boundary).
TreatmentAssignment assign_treatment(const std::vector<double>& x_lagged, double threshold,
                                     int lag_window);

} // namespace admatch
