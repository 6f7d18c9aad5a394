#include "admatch/treatment.hpp"

#include "admatch/errors.hpp"

#include <algorithm>
#include <numeric>

namespace admatch {

std::size_t TreatmentAssignment::n_treated() const {
    return static_cast<std::size_t>(std::count(w.begin(), w.end(), 1));
}

std::size_t TreatmentAssignment::n_control() const { return w.size() - n_treated(); }

std::vector<double> lag_mean(const std::vector<double>& values, int window) {
    if (values.empty()) throw ValidationError("lag_mean: empty series");
    if (window < 1) throw ValidationError("lag_mean: window must be >= 1");
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::size_t first = (i + 1 > static_cast<std::size_t>(window))
                                      ? i + 1 - static_cast<std::size_t>(window)
                                      : 0;
        double sum = 0.0;
        for (std::size_t j = first; j <= i; ++j) sum += values[j];
        out[i] = sum / static_cast<double>(i - first + 1);
    }
    return out;
}

TreatmentAssignment assign_treatment(const std::vector<double>& x_lagged, double threshold,
                                     int lag_window) {
    if (threshold <= 0.0) throw ValidationError("assign_treatment: threshold must be positive");
    TreatmentAssignment out;
    out.threshold = threshold;
    out.lag_window = lag_window;
    out.x_lagged = x_lagged;
    out.w.reserve(x_lagged.size());
    for (double x : x_lagged) out.w.push_back(x >= threshold ? 1 : 0);
    return out;
}

} // namespace admatch
