#pragma once

#include "admatch/series.hpp"
#include "admatch/splines.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace admatch {

/// Covariate design matrix Z with named columns. Construction enforces:
/// exactly one intercept column, no other constant column, no duplicated
/// columns, finite entries, full column rank.
struct DesignMatrix {
    Eigen::MatrixXd values;
    std::vector<std::string> names;
    /// Columns removed during assembly because they were constant or
    /// duplicated on this input (e.g. no influenza days in the series).
    std::vector<std::string> dropped;

    Eigen::Index n_rows() const { return values.rows(); }
    Eigen::Index n_cols() const { return values.cols(); }
};

/// Model specification for the propensity logistic fit. Defaults
/// reproduce the reference configuration: season-specific day-of-week and
/// holiday indicators, influenza / heat / July-August flags, a calendar
/// cubic spline with 5 df per year, and a tensor-product smooth of
/// lag 0-3 temperature (k=5) and humidity (k=3).
struct DesignSpec {
    bool day_of_week_by_season = true;
    bool include_holiday = true;
    bool holiday_by_season = true;
    bool include_influenza = true;
    bool include_heat = true;
    bool include_july_august = true;
    int calendar_df_per_year = 5;
    bool include_tensor_smooth = true;
    int tprs_k_temperature = 5;
    int tprs_k_humidity = 3;
    /// Raw temperature/humidity columns; intended for configurations that
    /// turn the tensor smooth off.
    bool include_linear_weather = false;
};

/// Validate invariants and rank; throws NumericalError naming the
/// collinear columns when rank-deficient.
DesignMatrix make_design_matrix(Eigen::MatrixXd values, std::vector<std::string> names);

/// Build Z from the series and its derived indicators per the spec.
/// Constant and duplicated columns are dropped (recorded in `dropped`);
/// remaining rank deficiency is an error.
DesignMatrix assemble_design(const DailySeries& series, const DerivedCovariates& derived,
                             const DesignSpec& spec);

} // namespace admatch
