#include "admatch/design.hpp"

#include "admatch/errors.hpp"

#include <cmath>
#include <numeric>

namespace admatch {

namespace {

constexpr const char* kDayNames[7] = {"mon", "tue", "wed", "thu", "fri", "sat", "sun"};

bool is_constant(const Eigen::VectorXd& col) {
    return (col.array() == col[0]).all();
}

void check_rank(const Eigen::MatrixXd& values, const std::vector<std::string>& names) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(values);
    qr.setThreshold(1e-9);
    const Eigen::Index rank = qr.rank();
    if (rank < values.cols()) {
        const auto perm = qr.colsPermutation().indices();
        std::string involved;
        for (Eigen::Index i = rank; i < values.cols(); ++i) {
            if (!involved.empty()) involved += ", ";
            involved += names[static_cast<std::size_t>(perm[i])];
        }
        throw NumericalError("design matrix is rank deficient (rank " + std::to_string(rank) +
                             " of " + std::to_string(values.cols()) +
                             "); collinear columns: " + involved);
    }
}

class ColumnSet {
  public:
    explicit ColumnSet(Eigen::Index n) : n_(n) {}

    void add(const std::string& name, const Eigen::VectorXd& col) {
        cols_.push_back(col);
        names_.push_back(name);
    }

    void add_indicator(const std::string& name, const std::vector<int>& flags) {
        Eigen::VectorXd col(n_);
        for (Eigen::Index i = 0; i < n_; ++i) col[i] = flags[static_cast<std::size_t>(i)];
        add(name, col);
    }

    /// Drop constant and exactly-duplicated columns, keep the intercept,
    /// then validate.
    DesignMatrix finish() {
        std::vector<Eigen::VectorXd> kept;
        std::vector<std::string> kept_names;
        std::vector<std::string> dropped;
        for (std::size_t c = 0; c < cols_.size(); ++c) {
            if (names_[c] != "intercept" && is_constant(cols_[c])) {
                dropped.push_back(names_[c] + " (constant)");
                continue;
            }
            bool duplicate = false;
            for (const auto& prev : kept) {
                if ((prev.array() == cols_[c].array()).all()) {
                    duplicate = true;
                    break;
                }
            }
            if (duplicate) {
                dropped.push_back(names_[c] + " (duplicate)");
                continue;
            }
            kept.push_back(cols_[c]);
            kept_names.push_back(names_[c]);
        }
        Eigen::MatrixXd values(n_, static_cast<Eigen::Index>(kept.size()));
        for (std::size_t c = 0; c < kept.size(); ++c) values.col(static_cast<Eigen::Index>(c)) = kept[c];
        DesignMatrix out = make_design_matrix(std::move(values), std::move(kept_names));
        out.dropped = std::move(dropped);
        return out;
    }

  private:
    Eigen::Index n_;
    std::vector<Eigen::VectorXd> cols_;
    std::vector<std::string> names_;
};

// Unit max-abs scaling keeps the spline and kernel blocks (whose raw
// eigen-scaled columns can span many orders of magnitude) on the same
// footing as the indicator columns.
Eigen::VectorXd normalized(const Eigen::VectorXd& col) {
    const double m = col.cwiseAbs().maxCoeff();
    return m > 0.0 ? Eigen::VectorXd(col / m) : col;
}

} // namespace

DesignMatrix make_design_matrix(Eigen::MatrixXd values, std::vector<std::string> names) {
    if (static_cast<std::size_t>(values.cols()) != names.size()) {
        throw NumericalError("design matrix: name/column count mismatch");
    }
    if (!values.allFinite()) throw NumericalError("design matrix contains non-finite entries");

    int intercepts = 0;
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
        const bool constant = is_constant(values.col(c));
        if (names[static_cast<std::size_t>(c)] == "intercept") {
            ++intercepts;
            if (!constant || values(0, c) != 1.0) {
                throw NumericalError("intercept column is not identically 1");
            }
        } else if (constant) {
            throw NumericalError("column '" + names[static_cast<std::size_t>(c)] +
                                 "' is constant");
        }
    }
    if (intercepts != 1) {
        throw NumericalError("design matrix must contain exactly one intercept column, found " +
                             std::to_string(intercepts));
    }
    for (Eigen::Index a = 0; a < values.cols(); ++a) {
        for (Eigen::Index b = a + 1; b < values.cols(); ++b) {
            if ((values.col(a).array() == values.col(b).array()).all()) {
                throw NumericalError("duplicated columns '" + names[static_cast<std::size_t>(a)] +
                                     "' and '" + names[static_cast<std::size_t>(b)] + "'");
            }
        }
    }
    check_rank(values, names);

    DesignMatrix out;
    out.values = std::move(values);
    out.names = std::move(names);
    return out;
}

DesignMatrix assemble_design(const DailySeries& series, const DerivedCovariates& derived,
                             const DesignSpec& spec) {
    const auto n = static_cast<Eigen::Index>(series.size());
    if (n == 0) throw ValidationError("assemble_design: empty series");
    ColumnSet cols(n);

    cols.add("intercept", Eigen::VectorXd::Ones(n));

    if (spec.day_of_week_by_season) {
        // One cell per (season, weekday); reference cell cold:mon absorbed
        // by the intercept.
        for (int season = 0; season < 2; ++season) {
            for (int dow = 0; dow < 7; ++dow) {
                if (season == 0 && dow == 0) continue;
                std::vector<int> flag(series.size());
                for (std::size_t i = 0; i < series.size(); ++i) {
                    flag[i] = (derived.warm_season[i] == season &&
                               series.records[i].date.weekday() == dow)
                                  ? 1
                                  : 0;
                }
                const std::string name =
                    std::string("dow_") + kDayNames[dow] + (season ? ":warm" : ":cold");
                cols.add_indicator(name, flag);
            }
        }
    } else {
        for (int dow = 1; dow < 7; ++dow) {
            std::vector<int> flag(series.size());
            for (std::size_t i = 0; i < series.size(); ++i) {
                flag[i] = series.records[i].date.weekday() == dow ? 1 : 0;
            }
            cols.add_indicator(std::string("dow_") + kDayNames[dow], flag);
        }
    }

    if (spec.include_holiday) {
        if (spec.holiday_by_season) {
            for (int season = 0; season < 2; ++season) {
                std::vector<int> flag(series.size());
                for (std::size_t i = 0; i < series.size(); ++i) {
                    flag[i] = (series.records[i].holiday && derived.warm_season[i] == season) ? 1
                                                                                             : 0;
                }
                cols.add_indicator(season ? "holiday:warm" : "holiday:cold", flag);
            }
        } else {
            std::vector<int> flag(series.size());
            for (std::size_t i = 0; i < series.size(); ++i) {
                flag[i] = series.records[i].holiday ? 1 : 0;
            }
            cols.add_indicator("holiday", flag);
        }
    }

    if (spec.include_influenza) {
        std::vector<int> flag(series.size());
        for (std::size_t i = 0; i < series.size(); ++i) {
            flag[i] = series.records[i].influenza ? 1 : 0;
        }
        cols.add_indicator("influenza", flag);
    }
    if (spec.include_heat) cols.add_indicator("heat", derived.heat);
    if (spec.include_july_august) cols.add_indicator("july_august", derived.july_august);

    if (spec.calendar_df_per_year > 0) {
        std::vector<double> t(series.size());
        std::iota(t.begin(), t.end(), 1.0);
        const double n_years = static_cast<double>(series.size()) / 365.25;
        const int df =
            std::max(3, static_cast<int>(std::lround(spec.calendar_df_per_year * n_years)));
        const CubicSplineBasis spline(t, df);
        for (int c = 0; c < df; ++c) {
            cols.add("cal_spline_" + std::to_string(c + 1), normalized(spline.matrix().col(c)));
        }
    }

    if (spec.include_tensor_smooth) {
        const TprsBasis temp = tprs_basis(derived.temperature_lagged, spec.tprs_k_temperature);
        const TprsBasis hum = tprs_basis(series.humidities(), spec.tprs_k_humidity);
        const Eigen::MatrixXd block = tensor_basis(temp.with_constant, hum.with_constant);
        const auto part_name = [](int idx, int k) {
            if (idx < k - 2) return "sm" + std::to_string(idx + 1);
            return std::string(idx == k - 2 ? "c" : "lin");
        };
        const int kt = spec.tprs_k_temperature;
        const int kh = spec.tprs_k_humidity;
        for (int i = 0; i < kt; ++i) {
            for (int j = 0; j < kh; ++j) {
                if (i == kt - 2 && j == kh - 2) continue; // constant x constant
                cols.add("te(t_" + part_name(i, kt) + ",h_" + part_name(j, kh) + ")",
                         normalized(block.col(i * kh + j)));
            }
        }
    }

    if (spec.include_linear_weather) {
        Eigen::VectorXd t(n), h(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            t[i] = derived.temperature_lagged[static_cast<std::size_t>(i)];
            h[i] = series.records[static_cast<std::size_t>(i)].humidity;
        }
        cols.add("temperature_lag", t);
        cols.add("humidity", h);
    }

    return cols.finish();
}

} // namespace admatch
