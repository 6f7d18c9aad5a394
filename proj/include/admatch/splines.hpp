#pragma once

#include <Eigen/Dense>

#include <vector>

namespace admatch {

/// Cubic regression spline basis: C2 piecewise-cubic columns built from a
/// clamped cubic B-spline family with interior knots at evenly spaced
/// quantiles of t. The first B-spline is dropped so the basis excludes the
/// intercept (df columns remain, absorbed intercept stays identifiable).
class CubicSplineBasis {
  public:
    /// t must be strictly increasing; df >= 3 and df <= number of t values.
    CubicSplineBasis(const std::vector<double>& t, int df);

    int df() const { return df_; }
    /// Basis evaluated at the construction points, one row per t.
    const Eigen::MatrixXd& matrix() const { return basis_; }
    /// Basis row at an arbitrary point inside [min(t), max(t)].
    Eigen::VectorXd evaluate(double x) const;
    const std::vector<double>& interior_knots() const { return interior_knots_; }

  private:
    int df_;
    std::vector<double> knots_; // clamped knot vector, boundary multiplicity 4
    std::vector<double> interior_knots_;
    Eigen::MatrixXd basis_;
};

/// cubic_spline_basis with df = round(df_per_year * n_years).
CubicSplineBasis cubic_spline_basis(const std::vector<double>& t, int df_per_year, double n_years);

/// Low-rank thin plate regression spline basis for a 1-D smooth.
/// Radial kernel |x - x'|^3 on the observed values, eigendecomposed; the
/// k-2 leading (by |eigenvalue|) eigenvectors scaled by their eigenvalues
/// form the smooth block, followed by the null-space columns {1, x}.
struct TprsBasis {
    /// n x k: [smooth_1 .. smooth_{k-2}, constant, linear].
    Eigen::MatrixXd with_constant;
    /// n x (k-1): the constant column dropped (absorbed by the model
    /// intercept), so [smooth_1 .. smooth_{k-2}, linear].
    Eigen::MatrixXd columns;
};

/// Requires k >= 3 and at least k distinct x values.
TprsBasis tprs_basis(const std::vector<double>& x, int k);

/// Row-wise Kronecker product: column (i, j) of the result is the
/// elementwise product of A col i and B col j, at index i * q + j.
Eigen::MatrixXd tensor_basis(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

} // namespace admatch
