#include "admatch/design.hpp"
#include "admatch/errors.hpp"
#include "admatch/splines.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace admatch;

namespace {

std::vector<double> day_index(int n) {
    std::vector<double> t(n);
    std::iota(t.begin(), t.end(), 1.0);
    return t;
}

// Independent least-squares oracle: fit y on [intercept | basis], return RMSE.
double ls_rmse(const Eigen::MatrixXd& basis, const Eigen::VectorXd& y) {
    Eigen::MatrixXd design(basis.rows(), basis.cols() + 1);
    design.col(0) = Eigen::VectorXd::Ones(basis.rows());
    design.rightCols(basis.cols()) = basis;
    const Eigen::VectorXd coef = design.householderQr().solve(y);
    const Eigen::VectorXd resid = y - design * coef;
    return std::sqrt(resid.squaredNorm() / static_cast<double>(y.size()));
}

} // namespace

TEST_CASE("calendar spline has the contracted shape and rank") {
    const auto t = day_index(365);
    const CubicSplineBasis basis(t, 5);
    CHECK(basis.matrix().rows() == 365);
    CHECK(basis.matrix().cols() == 5);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis.matrix());
    CHECK(qr.rank() == 5);
    CHECK(basis.matrix().allFinite());
}

TEST_CASE("spline basis columns are C2 across every interior knot") {
    const auto t = day_index(365);
    for (int df : {5, 10}) {
        const CubicSplineBasis basis(t, df);
        REQUIRE_FALSE(basis.interior_knots().empty());
        const double delta = 0.01, h = 0.005;
        for (double knot : basis.interior_knots()) {
            for (int c = 0; c < df; ++c) {
                const auto d2 = [&](double x) {
                    return (basis.evaluate(x - h)[c] - 2.0 * basis.evaluate(x)[c] +
                            basis.evaluate(x + h)[c]) /
                           (h * h);
                };
                const double left = d2(knot - delta);
                const double right = d2(knot + delta);
                CHECK(std::abs(left - right) < 1e-4);
            }
        }
    }
}

TEST_CASE("df=10 spline recovers an annual sinusoid to RMSE < 0.01") {
    const auto t = day_index(365);
    const CubicSplineBasis basis = cubic_spline_basis(t, 10, 1.0);
    Eigen::VectorXd y(365);
    for (int i = 0; i < 365; ++i) y[i] = std::sin(2.0 * M_PI * t[i] / 365.0);
    CHECK(ls_rmse(basis.matrix(), y) < 0.01);
}

TEST_CASE("spline preconditions") {
    CHECK_THROWS_AS(CubicSplineBasis(day_index(4), 5), ValidationError); // df > points
    CHECK_THROWS_AS(CubicSplineBasis(day_index(10), 2), ValidationError);
    std::vector<double> not_increasing = {1, 2, 2, 3};
    CHECK_THROWS_AS(CubicSplineBasis(not_increasing, 3), ValidationError);
}

TEST_CASE("tprs shape and null space") {
    std::vector<double> x(100);
    for (int i = 0; i < 100; ++i) x[i] = static_cast<double>(i) / 99.0;
    const TprsBasis basis = tprs_basis(x, 5);
    CHECK(basis.columns.rows() == 100);
    CHECK(basis.columns.cols() == 4);
    CHECK(basis.with_constant.cols() == 5);
    // null space carries the raw linear term
    for (int i = 0; i < 100; ++i) CHECK(basis.columns(i, 3) == x[static_cast<std::size_t>(i)]);
    CHECK((basis.with_constant.col(3).array() == 1.0).all());
}

TEST_CASE("tprs least-squares fit of x^2 is sharp") {
    std::vector<double> x(101);
    for (int i = 0; i <= 100; ++i) x[i] = static_cast<double>(i) / 100.0;
    const TprsBasis basis = tprs_basis(x, 5);
    Eigen::VectorXd y(101);
    for (int i = 0; i <= 100; ++i) y[i] = x[i] * x[i];
    CHECK(ls_rmse(basis.columns, y) < 1e-3);
}

TEST_CASE("tprs with k=3 interpolates any 3 values exactly") {
    const std::vector<double> x = {0.0, 0.4, 1.0};
    const TprsBasis basis = tprs_basis(x, 3);
    Eigen::MatrixXd design(3, 3);
    design.col(0) = Eigen::VectorXd::Ones(3);
    design.rightCols(2) = basis.columns;
    const Eigen::Vector3d y(1.0, -2.0, 0.5);
    const Eigen::Vector3d coef = design.fullPivLu().solve(y);
    CHECK((design * coef - y).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("tprs requires k distinct values") {
    std::vector<double> x = {1.0, 1.0, 2.0, 2.0};
    CHECK_THROWS_AS(tprs_basis(x, 3), ValidationError);
    CHECK_THROWS_AS(tprs_basis(x, 2), ValidationError);
}

TEST_CASE("tensor basis definition and identity factors") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    Eigen::MatrixXd a(40, 5), b(40, 3);
    for (Eigen::Index i = 0; i < 40; ++i) {
        for (Eigen::Index j = 0; j < 5; ++j) a(i, j) = u(rng);
        for (Eigen::Index j = 0; j < 3; ++j) b(i, j) = u(rng);
    }
    const Eigen::MatrixXd prod = tensor_basis(a, b);
    CHECK(prod.cols() == 15);
    std::uniform_int_distribution<int> row(0, 39), ai(0, 4), bj(0, 2);
    for (int trial = 0; trial < 50; ++trial) {
        const int r = row(rng), i = ai(rng), j = bj(rng);
        CHECK(prod(r, i * 3 + j) == doctest::Approx(a(r, i) * b(r, j)).epsilon(1e-14));
    }
    const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(40, 1);
    CHECK((tensor_basis(ones, b) - b).cwiseAbs().maxCoeff() == 0.0);
    CHECK((tensor_basis(a, ones) - a).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(tensor_basis(a, Eigen::MatrixXd::Ones(39, 1)), ValidationError);
}
