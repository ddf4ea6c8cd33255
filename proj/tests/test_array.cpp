#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"

#include "subsketch/array.hpp"
#include "subsketch/rng.hpp"

using namespace subsketch;
using std::numbers::pi;

namespace {
constexpr std::complex<double> I{0.0, 1.0};

double max_entry_error(const Eigen::VectorXcd& got, const Eigen::VectorXcd& want) {
    return (got - want).cwiseAbs().maxCoeff();
}
} // namespace

TEST_CASE("steering vector at broadside is all ones") {
    const UlaConfig cfg(8, deg2rad(60));
    const Eigen::VectorXcd a = steering_vector(cfg, 0.0);
    REQUIRE(a.size() == 8);
    CHECK(max_entry_error(a, Eigen::VectorXcd::Ones(8)) < 1e-15);
}

TEST_CASE("steering vector at the scan edge alternates sign") {
    const UlaConfig cfg(4, 0.7);
    const Eigen::VectorXcd a = steering_vector(cfg, 0.7);
    Eigen::VectorXcd want(4);
    want << 1.0, -1.0, 1.0, -1.0;
    CHECK(max_entry_error(a, want) < 1e-12);
}

TEST_CASE("steering vector at the quarter-period angle") {
    // sin(theta) = sin(theta_max) / 2 makes the per-element phase pi/2.
    const UlaConfig cfg(4, deg2rad(60));
    const double theta = std::asin(0.5 * std::sin(cfg.theta_max));
    CHECK(rad2deg(theta) == doctest::Approx(25.659).epsilon(1e-3));
    const Eigen::VectorXcd a = steering_vector(cfg, theta);
    Eigen::VectorXcd want(4);
    want << 1.0, I, -1.0, -I;
    CHECK(max_entry_error(a, want) < 1e-12);
}

TEST_CASE("steering entries have unit modulus and the documented phase") {
    Rng rng(2024);
    for (int rep = 0; rep < 100; ++rep) {
        const int m = 1 + static_cast<int>(rng.below(64));
        const UlaConfig cfg(m, rng.uniform(0.1, pi / 2 - 0.1));
        const double theta = rng.uniform(-cfg.theta_max, cfg.theta_max);
        const Eigen::VectorXcd a = steering_vector(cfg, theta);
        CHECK(a[0] == std::complex<double>(1.0, 0.0));
        for (int k = 0; k < m; ++k) {
            CHECK(std::abs(std::abs(a[k]) - 1.0) < 1e-12);
            const double phase = k * pi * std::sin(theta) / std::sin(cfg.theta_max);
            CHECK(std::abs(a[k] - std::polar(1.0, phase)) < 1e-12);
        }
        CHECK(a.squaredNorm() == doctest::Approx(m).epsilon(1e-14));
    }
}

TEST_CASE("conjugate symmetry across broadside") {
    const UlaConfig cfg(16, deg2rad(55));
    const Eigen::VectorXcd plus = steering_vector(cfg, 0.31);
    const Eigen::VectorXcd minus = steering_vector(cfg, -0.31);
    CHECK(max_entry_error(minus, plus.conjugate()) < 1e-14);
}

TEST_CASE("rank-one steering outer product is Hermitian Toeplitz") {
    const UlaConfig cfg(12, deg2rad(60));
    const Eigen::VectorXcd a = steering_vector(cfg, 0.4);
    const Eigen::MatrixXcd outer = a * a.adjoint();
    CHECK((outer - outer.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    for (int i = 0; i + 1 < 12; ++i)
        for (int j = 0; j + 1 < 12; ++j)
            CHECK(std::abs(outer(i, j) - outer(i + 1, j + 1)) < 1e-13);
}

TEST_CASE("angles outside the scan range are rejected") {
    const UlaConfig cfg(4, 0.5);
    CHECK_THROWS_AS(steering_vector(cfg, 0.51), std::domain_error);
    CHECK_THROWS_AS(steering_vector(cfg, -0.51), std::domain_error);
    CHECK_NOTHROW(steering_vector(cfg, 0.5));
}

TEST_CASE("array configuration invariants") {
    CHECK_THROWS_AS(UlaConfig(0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(UlaConfig(4, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(UlaConfig(4, pi / 2), std::invalid_argument);
    CHECK_NOTHROW(UlaConfig(1, 0.01));
}

TEST_CASE("grid dictionary endpoints and degenerate sizes") {
    const UlaConfig narrow(2, 0.6);
    const Eigen::MatrixXcd single = grid_atoms(narrow, 1);
    REQUIRE(single.cols() == 1);
    CHECK(max_entry_error(single.col(0), Eigen::VectorXcd::Ones(2)) < 1e-15);
    CHECK(grid_angle(narrow, 1, 0) == 0.0);

    const UlaConfig cfg(4, deg2rad(60));
    CHECK(grid_angle(cfg, 3, 0) == doctest::Approx(-cfg.theta_max));
    CHECK(grid_angle(cfg, 3, 1) == doctest::Approx(0.0));
    CHECK(grid_angle(cfg, 3, 2) == doctest::Approx(cfg.theta_max));

    const Eigen::MatrixXcd five = grid_atoms(cfg, 5);
    REQUIRE(five.cols() == 5);
    CHECK(max_entry_error(five.col(2), Eigen::VectorXcd::Ones(4)) < 1e-12);
    Eigen::VectorXcd alt(4);
    alt << 1.0, -1.0, 1.0, -1.0;
    CHECK(max_entry_error(five.col(0), alt) < 1e-12);
    CHECK(max_entry_error(five.col(4), alt) < 1e-12);
}

TEST_CASE("grid columns match steering_vector at grid angles") {
    const UlaConfig cfg(8, deg2rad(45));
    const int grid = 33;
    const Eigen::MatrixXcd atoms = grid_atoms(cfg, grid);
    for (int g = 0; g < grid; ++g)
        CHECK(max_entry_error(atoms.col(g), steering_vector(cfg, grid_angle(cfg, grid, g))) ==
              0.0);
}

TEST_CASE("degree conversions round-trip the values used in configs") {
    CHECK(deg2rad(180.0) == doctest::Approx(pi));
    CHECK(rad2deg(pi / 3) == doctest::Approx(60.0));
    CHECK(rad2deg(deg2rad(20.0)) == doctest::Approx(20.0).epsilon(1e-15));
}
