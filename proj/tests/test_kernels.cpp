#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "wcbo/errors.hpp"
#include "wcbo/kernels.hpp"

using namespace wcbo;

namespace {

Point p1(double x) { return Point::Constant(1, x); }
Point p2(double a, double b) { return (Point(2) << a, b).finished(); }

}  // namespace

TEST_CASE("squared exponential has no factor two") {
    const auto k = KernelSpec::squared_exponential(1.0);
    CHECK(k(p1(0), p1(0)) == 1.0);
    CHECK(k(p1(0), p1(1)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(k(p1(0), p1(1)) == doctest::Approx(0.3678794).epsilon(1e-7));
}

TEST_CASE("matern closed forms agree with the Bessel representation") {
    for (double nu : {0.5, 1.5, 2.5, 3.5}) {
        for (double rho : {0.3, 1.0, 2.5}) {
            const auto k = KernelSpec::matern(nu, rho, 1.7);
            for (double r : {0.0, 1e-3, 0.1, 0.5, 1.0, 2.0, 7.0}) {
                CAPTURE(nu);
                CAPTURE(r);
                CHECK(k.radial(r) == doctest::Approx(oracle::matern_bessel(nu, rho, 1.7, r)).epsilon(1e-10));
            }
        }
    }
    const auto k = KernelSpec::matern(2.5, 1.0, 1.0);
    CHECK(k(p1(0), p1(1)) == doctest::Approx(oracle::matern_bessel(2.5, 1.0, 1.0, 1.0)).epsilon(1e-12));
    CHECK(k(p1(0), p1(1)) == doctest::Approx(0.5239941088318203).epsilon(1e-12));
}

TEST_CASE("quadratic kernel") {
    const auto k = KernelSpec::quadratic();
    CHECK(k(p2(1, 1), p2(1, 0)) == 1.0);
    CHECK(k(p2(1, 2), p2(3, -1)) == 1.0);
    CHECK(k.sup_on(BoxDomain::cube(2, -1, 1)) == 4.0);
    CHECK_FALSE(k.unit_bounded_on(BoxDomain::cube(2, -1, 1)));
    CHECK(k.unit_bounded_on(BoxDomain::cube(2, 0, 0.5)));
}

TEST_CASE("kernel errors") {
    const auto k = KernelSpec::squared_exponential(1.0);
    CHECK_THROWS_AS(k(p1(0), p2(0, 0)), DimensionError);
    CHECK_THROWS_AS(KernelSpec::matern(1.0, 1.0), UnsupportedParameter);
    CHECK_THROWS_AS(KernelSpec::matern(2.5, 0.0), UnsupportedParameter);
    CHECK_THROWS_AS(KernelSpec::squared_exponential(-1.0), UnsupportedParameter);
    CHECK_THROWS_AS(BoxDomain(p1(1), p1(0)), DimensionError);
}

TEST_CASE("stationary kernels are bounded by their variance") {
    CHECK(KernelSpec::squared_exponential(0.2).unit_bounded_on(BoxDomain::cube(3, 0, 1)));
    CHECK(KernelSpec::matern(1.5, 1.0, 1.0).unit_bounded_on(BoxDomain::cube(3, 0, 1)));
    CHECK_FALSE(KernelSpec::matern(1.5, 1.0, 2.0).unit_bounded_on(BoxDomain::cube(3, 0, 1)));
}

TEST_CASE("gram and cross") {
    const auto k = KernelSpec::squared_exponential(1.0);
    CHECK(gram(k, {p1(0)})(0, 0) == 1.0);
    const Eigen::MatrixXd G = gram(k, {p1(0), p1(1)});
    CHECK(G(0, 1) == doctest::Approx(std::exp(-1.0)));
    CHECK(G(1, 0) == G(0, 1));
    CHECK(G(1, 1) == 1.0);
    const Eigen::VectorXd c = cross(k, {p1(0), p1(1)}, p1(0));
    CHECK(c[0] == 1.0);
    CHECK(c[1] == doctest::Approx(std::exp(-1.0)));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PointList pts;
    for (int i = 0; i < 6; ++i) pts.push_back(p2(u(rng), u(rng)));
    const Point x = p2(u(rng), u(rng));
    PointList all = pts;
    all.push_back(x);
    const Eigen::MatrixXd full = gram(k, all);
    const Eigen::VectorXd cx = cross(k, pts, x);
    for (int i = 0; i < 6; ++i) CHECK(cx[i] == full(i, 6));
    const Eigen::MatrixXd batch = cross(k, pts, as_columns({x, x}, 2));
    CHECK((batch.col(1) - cx).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matern gram is positive semidefinite") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto k = KernelSpec::matern(2.5, 1.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
        PointList pts;
        for (int i = 0; i < 5; ++i) pts.push_back(p1(u(rng)));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracle::gram_matrix(k, pts));
        CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("box domain helpers") {
    const BoxDomain d(p2(0, -1), p2(2, 1));
    CHECK(d.dim() == 2);
    CHECK(d.center() == p2(1, 0));
    CHECK(d.contains(p2(2, 1)));
    CHECK_FALSE(d.contains(p2(2.1, 0)));
    CHECK(d.clamp(p2(3, -4)) == p2(2, -1));
}
