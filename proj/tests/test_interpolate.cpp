#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "wcbo/errors.hpp"
#include "wcbo/interpolate.hpp"

using namespace wcbo;

namespace {

Point p1(double x) { return Point::Constant(1, x); }

Design design1(std::initializer_list<std::pair<double, double>> xy) {
    Design d;
    for (auto [x, y] : xy) d.add(p1(x), y);
    return d;
}

}  // namespace

TEST_CASE("fit on tiny designs") {
    const auto se = KernelSpec::squared_exponential(1.0);
    const Posterior zero = Posterior::fit(se, design1({{0, 0}}));
    CHECK(zero.alpha()[0] == 0.0);
    CHECK(zero.norm_sq() == 0.0);

    const Posterior one = Posterior::fit(se, design1({{0, 1}}));
    CHECK(one.alpha()[0] == doctest::Approx(1.0));
    CHECK(one.norm_sq() == doctest::Approx(1.0));
    CHECK(one.mean(p1(1)) == doctest::Approx(std::exp(-1.0)));
    CHECK(one.sd(p1(1)) == doctest::Approx(std::sqrt(1.0 - std::exp(-2.0))));
    CHECK(one.sd(p1(1)) == doctest::Approx(0.9298).epsilon(1e-4));

    // 2x2 system solved by Cramer's rule
    const double e = std::exp(-1.0);
    const Posterior two = Posterior::fit(se, design1({{0, 1}, {1, 0}}));
    const double det = 1.0 - e * e;
    CHECK(two.alpha()[0] == doctest::Approx(1.0 / det).epsilon(1e-12));
    CHECK(two.alpha()[1] == doctest::Approx(-e / det).epsilon(1e-12));
    CHECK(two.norm_sq() == doctest::Approx(1.0 / (1.0 - std::exp(-2.0))).epsilon(1e-12));
    CHECK(two.norm_sq() == doctest::Approx(1.1565).epsilon(1e-4));
}

TEST_CASE("empty design is the prior") {
    const auto k = KernelSpec::matern(1.5, 1.0, 2.0);
    const Posterior prior = Posterior::fit(k, Design{});
    CHECK(prior.mean(p1(0.3)) == 0.0);
    CHECK(prior.sd(p1(0.3)) == doctest::Approx(std::sqrt(2.0)));
    CHECK(prior.norm_sq() == 0.0);
}

TEST_CASE("interpolation and zero power at design points") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto& k : {KernelSpec::squared_exponential(0.4), KernelSpec::matern(0.5, 0.3),
                          KernelSpec::matern(3.5, 0.5)}) {
        Design d;
        for (int i = 0; i < 8; ++i) d.add(Point::NullaryExpr(2, [&] { return u(rng); }), u(rng) - 0.5);
        const Posterior post = Posterior::fit(k, d);
        for (std::size_t i = 0; i < d.size(); ++i) {
            CHECK(post.mean(d.points[i]) == doctest::Approx(d.values[i]).epsilon(1e-8));
            CHECK(post.sd(d.points[i]) <= 1e-6);
            const Envelope env = post.envelope(std::sqrt(post.norm_sq()) + 1.0, d.points[i]);
            CHECK(env.upper - env.lower <= 2e-6);
        }
    }
}

TEST_CASE("collapsed envelope when the data uses the whole budget") {
    const auto se = KernelSpec::squared_exponential(1.0);
    const Posterior post = Posterior::fit(se, design1({{0, 1}, {1, 0}}));
    const double R = std::sqrt(post.norm_sq());
    const Envelope env = post.envelope(R, p1(0.4));
    CHECK(env.lower == doctest::Approx(post.mean(p1(0.4))).epsilon(1e-12));
    CHECK(env.upper == doctest::Approx(post.mean(p1(0.4))).epsilon(1e-12));
    CHECK_THROWS_AS(Posterior::fit(se, design1({{0, 1}, {1, 0}}), 0.9 * R), NormBudgetExceeded);
}

TEST_CASE("envelope contains every consistent ball function") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const BoxDomain dom = BoxDomain::cube(1, 0.0, 1.0);
    const auto k = KernelSpec::matern(2.5, 0.3);
    for (int rep = 0; rep < 10; ++rep) {
        const RkhsFunction f = sample_rkhs(k, dom, 10, 1.0, 100 + rep, SamplingMode::Rescale).function;
        Design d;
        for (int i = 0; i < 6; ++i) {
            Point x = p1(u(rng));
            d.add(x, f(x));
        }
        const Posterior post = Posterior::fit(k, d, 1.0);
        for (int j = 0; j <= 200; ++j) {
            const Point x = p1(j / 200.0);
            const Envelope env = post.envelope(1.0, x);
            CHECK(f(x) >= env.lower - 1e-6);
            CHECK(f(x) <= env.upper + 1e-6);
        }
    }
}

TEST_CASE("norm splits orthogonally over the span of the design") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> n01;
    const auto k = KernelSpec::matern(1.5, 0.4);
    PointList centers;
    Eigen::VectorXd w(10);
    for (int i = 0; i < 10; ++i) {
        centers.push_back(Point::NullaryExpr(2, [&] { return u(rng); }));
        w[i] = n01(rng);
    }
    const RkhsFunction f(k, centers, w);
    Design d;
    for (int i = 0; i < 5; ++i) {
        Point x = Point::NullaryExpr(2, [&] { return u(rng); });
        d.add(x, f(x));
    }
    const Posterior post = Posterior::fit(k, d);

    PointList all = centers;
    all.insert(all.end(), d.points.begin(), d.points.end());
    Eigen::VectorXd diff(15);
    diff << w, -post.alpha();
    const Eigen::MatrixXd G = oracle::gram_matrix(k, all);
    const double f2 = w.dot(oracle::gram_matrix(k, centers) * w);
    const double m2 = post.norm_sq();
    const double r2 = diff.dot(G * diff);
    CHECK(std::abs(f2 - m2 - r2) <= 1e-6 * f2);
}

TEST_CASE("minimum-norm interpolant") {
    const auto se = KernelSpec::squared_exponential(1.0);
    const RkhsFunction f = min_norm_interpolant(se, {p1(0)}, {1.0});
    CHECK(f.weights()[0] == doctest::Approx(1.0));
    CHECK(f.norm() == doctest::Approx(1.0));
    const RkhsFunction z = min_norm_interpolant(se, {p1(0), p1(0.5)}, {0.0, 0.0});
    CHECK(z.norm() == 0.0);
    CHECK(z(p1(0.2)) == 0.0);
    CHECK_THROWS_AS(min_norm_interpolant(se, {p1(0), p1(1e-12)}, {0.0, 1.0}), IllConditioned);
}

TEST_CASE("sampling is seeded and respects the norm budget") {
    const auto k = KernelSpec::matern(2.5, 0.5);
    const BoxDomain dom = BoxDomain::cube(2, 0, 1);
    const RkhsSample a = sample_rkhs(k, dom, 6, 1.0, 42, SamplingMode::Reject);
    const RkhsSample b = sample_rkhs(k, dom, 6, 1.0, 42, SamplingMode::Reject);
    REQUIRE(a.function.centers().size() == b.function.centers().size());
    for (std::size_t i = 0; i < a.function.centers().size(); ++i) CHECK(a.function.centers()[i] == b.function.centers()[i]);
    CHECK(a.function.weights() == b.function.weights());
    CHECK(a.attempts == b.attempts);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        CHECK(sample_rkhs(k, dom, 6, 1.0, seed, SamplingMode::Reject).function.norm() <= 1.0 + 1e-6);
        CHECK(sample_rkhs(k, dom, 6, 1.0, seed, SamplingMode::Rescale).function.norm() <= 1.0 + 1e-6);
    }
}

TEST_CASE("single-knot rejection rate matches the half-normal mass") {
    const auto se = KernelSpec::squared_exponential(1.0);
    const BoxDomain dom = BoxDomain::cube(1, 0, 1);
    const int n = 100000;
    long long attempts = 0;
    for (int seed = 0; seed < n; ++seed) attempts += sample_rkhs(se, dom, 1, 1.0, seed, SamplingMode::Reject).attempts;
    const double rate = static_cast<double>(n) / static_cast<double>(attempts);
    CHECK(std::abs(rate - std::erf(1.0 / std::sqrt(2.0))) <= 0.02);
}

TEST_CASE("rejection cap") {
    const auto k = KernelSpec::matern(2.5, 0.5);
    CHECK_THROWS_AS(sample_rkhs(k, BoxDomain::cube(1, 0, 1), 30, 1e-6, 1, SamplingMode::Reject),
                    RejectionBudgetExhausted);
}

TEST_CASE("half-open lattice") {
    const PointList g1 = grid(BoxDomain::cube(1, 0, 1), 2);
    REQUIRE(g1.size() == 2);
    CHECK(g1[0][0] == 0.0);
    CHECK(g1[1][0] == 0.5);
    const PointList g2 = grid(BoxDomain::cube(2, 0, 1), 2);
    REQUIRE(g2.size() == 4);
    CHECK(g2[1] == (Point(2) << 0, 0.5).finished());
    CHECK(g2[2] == (Point(2) << 0.5, 0).finished());
    for (int d = 1; d <= 3; ++d)
        for (int N = 1; N <= 4; ++N) CHECK(grid(BoxDomain::cube(d, 0, 1), N).size() == std::pow(N, d));
    CHECK_THROWS_AS(grid(BoxDomain::cube(3, 0, 1), 200, 1000), SizeOverflow);
}

TEST_CASE("nearly duplicated design points trigger the jitter ladder") {
    const auto se = KernelSpec::squared_exponential(1.0);
    Design d = design1({{0, 0}, {1e-7, 0}, {0.5, 0.2}});
    const Posterior post = Posterior::fit(se, d);
    CHECK(post.jitter_used() > 0.0);
    CHECK(post.jitter_used() <= 1e-6 * 3.0);
    CHECK(std::isfinite(post.mean(p1(0.3))));
    const Posterior clean = Posterior::fit(se, design1({{0, 0}, {0.5, 0.2}}));
    CHECK(clean.jitter_used() == 0.0);
}
