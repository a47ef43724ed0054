#include <doctest.h>

#include <array>
#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "qmccf/discrepancy.hpp"
#include "qmccf/study.hpp"
#include "qmccf/surrogate.hpp"
#include "qmccf/test_functions.hpp"

using namespace qmccf;

namespace {

TestFunction square_1d() {
    TestFunction f;
    f.name = "square";
    f.dims = 1;
    f.eval = [](std::span<const double> x) { return x[0] * x[0]; };
    f.true_integral = 1.0 / 3.0;
    f.derivative = [](double x) { return 2.0 * x; };
    return f;
}

// Integrates a grid surrogate exactly: midpoint samples on a 4x-refined mesh
// aligned with the surrogate cells (midpoint quadrature is exact per cell for
// multilinear functions).
double integrate_interpolant(const GridSurrogate& s) {
    const int cells = (s.resolution - 1) * 4;
    TestFunction wrapper;
    wrapper.dims = s.dims;
    wrapper.eval = [&s](std::span<const double> x) { return s(x); };
    return integrate_midpoint(wrapper, static_cast<std::size_t>(cells));
}

// Simpson oracle for the kernel's unit-interval integral.
double kappa_1d_oracle(double x, double ell) {
    const int n = 4000;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double u = static_cast<double>(i) / n;
        const double k = std::exp(-(x - u) * (x - u) / (2.0 * ell * ell));
        sum += (i == 0 || i == n) ? k : (i % 2 ? 4.0 * k : 2.0 * k);
    }
    return sum / (3.0 * n);
}

double sup_error_on_grid(const TestFunction& f, const KernelSurrogate& s, int n) {
    double sup = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = static_cast<double>(i) / n;
        sup = std::max(sup, std::abs(f(x) - s(x)));
    }
    return sup;
}

}  // namespace

TEST_CASE("grid surrogate interpolates x^2 on three nodes") {
    const auto s = fit_grid_surrogate(square_1d(), 3);
    CHECK(s.node_coords == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(s.node_values == std::vector<double>{0.0, 0.25, 1.0});
    CHECK(s.analytic_mean == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(s(0.25) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(s.fit_evaluations == 3);
    CHECK_THROWS_AS(fit_grid_surrogate(square_1d(), 1), std::invalid_argument);
}

TEST_CASE("grid surrogate reproduces linear functions exactly") {
    const TestFunction linear = builtin("linear", 1);
    for (int m : {2, 5, 17}) {
        const auto s = fit_grid_surrogate(linear, m);
        CHECK(s.analytic_mean == doctest::Approx(2.0).epsilon(1e-15));
        for (double x : {0.0, 0.123, 0.5, 0.77, 0.999}) {
            CHECK(s(x) == doctest::Approx(4.0 * x).epsilon(1e-14));
        }
    }
}

TEST_CASE("grid surrogate of a constant has the constant mean in any dimension") {
    for (int d : {1, 2, 3}) {
        const auto s = fit_grid_surrogate(builtin("constant", d), 3);
        CHECK(s.analytic_mean == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("grid surrogate returns stored values at its own nodes") {
    const TestFunction f = builtin("prod-fig1", 2);
    const auto s = fit_grid_surrogate(f, 5);
    std::size_t flat = 0;
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j, ++flat) {
            const std::array<double, 2> x{s.node_coords[i], s.node_coords[j]};
            CHECK(s(x) == s.node_values[flat]);
        }
    }
}

TEST_CASE("analytic mean equals quadrature of the interpolant") {
    const auto s1 = fit_grid_surrogate(builtin("fig1", 1), 7);
    CHECK(s1.analytic_mean == doctest::Approx(integrate_interpolant(s1)).epsilon(1e-12));
    const auto s2 = fit_grid_surrogate(builtin("prod-fig1", 2), 5);
    CHECK(s2.analytic_mean == doctest::Approx(integrate_interpolant(s2)).epsilon(1e-12));
}

TEST_CASE("kernel closed-form unit integral matches quadrature") {
    for (double ell : {0.05, 0.1, 0.3}) {
        for (double x : {0.0, 0.2, 0.5, 0.93}) {
            const double closed = se_kernel_unit_integral(std::span<const double>(&x, 1), ell);
            CHECK(closed == doctest::Approx(kappa_1d_oracle(x, ell)).epsilon(1e-9));
        }
    }
    // Product form across dimensions.
    const std::array<double, 2> x2{0.3, 0.8};
    const double expect = kappa_1d_oracle(0.3, 0.1) * kappa_1d_oracle(0.8, 0.1);
    CHECK(se_kernel_unit_integral(x2, 0.1) == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("kernel surrogate absorbs constants into the intercept") {
    TestFunction c = builtin("constant", 1);
    const auto s = fit_kernel_surrogate(c, surrogate_node_set(1, 16), 0.1, 1e-8);
    CHECK(s.intercept == doctest::Approx(1.0).epsilon(1e-12));
    for (double x : {0.0, 0.31, 0.5, 0.99}) CHECK(s(x) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(s.analytic_mean == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("kernel surrogate tracks fig1 uniformly on the node grid") {
    const TestFunction fig1 = builtin("fig1", 1);
    const auto s = fit_kernel_surrogate(fig1, surrogate_node_set(1, 32), 0.1, 1e-8);
    CHECK(sup_error_on_grid(fig1, s, 4096) < 1e-3);
    CHECK(s.fit_evaluations == 32);
}

TEST_CASE("kernel solve residual stays within tolerance") {
    const TestFunction fig1 = builtin("fig1", 1);
    SequenceSpec grid{SequenceKind::MidpointGrid, 1};
    grid.grid_resolution = 32;
    const PointSet centers = generate(grid, 32);
    const auto s = fit_kernel_surrogate(fig1, centers, 0.1, 1e-8);

    // Recompute the Gram system independently.
    const int n = 32;
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) y[i] = fig1.eval(centers.points[i]) - s.intercept;
    double norm_y = 0.0, norm_r = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = s.ridge * s.weights[i];
        for (int j = 0; j < n; ++j) {
            const double diff = centers.points[i][0] - centers.points[j][0];
            row += std::exp(-diff * diff / (2.0 * 0.1 * 0.1)) * s.weights[j];
        }
        norm_r += (row - y[i]) * (row - y[i]);
        norm_y += y[i] * y[i];
    }
    CHECK(std::sqrt(norm_r) <= 1e-8 * std::sqrt(norm_y));

    // Analytic mean against quadrature of s itself.
    TestFunction wrapper;
    wrapper.dims = 1;
    wrapper.eval = [&s](std::span<const double> x) { return s(x); };
    CHECK(s.analytic_mean == doctest::Approx(integrate_midpoint(wrapper, 1 << 14)).epsilon(1e-9));
}

TEST_CASE("single-center kernel system solves by hand") {
    TestFunction f;
    f.name = "spike";
    f.dims = 1;
    f.eval = [](std::span<const double>) { return 3.0; };
    f.true_integral = 3.0;
    PointSet center;
    center.dims = 1;
    center.points = {{0.5}};
    const auto s = fit_kernel_surrogate(f, center, 0.1, 0.0, /*fit_intercept=*/false);
    CHECK(s.weights.size() == 1);
    CHECK(s.weights[0] == doctest::Approx(3.0).epsilon(1e-12));
    const double x = 0.5;
    CHECK(s.analytic_mean ==
          doctest::Approx(3.0 * se_kernel_unit_integral(std::span<const double>(&x, 1), 0.1))
              .epsilon(1e-12));
}

TEST_CASE("ridge-free kernel interpolates its centers") {
    const TestFunction fig1 = builtin("fig1", 1);
    const PointSet centers = surrogate_node_set(1, 8);
    const auto s = fit_kernel_surrogate(fig1, centers, 0.3, 0.0);
    for (const auto& p : centers.points) {
        const double target = fig1.eval(p);
        CHECK(s(p[0]) == doctest::Approx(target).epsilon(1e-8));
    }
}

TEST_CASE("coincident centers without ridge are rejected") {
    PointSet dup;
    dup.dims = 1;
    dup.points = {{0.5}, {0.5}};
    CHECK_THROWS_AS(fit_kernel_surrogate(builtin("fig1", 1), dup, 0.1, 0.0), std::runtime_error);
}

TEST_CASE("cf transform preserves the integral and shifts pointwise values") {
    // phi = 4x with any surrogate resolution collapses to the constant 2.
    const TestFunction linear = builtin("linear", 1);
    const TestFunction flat = cf_transform(linear, fit_grid_surrogate(linear, 9));
    for (double x : {0.0, 0.37, 0.925}) CHECK(flat(x) == doctest::Approx(2.0).epsilon(1e-14));

    // phi = x^2 with nodes {0, 1/2, 1}: phi_hat(1/4) = 1/16 - 1/8 + 3/8.
    const TestFunction sq = square_1d();
    const TestFunction sq_hat = cf_transform(sq, fit_grid_surrogate(sq, 3));
    CHECK(sq_hat(0.25) == doctest::Approx(0.3125).epsilon(1e-14));
    CHECK(sq_hat.true_integral == sq.true_integral);

    CHECK_THROWS_AS(cf_transform(builtin("prod-fig1", 2), fit_grid_surrogate(sq, 3)),
                    std::invalid_argument);
}

TEST_CASE("cf transform integral identity under quadrature") {
    const TestFunction fig1 = builtin("fig1", 1);
    const TestFunction grid_hat = cf_transform(fig1, fit_grid_surrogate(fig1, 23));
    CHECK(integrate_midpoint(grid_hat, 1 << 16) == doctest::Approx(2.0).epsilon(1e-6));
    const TestFunction kernel_hat =
        cf_transform(fig1, fit_kernel_surrogate(fig1, surrogate_node_set(1, 16), 0.1, 1e-8));
    CHECK(integrate_midpoint(kernel_hat, 1 << 16) == doctest::Approx(2.0).epsilon(1e-6));

    const TestFunction prod = builtin("prod-fig1", 2);
    const TestFunction prod_hat = cf_transform(prod, fit_grid_surrogate(prod, 9));
    CHECK(integrate_midpoint(prod_hat, 1 << 10) == doctest::Approx(4.0).epsilon(1e-4));
}

TEST_CASE("budget accounting charges the fit once and one call per transform eval") {
    auto counter = std::make_shared<EvalCounter>();
    const TestFunction counted = with_counter(builtin("fig1", 1), counter);
    const auto s = fit_grid_surrogate(counted, 11);
    CHECK(counter->count.load() == 11);
    const TestFunction phat = cf_transform(counted, s);
    phat(0.25);
    phat(0.75);
    CHECK(counter->count.load() == 13);
}

TEST_CASE("cf estimates are exact on the reproducing class") {
    // A genuinely bilinear function: s reproduces it, so the transformed
    // integrand is constant and any point set averages to the true integral.
    TestFunction bilinear;
    bilinear.name = "bilinear";
    bilinear.dims = 2;
    bilinear.eval = [](std::span<const double> x) {
        return 1.0 + 2.0 * x[0] - 3.0 * x[1] + 5.0 * x[0] * x[1];
    };
    bilinear.true_integral = 1.0 + 1.0 - 1.5 + 1.25;
    const TestFunction phat = cf_transform(bilinear, fit_grid_surrogate(bilinear, 4));
    const auto ps = generate({SequenceKind::IidUniform, 2, 77}, 50);
    double avg = 0.0;
    for (const auto& p : ps.points) avg += phat.eval(p);
    avg /= 50.0;
    CHECK(avg == doctest::Approx(bilinear.true_integral).epsilon(1e-13));
}

TEST_CASE("residual variation decays at the interpolation rate") {
    // Exact surrogate: residual variation vanishes.
    const std::array<int, 3> small{4, 8, 16};
    for (const auto& [nodes, v] : residual_variation(builtin("linear", 1), small)) {
        CHECK(v <= 1e-8);
    }

    // d = 1: slope -1 against node count.
    const std::array<int, 5> ms1{8, 16, 32, 64, 128};
    const auto rv1 = residual_variation(builtin("fig1", 1), ms1);
    std::vector<std::pair<long long, double>> pts(rv1.begin(), rv1.end());
    const RateFit fit1 = fit_rate(pts);
    REQUIRE(fit1.defined);
    CHECK(fit1.slope == doctest::Approx(-1.0).epsilon(0.25));

    // Variation at the largest resolution is far below V(phi).
    const double v_phi = hk_variation_1d(builtin("fig1", 1)).value;
    CHECK(rv1.back().second * 10.0 <= v_phi);

    // d = 2: slope -1/2 against total node count.
    const std::array<int, 4> ms2{4, 8, 16, 32};
    const auto rv2 = residual_variation(builtin("prod-fig1", 2), ms2);
    std::vector<std::pair<long long, double>> pts2(rv2.begin(), rv2.end());
    CHECK(rv2.back().first == 32LL * 32LL);
    const RateFit fit2 = fit_rate(pts2);
    REQUIRE(fit2.defined);
    CHECK(fit2.slope == doctest::Approx(-0.5).epsilon(0.5));

    CHECK_THROWS_AS(residual_variation(builtin("constant", 3), small), std::invalid_argument);
}
