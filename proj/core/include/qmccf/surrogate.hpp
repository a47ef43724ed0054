#pragma once

#include <span>
#include <utility>
#include <vector>

#include "qmccf/sequences.hpp"
#include "qmccf/test_functions.hpp"

namespace qmccf {

/**
 * Piecewise-multilinear interpolant of f on the tensor grid with
 * endpoint-inclusive nodes {j/(m-1) : j = 0..m-1} per dimension.
 *
 * The analytic mean is the exact integral of the interpolant over the unit
 * cube (tensor trapezoid weights), so the control-functional transform
 * preserves the integral by construction.
 */
struct GridSurrogate {
    int dims = 1;
    int resolution = 2;                // nodes per dimension
    std::vector<double> node_coords;   // shared across dimensions, sorted
    std::vector<double> node_values;   // resolution^dims, last dimension fastest
    double analytic_mean = 0.0;
    long long fit_evaluations = 0;     // evaluations of f charged to the fit

    double operator()(std::span<const double> x) const;
    double operator()(double x) const { return (*this)(std::span<const double>(&x, 1)); }

    /// Slope of the containing cell (dims == 1 only).
    double derivative1d(double x) const;
};

GridSurrogate fit_grid_surrogate(const TestFunction& f, int resolution);

/// The surrogate node set {j/(m-1)}^dims as a point set (the CF v-set).
PointSet surrogate_node_set(int dims, int resolution);

/**
 * Squared-exponential kernel ridge surrogate
 *   s(x) = b + sum_i w_i exp(-|x - v_i|^2 / (2 ell^2)),
 * with (K + lambda I) w = y - b and b the target mean (or 0). The analytic
 * mean uses the closed-form integral of the kernel over the unit cube.
 */
struct KernelSurrogate {
    PointSet centers;
    std::vector<double> weights;
    double lengthscale = 0.1;
    double ridge = 0.0;
    double intercept = 0.0;
    double analytic_mean = 0.0;
    long long fit_evaluations = 0;

    double operator()(std::span<const double> x) const;
    double operator()(double x) const { return (*this)(std::span<const double>(&x, 1)); }

    /// Analytic derivative of s (dims == 1 only).
    double derivative1d(double x) const;
};

KernelSurrogate fit_kernel_surrogate(const TestFunction& f, const PointSet& centers,
                                     double lengthscale, double ridge,
                                     bool fit_intercept = true);

/// Default lengthscale 0.2 * sqrt(dims).
double default_lengthscale(int dims);

/// kappa(x) = int_{[0,1]^d} exp(-|x-u|^2/(2 ell^2)) du, in closed form.
double se_kernel_unit_integral(std::span<const double> x, double lengthscale);

/**
 * Control-functional transform: phi_hat(x) = f(x) - s(x) + mean(s).
 *
 * The result is a TestFunction with the same dims and true integral as f;
 * each evaluation costs exactly one evaluation of f (surrogate evaluations
 * are not charged). Carries an analytic derivative when f does (1d).
 */
TestFunction cf_transform(const TestFunction& f, GridSurrogate surrogate);
TestFunction cf_transform(const TestFunction& f, KernelSurrogate surrogate);

/**
 * Variation of the transformed integrand phi_hat for each grid resolution:
 * 1d via hk_variation_1d, 2d via a first-order + mixed grid-difference proxy
 * on a 256^2 midpoint mesh. Returns (node count, variation) pairs.
 */
std::vector<std::pair<long long, double>> residual_variation(const TestFunction& f,
                                                             std::span<const int> resolutions);

}  // namespace qmccf
