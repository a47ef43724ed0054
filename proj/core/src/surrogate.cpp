#include "qmccf/surrogate.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qmccf/discrepancy.hpp"

namespace qmccf {
namespace {

// Cell index and local coordinate for endpoint-inclusive nodes {j/(m-1)}.
// Queries outside [0,1] clamp to the boundary cell (linear extension).
inline void locate(double x, int m, int* cell, double* t) {
    double s = x * (m - 1);
    if (s < 0.0) s = 0.0;
    if (s > m - 1) s = static_cast<double>(m - 1);
    int j = static_cast<int>(s);
    if (j > m - 2) j = m - 2;
    *cell = j;
    *t = s - j;
}

std::size_t checked_node_count(int dims, int resolution) {
    std::size_t total = 1;
    for (int j = 0; j < dims; ++j) {
        total *= static_cast<std::size_t>(resolution);
        if (total > (std::size_t{1} << 31)) {
            throw std::invalid_argument("fit_grid_surrogate: node count too large");
        }
    }
    return total;
}

}  // namespace

double GridSurrogate::operator()(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dims) {
        throw std::invalid_argument("GridSurrogate: dimension mismatch");
    }
    const int m = resolution;
    int cell[16];
    double t[16];
    if (dims > 16) throw std::invalid_argument("GridSurrogate: dims > 16 unsupported");
    for (int j = 0; j < dims; ++j) locate(x[j], m, &cell[j], &t[j]);

    // Accumulate the 2^dims cell corners, last dimension fastest in storage.
    double value = 0.0;
    for (unsigned corner = 0; corner < (1u << dims); ++corner) {
        double w = 1.0;
        std::size_t flat = 0;
        for (int j = 0; j < dims; ++j) {
            const bool high = (corner >> j) & 1u;
            w *= high ? t[j] : 1.0 - t[j];
            flat = flat * m + static_cast<std::size_t>(cell[j] + (high ? 1 : 0));
        }
        value += w * node_values[flat];
    }
    return value;
}

double GridSurrogate::derivative1d(double x) const {
    if (dims != 1) throw std::invalid_argument("GridSurrogate::derivative1d: dims must be 1");
    int j;
    double t;
    locate(x, resolution, &j, &t);
    return (node_values[j + 1] - node_values[j]) * (resolution - 1);
}

GridSurrogate fit_grid_surrogate(const TestFunction& f, int resolution) {
    if (resolution < 2) throw std::invalid_argument("fit_grid_surrogate: resolution must be >= 2");
    const int d = f.dims;
    const std::size_t total = checked_node_count(d, resolution);

    GridSurrogate s;
    s.dims = d;
    s.resolution = resolution;
    s.node_coords.resize(resolution);
    for (int j = 0; j < resolution; ++j) {
        s.node_coords[j] = static_cast<double>(j) / (resolution - 1);
    }
    s.node_values.resize(total);
    s.fit_evaluations = static_cast<long long>(total);

    std::vector<int> idx(d, 0);
    std::vector<double> x(d);
    double mean = 0.0;
    for (std::size_t flat = 0; flat < total; ++flat) {
        double w = 1.0;
        for (int j = 0; j < d; ++j) {
            x[j] = s.node_coords[idx[j]];
            w *= (idx[j] == 0 || idx[j] == resolution - 1) ? 0.5 : 1.0;  // trapezoid weight
        }
        s.node_values[flat] = f.eval(x);
        mean += w * s.node_values[flat];
        for (int j = d - 1; j >= 0; --j) {
            if (++idx[j] < resolution) break;
            idx[j] = 0;
        }
    }
    s.analytic_mean = mean / std::pow(static_cast<double>(resolution - 1), d);
    return s;
}

PointSet surrogate_node_set(int dims, int resolution) {
    if (resolution < 2) throw std::invalid_argument("surrogate_node_set: resolution must be >= 2");
    const std::size_t total = checked_node_count(dims, resolution);
    PointSet ps;
    ps.dims = dims;
    ps.points.reserve(total);
    std::vector<int> idx(dims, 0);
    for (std::size_t i = 0; i < total; ++i) {
        Point p(dims);
        for (int j = 0; j < dims; ++j) p[j] = static_cast<double>(idx[j]) / (resolution - 1);
        ps.points.push_back(std::move(p));
        for (int j = dims - 1; j >= 0; --j) {
            if (++idx[j] < resolution) break;
            idx[j] = 0;
        }
    }
    return ps;
}

double default_lengthscale(int dims) { return 0.2 * std::sqrt(static_cast<double>(dims)); }

double se_kernel_unit_integral(std::span<const double> x, double lengthscale) {
    // Per dimension: int_0^1 exp(-(x-u)^2/(2 l^2)) du
    //              = l sqrt(pi/2) (erf((1-x)/(sqrt(2) l)) + erf(x/(sqrt(2) l))).
    const double l = lengthscale;
    const double c = l * std::sqrt(std::numbers::pi / 2.0);
    const double s2l = std::numbers::sqrt2 * l;
    double out = 1.0;
    for (double xj : x) {
        out *= c * (std::erf((1.0 - xj) / s2l) + std::erf(xj / s2l));
    }
    return out;
}

double KernelSurrogate::operator()(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != centers.dims) {
        throw std::invalid_argument("KernelSurrogate: dimension mismatch");
    }
    const double inv2l2 = 1.0 / (2.0 * lengthscale * lengthscale);
    double value = intercept;
    for (std::size_t i = 0; i < centers.points.size(); ++i) {
        double d2 = 0.0;
        for (int j = 0; j < centers.dims; ++j) {
            const double diff = x[j] - centers.points[i][j];
            d2 += diff * diff;
        }
        value += weights[i] * std::exp(-d2 * inv2l2);
    }
    return value;
}

double KernelSurrogate::derivative1d(double x) const {
    if (centers.dims != 1) throw std::invalid_argument("KernelSurrogate::derivative1d: dims must be 1");
    const double l2 = lengthscale * lengthscale;
    double value = 0.0;
    for (std::size_t i = 0; i < centers.points.size(); ++i) {
        const double diff = x - centers.points[i][0];
        value += weights[i] * std::exp(-diff * diff / (2.0 * l2)) * (-diff / l2);
    }
    return value;
}

KernelSurrogate fit_kernel_surrogate(const TestFunction& f, const PointSet& centers,
                                     double lengthscale, double ridge, bool fit_intercept) {
    if (centers.points.empty()) throw std::invalid_argument("fit_kernel_surrogate: no centers");
    if (centers.dims != f.dims) throw std::invalid_argument("fit_kernel_surrogate: dims mismatch");
    if (lengthscale <= 0.0) throw std::invalid_argument("fit_kernel_surrogate: lengthscale must be > 0");
    if (ridge < 0.0) throw std::invalid_argument("fit_kernel_surrogate: ridge must be >= 0");

    const auto n = static_cast<Eigen::Index>(centers.points.size());
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y[i] = f.eval(centers.points[i]);

    KernelSurrogate s;
    s.centers = centers;
    s.lengthscale = lengthscale;
    s.ridge = ridge;
    s.intercept = fit_intercept ? y.mean() : 0.0;
    s.fit_evaluations = static_cast<long long>(n);

    const Eigen::VectorXd yc = y.array() - s.intercept;
    const double inv2l2 = 1.0 / (2.0 * lengthscale * lengthscale);
    Eigen::MatrixXd gram(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        gram(i, i) = 1.0 + ridge;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double d2 = 0.0;
            for (int k = 0; k < centers.dims; ++k) {
                const double diff = centers.points[i][k] - centers.points[j][k];
                d2 += diff * diff;
            }
            gram(i, j) = gram(j, i) = std::exp(-d2 * inv2l2);
        }
    }

    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    const double pivot_min = ldlt.vectorD().minCoeff();
    const double pivot_max = ldlt.vectorD().maxCoeff();
    const double rank_tol = pivot_max * static_cast<double>(n) *
                            std::numeric_limits<double>::epsilon();
    if (ldlt.info() != Eigen::Success || !(pivot_min > rank_tol)) {
        throw std::runtime_error("fit_kernel_surrogate: singular Gram system (coincident centers?)");
    }

    Eigen::VectorXd w = ldlt.solve(yc);
    w += ldlt.solve(yc - gram * w);  // one refinement pass for ill-conditioned Gram matrices

    const double resid = (gram * w - yc).norm();
    const double tol = 1e-8 * std::max(yc.norm(), 1.0);
    if (!w.allFinite() || resid > tol) {
        throw std::runtime_error("fit_kernel_surrogate: solve residual exceeds tolerance");
    }

    s.weights.assign(w.data(), w.data() + n);
    double mean = s.intercept;
    for (Eigen::Index i = 0; i < n; ++i) {
        mean += s.weights[i] * se_kernel_unit_integral(centers.points[i], lengthscale);
    }
    s.analytic_mean = mean;
    return s;
}

namespace {

template <typename Surrogate>
TestFunction transform_with(const TestFunction& f, Surrogate surrogate) {
    const int surrogate_dims = [&] {
        if constexpr (std::is_same_v<Surrogate, GridSurrogate>) return surrogate.dims;
        else return surrogate.centers.dims;
    }();
    if (surrogate_dims != f.dims) throw std::invalid_argument("cf_transform: dims mismatch");

    auto holder = std::make_shared<const Surrogate>(std::move(surrogate));
    TestFunction out;
    out.name = f.name + "-cf";
    out.dims = f.dims;
    out.true_integral = f.true_integral;
    out.eval = [base = f.eval, holder](std::span<const double> x) {
        return base(x) - (*holder)(x) + holder->analytic_mean;
    };
    if (f.dims == 1 && f.derivative) {
        out.derivative = [base = f.derivative, holder](double x) {
            return base(x) - holder->derivative1d(x);
        };
    }
    return out;
}

}  // namespace

TestFunction cf_transform(const TestFunction& f, GridSurrogate surrogate) {
    return transform_with(f, std::move(surrogate));
}

TestFunction cf_transform(const TestFunction& f, KernelSurrogate surrogate) {
    return transform_with(f, std::move(surrogate));
}

std::vector<std::pair<long long, double>> residual_variation(const TestFunction& f,
                                                             std::span<const int> resolutions) {
    if (f.dims != 1 && f.dims != 2) {
        throw std::invalid_argument("residual_variation: dims must be 1 or 2");
    }
    std::vector<std::pair<long long, double>> out;
    out.reserve(resolutions.size());
    for (int m : resolutions) {
        GridSurrogate s = fit_grid_surrogate(f, m);
        const long long nodes = s.fit_evaluations;
        const TestFunction phat = cf_transform(f, std::move(s));
        double variation;
        if (f.dims == 1) {
            variation = hk_variation_1d(phat).value;
        } else {
            // First-order plus mixed absolute differences on a midpoint mesh,
            // scaled to approximate the continuum variation components.
            constexpr int kMesh = 256;
            std::vector<double> g(static_cast<std::size_t>(kMesh) * kMesh);
            std::vector<double> x(2);
            for (int i = 0; i < kMesh; ++i) {
                x[0] = (i + 0.5) / kMesh;
                for (int j = 0; j < kMesh; ++j) {
                    x[1] = (j + 0.5) / kMesh;
                    g[static_cast<std::size_t>(i) * kMesh + j] = phat.eval(x);
                }
            }
            auto at = [&](int i, int j) { return g[static_cast<std::size_t>(i) * kMesh + j]; };
            double d1 = 0.0, d2 = 0.0, mixed = 0.0;
            for (int i = 0; i + 1 < kMesh; ++i) {
                for (int j = 0; j < kMesh; ++j) d1 += std::abs(at(i + 1, j) - at(i, j));
            }
            for (int i = 0; i < kMesh; ++i) {
                for (int j = 0; j + 1 < kMesh; ++j) d2 += std::abs(at(i, j + 1) - at(i, j));
            }
            for (int i = 0; i + 1 < kMesh; ++i) {
                for (int j = 0; j + 1 < kMesh; ++j) {
                    mixed += std::abs(at(i + 1, j + 1) - at(i + 1, j) - at(i, j + 1) + at(i, j));
                }
            }
            variation = d1 / kMesh + d2 / kMesh + mixed;
        }
        out.emplace_back(nodes, variation);
    }
    return out;
}

}  // namespace qmccf
