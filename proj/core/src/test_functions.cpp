#include "qmccf/test_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qmccf {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double fig1_eval(double x) { return std::sin(kTwoPi * x) + 4.0 * x; }
double fig1_deriv(double x) { return kTwoPi * std::cos(kTwoPi * x) + 4.0; }

}  // namespace

TestFunction with_counter(const TestFunction& f, std::shared_ptr<EvalCounter> counter) {
    TestFunction out = f;
    out.eval = [inner = f.eval, counter](std::span<const double> x) {
        counter->count.fetch_add(1, std::memory_order_relaxed);
        return inner(x);
    };
    return out;
}

TestFunction builtin(const std::string& name, int dims) {
    if (dims < 1) throw std::invalid_argument("builtin: dims must be >= 1");
    TestFunction f;
    f.name = name;
    f.dims = dims;
    if (name == "fig1") {
        if (dims != 1) throw std::invalid_argument("builtin: fig1 is one-dimensional");
        f.eval = [](std::span<const double> x) { return fig1_eval(x[0]); };
        f.true_integral = 2.0;
        f.derivative = fig1_deriv;
    } else if (name == "linear") {
        if (dims != 1) throw std::invalid_argument("builtin: linear is one-dimensional");
        f.eval = [](std::span<const double> x) { return 4.0 * x[0]; };
        f.true_integral = 2.0;
        f.derivative = [](double) { return 4.0; };
    } else if (name == "constant") {
        f.eval = [](std::span<const double>) { return 1.0; };
        f.true_integral = 1.0;
        if (dims == 1) f.derivative = [](double) { return 0.0; };
    } else if (name == "prod-fig1") {
        f.eval = [](std::span<const double> x) {
            double v = 1.0;
            for (double c : x) v *= fig1_eval(c);
            return v;
        };
        f.true_integral = std::pow(2.0, dims);
        if (dims == 1) f.derivative = fig1_deriv;
    } else {
        throw std::invalid_argument("builtin: unknown test function '" + name + "'");
    }
    return f;
}

double integrate_midpoint(const TestFunction& f, std::size_t points_per_dim) {
    if (points_per_dim == 0) throw std::invalid_argument("integrate_midpoint: need points");
    const int d = f.dims;
    const double h = 1.0 / static_cast<double>(points_per_dim);
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> x(d);
    double sum = 0.0;
    while (true) {
        for (int j = 0; j < d; ++j) x[j] = (static_cast<double>(idx[j]) + 0.5) * h;
        sum += f.eval(x);
        int j = d - 1;
        for (; j >= 0; --j) {
            if (++idx[j] < points_per_dim) break;
            idx[j] = 0;
        }
        if (j < 0) break;
    }
    double volume_per_cell = 1.0;
    for (int j = 0; j < d; ++j) volume_per_cell *= h;
    return sum * volume_per_cell;
}

}  // namespace qmccf
