#include "qmccf/estimators.hpp"

#include <cmath>
#include <stdexcept>

#include "qmccf/rng.hpp"
#include "qmccf/sequences.hpp"
#include "qmccf/surrogate.hpp"

namespace qmccf {
namespace {

std::uint64_t method_tag(Method m) { return static_cast<std::uint64_t>(m) + 1; }

double plain_average(const TestFunction& f, const PointSet& ps) {
    double sum = 0.0;
    for (const auto& p : ps.points) sum += f.eval(p);
    return sum / static_cast<double>(ps.points.size());
}

Estimate finalize(Method method, long long budget, std::vector<double> replicate_values,
                  double true_integral) {
    Estimate e;
    e.method = method;
    e.budget = budget;
    e.replicate_values = std::move(replicate_values);
    const auto r = static_cast<double>(e.replicate_values.size());
    double sum = 0.0, sq_err = 0.0;
    for (double v : e.replicate_values) {
        sum += v;
        sq_err += (v - true_integral) * (v - true_integral);
    }
    e.value = sum / r;
    e.abs_error = std::abs(e.value - true_integral);
    e.rmse = std::sqrt(sq_err / r);
    if (e.replicate_values.size() > 1) {
        double ss = 0.0;
        for (double v : e.replicate_values) ss += (v - e.value) * (v - e.value);
        e.std_dev = std::sqrt(ss / (r - 1.0));
    }
    return e;
}

// Largest m >= 2 with m^dims <= half the budget; the surrogate node count.
int surrogate_resolution(long long budget, int dims) {
    const long long half = budget / 2;
    if (dims == 1) {
        if (half < 2) throw std::invalid_argument("run_estimator: budget too small for rqmc-cf");
        return static_cast<int>(half);
    }
    int m = 2;
    while (true) {
        long long nodes = 1;
        bool fits = true;
        for (int j = 0; j < dims; ++j) {
            nodes *= m + 1;
            if (nodes > half) { fits = false; break; }
        }
        if (!fits) break;
        ++m;
    }
    long long nodes = 1;
    for (int j = 0; j < dims; ++j) nodes *= m;
    if (m < 2 || nodes > half) {
        throw std::invalid_argument("run_estimator: budget too small for rqmc-cf (need >= 2*2^dims)");
    }
    return m;
}

std::uint64_t replicate_seed(std::uint64_t seed, Method method, long long budget, int replicate) {
    return root_stream(seed)
        .child(method_tag(method))
        .child(static_cast<std::uint64_t>(budget))
        .child(static_cast<std::uint64_t>(replicate))
        .hi;
}

}  // namespace

std::string to_string(Method method) {
    switch (method) {
        case Method::Mc: return "mc";
        case Method::Qmc: return "qmc";
        case Method::Rqmc: return "rqmc";
        case Method::RqmcCf: return "rqmc-cf";
    }
    throw std::invalid_argument("estimators: unknown method");
}

Method method_from_string(const std::string& name) {
    if (name == "mc") return Method::Mc;
    if (name == "qmc") return Method::Qmc;
    if (name == "rqmc") return Method::Rqmc;
    if (name == "rqmc-cf") return Method::RqmcCf;
    throw std::invalid_argument("estimators: unknown method '" + name + "'");
}

Estimate run_estimator(Method method, const TestFunction& f, long long budget, int replicates,
                       std::uint64_t seed, const CfOptions& cf) {
    if (budget < 2) throw std::invalid_argument("run_estimator: budget must be >= 2");
    if (replicates < 1) throw std::invalid_argument("run_estimator: replicates must be >= 1");

    std::vector<double> values;
    switch (method) {
        case Method::Mc: {
            values.reserve(replicates);
            for (int r = 0; r < replicates; ++r) {
                SequenceSpec spec{SequenceKind::IidUniform, f.dims,
                                  replicate_seed(seed, method, budget, r)};
                values.push_back(plain_average(f, generate(spec, budget)));
            }
            return finalize(method, budget, std::move(values), f.true_integral);
        }
        case Method::Qmc: {
            SequenceSpec spec{SequenceKind::Halton, f.dims};
            values.push_back(plain_average(f, generate(spec, budget)));
            return finalize(method, budget, std::move(values), f.true_integral);
        }
        case Method::Rqmc: {
            values.reserve(replicates);
            for (int r = 0; r < replicates; ++r) {
                SequenceSpec spec{SequenceKind::ScrambledShiftedHalton, f.dims,
                                  replicate_seed(seed, method, budget, r)};
                values.push_back(plain_average(f, generate(spec, budget)));
            }
            return finalize(method, budget, std::move(values), f.true_integral);
        }
        case Method::RqmcCf: {
            const int m = surrogate_resolution(budget, f.dims);
            // The deterministic v-grid is fit once and shared by all replicates.
            TestFunction phat;
            long long nodes;
            if (cf.surrogate == SurrogateKind::Grid) {
                GridSurrogate s = fit_grid_surrogate(f, m);
                nodes = s.fit_evaluations;
                phat = cf_transform(f, std::move(s));
            } else {
                const double ell = cf.lengthscale > 0.0 ? cf.lengthscale : default_lengthscale(f.dims);
                KernelSurrogate s = fit_kernel_surrogate(f, surrogate_node_set(f.dims, m), ell, cf.ridge);
                nodes = s.fit_evaluations;
                phat = cf_transform(f, std::move(s));
            }
            const long long u_size = budget - nodes;
            values.reserve(replicates);
            for (int r = 0; r < replicates; ++r) {
                SequenceSpec spec{SequenceKind::ScrambledShiftedHalton, f.dims,
                                  replicate_seed(seed, method, budget, r)};
                values.push_back(plain_average(phat, generate(spec, u_size)));
            }
            return finalize(method, nodes + u_size, std::move(values), f.true_integral);
        }
    }
    throw std::invalid_argument("run_estimator: unknown method");
}

std::vector<CurvePoint> replicate_rmse_curve(Method method, const TestFunction& f,
                                             std::span<const long long> budgets, int replicates,
                                             std::uint64_t seed, const CfOptions& cf) {
    for (std::size_t i = 1; i < budgets.size(); ++i) {
        if (budgets[i] <= budgets[i - 1]) {
            throw std::invalid_argument("replicate_rmse_curve: budgets must be strictly increasing");
        }
    }
    std::vector<CurvePoint> out;
    out.reserve(budgets.size());
    for (long long b : budgets) {
        const Estimate e = run_estimator(method, f, b, replicates, seed, cf);
        out.push_back({e.budget, e.rmse, e.std_dev});
    }
    return out;
}

}  // namespace qmccf
