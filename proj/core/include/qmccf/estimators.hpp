#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qmccf/test_functions.hpp"

namespace qmccf {

enum class Method { Mc, Qmc, Rqmc, RqmcCf };

std::string to_string(Method method);
Method method_from_string(const std::string& name);

enum class SurrogateKind { Grid, Kernel };

/// Surrogate configuration for the rqmc-cf method.
struct CfOptions {
    SurrogateKind surrogate = SurrogateKind::Grid;
    double lengthscale = 0.0;  // kernel only; 0 selects default_lengthscale(dims)
    double ridge = 1e-8;       // kernel only
};

/**
 * One estimator run. `budget` is the number of integrand evaluations a single
 * estimate costs (for rqmc-cf: surrogate fit plus one u-set; the fit is shared
 * across replicates, so R replicates consume nodes + R * u_set_size in total).
 */
struct Estimate {
    Method method = Method::Mc;
    long long budget = 0;
    double value = 0.0;                   // mean over replicates
    std::vector<double> replicate_values;
    double std_dev = 0.0;                 // sample std over replicates (0 for qmc)
    double abs_error = 0.0;               // |value - true integral|
    double rmse = 0.0;                    // root mean square of per-replicate errors
};

/**
 * Run one of the four estimators at the given evaluation budget.
 *
 *   mc       R iid-uniform sets of size `budget`, plain average each
 *   qmc      one plain Halton set of size `budget` (replicates forced to 1)
 *   rqmc     R scrambled-shifted Halton sets under distinct sub-seeds
 *   rqmc-cf  grid (or kernel) surrogate on ~budget/2 nodes, then the plain
 *            average of the transformed integrand over scrambled-shifted
 *            Halton sets of size budget - nodes
 *
 * Sub-seeds derive from (seed, method, budget, replicate) through the
 * splittable stream, so every cell of a study reproduces independently.
 */
Estimate run_estimator(Method method, const TestFunction& f, long long budget,
                       int replicates, std::uint64_t seed, const CfOptions& cf = {});

struct CurvePoint {
    long long budget = 0;
    double rmse = 0.0;
    double std_dev = 0.0;
};

/// run_estimator over an increasing budget list, projected to (budget, rmse, std).
std::vector<CurvePoint> replicate_rmse_curve(Method method, const TestFunction& f,
                                             std::span<const long long> budgets, int replicates,
                                             std::uint64_t seed, const CfOptions& cf = {});

}  // namespace qmccf
