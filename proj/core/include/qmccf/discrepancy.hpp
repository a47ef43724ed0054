#pragma once

#include <cstdint>
#include <cstddef>

#include "qmccf/sequences.hpp"
#include "qmccf/test_functions.hpp"

namespace qmccf {

enum class DiscrepancyMethod { Exact1d, ExactEnumeration, UpperBound };

struct DiscrepancyResult {
    double value = 0.0;       // in [0, 1]
    DiscrepancyMethod method = DiscrepancyMethod::Exact1d;
    std::size_t n = 0;
    int dims = 0;
};

enum class VariationMethod { DerivativeQuadrature1d, GridDifferences };

struct VariationResult {
    double value = 0.0;
    VariationMethod method = VariationMethod::DerivativeQuadrature1d;
    std::size_t resolution = 0;
};

/**
 * Exact 1d star discrepancy via the sorted-point closed form
 *   D*_N = 1/(2N) + max_i |x_(i) - (2i-1)/(2N)|.
 */
DiscrepancyResult star_discrepancy_1d(const PointSet& ps);

/**
 * Exact star discrepancy in any dimension by enumerating the critical corner
 * grid (per-dimension coordinate values plus 1.0). Cost is
 * #corners * N * dims elementary steps; throws when that exceeds op_budget.
 */
DiscrepancyResult star_discrepancy_exact(const PointSet& ps,
                                         std::uint64_t op_budget = 100'000'000ULL);

/**
 * Hardy-Krause variation of a C^1 function on [0,1], which equals the total
 * variation int_0^1 |f'(x)| dx; computed by the composite midpoint rule.
 * Uses f.derivative when present, otherwise central differences (h = 1e-6).
 */
VariationResult hk_variation_1d(const TestFunction& f, std::size_t resolution = std::size_t{1} << 16);

/// Koksma-Hlawka bound V(f) * D*(ps); an upper bound on |mean - integral|.
double kh_bound(const TestFunction& f, const PointSet& ps);

}  // namespace qmccf
