#include "qmccf/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qmccf {

DiscrepancyResult star_discrepancy_1d(const PointSet& ps) {
    if (ps.dims != 1) throw std::invalid_argument("star_discrepancy_1d: point set must be 1d");
    if (ps.points.empty()) throw std::invalid_argument("star_discrepancy_1d: empty point set");
    const std::size_t n = ps.points.size();
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = ps.points[i][0];
    std::sort(x.begin(), x.end());
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double target = (2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(n));
        worst = std::max(worst, std::abs(x[i] - target));
    }
    return {1.0 / (2.0 * static_cast<double>(n)) + worst, DiscrepancyMethod::Exact1d, n, 1};
}

DiscrepancyResult star_discrepancy_exact(const PointSet& ps, std::uint64_t op_budget) {
    const int d = ps.dims;
    const std::size_t n = ps.points.size();
    if (d < 1) throw std::invalid_argument("star_discrepancy_exact: dims must be >= 1");
    if (n == 0) throw std::invalid_argument("star_discrepancy_exact: empty point set");

    // Candidate corner coordinates per dimension: point values and 1.0.
    std::vector<std::vector<double>> candidates(d);
    std::uint64_t corner_count = 1;
    for (int j = 0; j < d; ++j) {
        auto& c = candidates[j];
        c.reserve(n + 1);
        for (const auto& p : ps.points) c.push_back(p[j]);
        c.push_back(1.0);
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        corner_count *= c.size();
        if (corner_count > op_budget) break;
    }
    if (corner_count > op_budget ||
        corner_count * n * static_cast<std::uint64_t>(d) > op_budget) {
        throw std::runtime_error("star_discrepancy_exact: corner enumeration exceeds operation budget");
    }

    std::vector<std::size_t> idx(d, 0);
    std::vector<double> corner(d);
    double best = 0.0;
    while (true) {
        double vol = 1.0;
        for (int j = 0; j < d; ++j) {
            corner[j] = candidates[j][idx[j]];
            vol *= corner[j];
        }
        std::size_t open_count = 0, closed_count = 0;
        for (const auto& p : ps.points) {
            bool open = true, closed = true;
            for (int j = 0; j < d; ++j) {
                if (p[j] >= corner[j]) open = false;
                if (p[j] > corner[j]) { closed = false; break; }
            }
            if (open) ++open_count;
            if (closed) ++closed_count;
        }
        const double nn = static_cast<double>(n);
        best = std::max({best, vol - static_cast<double>(open_count) / nn,
                         static_cast<double>(closed_count) / nn - vol});
        int j = d - 1;
        for (; j >= 0; --j) {
            if (++idx[j] < candidates[j].size()) break;
            idx[j] = 0;
        }
        if (j < 0) break;
    }
    return {best, DiscrepancyMethod::ExactEnumeration, n, d};
}

VariationResult hk_variation_1d(const TestFunction& f, std::size_t resolution) {
    if (f.dims != 1) throw std::invalid_argument("hk_variation_1d: function must be 1d");
    if (resolution == 0) throw std::invalid_argument("hk_variation_1d: resolution must be positive");
    const double h = 1.0 / static_cast<double>(resolution);
    double sum = 0.0;
    if (f.derivative) {
        for (std::size_t i = 0; i < resolution; ++i) {
            sum += std::abs(f.derivative((static_cast<double>(i) + 0.5) * h));
        }
    } else {
        constexpr double kStep = 1e-6;
        for (std::size_t i = 0; i < resolution; ++i) {
            const double x = (static_cast<double>(i) + 0.5) * h;
            sum += std::abs((f(x + kStep) - f(x - kStep)) / (2.0 * kStep));
        }
    }
    return {sum * h, VariationMethod::DerivativeQuadrature1d, resolution};
}

double kh_bound(const TestFunction& f, const PointSet& ps) {
    if (f.dims != 1 || ps.dims != 1) {
        throw std::invalid_argument("kh_bound: variation is only computable in 1d");
    }
    return hk_variation_1d(f).value * star_discrepancy_1d(ps).value;
}

}  // namespace qmccf
