#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qmccf/estimators.hpp"

namespace qmccf {

/**
 * Configuration of a convergence study. Serializes to a flat key = value
 * text format; parse(serialize(c)) == c, with doubles printed so that the
 * round trip is value-exact.
 */
struct StudyConfig {
    std::string function = "fig1";
    int dims = 1;
    std::vector<Method> methods = {Method::Mc, Method::Qmc, Method::Rqmc, Method::RqmcCf};
    long long budget_min = 16;        // 2^4
    long long budget_max = 4096;      // 2^12
    long long budget_factor = 2;
    int replicates = 20;
    std::uint64_t seed = 12345;
    SurrogateKind surrogate = SurrogateKind::Grid;
    double lengthscale = 0.0;         // kernel surrogate; 0 selects the default
    double ridge = 1e-8;              // kernel surrogate
    int slope_drop_smallest = 2;      // budgets excluded from the rate fit
    std::string out_dir = "study-out";

    bool operator==(const StudyConfig&) const = default;

    /// Geometric budget list (budget_min, min*factor, ..., <= budget_max).
    std::vector<long long> budgets() const;

    /// Throws std::invalid_argument when any invariant is violated.
    void validate() const;

    CfOptions cf_options() const;
};

StudyConfig parse_config(std::istream& in);
StudyConfig parse_config_text(const std::string& text);
StudyConfig load_config(const std::string& path);
std::string serialize_config(const StudyConfig& config);

struct ReportRow {
    Method method;
    long long budget;
    double rmse;
    double std_dev;
    double mean_estimate;
    double true_integral;
};

/// Least-squares slope of log2(rmse) on log2(budget).
struct RateFit {
    double slope = 0.0;
    double std_error = 0.0;
    bool defined = false;                     // false when < 2 usable rows
    std::vector<long long> excluded_budgets;  // rows with rmse == 0
};

struct ConvergenceReport {
    std::vector<ReportRow> rows;              // one per (method, budget), config order
    std::map<Method, RateFit> slopes;         // fitted over the config's budget window
    StudyConfig config;
};

/// OLS fit of log2(rmse) against log2(budget); zero-rmse rows are excluded.
RateFit fit_rate(std::span<const std::pair<long long, double>> rows);

/// Run every (method, budget) cell and fit per-method rates.
ConvergenceReport convergence_study(const StudyConfig& config);

/**
 * Write rows.csv, slopes.csv and loglog.csv under config.out_dir. Every file
 * starts with the config echo as '#' comment lines followed by a header row;
 * identical reports produce byte-identical files.
 */
void emit_report(const ConvergenceReport& report, const StudyConfig& config);

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

}  // namespace qmccf
