#include "qmccf/study.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qmccf {
namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

long long parse_ll(const std::string& key, const std::string& value) {
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw std::invalid_argument("config: bad integer for '" + key + "': " + value);
    }
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw std::invalid_argument("config: bad unsigned integer for '" + key + "': " + value);
    }
    return out;
}

double parse_f64(const std::string& key, const std::string& value) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw std::invalid_argument("config: bad number for '" + key + "': " + value);
    }
    return out;
}

std::string methods_to_string(const std::vector<Method>& methods) {
    std::string out;
    for (std::size_t i = 0; i < methods.size(); ++i) {
        if (i) out += ',';
        out += to_string(methods[i]);
    }
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_report: cannot open " + path.string());
    out << contents;
    if (!out) throw std::runtime_error("emit_report: write failed for " + path.string());
}

std::string config_echo(const StudyConfig& config) {
    std::istringstream in(serialize_config(config));
    std::string line, out;
    while (std::getline(in, line)) out += "# " + line + "\n";
    return out;
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

std::vector<long long> StudyConfig::budgets() const {
    std::vector<long long> out;
    for (long long b = budget_min; b <= budget_max; b *= budget_factor) out.push_back(b);
    return out;
}

void StudyConfig::validate() const {
    if (function.empty()) throw std::invalid_argument("config: function must be set");
    if (dims < 1) throw std::invalid_argument("config: dims must be >= 1");
    if (methods.empty()) throw std::invalid_argument("config: methods must be nonempty");
    for (std::size_t i = 0; i < methods.size(); ++i) {
        for (std::size_t j = i + 1; j < methods.size(); ++j) {
            if (methods[i] == methods[j]) throw std::invalid_argument("config: duplicate method");
        }
    }
    if (budget_min < 2) throw std::invalid_argument("config: budget_min must be >= 2");
    if (budget_factor < 2) throw std::invalid_argument("config: budget_factor must be >= 2");
    if (budgets().size() < 2) throw std::invalid_argument("config: need at least 2 budgets for slopes");
    if (replicates < 1) throw std::invalid_argument("config: replicates must be >= 1");
    if (ridge < 0.0) throw std::invalid_argument("config: ridge must be >= 0");
    if (lengthscale < 0.0) throw std::invalid_argument("config: lengthscale must be >= 0");
    if (slope_drop_smallest < 0) throw std::invalid_argument("config: slope_drop_smallest must be >= 0");
    if (out_dir.empty()) throw std::invalid_argument("config: out_dir must be set");
}

CfOptions StudyConfig::cf_options() const {
    return CfOptions{surrogate, lengthscale, ridge};
}

StudyConfig parse_config(std::istream& in) {
    StudyConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                        " is not 'key = value'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key == "function") {
            config.function = value;
        } else if (key == "dims") {
            config.dims = static_cast<int>(parse_ll(key, value));
        } else if (key == "methods") {
            config.methods.clear();
            for (const auto& name : split(value, ',')) {
                if (!name.empty()) config.methods.push_back(method_from_string(name));
            }
        } else if (key == "budget_min") {
            config.budget_min = parse_ll(key, value);
        } else if (key == "budget_max") {
            config.budget_max = parse_ll(key, value);
        } else if (key == "budget_factor") {
            config.budget_factor = parse_ll(key, value);
        } else if (key == "replicates") {
            config.replicates = static_cast<int>(parse_ll(key, value));
        } else if (key == "seed") {
            config.seed = parse_u64(key, value);
        } else if (key == "surrogate") {
            if (value == "grid") config.surrogate = SurrogateKind::Grid;
            else if (value == "kernel") config.surrogate = SurrogateKind::Kernel;
            else throw std::invalid_argument("config: surrogate must be 'grid' or 'kernel'");
        } else if (key == "lengthscale") {
            config.lengthscale = parse_f64(key, value);
        } else if (key == "ridge") {
            config.ridge = parse_f64(key, value);
        } else if (key == "slope_drop_smallest") {
            config.slope_drop_smallest = static_cast<int>(parse_ll(key, value));
        } else if (key == "out_dir") {
            config.out_dir = value;
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    config.validate();
    return config;
}

StudyConfig parse_config_text(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

StudyConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    return parse_config(in);
}

std::string serialize_config(const StudyConfig& config) {
    std::ostringstream out;
    out << "function = " << config.function << "\n";
    out << "dims = " << config.dims << "\n";
    out << "methods = " << methods_to_string(config.methods) << "\n";
    out << "budget_min = " << config.budget_min << "\n";
    out << "budget_max = " << config.budget_max << "\n";
    out << "budget_factor = " << config.budget_factor << "\n";
    out << "replicates = " << config.replicates << "\n";
    out << "seed = " << config.seed << "\n";
    out << "surrogate = " << (config.surrogate == SurrogateKind::Grid ? "grid" : "kernel") << "\n";
    out << "lengthscale = " << format_double(config.lengthscale) << "\n";
    out << "ridge = " << format_double(config.ridge) << "\n";
    out << "slope_drop_smallest = " << config.slope_drop_smallest << "\n";
    out << "out_dir = " << config.out_dir << "\n";
    return out.str();
}

RateFit fit_rate(std::span<const std::pair<long long, double>> rows) {
    RateFit fit;
    std::vector<double> x, y;
    for (const auto& [budget, rmse] : rows) {
        if (rmse <= 0.0) {
            fit.excluded_budgets.push_back(budget);
            continue;
        }
        x.push_back(std::log2(static_cast<double>(budget)));
        y.push_back(std::log2(rmse));
    }
    const std::size_t n = x.size();
    if (n < 2) return fit;  // degenerate; slope undefined

    double xm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < n; ++i) { xm += x[i]; ym += y[i]; }
    xm /= static_cast<double>(n);
    ym /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - xm) * (x[i] - xm);
        sxy += (x[i] - xm) * (y[i] - ym);
    }
    fit.slope = sxy / sxx;
    const double intercept = ym - fit.slope * xm;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - intercept - fit.slope * x[i];
        rss += r * r;
    }
    fit.std_error = n > 2 ? std::sqrt(rss / static_cast<double>(n - 2) / sxx) : 0.0;
    fit.defined = true;
    return fit;
}

ConvergenceReport convergence_study(const StudyConfig& config) {
    config.validate();
    const TestFunction f = builtin(config.function, config.dims);
    const auto budgets = config.budgets();
    const CfOptions cf = config.cf_options();

    ConvergenceReport report;
    report.config = config;
    for (Method method : config.methods) {
        for (long long budget : budgets) {
            Estimate e;
            try {
                e = run_estimator(method, f, budget, config.replicates, config.seed, cf);
            } catch (const std::exception& err) {
                throw std::runtime_error("convergence_study: cell (" + to_string(method) + ", " +
                                         std::to_string(budget) + ") failed: " + err.what());
            }
            report.rows.push_back({method, budget, e.rmse, e.std_dev, e.value, f.true_integral});
        }
        std::vector<std::pair<long long, double>> window;
        for (std::size_t i = static_cast<std::size_t>(std::min<long long>(
                 config.slope_drop_smallest, static_cast<long long>(budgets.size())));
             i < budgets.size(); ++i) {
            const auto& row = report.rows[report.rows.size() - budgets.size() + i];
            window.emplace_back(row.budget, row.rmse);
        }
        report.slopes[method] = fit_rate(window);
    }
    return report;
}

void emit_report(const ConvergenceReport& report, const StudyConfig& config) {
    const std::string echo = config_echo(config);
    const std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);

    std::string rows = echo + "method,budget,rmse,std,mean_estimate,true_integral\n";
    for (const auto& row : report.rows) {
        rows += to_string(row.method) + "," + std::to_string(row.budget) + "," +
                format_double(row.rmse) + "," + format_double(row.std_dev) + "," +
                format_double(row.mean_estimate) + "," + format_double(row.true_integral) + "\n";
    }
    write_file(dir / "rows.csv", rows);

    std::string slopes = echo + "method,slope,std_error,defined,excluded_budgets\n";
    for (const auto& [method, fit] : report.slopes) {
        std::string excluded;
        for (std::size_t i = 0; i < fit.excluded_budgets.size(); ++i) {
            if (i) excluded += ';';
            excluded += std::to_string(fit.excluded_budgets[i]);
        }
        slopes += to_string(method) + "," + (fit.defined ? format_double(fit.slope) : "nan") + "," +
                  (fit.defined ? format_double(fit.std_error) : "nan") + "," +
                  (fit.defined ? "1" : "0") + "," + excluded + "\n";
    }
    write_file(dir / "slopes.csv", slopes);

    std::string loglog = echo + "method,log2_budget,log2_rmse\n";
    for (const auto& row : report.rows) {
        if (row.rmse <= 0.0) continue;
        loglog += to_string(row.method) + "," +
                  format_double(std::log2(static_cast<double>(row.budget))) + "," +
                  format_double(std::log2(row.rmse)) + "\n";
    }
    write_file(dir / "loglog.csv", loglog);
}

}  // namespace qmccf
