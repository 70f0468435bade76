#include "npss/scoring.hpp"

#include <cmath>

#include "npss/errors.hpp"

namespace npss {

namespace {

void check_counts(double alpha, std::size_t n_alpha, std::size_t n) {
    if (n == 0) throw DomainError("statistic undefined for an empty subset (n = 0)");
    if (n_alpha > n) throw DomainError("n_alpha exceeds n");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

// x ln(x / y) with the 0 ln 0 = 0 convention.
double xlogx_over_y(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(x / y); }

}  // namespace

std::string to_string(Statistic s) { return s == Statistic::hc ? "hc" : "bj"; }

Statistic parse_statistic(const std::string& name) {
    if (name == "hc" || name == "HC") return Statistic::hc;
    if (name == "bj" || name == "BJ") return Statistic::bj;
    throw ValidationError("unknown statistic '" + name + "' (expected hc or bj)");
}

std::vector<double> default_alpha_grid() {
    std::vector<double> grid;
    for (int i = 1; i <= 10; ++i) grid.push_back(i / 20.0);
    return grid;
}

void ScoreConfig::validate() const {
    if (alpha_grid.empty()) throw ValidationError("alpha grid must not be empty");
    for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
        if (!(alpha_grid[i] > 0.0 && alpha_grid[i] < 1.0)) throw ValidationError("alpha grid values must lie in (0, 1)");
        if (i > 0 && !(alpha_grid[i] > alpha_grid[i - 1])) {
            throw ValidationError("alpha grid must be strictly increasing");
        }
    }
}

bool at_or_below_expectation(double alpha, std::size_t n_alpha, std::size_t n) {
    // Relative slack so that n_alpha == n*alpha in exact arithmetic is gated
    // even when n*alpha rounds just below the integer.
    const double expected = static_cast<double>(n) * alpha;
    return static_cast<double>(n_alpha) <= expected * (1.0 + 1e-12);
}

double hc_statistic(double alpha, std::size_t n_alpha, std::size_t n, bool one_sided_gate) {
    check_counts(alpha, n_alpha, n);
    if (one_sided_gate && at_or_below_expectation(alpha, n_alpha, n)) return 0.0;
    const double nd = static_cast<double>(n);
    return std::abs(static_cast<double>(n_alpha) - nd * alpha) / std::sqrt(nd * alpha * (1.0 - alpha));
}

double bj_statistic(double alpha, std::size_t n_alpha, std::size_t n, bool one_sided_gate) {
    check_counts(alpha, n_alpha, n);
    if (one_sided_gate && at_or_below_expectation(alpha, n_alpha, n)) return 0.0;
    const double nd = static_cast<double>(n);
    const double x = static_cast<double>(n_alpha) / nd;
    const double kl = xlogx_over_y(x, alpha) + xlogx_over_y(1.0 - x, 1.0 - alpha);
    // KL is non-negative; clamp rounding noise near x == alpha.
    return nd * std::max(kl, 0.0);
}

double statistic_value(const ScoreConfig& cfg, double alpha, std::size_t n_alpha, std::size_t n) {
    return cfg.statistic == Statistic::hc ? hc_statistic(alpha, n_alpha, n, cfg.one_sided_gate)
                                          : bj_statistic(alpha, n_alpha, n, cfg.one_sided_gate);
}

SubsetScore score_subset(const PValueMatrix& p, std::span<const std::size_t> rows, std::span<const std::size_t> cols,
                         const ScoreConfig& cfg) {
    if (rows.empty() || cols.empty()) throw IndexError("subset must contain at least one row and one column");
    for (std::size_t r : rows) {
        if (r >= p.rows()) throw IndexError("row index " + std::to_string(r) + " out of range");
    }
    for (std::size_t c : cols) {
        if (c >= p.cols()) throw IndexError("column index " + std::to_string(c) + " out of range");
    }

    const std::size_t n = rows.size() * cols.size();
    SubsetScore best;
    best.score = -1.0;
    for (double alpha : cfg.alpha_grid) {
        std::size_t n_alpha = 0;
        for (std::size_t r : rows) {
            for (std::size_t c : cols) n_alpha += p(r, c) < alpha ? 1 : 0;
        }
        const double s = statistic_value(cfg, alpha, n_alpha, n);
        if (s > best.score) best = {s, alpha, n, n_alpha};
    }
    return best;
}

}  // namespace npss
