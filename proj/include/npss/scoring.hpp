#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "npss/pvalues.hpp"

namespace npss {

enum class Statistic { hc, bj };

std::string to_string(Statistic s);
Statistic parse_statistic(const std::string& name);

/// {0.05, 0.10, ..., 0.50}.
std::vector<double> default_alpha_grid();

struct ScoreConfig {
    Statistic statistic = Statistic::hc;
    std::vector<double> alpha_grid = default_alpha_grid();
    /// Zero the statistic unless N_alpha > alpha * N.
    bool one_sided_gate = true;

    /// ValidationError unless the grid is non-empty, strictly increasing and inside (0, 1).
    void validate() const;
};

struct SubsetScore {
    double score = 0.0;
    double best_alpha = 0.0;
    std::size_t n = 0;
    std::size_t n_alpha = 0;
};

/// True when the gate applies, i.e. n_alpha does not exceed its null expectation n * alpha.
bool at_or_below_expectation(double alpha, std::size_t n_alpha, std::size_t n);

/// Higher Criticism: |n_alpha - n*alpha| / sqrt(n*alpha*(1-alpha)).
double hc_statistic(double alpha, std::size_t n_alpha, std::size_t n, bool one_sided_gate = true);

/// Berk-Jones: n * KL(n_alpha/n, alpha), with 0*ln(0) = 0.
double bj_statistic(double alpha, std::size_t n_alpha, std::size_t n, bool one_sided_gate = true);

/// Dispatches on cfg.statistic.
double statistic_value(const ScoreConfig& cfg, double alpha, std::size_t n_alpha, std::size_t n);

/**
 * F(S) = max over the alpha grid of phi(alpha, N_alpha(S), N(S)) for
 * S = rows x cols, where N_alpha counts p-values strictly below alpha.
 * Ties across alpha resolve to the smallest alpha.
 */
SubsetScore score_subset(const PValueMatrix& p, std::span<const std::size_t> rows,
                         std::span<const std::size_t> cols, const ScoreConfig& cfg);

}  // namespace npss
