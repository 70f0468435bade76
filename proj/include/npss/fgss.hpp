#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "npss/pvalues.hpp"
#include "npss/scoring.hpp"

namespace npss {

struct ScanConfig {
    std::size_t restarts = 20;
    /// Cap on row/column alternation rounds per restart.
    std::size_t max_alternations = 100;
    /// A step must improve the score by more than this to be accepted.
    double score_tolerance = 1e-12;
    std::uint64_t seed = 0;
    ScoreConfig score_cfg;

    void validate() const;
};

/// Most anomalous subset S = rows x cols found by a scan.
struct ScanResult {
    std::vector<std::size_t> rows;  // ascending
    std::vector<std::string> row_ids;
    std::vector<std::size_t> cols;  // ascending
    double score = 0.0;
    double best_alpha = 0.0;
    std::size_t restart_index = 0;
    std::size_t alternations = 0;
    Statistic statistic = Statistic::hc;
    Tail tail = Tail::right;
    std::uint64_t seed = 0;
    std::size_t restarts = 0;
    /// Score after each accepted optimization step of the winning restart.
    std::vector<double> score_trace;
};

/// Best subset along one axis with the other axis held fixed.
struct ConditionalOptimum {
    std::vector<std::size_t> subset;  // ascending
    SubsetScore score;
};

/**
 * Exact maximizer of F over all non-empty row subsets with columns fixed.
 *
 * For each alpha on the grid the rows are ranked by their count of
 * p-values below alpha (ties by row index), and every prefix of that order
 * is scored; with N fixed per prefix length, F_alpha is non-decreasing in
 * N_alpha, so the best prefix is the best subset of that size. Among equal
 * scores the smallest alpha, then the shortest prefix, wins.
 */
ConditionalOptimum optimize_rows(const PValueMatrix& p, std::span<const std::size_t> fixed_cols,
                                 const ScoreConfig& cfg);

/// optimize_rows with the roles of rows and columns swapped.
ConditionalOptimum optimize_cols(const PValueMatrix& p, std::span<const std::size_t> fixed_rows,
                                 const ScoreConfig& cfg);

/// One random start followed by alternating row and column steps until
/// neither improves the score by more than cfg.score_tolerance.
ScanResult single_restart(const PValueMatrix& p, const ScanConfig& cfg, std::uint64_t restart_seed);

/// Seed used for restart `index` of a scan seeded with `seed`.
std::uint64_t restart_seed(std::uint64_t seed, std::size_t index);

/// Best of cfg.restarts single restarts; ties go to the lower restart index.
ScanResult scan(const PValueMatrix& p, const ScanConfig& cfg);

}  // namespace npss
