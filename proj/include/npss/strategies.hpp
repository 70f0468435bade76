#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "npss/fgss.hpp"
#include "npss/matrix_io.hpp"

namespace npss {

enum class Strategy { scanL, scanR, scanLR, scan2 };

std::string to_string(Strategy s);
Strategy parse_strategy(const std::string& name);

struct StrategySpec {
    Strategy kind = Strategy::scan2;
    std::size_t k = 3;  // scan2 only
    /// scan2: throw EmptyTestError instead of stopping early when rows run out.
    bool strict = false;
};

struct StrategyResult {
    Strategy strategy = Strategy::scan2;
    std::size_t k = 0;
    /// Union of constituent row sets, as ascending positions in the test matrix.
    std::vector<std::size_t> flagged_rows;
    std::vector<std::string> flagged_row_ids;
    /// Constituent scans in execution order; row indices refer to the full test matrix.
    std::vector<ScanResult> per_scan;
    std::vector<std::vector<std::size_t>> node_sets;
    std::size_t test_rows = 0;
    std::size_t nodes = 0;
    std::uint64_t seed = 0;
};

/// empirical_pvalues(reference, test, tail, cfg.seed) followed by scan(p, cfg).
ScanResult scan_tailed(const ActivationMatrix& reference, const ActivationMatrix& test, Tail tail,
                       const ScanConfig& cfg);

/// scan_tailed restricted to the left or right tail.
ScanResult scan_one_tailed(const ActivationMatrix& reference, const ActivationMatrix& test, Tail tail,
                           const ScanConfig& cfg);

/// Union of the left-tail and right-tail scans' row sets.
StrategyResult scan_lr(const ActivationMatrix& reference, const ActivationMatrix& test, const ScanConfig& cfg);

/**
 * Top-k two-tailed scanning: each iteration recomputes two-tailed p-values on
 * the rows still in the test set, scans, and removes the rows it found. The
 * reference set is never reduced.
 */
StrategyResult scan_topk(const ActivationMatrix& reference, const ActivationMatrix& test, std::size_t k,
                         const ScanConfig& cfg, bool strict = false);

/// Child seed used for a constituent scan of a strategy.
std::uint64_t constituent_seed(std::uint64_t strategy_seed, Strategy strategy, std::size_t index);

StrategyResult run_strategy(const ActivationMatrix& reference, const ActivationMatrix& test, const StrategySpec& spec,
                            const ScanConfig& cfg);

}  // namespace npss
