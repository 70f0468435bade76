#include "npss/strategies.hpp"

#include <algorithm>
#include <stdexcept>

#include "npss/errors.hpp"
#include "npss/seeding.hpp"

namespace npss {

namespace {

std::vector<std::size_t> sorted_union(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::vector<std::size_t> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

void fill_flagged_ids(StrategyResult& result, const ActivationMatrix& test) {
    result.flagged_row_ids.clear();
    for (std::size_t r : result.flagged_rows) result.flagged_row_ids.push_back(test.row_ids()[r]);
}

}  // namespace

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::scanL: return "scanL";
        case Strategy::scanR: return "scanR";
        case Strategy::scanLR: return "scanLR";
        case Strategy::scan2: return "scan2";
    }
    return "unknown";
}

Strategy parse_strategy(const std::string& name) {
    if (name == "scanL") return Strategy::scanL;
    if (name == "scanR") return Strategy::scanR;
    if (name == "scanLR") return Strategy::scanLR;
    if (name == "scan2") return Strategy::scan2;
    throw ValidationError("unknown method '" + name + "' (expected scanL, scanR, scanLR or scan2)");
}

ScanResult scan_tailed(const ActivationMatrix& reference, const ActivationMatrix& test, Tail tail,
                       const ScanConfig& cfg) {
    return scan(empirical_pvalues(reference, test, tail, cfg.seed), cfg);
}

ScanResult scan_one_tailed(const ActivationMatrix& reference, const ActivationMatrix& test, Tail tail,
                           const ScanConfig& cfg) {
    if (tail == Tail::two) throw ValidationError("scan_one_tailed expects the left or right tail");
    return scan_tailed(reference, test, tail, cfg);
}

std::uint64_t constituent_seed(std::uint64_t strategy_seed, Strategy strategy, std::size_t index) {
    switch (strategy) {
        case Strategy::scanL:
        case Strategy::scanR: return strategy_seed;
        case Strategy::scanLR: return derive_seed(strategy_seed, index == 0 ? "scanLR/left" : "scanLR/right");
        case Strategy::scan2: return derive_seed(strategy_seed, "scan2", index);
    }
    return strategy_seed;
}

StrategyResult scan_lr(const ActivationMatrix& reference, const ActivationMatrix& test, const ScanConfig& cfg) {
    StrategyResult result;
    result.strategy = Strategy::scanLR;
    result.k = 2;
    result.seed = cfg.seed;
    result.test_rows = test.rows();
    result.nodes = test.cols();

    const Tail tails[] = {Tail::left, Tail::right};
    for (std::size_t i = 0; i < 2; ++i) {
        ScanConfig child = cfg;
        child.seed = constituent_seed(cfg.seed, Strategy::scanLR, i);
        result.per_scan.push_back(scan_one_tailed(reference, test, tails[i], child));
    }
    result.flagged_rows = sorted_union(result.per_scan[0].rows, result.per_scan[1].rows);
    for (const auto& s : result.per_scan) result.node_sets.push_back(s.cols);
    fill_flagged_ids(result, test);
    return result;
}

StrategyResult scan_topk(const ActivationMatrix& reference, const ActivationMatrix& test, std::size_t k,
                         const ScanConfig& cfg, bool strict) {
    if (k < 1) throw ValidationError("k must be at least 1");
    if (test.rows() < k) throw ValidationError("test set has fewer rows than k");

    StrategyResult result;
    result.strategy = Strategy::scan2;
    result.k = k;
    result.seed = cfg.seed;
    result.test_rows = test.rows();
    result.nodes = test.cols();

    // remaining[i] = original position of the i-th row of the reduced matrix
    std::vector<std::size_t> remaining(test.rows());
    for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;

    for (std::size_t iter = 0; iter < k; ++iter) {
        if (remaining.empty()) {
            if (strict) throw EmptyTestError("all test rows removed after " + std::to_string(iter) + " iterations");
            break;
        }
        const ActivationMatrix reduced = test.select_rows(remaining);
        ScanConfig child = cfg;
        child.seed = constituent_seed(cfg.seed, Strategy::scan2, iter);
        const PValueMatrix p = empirical_pvalues(reference, reduced, Tail::two, child.seed);
        if (p.reference_size() != reference.rows()) throw std::logic_error("reference set was reduced");
        ScanResult found = scan(p, child);

        for (auto& r : found.rows) r = remaining[r];
        std::vector<std::size_t> kept;
        kept.reserve(remaining.size() - found.rows.size());
        std::set_difference(remaining.begin(), remaining.end(), found.rows.begin(), found.rows.end(),
                            std::back_inserter(kept));
        remaining = std::move(kept);

        result.flagged_rows = sorted_union(result.flagged_rows, found.rows);
        result.node_sets.push_back(found.cols);
        result.per_scan.push_back(std::move(found));
    }
    fill_flagged_ids(result, test);
    return result;
}

StrategyResult run_strategy(const ActivationMatrix& reference, const ActivationMatrix& test, const StrategySpec& spec,
                            const ScanConfig& cfg) {
    switch (spec.kind) {
        case Strategy::scanL:
        case Strategy::scanR: {
            StrategyResult result;
            result.strategy = spec.kind;
            result.k = 1;
            result.seed = cfg.seed;
            result.test_rows = test.rows();
            result.nodes = test.cols();
            result.per_scan.push_back(
                scan_one_tailed(reference, test, spec.kind == Strategy::scanL ? Tail::left : Tail::right, cfg));
            result.flagged_rows = result.per_scan[0].rows;
            result.node_sets.push_back(result.per_scan[0].cols);
            fill_flagged_ids(result, test);
            return result;
        }
        case Strategy::scanLR: return scan_lr(reference, test, cfg);
        case Strategy::scan2: return scan_topk(reference, test, spec.k, cfg, spec.strict);
    }
    throw ValidationError("unknown strategy");
}

}  // namespace npss
