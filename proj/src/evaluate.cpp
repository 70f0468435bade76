#include "npss/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "npss/errors.hpp"
#include "npss/parallel.hpp"
#include "npss/seeding.hpp"

namespace npss {

MetricSummary summarize(std::span<const double> values) {
    if (values.empty()) return {};
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / n)};
}

TrialMetrics compute_metrics(std::span<const std::size_t> flagged, std::span<const int> labels,
                             std::size_t test_size) {
    if (labels.size() != test_size) {
        throw LabelMismatchError("have " + std::to_string(labels.size()) + " labels for a test set of " +
                                 std::to_string(test_size) + " rows");
    }
    const std::set<std::size_t> unique(flagged.begin(), flagged.end());
    TrialMetrics m;
    m.test_size = test_size;
    m.n_flagged = unique.size();
    for (std::size_t r : unique) {
        if (r >= test_size) throw LabelMismatchError("flagged row " + std::to_string(r) + " is outside the test set");
        m.tp += labels[r] == 1 ? 1 : 0;
    }
    m.n_anomalous = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));

    m.precision_degenerate = m.n_flagged == 0;
    m.recall_degenerate = m.n_anomalous == 0;
    m.precision = m.precision_degenerate ? 0.0 : static_cast<double>(m.tp) / static_cast<double>(m.n_flagged);
    m.recall = m.recall_degenerate ? 0.0 : static_cast<double>(m.tp) / static_cast<double>(m.n_anomalous);
    m.size = test_size == 0 ? 0.0 : static_cast<double>(m.n_flagged) / static_cast<double>(test_size);
    return m;
}

TrialMetrics compute_metrics(std::span<const std::size_t> flagged, const LabelVector& labels, std::size_t test_size) {
    return compute_metrics(flagged, std::span<const int>(labels.labels()), test_size);
}

std::vector<std::size_t> node_frequency(const std::vector<std::vector<std::size_t>>& sets, std::size_t nodes) {
    std::vector<std::size_t> counts(nodes, 0);
    for (const auto& set : sets) {
        const std::set<std::size_t> unique(set.begin(), set.end());
        for (std::size_t j : unique) {
            if (j >= nodes) throw IndexError("node index " + std::to_string(j) + " out of range");
            ++counts[j];
        }
    }
    return counts;
}

std::size_t node_intersection(std::span<const std::size_t> a, std::span<const std::size_t> b) {
    const std::set<std::size_t> sa(a.begin(), a.end());
    const std::set<std::size_t> sb(b.begin(), b.end());
    std::size_t count = 0;
    for (std::size_t x : sa) count += sb.count(x);
    return count;
}

void add_node_metrics(TrialMetrics& metrics, const StrategyResult& result, std::size_t nodes) {
    metrics.constituent_node_sizes.clear();
    const ScanResult* best = nullptr;
    for (const auto& s : result.per_scan) {
        metrics.constituent_node_sizes.push_back(static_cast<double>(s.cols.size()) / static_cast<double>(nodes));
        if (best == nullptr || s.score > best->score) best = &s;
    }
    metrics.node_size = best ? static_cast<double>(best->cols.size()) / static_cast<double>(nodes) : 0.0;
    if (result.strategy == Strategy::scanLR && result.node_sets.size() == 2) {
        metrics.inode = node_intersection(result.node_sets[0], result.node_sets[1]);
    } else {
        metrics.inode.reset();
    }
}

ExperimentReport run_experiment(const ActivationMatrix& reference, const ActivationMatrix& clean,
                                const ActivationMatrix& anomalous, const StrategySpec& strategy,
                                const ExperimentConfig& config, const ScanConfig& scan_cfg) {
    if (config.trials < 1) throw ValidationError("trials must be at least 1");
    if (reference.cols() != clean.cols() || reference.cols() != anomalous.cols()) {
        throw ShapeError("reference, clean and anomalous matrices must have the same number of nodes");
    }
    scan_cfg.validate();

    ExperimentReport report;
    report.strategy = strategy;
    report.scan_cfg = scan_cfg;
    report.config = config;
    report.nodes = reference.cols();
    report.reference_size = reference.rows();
    report.trials.resize(config.trials);
    for (std::size_t t = 0; t < config.trials; ++t) {
        report.sample_seeds.push_back(derive_seed(config.seed, "trial/sample", t));
        report.scan_seeds.push_back(derive_seed(config.seed, "trial/scan", t));
    }

    std::vector<std::vector<std::vector<std::size_t>>> trial_node_sets(config.trials);
    parallel_for(config.trials, [&](std::size_t t) {
        auto [test, labels] = sample_test_set(clean, anomalous, config.test_size, config.anom_frac,
                                              report.sample_seeds[t]);
        ScanConfig cfg = scan_cfg;
        cfg.seed = report.scan_seeds[t];
        const StrategyResult result = run_strategy(reference, test, strategy, cfg);
        TrialMetrics m = compute_metrics(result.flagged_rows, labels, test.rows());
        add_node_metrics(m, result, reference.cols());
        report.trials[t] = std::move(m);
        trial_node_sets[t] = result.node_sets;
    });

    auto collect = [&](auto getter) {
        std::vector<double> v;
        for (const auto& m : report.trials) v.push_back(getter(m));
        return summarize(v);
    };
    report.precision = collect([](const TrialMetrics& m) { return m.precision; });
    report.recall = collect([](const TrialMetrics& m) { return m.recall; });
    report.size = collect([](const TrialMetrics& m) { return m.size; });
    report.node_size = collect([](const TrialMetrics& m) { return m.node_size; });
    if (strategy.kind == Strategy::scanLR) {
        report.inode = collect([](const TrialMetrics& m) { return static_cast<double>(m.inode.value_or(0)); });
    }

    std::vector<std::vector<std::size_t>> per_trial_union;
    std::size_t positions = 0;
    for (const auto& sets : trial_node_sets) positions = std::max(positions, sets.size());
    std::vector<std::vector<std::vector<std::size_t>>> by_position(positions);
    for (const auto& sets : trial_node_sets) {
        std::set<std::size_t> merged;
        for (std::size_t i = 0; i < sets.size(); ++i) {
            merged.insert(sets[i].begin(), sets[i].end());
            by_position[i].push_back(sets[i]);
        }
        per_trial_union.emplace_back(merged.begin(), merged.end());
    }
    report.node_frequency = node_frequency(per_trial_union, report.nodes);
    for (const auto& sets : by_position) report.node_frequency_by_scan.push_back(node_frequency(sets, report.nodes));
    return report;
}

}  // namespace npss
