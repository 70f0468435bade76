#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "npss/matrix_io.hpp"
#include "npss/strategies.hpp"

namespace npss {

struct TrialMetrics {
    double precision = 0.0;
    double recall = 0.0;
    /// Fraction of the test set flagged.
    double size = 0.0;
    /// Fraction of nodes in the best-scoring constituent's node set.
    double node_size = 0.0;
    /// Node-set fraction of every constituent scan, in execution order.
    std::vector<double> constituent_node_sizes;
    /// |left nodes ∩ right nodes|; scanLR only.
    std::optional<std::size_t> inode;

    std::size_t tp = 0;
    std::size_t n_flagged = 0;
    std::size_t n_anomalous = 0;
    std::size_t test_size = 0;
    /// Nothing flagged: precision is reported as 0.
    bool precision_degenerate = false;
    /// No anomalous rows in the test set: recall is reported as 0.
    bool recall_degenerate = false;
};

/// Mean and population standard deviation (divide by N).
struct MetricSummary {
    double mean = 0.0;
    double std = 0.0;
};

MetricSummary summarize(std::span<const double> values);

struct ExperimentConfig {
    std::size_t trials = 10;
    std::size_t test_size = 800;
    double anom_frac = 0.1;
    std::uint64_t seed = 0;
};

struct ExperimentReport {
    StrategySpec strategy;
    ScanConfig scan_cfg;
    ExperimentConfig config;
    std::size_t nodes = 0;
    std::size_t reference_size = 0;

    std::vector<TrialMetrics> trials;
    std::vector<std::uint64_t> sample_seeds;
    std::vector<std::uint64_t> scan_seeds;

    MetricSummary precision;
    MetricSummary recall;
    MetricSummary size;
    MetricSummary node_size;
    std::optional<MetricSummary> inode;

    /// Per node: number of trials whose returned node sets contain it.
    std::vector<std::size_t> node_frequency;
    /// Per constituent scan position, per node: number of trials containing it.
    std::vector<std::vector<std::size_t>> node_frequency_by_scan;
};

/**
 * Precision = TP / |flagged|, recall = TP / #anomalous, size = |flagged| /
 * test_size. `labels` are aligned with test-row positions. Degenerate
 * denominators report 0 and set the matching flag.
 */
TrialMetrics compute_metrics(std::span<const std::size_t> flagged, std::span<const int> labels,
                             std::size_t test_size);
TrialMetrics compute_metrics(std::span<const std::size_t> flagged, const LabelVector& labels, std::size_t test_size);

/// Per-node membership counts over the given node sets.
std::vector<std::size_t> node_frequency(const std::vector<std::vector<std::size_t>>& sets, std::size_t nodes);

/// |a ∩ b| for index sets (order and duplicates ignored).
std::size_t node_intersection(std::span<const std::size_t> a, std::span<const std::size_t> b);

/// Node-level metrics of one strategy run, added to `metrics` in place.
void add_node_metrics(TrialMetrics& metrics, const StrategyResult& result, std::size_t nodes);

/**
 * Repeated-trial protocol: each trial samples a labeled test set from the
 * clean and anomalous pools, runs the strategy against the reference, and
 * scores the flagged rows. Trial seeds derive from config.seed; the seed in
 * `scan_cfg` is ignored.
 */
ExperimentReport run_experiment(const ActivationMatrix& reference, const ActivationMatrix& clean,
                                const ActivationMatrix& anomalous, const StrategySpec& strategy,
                                const ExperimentConfig& config, const ScanConfig& scan_cfg);

}  // namespace npss
