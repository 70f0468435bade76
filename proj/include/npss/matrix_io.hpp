#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace npss {

enum class MatrixFormat { csv, bin };

/// Parses "csv" / "bin"; anything else is a ValidationError.
MatrixFormat parse_matrix_format(const std::string& name);

/// Picks the format from the file extension (".bin" → bin, otherwise csv).
MatrixFormat format_from_path(const std::filesystem::path& path);

/**
 * Dense activations of one layer: rows are sentences, columns are nodes.
 *
 * Values are stored row-major. The constructor enforces the invariants
 * (non-empty, finite, unique row ids), so every live instance is valid.
 */
class ActivationMatrix {
public:
    ActivationMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                     std::vector<std::string> row_ids,
                     std::optional<std::string> layer_tag = std::nullopt);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return values_[r * cols_ + c]; }
    std::span<const double> row(std::size_t r) const noexcept {
        return {values_.data() + r * cols_, cols_};
    }
    const std::vector<double>& values() const noexcept { return values_; }
    const std::vector<std::string>& row_ids() const noexcept { return row_ids_; }
    const std::optional<std::string>& layer_tag() const noexcept { return layer_tag_; }

    /// New matrix holding the given rows, in the given order.
    ActivationMatrix select_rows(std::span<const std::size_t> indices) const;

    friend bool operator==(const ActivationMatrix&, const ActivationMatrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> values_;
    std::vector<std::string> row_ids_;
    std::optional<std::string> layer_tag_;
};

/// Binary labels (0 normal, 1 anomalous) keyed by row id, in file order.
class LabelVector {
public:
    LabelVector() = default;
    LabelVector(std::vector<std::string> ids, std::vector<int> labels);

    std::size_t size() const noexcept { return ids_.size(); }
    const std::vector<std::string>& ids() const noexcept { return ids_; }
    const std::vector<int>& labels() const noexcept { return labels_; }
    std::size_t anomalous_count() const noexcept;

    /// Label of a row id; LabelMismatchError if the id is unknown.
    int at(const std::string& id) const;

    /// Labels reordered to match `row_ids`; LabelMismatchError if any id is
    /// missing or the sizes differ.
    std::vector<int> aligned_to(const std::vector<std::string>& row_ids) const;

    friend bool operator==(const LabelVector& a, const LabelVector& b) {
        return a.ids_ == b.ids_ && a.labels_ == b.labels_;
    }

private:
    std::vector<std::string> ids_;
    std::vector<int> labels_;
    std::unordered_map<std::string, std::size_t> index_;
};

ActivationMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format);
void save_matrix(const ActivationMatrix& m, const std::filesystem::path& path, MatrixFormat format);

LabelVector load_labels(const std::filesystem::path& path);
void save_labels(const LabelVector& labels, const std::filesystem::path& path);

/// Half-up rounding of size * frac; 10% of 800 is exactly 80.
std::size_t anomalous_count_for(std::size_t size, double anom_frac);

/**
 * Draws a labeled test set: round(size * anom_frac) rows with replacement from
 * `anomalous` (label 1), the rest with replacement from `clean` (label 0),
 * then shuffles the concatenation. Row ids become "<position>:<source id>" so
 * repeated draws of one source row stay distinguishable.
 */
std::pair<ActivationMatrix, LabelVector> sample_test_set(const ActivationMatrix& clean,
                                                         const ActivationMatrix& anomalous,
                                                         std::size_t size, double anom_frac,
                                                         std::uint64_t seed);

/// Same, with no anomalous pool: EmptySourceError unless the anomalous count
/// rounds to zero.
std::pair<ActivationMatrix, LabelVector> sample_test_set(const ActivationMatrix& clean,
                                                         std::size_t size, double anom_frac,
                                                         std::uint64_t seed);

}  // namespace npss
