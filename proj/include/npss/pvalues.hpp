#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "npss/matrix_io.hpp"

namespace npss {

enum class Tail { left, right, two };

std::string to_string(Tail tail);
Tail parse_tail(const std::string& name);

/**
 * Empirical p-values of a test matrix against a reference matrix, one per
 * (row, node) cell, together with the tie range each value was drawn from.
 *
 * Invariant: 0 < pmin <= p <= pmax <= 1 for every cell, and pmin >= 1/(1+B)
 * whenever the matrix came from a reference of size B. A reference_size of
 * 0 marks a matrix built directly from p-values (tests, simulations).
 */
class PValueMatrix {
public:
    PValueMatrix(std::size_t rows, std::size_t cols, std::vector<double> p, std::vector<double> pmin,
                 std::vector<double> pmax, Tail tail, std::uint64_t seed, std::size_t reference_size,
                 std::vector<std::string> row_ids);

    /// Matrix with degenerate tie ranges (pmin = p = pmax) and ids "r0".."r{M-1}".
    static PValueMatrix from_values(std::size_t rows, std::size_t cols, std::vector<double> p,
                                    Tail tail = Tail::right);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return p_[r * cols_ + c]; }
    double pmin(std::size_t r, std::size_t c) const noexcept { return pmin_[r * cols_ + c]; }
    double pmax(std::size_t r, std::size_t c) const noexcept { return pmax_[r * cols_ + c]; }

    const std::vector<double>& p() const noexcept { return p_; }
    const std::vector<double>& pmin() const noexcept { return pmin_; }
    const std::vector<double>& pmax() const noexcept { return pmax_; }
    Tail tail() const noexcept { return tail_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::size_t reference_size() const noexcept { return reference_size_; }
    const std::vector<std::string>& row_ids() const noexcept { return row_ids_; }

    /// p-values of one node across all rows.
    std::vector<double> column(std::size_t c) const;

    friend bool operator==(const PValueMatrix&, const PValueMatrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> p_;
    std::vector<double> pmin_;
    std::vector<double> pmax_;
    Tail tail_;
    std::uint64_t seed_;
    std::size_t reference_size_;
    std::vector<std::string> row_ids_;
};

/**
 * Rank-based p-values per node. For the right tail
 *
 *   pmax = (1 + #{b : ref_b >= z}) / (1 + B),   pmin = (1 + #{b : ref_b > z}) / (1 + B)
 *
 * and the left tail mirrors with <= / <. The two-tailed bounds are
 * min(2 * min(left, right), 1) applied to pmin and pmax separately. The
 * reported p is drawn uniformly from [pmin, pmax] with a stream keyed by
 * (seed, row, node).
 */
PValueMatrix empirical_pvalues(const ActivationMatrix& reference, const ActivationMatrix& test, Tail tail,
                               std::uint64_t seed);

/// Kolmogorov-Smirnov distance between the ECDF of `values` and Uniform(0,1).
double ks_uniform_distance(std::span<const double> values);

/// Two-sided KS critical value at `level` for sample size n (Stephens'
/// finite-sample correction of the asymptotic Kolmogorov quantile).
double ks_critical_value(std::size_t n, double level = 0.05);

/// Per-node KS distance of the p-values to Uniform(0,1).
std::vector<double> null_uniformity_check(const PValueMatrix& p);

void save_pvalues(const PValueMatrix& p, const std::filesystem::path& path);
PValueMatrix load_pvalues(const std::filesystem::path& path);

}  // namespace npss
