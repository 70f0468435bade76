#pragma once

// Test-only reference implementations. Nothing here calls into the scan
// machinery except score_subset, which the enumeration oracles use as the
// objective they maximize.

#include <cmath>
#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "npss/matrix_io.hpp"
#include "npss/pvalues.hpp"
#include "npss/scoring.hpp"

namespace npss::oracle {

inline std::vector<std::size_t> mask_to_indices(std::uint64_t mask, std::size_t n) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1U) out.push_back(i);
    }
    return out;
}

/// Independent per-alpha loop: max_alpha phi(alpha, N_alpha, N) from the raw cells.
inline double brute_score(const std::vector<double>& cells, const ScoreConfig& cfg) {
    double best = -1.0;
    for (double alpha : cfg.alpha_grid) {
        std::size_t below = 0;
        for (double p : cells) below += p < alpha;
        const double n = static_cast<double>(cells.size());
        const double nb = static_cast<double>(below);
        double phi = 0.0;
        if (!(cfg.one_sided_gate && nb <= n * alpha * (1 + 1e-12))) {
            if (cfg.statistic == Statistic::hc) {
                phi = std::abs(nb - n * alpha) / std::sqrt(n * alpha * (1 - alpha));
            } else {
                const double x = nb / n;
                const double a = x > 0 ? x * std::log(x / alpha) : 0.0;
                const double b = x < 1 ? (1 - x) * std::log((1 - x) / (1 - alpha)) : 0.0;
                phi = n * (a + b);
            }
        }
        best = std::max(best, phi);
    }
    return best;
}

inline std::vector<double> gather(const PValueMatrix& p, const std::vector<std::size_t>& rows,
                                  const std::vector<std::size_t>& cols) {
    std::vector<double> cells;
    for (auto r : rows) {
        for (auto c : cols) cells.push_back(p(r, c));
    }
    return cells;
}

/// Max of F over all non-empty row subsets, columns fixed.
inline double exhaustive_rows_max(const PValueMatrix& p, const std::vector<std::size_t>& cols,
                                  const ScoreConfig& cfg) {
    double best = -1.0;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << p.rows()); ++mask) {
        best = std::max(best, brute_score(gather(p, mask_to_indices(mask, p.rows()), cols), cfg));
    }
    return best;
}

/// Max of F over every (row subset, column subset) pair.
inline double exhaustive_global_max(const PValueMatrix& p, const ScoreConfig& cfg) {
    double best = -1.0;
    for (std::uint64_t rm = 1; rm < (std::uint64_t{1} << p.rows()); ++rm) {
        const auto rows = mask_to_indices(rm, p.rows());
        for (std::uint64_t cm = 1; cm < (std::uint64_t{1} << p.cols()); ++cm) {
            best = std::max(best, brute_score(gather(p, rows, mask_to_indices(cm, p.cols())), cfg));
        }
    }
    return best;
}

/// Naive O(B) right-tail tie range for one test value.
inline std::pair<double, double> naive_right_range(const std::vector<double>& ref, double z) {
    double ge = 0, gt = 0;
    for (double v : ref) {
        ge += v >= z;
        gt += v > z;
    }
    const double d = 1.0 + static_cast<double>(ref.size());
    return {(1 + gt) / d, (1 + ge) / d};
}

inline std::pair<double, double> naive_left_range(const std::vector<double>& ref, double z) {
    double le = 0, lt = 0;
    for (double v : ref) {
        le += v <= z;
        lt += v < z;
    }
    const double d = 1.0 + static_cast<double>(ref.size());
    return {(1 + lt) / d, (1 + le) / d};
}

inline std::vector<std::string> make_ids(std::size_t n, const std::string& prefix) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back(prefix + std::to_string(i));
    return ids;
}

/// Uniform(0,1] p-values.
inline std::vector<double> uniform_cells(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = 1.0 - u(rng);
    return v;
}

/// Uniform matrix with a planted block of p = 0.001 in the given rows/cols.
inline PValueMatrix planted_block(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                                  const std::vector<std::size_t>& block_rows,
                                  const std::vector<std::size_t>& block_cols) {
    auto cells = uniform_cells(rng, rows * cols);
    for (auto r : block_rows) {
        for (auto c : block_cols) cells[r * cols + c] = 0.001;
    }
    return PValueMatrix::from_values(rows, cols, std::move(cells));
}

/// Rows of iid N(0,1) per node, each shifted by shifts[j] (empty = none).
inline ActivationMatrix gaussian_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                                        const std::string& prefix, const std::vector<double>& shifts = {}) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> values(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) values[r * cols + c] = normal(rng) + (shifts.empty() ? 0.0 : shifts[c]);
    }
    return ActivationMatrix(rows, cols, std::move(values), make_ids(rows, prefix));
}

/// Stack two matrices vertically.
inline ActivationMatrix vstack(const ActivationMatrix& a, const ActivationMatrix& b) {
    std::vector<double> values = a.values();
    values.insert(values.end(), b.values().begin(), b.values().end());
    std::vector<std::string> ids = a.row_ids();
    ids.insert(ids.end(), b.row_ids().begin(), b.row_ids().end());
    return ActivationMatrix(a.rows() + b.rows(), a.cols(), std::move(values), std::move(ids));
}

inline ActivationMatrix negated(const ActivationMatrix& m) {
    std::vector<double> values = m.values();
    for (auto& v : values) v = -v;
    return ActivationMatrix(m.rows(), m.cols(), std::move(values), m.row_ids());
}

}  // namespace npss::oracle

namespace npss {

inline void PrintTo(Statistic s, std::ostream* os) { *os << to_string(s); }

}  // namespace npss
