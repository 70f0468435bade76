#include "npss/fgss.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "npss/errors.hpp"
#include "npss/parallel.hpp"
#include "npss/seeding.hpp"

namespace npss {

namespace {

enum class Axis { rows, cols };

// For every cell, the index of the first grid alpha with p < alpha (grid
// size if none). A cell counts toward N_alpha[i] iff level <= i.
class LevelMatrix {
public:
    LevelMatrix(const PValueMatrix& p, const std::vector<double>& grid)
        : rows_(p.rows()), cols_(p.cols()), grid_size_(grid.size()), levels_(rows_ * cols_) {
        for (std::size_t i = 0; i < levels_.size(); ++i) {
            const double v = p.p()[i];
            levels_[i] = static_cast<std::uint16_t>(std::upper_bound(grid.begin(), grid.end(), v) - grid.begin());
        }
    }

    std::size_t extent(Axis axis) const { return axis == Axis::rows ? rows_ : cols_; }
    std::size_t grid_size() const { return grid_size_; }

    std::uint16_t level(Axis axis, std::size_t element, std::size_t other) const {
        return axis == Axis::rows ? levels_[element * cols_ + other] : levels_[other * cols_ + element];
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::size_t grid_size_;
    std::vector<std::uint16_t> levels_;
};

void check_indices(std::span<const std::size_t> idx, std::size_t bound, const char* what) {
    if (idx.empty()) throw IndexError(std::string("fixed ") + what + " set must not be empty");
    for (std::size_t i : idx) {
        if (i >= bound) throw IndexError(std::string(what) + " index " + std::to_string(i) + " out of range");
    }
}

// Returns the maximizing subset of `axis` elements and its raw maximum score.
std::vector<std::size_t> optimize_axis(const LevelMatrix& levels, Axis axis, std::span<const std::size_t> fixed,
                                       const ScoreConfig& cfg) {
    const std::size_t extent = levels.extent(axis);
    const std::size_t grid = levels.grid_size();

    // counts[e * grid + i] = #{f in fixed : p(e, f) < alpha_i}
    std::vector<std::size_t> counts(extent * grid, 0);
    std::vector<std::size_t> hist(grid + 1);
    for (std::size_t e = 0; e < extent; ++e) {
        std::fill(hist.begin(), hist.end(), 0);
        for (std::size_t f : fixed) ++hist[levels.level(axis, e, f)];
        std::size_t running = 0;
        for (std::size_t i = 0; i < grid; ++i) {
            running += hist[i];
            counts[e * grid + i] = running;
        }
    }

    double best_score = -1.0;
    std::size_t best_len = 0;
    std::vector<std::size_t> best_order;
    std::vector<std::size_t> order(extent);
    const std::size_t per_element = fixed.size();

    for (std::size_t i = 0; i < grid; ++i) {
        const double alpha = cfg.alpha_grid[i];
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const std::size_t ca = counts[a * grid + i];
            const std::size_t cb = counts[b * grid + i];
            return ca != cb ? ca > cb : a < b;
        });

        std::size_t n_alpha = 0;
        bool improved = false;
        for (std::size_t k = 1; k <= extent; ++k) {
            n_alpha += counts[order[k - 1] * grid + i];
            const double s = statistic_value(cfg, alpha, n_alpha, k * per_element);
            if (s > best_score) {
                best_score = s;
                best_len = k;
                improved = true;
            }
        }
        if (improved) best_order = order;
    }

    std::vector<std::size_t> subset(best_order.begin(), best_order.begin() + static_cast<std::ptrdiff_t>(best_len));
    std::sort(subset.begin(), subset.end());
    return subset;
}

ConditionalOptimum conditional(const PValueMatrix& p, const LevelMatrix& levels, Axis axis,
                               std::span<const std::size_t> fixed, const ScoreConfig& cfg) {
    ConditionalOptimum out;
    out.subset = optimize_axis(levels, axis, fixed, cfg);
    out.score = axis == Axis::rows ? score_subset(p, out.subset, fixed, cfg) : score_subset(p, fixed, out.subset, cfg);
    return out;
}

std::vector<std::size_t> random_subset(Rng& rng, std::size_t n) {
    std::vector<std::size_t> out;
    while (out.empty()) {
        for (std::size_t i = 0; i < n; ++i) {
            if (rng() >> 63) out.push_back(i);
        }
    }
    return out;
}

ScanResult restart_with_levels(const PValueMatrix& p, const LevelMatrix& levels, const ScanConfig& cfg,
                               std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::size_t> rows = random_subset(rng, p.rows());
    std::vector<std::size_t> cols = random_subset(rng, p.cols());

    ScanResult result;
    double current = -1.0;
    SubsetScore current_score;
    std::size_t stable_steps = 0;
    bool first = true;

    // A step is accepted only if it improves by more than the tolerance, so
    // two consecutive rejected steps mean the current subset is within
    // tolerance of optimal along both axes.
    auto step = [&](Axis axis) {
        const auto& fixed = axis == Axis::rows ? cols : rows;
        ConditionalOptimum opt = conditional(p, levels, axis, fixed, cfg.score_cfg);
        if (!first && opt.score.score < current) {
            throw std::logic_error("subset scan ascent violated: conditional optimum below current score");
        }
        if (first || opt.score.score > current + cfg.score_tolerance) {
            (axis == Axis::rows ? rows : cols) = std::move(opt.subset);
            current = opt.score.score;
            current_score = opt.score;
            result.score_trace.push_back(current);
            stable_steps = 0;
            first = false;
        } else {
            ++stable_steps;
        }
    };

    std::size_t rounds = 0;
    while (rounds < cfg.max_alternations) {
        ++rounds;
        step(Axis::rows);
        if (stable_steps >= 2) break;
        step(Axis::cols);
        if (stable_steps >= 2) break;
    }

    result.rows = std::move(rows);
    result.cols = std::move(cols);
    result.row_ids.reserve(result.rows.size());
    for (std::size_t r : result.rows) result.row_ids.push_back(p.row_ids()[r]);
    result.score = current_score.score;
    result.best_alpha = current_score.best_alpha;
    result.alternations = rounds;
    result.statistic = cfg.score_cfg.statistic;
    result.tail = p.tail();
    result.seed = cfg.seed;
    result.restarts = 1;
    return result;
}

}  // namespace

void ScanConfig::validate() const {
    if (restarts < 1) throw ValidationError("restarts must be at least 1");
    if (max_alternations < 1) throw ValidationError("max_alternations must be at least 1");
    if (!(score_tolerance >= 0.0)) throw ValidationError("score_tolerance must be non-negative");
    score_cfg.validate();
    if (score_cfg.alpha_grid.size() >= 0xFFFF) throw ValidationError("alpha grid too large");
}

ConditionalOptimum optimize_rows(const PValueMatrix& p, std::span<const std::size_t> fixed_cols,
                                 const ScoreConfig& cfg) {
    cfg.validate();
    check_indices(fixed_cols, p.cols(), "column");
    return conditional(p, LevelMatrix(p, cfg.alpha_grid), Axis::rows, fixed_cols, cfg);
}

ConditionalOptimum optimize_cols(const PValueMatrix& p, std::span<const std::size_t> fixed_rows,
                                 const ScoreConfig& cfg) {
    cfg.validate();
    check_indices(fixed_rows, p.rows(), "row");
    return conditional(p, LevelMatrix(p, cfg.alpha_grid), Axis::cols, fixed_rows, cfg);
}

ScanResult single_restart(const PValueMatrix& p, const ScanConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    return restart_with_levels(p, LevelMatrix(p, cfg.score_cfg.alpha_grid), cfg, seed);
}

std::uint64_t restart_seed(std::uint64_t seed, std::size_t index) { return derive_seed(seed, "restart", index); }

ScanResult scan(const PValueMatrix& p, const ScanConfig& cfg) {
    cfg.validate();
    const LevelMatrix levels(p, cfg.score_cfg.alpha_grid);

    std::vector<ScanResult> results(cfg.restarts);
    parallel_for(cfg.restarts, [&](std::size_t r) {
        results[r] = restart_with_levels(p, levels, cfg, restart_seed(cfg.seed, r));
    });

    std::size_t winner = 0;
    for (std::size_t r = 1; r < results.size(); ++r) {
        if (results[r].score > results[winner].score) winner = r;
    }
    ScanResult best = std::move(results[winner]);
    best.restart_index = winner;
    best.restarts = cfg.restarts;
    return best;
}

}  // namespace npss
