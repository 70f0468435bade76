#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <random>

#include "npss/errors.hpp"
#include "npss/pvalues.hpp"
#include "oracles.hpp"

using namespace npss;

namespace {

ActivationMatrix column_matrix(const std::vector<double>& values, const std::string& prefix) {
    return ActivationMatrix(values.size(), 1, values, oracle::make_ids(values.size(), prefix));
}

// Small integer-valued data so ties are common.
ActivationMatrix tied_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, const std::string& prefix) {
    std::vector<double> v(rows * cols);
    for (auto& x : v) x = static_cast<double>(rng() % 7) - 3.0;
    return ActivationMatrix(rows, cols, std::move(v), oracle::make_ids(rows, prefix));
}

}  // namespace

TEST(EmpiricalPValues, NoTies) {
    const auto ref = column_matrix({0.1, 0.2, 0.3, 0.4}, "b");
    const auto p = empirical_pvalues(ref, column_matrix({0.25}, "t"), Tail::right, 1);
    EXPECT_DOUBLE_EQ(p.pmin(0, 0), 0.6);
    EXPECT_DOUBLE_EQ(p.pmax(0, 0), 0.6);
    EXPECT_DOUBLE_EQ(p(0, 0), 0.6);
}

TEST(EmpiricalPValues, TieRangeIsSampled) {
    const auto ref = column_matrix({0.2, 0.2, 0.2}, "b");
    const auto p = empirical_pvalues(ref, column_matrix({0.2}, "t"), Tail::right, 1);
    EXPECT_DOUBLE_EQ(p.pmin(0, 0), 0.25);
    EXPECT_DOUBLE_EQ(p.pmax(0, 0), 1.0);
    EXPECT_GE(p(0, 0), 0.25);
    EXPECT_LE(p(0, 0), 1.0);

    // Draws spread over the range rather than collapsing to a point.
    double lo = 1.0, hi = 0.0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const double v = empirical_pvalues(ref, column_matrix({0.2}, "t"), Tail::right, seed)(0, 0);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    EXPECT_LT(lo, 0.3);
    EXPECT_GT(hi, 0.95);
}

TEST(EmpiricalPValues, ExtremeRank) {
    const auto ref = column_matrix({1, 2, 3, 4, 5}, "b");
    const auto p = empirical_pvalues(ref, column_matrix({10}, "t"), Tail::right, 0);
    EXPECT_DOUBLE_EQ(p.pmin(0, 0), 1.0 / 6.0);
    EXPECT_DOUBLE_EQ(p.pmax(0, 0), 1.0 / 6.0);
    const auto left = empirical_pvalues(ref, column_matrix({10}, "t"), Tail::left, 0);
    EXPECT_DOUBLE_EQ(left(0, 0), 1.0);
}

TEST(EmpiricalPValues, TwoTailedDoublesTheSmallerTail) {
    const auto ref = column_matrix({1, 2, 3, 4, 5, 6, 7, 8, 9}, "b");
    const auto p = empirical_pvalues(ref, column_matrix({8.5, 0.0, 5.0}, "t"), Tail::two, 0);
    EXPECT_DOUBLE_EQ(p(0, 0), 2.0 * 2.0 / 10.0);  // right: (1+1)/10
    EXPECT_DOUBLE_EQ(p(1, 0), 2.0 * 1.0 / 10.0);  // left: (1+0)/10
    EXPECT_DOUBLE_EQ(p.pmin(2, 0), 1.0);          // capped at 1
}

TEST(EmpiricalPValues, MatchesNaiveCountOracle) {
    std::mt19937_64 rng(17);
    const auto ref = tied_matrix(rng, 40, 6, "b");
    const auto test = tied_matrix(rng, 25, 6, "t");
    const auto right = empirical_pvalues(ref, test, Tail::right, 4);
    const auto left = empirical_pvalues(ref, test, Tail::left, 4);
    const auto two = empirical_pvalues(ref, test, Tail::two, 4);
    for (std::size_t j = 0; j < 6; ++j) {
        std::vector<double> col;
        for (std::size_t b = 0; b < ref.rows(); ++b) col.push_back(ref(b, j));
        for (std::size_t m = 0; m < test.rows(); ++m) {
            const auto [rlo, rhi] = oracle::naive_right_range(col, test(m, j));
            const auto [llo, lhi] = oracle::naive_left_range(col, test(m, j));
            ASSERT_DOUBLE_EQ(right.pmin(m, j), rlo);
            ASSERT_DOUBLE_EQ(right.pmax(m, j), rhi);
            ASSERT_DOUBLE_EQ(left.pmin(m, j), llo);
            ASSERT_DOUBLE_EQ(left.pmax(m, j), lhi);
            ASSERT_DOUBLE_EQ(two.pmin(m, j), std::min(2 * std::min(llo, rlo), 1.0));
            ASSERT_DOUBLE_EQ(two.pmax(m, j), std::min(2 * std::min(lhi, rhi), 1.0));
        }
    }
}

TEST(EmpiricalPValues, InvariantsHoldOnRandomInputs) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const auto ref = tied_matrix(rng, 1 + rng() % 30, 3, "b");
        const auto test = tied_matrix(rng, 1 + rng() % 30, 3, "t");
        for (Tail tail : {Tail::left, Tail::right, Tail::two}) {
            const auto p = empirical_pvalues(ref, test, tail, rng());
            const double floor = 1.0 / (1.0 + static_cast<double>(ref.rows()));
            for (std::size_t i = 0; i < p.p().size(); ++i) {
                ASSERT_GE(p.pmin()[i], floor);
                ASSERT_LE(p.pmin()[i], p.p()[i]);
                ASSERT_LE(p.p()[i], p.pmax()[i]);
                ASSERT_LE(p.pmax()[i], 1.0);
            }
        }
    }
}

TEST(EmpiricalPValues, RightTailIsMonotone) {
    std::mt19937_64 rng(9);
    const auto ref = tied_matrix(rng, 50, 1, "b");
    std::vector<double> zs;
    for (int i = -40; i <= 40; ++i) zs.push_back(i / 10.0);
    const auto p = empirical_pvalues(ref, column_matrix(zs, "t"), Tail::right, 0);
    for (std::size_t m = 1; m < zs.size(); ++m) {
        EXPECT_LE(p.pmin(m, 0), p.pmin(m - 1, 0));
        EXPECT_LE(p.pmax(m, 0), p.pmax(m - 1, 0));
        // p may move within overlapping tie ranges, but never above the previous upper bound
        EXPECT_LE(p(m, 0), p.pmax(m - 1, 0));
    }
}

TEST(EmpiricalPValues, LeftOfValueEqualsRightOfNegation) {
    std::mt19937_64 rng(12);
    const auto ref = tied_matrix(rng, 30, 4, "b");
    const auto test = tied_matrix(rng, 20, 4, "t");
    const auto left = empirical_pvalues(ref, test, Tail::left, 77);
    const auto right = empirical_pvalues(oracle::negated(ref), oracle::negated(test), Tail::right, 77);
    EXPECT_EQ(left.pmin(), right.pmin());
    EXPECT_EQ(left.pmax(), right.pmax());
    EXPECT_EQ(left.p(), right.p());
}

TEST(EmpiricalPValues, DeterministicAcrossThreadCounts) {
    std::mt19937_64 rng(4);
    const auto ref = tied_matrix(rng, 60, 16, "b");
    const auto test = tied_matrix(rng, 40, 16, "t");
    ::setenv("NPSS_THREADS", "1", 1);
    const auto serial = empirical_pvalues(ref, test, Tail::two, 5);
    ::setenv("NPSS_THREADS", "4", 1);
    const auto parallel = empirical_pvalues(ref, test, Tail::two, 5);
    ::unsetenv("NPSS_THREADS");
    EXPECT_EQ(serial, parallel);
    EXPECT_EQ(serial, empirical_pvalues(ref, test, Tail::two, 5));
}

TEST(EmpiricalPValues, ShapeMismatch) {
    std::mt19937_64 rng(4);
    EXPECT_THROW(empirical_pvalues(tied_matrix(rng, 5, 2, "b"), tied_matrix(rng, 5, 3, "t"), Tail::right, 0),
                 ShapeError);
}

TEST(PValueMatrix, RejectsInvalidCells) {
    EXPECT_THROW(PValueMatrix::from_values(1, 1, {0.0}), ValidationError);
    EXPECT_THROW(PValueMatrix::from_values(1, 1, {1.5}), ValidationError);
    EXPECT_THROW(PValueMatrix(1, 1, {0.5}, {0.6}, {0.7}, Tail::right, 0, 0, {"a"}), ValidationError);
    // below the 1/(1+B) floor for B = 3
    EXPECT_THROW(PValueMatrix(1, 1, {0.2}, {0.2}, {0.2}, Tail::right, 0, 3, {"a"}), ValidationError);
}

TEST(PValueMatrix, FileRoundTrip) {
    std::mt19937_64 rng(6);
    const auto p = empirical_pvalues(tied_matrix(rng, 20, 3, "b"), tied_matrix(rng, 7, 3, "t"), Tail::left, 123);
    const auto path = std::filesystem::temp_directory_path() / "npss_pvalues_roundtrip.bin";
    save_pvalues(p, path);
    const auto back = load_pvalues(path);
    std::filesystem::remove(path);
    EXPECT_EQ(back, p);
    EXPECT_EQ(back.tail(), Tail::left);
    EXPECT_EQ(back.seed(), 123u);
    EXPECT_EQ(back.reference_size(), 20u);
}

TEST(KsDistance, GridOfTen) {
    std::vector<double> grid;
    for (int i = 1; i <= 10; ++i) grid.push_back(i / 10.0);
    EXPECT_NEAR(ks_uniform_distance(grid), 0.1, 1e-12);
}

TEST(KsDistance, AllOnes) {
    // ECDF is 0 just below 1 while the uniform CDF approaches 1: the supremum is 1.
    EXPECT_DOUBLE_EQ(ks_uniform_distance(std::vector<double>(10, 1.0)), 1.0);
}

TEST(KsDistance, CriticalValue) {
    EXPECT_NEAR(ks_critical_value(500), 1.3581 / (std::sqrt(500.0) + 0.12 + 0.11 / std::sqrt(500.0)), 1e-4);
    EXPECT_THROW(ks_critical_value(0), DomainError);
}

TEST(NullUniformity, MonteCarloUnderTheNull) {
    std::mt19937_64 rng(2024);
    const auto ref = oracle::gaussian_matrix(rng, 1000, 20, "b");
    const auto test = oracle::gaussian_matrix(rng, 500, 20, "t");
    const auto ks = null_uniformity_check(empirical_pvalues(ref, test, Tail::right, 1));
    const double crit = ks_critical_value(500);
    std::size_t pass = 0;
    for (double d : ks) pass += d < crit;
    EXPECT_GE(pass, 18u);
}

TEST(NullUniformity, ShiftedTestFails) {
    std::mt19937_64 rng(2025);
    const auto ref = oracle::gaussian_matrix(rng, 500, 5, "b");
    const auto test = oracle::gaussian_matrix(rng, 200, 5, "t", std::vector<double>(5, 1.0));
    for (double d : null_uniformity_check(empirical_pvalues(ref, test, Tail::right, 1))) {
        EXPECT_GT(d, ks_critical_value(200));
    }
}
