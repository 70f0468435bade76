#include "npss/pvalues.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "binary_io.hpp"
#include "npss/errors.hpp"
#include "npss/parallel.hpp"
#include "npss/seeding.hpp"

namespace npss {

namespace {

constexpr std::string_view kPValueMagic = "NPSSPVM1";

struct Bounds {
    double lo;
    double hi;
};

}  // namespace

std::string to_string(Tail tail) {
    switch (tail) {
        case Tail::left: return "left";
        case Tail::right: return "right";
        case Tail::two: return "two";
    }
    return "unknown";
}

Tail parse_tail(const std::string& name) {
    if (name == "left") return Tail::left;
    if (name == "right") return Tail::right;
    if (name == "two") return Tail::two;
    throw ValidationError("unknown tail '" + name + "' (expected left, right or two)");
}

PValueMatrix::PValueMatrix(std::size_t rows, std::size_t cols, std::vector<double> p, std::vector<double> pmin,
                           std::vector<double> pmax, Tail tail, std::uint64_t seed, std::size_t reference_size,
                           std::vector<std::string> row_ids)
    : rows_(rows), cols_(cols), p_(std::move(p)), pmin_(std::move(pmin)), pmax_(std::move(pmax)), tail_(tail),
      seed_(seed), reference_size_(reference_size), row_ids_(std::move(row_ids)) {
    if (rows_ == 0 || cols_ == 0) throw ValidationError("p-value matrix must have at least one row and column");
    const std::size_t n = rows_ * cols_;
    if (p_.size() != n || pmin_.size() != n || pmax_.size() != n) throw ShapeError("p-value plane size mismatch");
    if (row_ids_.size() != rows_) throw ShapeError("row id count does not match row count");
    const double floor = reference_size_ > 0 ? 1.0 / (1.0 + static_cast<double>(reference_size_)) : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const bool ok = pmin_[i] > 0.0 && pmin_[i] <= p_[i] && p_[i] <= pmax_[i] && pmax_[i] <= 1.0 &&
                        pmin_[i] >= floor;
        if (!ok) {
            throw ValidationError("p-value cell (" + std::to_string(i / cols_) + ", " + std::to_string(i % cols_) +
                                  ") violates 0 < pmin <= p <= pmax <= 1");
        }
    }
}

PValueMatrix PValueMatrix::from_values(std::size_t rows, std::size_t cols, std::vector<double> p, Tail tail) {
    std::vector<std::string> ids;
    ids.reserve(rows);
    for (std::size_t r = 0; r < rows; ++r) ids.push_back("r" + std::to_string(r));
    auto lo = p;
    auto hi = p;
    return PValueMatrix(rows, cols, std::move(p), std::move(lo), std::move(hi), tail, 0, 0, std::move(ids));
}

std::vector<double> PValueMatrix::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = p_[r * cols_ + c];
    return out;
}

PValueMatrix empirical_pvalues(const ActivationMatrix& reference, const ActivationMatrix& test, Tail tail,
                               std::uint64_t seed) {
    if (reference.cols() != test.cols()) {
        throw ShapeError("reference has " + std::to_string(reference.cols()) + " nodes, test has " +
                         std::to_string(test.cols()));
    }
    const std::size_t rows = test.rows();
    const std::size_t cols = test.cols();
    const std::size_t b = reference.rows();
    const double denom = 1.0 + static_cast<double>(b);

    std::vector<double> p(rows * cols), pmin(rows * cols), pmax(rows * cols);

    parallel_for(cols, [&](std::size_t j) {
        std::vector<double> sorted(b);
        for (std::size_t i = 0; i < b; ++i) sorted[i] = reference(i, j);
        std::sort(sorted.begin(), sorted.end());

        for (std::size_t m = 0; m < rows; ++m) {
            const double z = test(m, j);
            const auto below = static_cast<double>(std::lower_bound(sorted.begin(), sorted.end(), z) - sorted.begin());
            const auto at_or_below =
                static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), z) - sorted.begin());
            const double nb = static_cast<double>(b);
            // right: #{ref > z} = B - at_or_below, #{ref >= z} = B - below
            const Bounds right{(1.0 + nb - at_or_below) / denom, (1.0 + nb - below) / denom};
            const Bounds left{(1.0 + below) / denom, (1.0 + at_or_below) / denom};

            Bounds range{};
            switch (tail) {
                case Tail::right: range = right; break;
                case Tail::left: range = left; break;
                case Tail::two:
                    range = {std::min(2.0 * std::min(left.lo, right.lo), 1.0),
                             std::min(2.0 * std::min(left.hi, right.hi), 1.0)};
                    break;
            }
            const std::size_t cell = m * cols + j;
            pmin[cell] = range.lo;
            pmax[cell] = range.hi;
            const double u = cell_uniform(seed, m, j);
            p[cell] = std::clamp(range.lo + u * (range.hi - range.lo), range.lo, range.hi);
        }
    });

    return PValueMatrix(rows, cols, std::move(p), std::move(pmin), std::move(pmax), tail, seed, b, test.row_ids());
}

double ks_uniform_distance(std::span<const double> values) {
    if (values.empty()) return 0.0;
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double x = std::clamp(sorted[i], 0.0, 1.0);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - x, x - static_cast<double>(i) / n});
    }
    return d;
}

double ks_critical_value(std::size_t n, double level) {
    if (n == 0) throw DomainError("KS critical value needs n >= 1");
    if (!(level > 0.0 && level < 1.0)) throw DomainError("KS level must lie in (0, 1)");
    const double c = std::sqrt(-0.5 * std::log(level / 2.0));
    const double root = std::sqrt(static_cast<double>(n));
    return c / (root + 0.12 + 0.11 / root);
}

std::vector<double> null_uniformity_check(const PValueMatrix& p) {
    std::vector<double> out(p.cols());
    for (std::size_t j = 0; j < p.cols(); ++j) out[j] = ks_uniform_distance(p.column(j));
    return out;
}

void save_pvalues(const PValueMatrix& p, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    BinaryWriter writer(out);
    writer.raw(kPValueMagic);
    writer.u64(p.rows());
    writer.u64(p.cols());
    writer.u8(static_cast<std::uint8_t>(p.tail()));
    writer.u64(p.seed());
    writer.u64(p.reference_size());
    writer.f64_block(p.p());
    writer.f64_block(p.pmin());
    writer.f64_block(p.pmax());
    for (const auto& id : p.row_ids()) writer.string(id);
    if (!out) throw IoError("write failed: " + path.string());
}

PValueMatrix load_pvalues(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    BinaryReader reader(in, path.string());
    reader.expect_magic(kPValueMagic);
    const std::uint64_t rows = reader.u64();
    const std::uint64_t cols = reader.u64();
    const std::uint8_t tail = reader.u8();
    if (tail > 2) throw ParseError(path.string() + ": bad tail code");
    const std::uint64_t seed = reader.u64();
    const std::uint64_t b = reader.u64();
    auto p = reader.f64_block(rows * cols);
    auto lo = reader.f64_block(rows * cols);
    auto hi = reader.f64_block(rows * cols);
    std::vector<std::string> ids;
    for (std::uint64_t r = 0; r < rows; ++r) ids.push_back(reader.string());
    reader.expect_end();
    return PValueMatrix(rows, cols, std::move(p), std::move(lo), std::move(hi), static_cast<Tail>(tail), seed, b,
                        std::move(ids));
}

}  // namespace npss
