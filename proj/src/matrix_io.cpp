#include "npss/matrix_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "binary_io.hpp"
#include "npss/errors.hpp"
#include "npss/seeding.hpp"

namespace npss {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kMatrixMagic = "NPSSMAT1";

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.emplace_back(line.substr(start));
            return cells;
        }
        cells.emplace_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view cell, std::size_t line_no) {
    cell = trim(cell);
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": malformed number '" + std::string(cell) + "'");
    }
    return value;
}

std::vector<std::string> read_lines(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
    }
    if (in.bad()) throw IoError("read failed: " + path.string());
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

ActivationMatrix load_csv(const fs::path& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw ParseError(path.string() + ": missing header row");
    const auto header = split_csv_line(lines[0]);
    if (header.size() < 2 || trim(header[0]) != "id") {
        throw ParseError(path.string() + ": header must start with 'id' followed by node columns");
    }
    const std::size_t cols = header.size() - 1;
    const std::size_t rows = lines.size() - 1;

    std::vector<double> values;
    values.reserve(rows * cols);
    std::vector<std::string> ids;
    ids.reserve(rows);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_csv_line(lines[i]);
        if (cells.size() != header.size()) {
            throw ParseError("line " + std::to_string(i + 1) + ": expected " + std::to_string(header.size()) +
                             " cells, found " + std::to_string(cells.size()));
        }
        ids.emplace_back(trim(cells[0]));
        for (std::size_t c = 1; c < cells.size(); ++c) values.push_back(parse_double(cells[c], i + 1));
    }
    return ActivationMatrix(rows, cols, std::move(values), std::move(ids));
}

void save_csv(const ActivationMatrix& m, const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "id";
    for (std::size_t c = 0; c < m.cols(); ++c) out << ",n" << c;
    out << '\n';
    char buf[64];
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out << m.row_ids()[r];
        for (double v : m.row(r)) {
            auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
            out << ',' << std::string_view(buf, static_cast<std::size_t>(end - buf));
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

ActivationMatrix load_bin(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    BinaryReader reader(in, path.string());
    reader.expect_magic(kMatrixMagic);
    const std::uint64_t rows = reader.u64();
    const std::uint64_t cols = reader.u64();
    if (rows == 0 || cols == 0) throw ValidationError(path.string() + ": empty matrix");
    std::vector<double> values = reader.f64_block(rows * cols);
    std::vector<std::string> ids;
    ids.reserve(rows);
    for (std::uint64_t r = 0; r < rows; ++r) ids.push_back(reader.string());
    reader.expect_end();
    return ActivationMatrix(rows, cols, std::move(values), std::move(ids));
}

void save_bin(const ActivationMatrix& m, const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    BinaryWriter writer(out);
    writer.raw(kMatrixMagic);
    writer.u64(m.rows());
    writer.u64(m.cols());
    writer.f64_block(m.values());
    for (const auto& id : m.row_ids()) writer.string(id);
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

MatrixFormat parse_matrix_format(const std::string& name) {
    if (name == "csv") return MatrixFormat::csv;
    if (name == "bin") return MatrixFormat::bin;
    throw ValidationError("unknown matrix format '" + name + "' (expected csv or bin)");
}

MatrixFormat format_from_path(const fs::path& path) {
    return path.extension() == ".bin" ? MatrixFormat::bin : MatrixFormat::csv;
}

ActivationMatrix::ActivationMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                                   std::vector<std::string> row_ids, std::optional<std::string> layer_tag)
    : rows_(rows), cols_(cols), values_(std::move(values)), row_ids_(std::move(row_ids)),
      layer_tag_(std::move(layer_tag)) {
    if (rows_ == 0 || cols_ == 0) throw ValidationError("activation matrix must have at least one row and column");
    if (values_.size() != rows_ * cols_) {
        throw ShapeError("value count " + std::to_string(values_.size()) + " does not match " +
                         std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    if (row_ids_.size() != rows_) throw ShapeError("row id count does not match row count");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw ValidationError("non-finite value at row " + std::to_string(i / cols_) + ", column " +
                                  std::to_string(i % cols_));
        }
    }
    std::unordered_set<std::string_view> seen;
    seen.reserve(rows_);
    for (const auto& id : row_ids_) {
        if (!seen.insert(id).second) throw ValidationError("duplicate row id '" + id + "'");
    }
}

ActivationMatrix ActivationMatrix::select_rows(std::span<const std::size_t> indices) const {
    std::vector<double> values;
    values.reserve(indices.size() * cols_);
    std::vector<std::string> ids;
    ids.reserve(indices.size());
    for (std::size_t r : indices) {
        if (r >= rows_) throw IndexError("row index " + std::to_string(r) + " out of range");
        auto src = row(r);
        values.insert(values.end(), src.begin(), src.end());
        ids.push_back(row_ids_[r]);
    }
    return ActivationMatrix(indices.size(), cols_, std::move(values), std::move(ids), layer_tag_);
}

ActivationMatrix load_matrix(const fs::path& path, MatrixFormat format) {
    if (!fs::exists(path)) throw IoError("no such file: " + path.string());
    return format == MatrixFormat::bin ? load_bin(path) : load_csv(path);
}

void save_matrix(const ActivationMatrix& m, const fs::path& path, MatrixFormat format) {
    if (format == MatrixFormat::bin) {
        save_bin(m, path);
    } else {
        save_csv(m, path);
    }
}

LabelVector::LabelVector(std::vector<std::string> ids, std::vector<int> labels)
    : ids_(std::move(ids)), labels_(std::move(labels)) {
    if (ids_.size() != labels_.size()) throw ShapeError("label and id counts differ");
    index_.reserve(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        if (labels_[i] != 0 && labels_[i] != 1) {
            throw ValidationError("label for '" + ids_[i] + "' must be 0 or 1");
        }
        if (!index_.emplace(ids_[i], i).second) throw ValidationError("duplicate label id '" + ids_[i] + "'");
    }
}

std::size_t LabelVector::anomalous_count() const noexcept {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), 1));
}

int LabelVector::at(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw LabelMismatchError("no label for row id '" + id + "'");
    return labels_[it->second];
}

std::vector<int> LabelVector::aligned_to(const std::vector<std::string>& row_ids) const {
    if (row_ids.size() != ids_.size()) {
        throw LabelMismatchError("label count " + std::to_string(ids_.size()) + " does not match row count " +
                                 std::to_string(row_ids.size()));
    }
    std::vector<int> out;
    out.reserve(row_ids.size());
    for (const auto& id : row_ids) out.push_back(at(id));
    return out;
}

LabelVector load_labels(const fs::path& path) {
    if (!fs::exists(path)) throw IoError("no such file: " + path.string());
    const auto lines = read_lines(path);
    if (lines.empty()) throw ParseError(path.string() + ": missing header row");
    const auto header = split_csv_line(lines[0]);
    if (header.size() != 2 || trim(header[0]) != "id" || trim(header[1]) != "label") {
        throw ParseError(path.string() + ": label header must be 'id,label'");
    }
    std::vector<std::string> ids;
    std::vector<int> labels;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_csv_line(lines[i]);
        if (cells.size() != 2) throw ParseError("line " + std::to_string(i + 1) + ": expected 2 cells");
        const auto value = trim(cells[1]);
        if (value != "0" && value != "1") {
            throw ValidationError("line " + std::to_string(i + 1) + ": label must be 0 or 1");
        }
        ids.emplace_back(trim(cells[0]));
        labels.push_back(value == "1" ? 1 : 0);
    }
    return LabelVector(std::move(ids), std::move(labels));
}

void save_labels(const LabelVector& labels, const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "id,label\n";
    for (std::size_t i = 0; i < labels.size(); ++i) out << labels.ids()[i] << ',' << labels.labels()[i] << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

std::size_t anomalous_count_for(std::size_t size, double anom_frac) {
    if (!(anom_frac >= 0.0 && anom_frac <= 1.0)) throw ValidationError("anom_frac must lie in [0, 1]");
    // The epsilon absorbs representation error such as 800 * 0.1.
    const double exact = static_cast<double>(size) * anom_frac;
    return std::min(size, static_cast<std::size_t>(std::floor(exact + 0.5 + 1e-9)));
}

namespace {

std::pair<ActivationMatrix, LabelVector> sample_impl(const ActivationMatrix& clean, const ActivationMatrix* anomalous,
                                                     std::size_t size, double anom_frac, std::uint64_t seed) {
    if (size == 0) throw ValidationError("test set size must be at least 1");
    const std::size_t n_anom = anomalous_count_for(size, anom_frac);
    if (n_anom > 0 && anomalous == nullptr) throw EmptySourceError("anom_frac > 0 but no anomalous rows available");
    if (anomalous != nullptr && anomalous->cols() != clean.cols()) {
        throw ShapeError("clean has " + std::to_string(clean.cols()) + " columns, anomalous has " +
                         std::to_string(anomalous->cols()));
    }

    Rng rng(seed);
    struct Draw {
        const ActivationMatrix* source;
        std::size_t row;
        int label;
    };
    std::vector<Draw> draws;
    draws.reserve(size);
    for (std::size_t i = 0; i < n_anom; ++i) draws.push_back({anomalous, uniform_index(rng, anomalous->rows()), 1});
    for (std::size_t i = n_anom; i < size; ++i) draws.push_back({&clean, uniform_index(rng, clean.rows()), 0});
    for (std::size_t i = draws.size(); i > 1; --i) std::swap(draws[i - 1], draws[uniform_index(rng, i)]);

    std::vector<double> values;
    values.reserve(size * clean.cols());
    std::vector<std::string> ids;
    std::vector<int> labels;
    ids.reserve(size);
    labels.reserve(size);
    for (std::size_t i = 0; i < draws.size(); ++i) {
        const auto& d = draws[i];
        auto src = d.source->row(d.row);
        values.insert(values.end(), src.begin(), src.end());
        ids.push_back(std::to_string(i) + ":" + d.source->row_ids()[d.row]);
        labels.push_back(d.label);
    }
    LabelVector label_vec(ids, std::move(labels));
    return {ActivationMatrix(size, clean.cols(), std::move(values), std::move(ids), clean.layer_tag()),
            std::move(label_vec)};
}

}  // namespace

std::pair<ActivationMatrix, LabelVector> sample_test_set(const ActivationMatrix& clean,
                                                         const ActivationMatrix& anomalous, std::size_t size,
                                                         double anom_frac, std::uint64_t seed) {
    return sample_impl(clean, &anomalous, size, anom_frac, seed);
}

std::pair<ActivationMatrix, LabelVector> sample_test_set(const ActivationMatrix& clean, std::size_t size,
                                                         double anom_frac, std::uint64_t seed) {
    return sample_impl(clean, nullptr, size, anom_frac, seed);
}

}  // namespace npss
