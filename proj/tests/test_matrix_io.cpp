#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "npss/errors.hpp"
#include "npss/matrix_io.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace npss;

namespace {

class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("npss_io_" + std::to_string(std::random_device{}()))) {
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

ActivationMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    std::vector<double> v(rows * cols);
    for (auto& x : v) x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 20) - 10);
    return ActivationMatrix(rows, cols, std::move(v), oracle::make_ids(rows, "row"));
}

}  // namespace

TEST(LoadMatrix, ParsesCsv) {
    TempDir dir;
    write_file(dir / "m.csv", "id,n0,n1\na,0.1,0.2\nb,0.3,0.4\n");
    const auto m = load_matrix(dir / "m.csv", MatrixFormat::csv);
    ASSERT_EQ(m.rows(), 2u);
    ASSERT_EQ(m.cols(), 2u);
    EXPECT_EQ(m.row_ids(), (std::vector<std::string>{"a", "b"}));
    EXPECT_DOUBLE_EQ(m(0, 1), 0.2);
    EXPECT_DOUBLE_EQ(m(1, 0), 0.3);
}

TEST(LoadMatrix, RejectsNonFinite) {
    TempDir dir;
    for (const char* bad : {"NaN", "nan", "inf", "-Infinity"}) {
        write_file(dir / "m.csv", std::string("id,n0,n1\na,0.1,") + bad + "\n");
        EXPECT_THROW(load_matrix(dir / "m.csv", MatrixFormat::csv), ValidationError) << bad;
    }
}

TEST(LoadMatrix, ParseErrors) {
    TempDir dir;
    write_file(dir / "ragged.csv", "id,n0,n1\na,0.1,0.2\nb,0.3\n");
    EXPECT_THROW(load_matrix(dir / "ragged.csv", MatrixFormat::csv), ParseError);
    write_file(dir / "cell.csv", "id,n0\na,0.1x\n");
    EXPECT_THROW(load_matrix(dir / "cell.csv", MatrixFormat::csv), ParseError);
    write_file(dir / "empty.csv", "id,n0\na,\n");
    EXPECT_THROW(load_matrix(dir / "empty.csv", MatrixFormat::csv), ParseError);
    write_file(dir / "header.csv", "name,n0\na,1\n");
    EXPECT_THROW(load_matrix(dir / "header.csv", MatrixFormat::csv), ParseError);
    write_file(dir / "bad.bin", "NOTMAGIC");
    EXPECT_THROW(load_matrix(dir / "bad.bin", MatrixFormat::bin), ParseError);
}

TEST(LoadMatrix, DuplicateIdsAndMissingFile) {
    TempDir dir;
    write_file(dir / "dup.csv", "id,n0\na,1\na,2\n");
    EXPECT_THROW(load_matrix(dir / "dup.csv", MatrixFormat::csv), ValidationError);
    EXPECT_THROW(load_matrix(dir / "missing.csv", MatrixFormat::csv), IoError);
    write_file(dir / "noheader.csv", "");
    EXPECT_THROW(load_matrix(dir / "noheader.csv", MatrixFormat::csv), ParseError);
    write_file(dir / "norows.csv", "id,n0\n");
    EXPECT_THROW(load_matrix(dir / "norows.csv", MatrixFormat::csv), ValidationError);
}

TEST(LoadMatrix, ToleratesCrlf) {
    TempDir dir;
    write_file(dir / "m.csv", "id,n0\r\na,1.5\r\n");
    EXPECT_DOUBLE_EQ(load_matrix(dir / "m.csv", MatrixFormat::csv)(0, 0), 1.5);
}

TEST(SaveMatrix, SingleZeroCell) {
    TempDir dir;
    const ActivationMatrix m(1, 1, {0.0}, {"only"});
    for (auto fmt : {MatrixFormat::csv, MatrixFormat::bin}) {
        save_matrix(m, dir / "z", fmt);
        EXPECT_EQ(load_matrix(dir / "z", fmt)(0, 0), 0.0);
    }
}

TEST(SaveMatrix, BinRoundTripIsExactAndByteStable) {
    TempDir dir;
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        const auto m = random_matrix(rng, 1 + rng() % 12, 1 + rng() % 9);
        save_matrix(m, dir / "a.bin", MatrixFormat::bin);
        const auto back = load_matrix(dir / "a.bin", MatrixFormat::bin);
        ASSERT_EQ(back, m);
        save_matrix(back, dir / "b.bin", MatrixFormat::bin);
        ASSERT_EQ(read_bytes(dir / "a.bin"), read_bytes(dir / "b.bin"));
    }
}

TEST(SaveMatrix, BinLayout) {
    TempDir dir;
    save_matrix(ActivationMatrix(1, 1, {1.0}, {"x"}), dir / "m.bin", MatrixFormat::bin);
    const std::string bytes = read_bytes(dir / "m.bin");
    // magic + M + J + one f64 + (u64 length + "x")
    ASSERT_EQ(bytes.size(), 8u + 8 + 8 + 8 + 8 + 1);
    EXPECT_EQ(bytes.substr(0, 8), "NPSSMAT1");
    EXPECT_EQ(bytes[8], 1);
    EXPECT_EQ(bytes[16], 1);
    EXPECT_EQ(static_cast<unsigned char>(bytes[31]), 0x3F);  // 1.0 little-endian high byte
    EXPECT_EQ(bytes.back(), 'x');
}

TEST(SaveMatrix, CsvRoundTripWithinTolerance) {
    TempDir dir;
    std::mt19937_64 rng(5);
    const auto m = random_matrix(rng, 10, 7);
    save_matrix(m, dir / "m.csv", MatrixFormat::csv);
    const auto back = load_matrix(dir / "m.csv", MatrixFormat::csv);
    ASSERT_EQ(back.row_ids(), m.row_ids());
    for (std::size_t i = 0; i < m.values().size(); ++i) {
        EXPECT_NEAR(back.values()[i], m.values()[i], 1e-12 * std::max(1.0, std::abs(m.values()[i])));
    }
}

TEST(Labels, LoadAlignAndValidate) {
    TempDir dir;
    write_file(dir / "l.csv", "id,label\na,0\nb,1\nc,1\n");
    const auto labels = load_labels(dir / "l.csv");
    EXPECT_EQ(labels.anomalous_count(), 2u);
    EXPECT_EQ(labels.aligned_to({"c", "a", "b"}), (std::vector<int>{1, 0, 1}));
    EXPECT_THROW(labels.aligned_to({"a", "b", "z"}), LabelMismatchError);
    EXPECT_THROW(labels.aligned_to({"a"}), LabelMismatchError);

    write_file(dir / "bad.csv", "id,label\na,2\n");
    EXPECT_THROW(load_labels(dir / "bad.csv"), ValidationError);
    write_file(dir / "dup.csv", "id,label\na,1\na,0\n");
    EXPECT_THROW(load_labels(dir / "dup.csv"), ValidationError);

    save_labels(labels, dir / "out.csv");
    EXPECT_EQ(load_labels(dir / "out.csv"), labels);
}

TEST(SampleTestSet, ProtocolCounts) {
    std::mt19937_64 rng(3);
    const auto clean = oracle::gaussian_matrix(rng, 100, 4, "c");
    const auto anom = oracle::gaussian_matrix(rng, 30, 4, "a");
    auto [test, labels] = sample_test_set(clean, anom, 800, 0.1, 42);
    EXPECT_EQ(test.rows(), 800u);
    EXPECT_EQ(labels.anomalous_count(), 80u);
    EXPECT_EQ(labels.ids(), test.row_ids());
    // labeled rows really come from the anomalous pool
    for (std::size_t i = 0; i < test.rows(); ++i) {
        const bool from_anom = test.row_ids()[i].find(":a") != std::string::npos;
        EXPECT_EQ(from_anom, labels.labels()[i] == 1);
    }
}

TEST(SampleTestSet, NoAnomalies) {
    std::mt19937_64 rng(3);
    const auto clean = oracle::gaussian_matrix(rng, 10, 2, "c");
    auto [test, labels] = sample_test_set(clean, 25, 0.0, 1);
    EXPECT_EQ(test.rows(), 25u);
    EXPECT_EQ(labels.anomalous_count(), 0u);
    EXPECT_THROW(sample_test_set(clean, 25, 0.5, 1), EmptySourceError);
}

TEST(SampleTestSet, DeterministicBySeed) {
    std::mt19937_64 rng(8);
    const auto clean = oracle::gaussian_matrix(rng, 50, 3, "c");
    const auto anom = oracle::gaussian_matrix(rng, 20, 3, "a");
    auto a = sample_test_set(clean, anom, 60, 0.25, 99);
    auto b = sample_test_set(clean, anom, 60, 0.25, 99);
    auto c = sample_test_set(clean, anom, 60, 0.25, 100);
    EXPECT_EQ(a.first, b.first);
    EXPECT_EQ(a.second, b.second);
    EXPECT_NE(a.first, c.first);
}

TEST(SampleTestSet, ShapeErrors) {
    std::mt19937_64 rng(8);
    const auto clean = oracle::gaussian_matrix(rng, 5, 3, "c");
    const auto anom = oracle::gaussian_matrix(rng, 5, 4, "a");
    EXPECT_THROW(sample_test_set(clean, anom, 10, 0.1, 1), ShapeError);
    EXPECT_THROW(sample_test_set(clean, clean, 0, 0.1, 1), ValidationError);
}

TEST(SampleTestSet, AnomalousCountPropertyOverRandomInputs) {
    std::mt19937_64 rng(21);
    const auto clean = oracle::gaussian_matrix(rng, 20, 2, "c");
    const auto anom = oracle::gaussian_matrix(rng, 20, 2, "a");
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t size = 1 + rng() % 500;
        const double frac = static_cast<double>(rng() % 1001) / 1000.0;
        auto [test, labels] = sample_test_set(clean, anom, size, frac, rng());
        const auto expected = static_cast<std::size_t>(std::floor(static_cast<double>(size) * frac + 0.5 + 1e-9));
        ASSERT_EQ(labels.anomalous_count(), std::min(size, expected)) << size << " " << frac;
    }
    EXPECT_EQ(anomalous_count_for(800, 0.1), 80u);
    EXPECT_EQ(anomalous_count_for(5, 0.5), 3u);  // half-up
    EXPECT_EQ(anomalous_count_for(400, 0.1), 40u);
}
