#pragma once

// Little-endian primitives shared by the matrix and p-value file formats.

#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "npss/errors.hpp"

namespace npss {

class BinaryWriter {
public:
    explicit BinaryWriter(std::ostream& out) : out_(out) {}

    void raw(std::string_view bytes) { out_.write(bytes.data(), static_cast<std::streamsize>(bytes.size())); }

    void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }

    void u64(std::uint64_t v) {
        std::array<char, 8> buf;
        for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
        out_.write(buf.data(), 8);
    }

    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

    void f64_block(std::span<const double> values) {
        for (double v : values) f64(v);
    }

    void string(std::string_view s) {
        u64(s.size());
        raw(s);
    }

private:
    std::ostream& out_;
};

class BinaryReader {
public:
    BinaryReader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

    void expect_magic(std::string_view magic) {
        std::string got(magic.size(), '\0');
        read(got.data(), got.size());
        if (got != magic) throw ParseError(name_ + ": bad magic, expected " + std::string(magic));
    }

    std::uint8_t u8() {
        char c;
        read(&c, 1);
        return static_cast<std::uint8_t>(c);
    }

    std::uint64_t u64() {
        std::array<unsigned char, 8> buf;
        read(reinterpret_cast<char*>(buf.data()), 8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
        return v;
    }

    double f64() { return std::bit_cast<double>(u64()); }

    std::vector<double> f64_block(std::uint64_t count) {
        // Guard against absurd headers before allocating.
        if (count > (std::uint64_t{1} << 34)) throw ParseError(name_ + ": implausible element count");
        std::vector<double> out(count);
        for (auto& v : out) v = f64();
        return out;
    }

    std::string string() {
        const std::uint64_t len = u64();
        if (len > (std::uint64_t{1} << 20)) throw ParseError(name_ + ": implausible string length");
        std::string s(len, '\0');
        read(s.data(), len);
        return s;
    }

    void expect_end() {
        if (in_.peek() != std::char_traits<char>::eof()) throw ParseError(name_ + ": trailing bytes after payload");
    }

private:
    void read(char* dst, std::size_t n) {
        in_.read(dst, static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n) throw ParseError(name_ + ": truncated file");
    }

    std::istream& in_;
    std::string name_;
};

}  // namespace npss
