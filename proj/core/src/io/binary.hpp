#pragma once

// Little-endian primitives shared by the binary containers.

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "hysop/error.hpp"

namespace hysop::io::detail {

template <class U>
void put_uint(std::ostream& out, U v) {
    char bytes[sizeof(U)];
    for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(bytes, sizeof(U));
}

inline void put_f64(std::ostream& out, double v) { put_uint(out, std::bit_cast<std::uint64_t>(v)); }

inline void put_string(std::ostream& out, const std::string& s) {
    put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

class Reader {
public:
    Reader(std::istream& in, const char* what) : in_(in), what_(what) {}

    void bytes(char* dst, std::size_t n) {
        in_.read(dst, static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n) throw FormatError(std::string(what_) + " is truncated");
    }

    template <class U>
    U uint() {
        unsigned char b[sizeof(U)];
        bytes(reinterpret_cast<char*>(b), sizeof(U));
        U v = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(static_cast<U>(b[i]) << (8 * i));
        return v;
    }

    double f64() { return std::bit_cast<double>(uint<std::uint64_t>()); }

    std::string string(std::size_t limit = 1u << 20) {
        const auto n = uint<std::uint32_t>();
        if (n > limit) throw FormatError(std::string(what_) + " has an oversized string field");
        std::string s(n, '\0');
        bytes(s.data(), n);
        return s;
    }

    void expect_end() {
        if (in_.peek() != std::char_traits<char>::eof())
            throw FormatError(std::string(what_) + " has trailing bytes");
    }

private:
    std::istream& in_;
    const char* what_;
};

}  // namespace hysop::io::detail
