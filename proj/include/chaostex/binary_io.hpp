#pragma once

#include "chaostex/errors.hpp"

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

// Little-endian primitives shared by the CTXF and CTXM formats.
namespace ctx::binary {

template <typename U>
void write_uint(std::ostream& os, U value) {
    for (std::size_t b = 0; b < sizeof(U); ++b) {
        os.put(static_cast<char>((value >> (8 * b)) & 0xFF));
    }
}

template <typename U>
U read_uint(std::istream& is) {
    U value = 0;
    for (std::size_t b = 0; b < sizeof(U); ++b) {
        const int c = is.get();
        if (c == std::char_traits<char>::eof()) throw DataError("unexpected end of binary file");
        value |= static_cast<U>(static_cast<unsigned char>(c)) << (8 * b);
    }
    return value;
}

inline void write_f64(std::ostream& os, double v) {
    write_uint<std::uint64_t>(os, std::bit_cast<std::uint64_t>(v));
}

inline double read_f64(std::istream& is) {
    return std::bit_cast<double>(read_uint<std::uint64_t>(is));
}

inline void write_magic(std::ostream& os, const char (&magic)[5], std::uint16_t version) {
    os.write(magic, 4);
    write_uint<std::uint16_t>(os, version);
}

/// Returns the version; throws DataError on a magic mismatch.
inline std::uint16_t read_magic(std::istream& is, const char (&magic)[5]) {
    char got[4] = {};
    is.read(got, 4);
    if (!is || std::string(got, 4) != std::string(magic, 4)) {
        throw DataError(std::string("bad magic, expected ") + magic);
    }
    return read_uint<std::uint16_t>(is);
}

inline void write_blob(std::ostream& os, const std::string& blob) {
    write_uint<std::uint32_t>(os, static_cast<std::uint32_t>(blob.size()));
    os.write(blob.data(), static_cast<std::streamsize>(blob.size()));
}

inline std::string read_blob(std::istream& is) {
    const auto size = read_uint<std::uint32_t>(is);
    std::string blob(size, '\0');
    is.read(blob.data(), size);
    if (!is) throw DataError("truncated metadata block");
    return blob;
}

}  // namespace ctx::binary
