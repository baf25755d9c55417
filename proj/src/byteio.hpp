#pragma once

// Little-endian (de)serialization helpers shared by the binary file formats.

#include <bit>
#include <cstdint>
#include <ostream>

namespace vcry::detail {

inline void put_u16(std::ostream& os, std::uint16_t v) {
    unsigned char b[2];
    for (int i = 0; i < 2; ++i)
        b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    os.write(reinterpret_cast<const char*>(b), 2);
}

inline void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i)
        b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    os.write(reinterpret_cast<const char*>(b), 4);
}

inline void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i)
        b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    os.write(reinterpret_cast<const char*>(b), 8);
}

inline void put_f64(std::ostream& os, double v) {
    put_u64(os, std::bit_cast<std::uint64_t>(v));
}

inline void put_i16(std::ostream& os, std::int16_t v) {
    put_u16(os, static_cast<std::uint16_t>(v));
}

inline std::uint16_t decode_u16(const unsigned char* b) {
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

inline std::uint32_t decode_u32(const unsigned char* b) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

inline std::uint64_t decode_u64(const unsigned char* b) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

inline double decode_f64(const unsigned char* b) {
    return std::bit_cast<double>(decode_u64(b));
}

inline std::int16_t decode_i16(const unsigned char* b) {
    return static_cast<std::int16_t>(decode_u16(b));
}

} // namespace vcry::detail
