#ifndef WT_IO_HPP
#define WT_IO_HPP

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "errors.hpp"

// Little-endian fixed-width integer I/O, independent of host byte order.
namespace wt::io {

template <class UInt>
void write_le(std::ostream& out, UInt value)
{
    std::array<char, sizeof(UInt)> buf{};
    for (std::size_t b = 0; b < sizeof(UInt); ++b) {
        buf[b] = static_cast<char>((value >> (8 * b)) & 0xFFu);
    }
    out.write(buf.data(), buf.size());
}

template <class UInt>
UInt read_le(std::istream& in, const char* what)
{
    std::array<unsigned char, sizeof(UInt)> buf{};
    in.read(reinterpret_cast<char*>(buf.data()), buf.size());
    if (in.gcount() != static_cast<std::streamsize>(buf.size())) {
        throw format_error(std::string("truncated stream while reading ") + what);
    }
    UInt value = 0;
    for (std::size_t b = 0; b < sizeof(UInt); ++b) {
        value |= static_cast<UInt>(buf[b]) << (8 * b);
    }
    return value;
}

} // namespace wt::io

#endif
