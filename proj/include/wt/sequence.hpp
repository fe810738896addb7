#ifndef WT_SEQUENCE_HPP
#define WT_SEQUENCE_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace wt {

enum class encoding : std::uint8_t { one_byte = 1, four_byte = 4 };

/// A sequence over the dense alphabet [0, sigma).
struct symbol_sequence {
    std::vector<std::uint32_t> symbols;
    std::uint64_t sigma = 1;
    encoding source_encoding = encoding::four_byte;

    std::uint64_t size() const noexcept { return symbols.size(); }
    std::span<const std::uint32_t> view() const noexcept { return symbols; }
};

} // namespace wt

#endif
