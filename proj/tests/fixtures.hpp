#ifndef WT_TESTS_FIXTURES_HPP
#define WT_TESTS_FIXTURES_HPP

#include <string>
#include <vector>

#include <wt/bitvec.hpp>
#include <wt/ingest.hpp>
#include <wt/wavelet_tree.hpp>

#include "oracles.hpp"

namespace fixture {

/// The example sentence encoded with its first-appearance alphabet.
inline wt::symbol_sequence fig2_sequence()
{
    const std::vector<std::uint32_t> order(oracle::fig2_alphabet.begin(), oracle::fig2_alphabet.end());
    const std::vector<std::uint32_t> raw(oracle::fig2_text.begin(), oracle::fig2_text.end());
    return wt::remap_with(raw, wt::alphabet_map(order, wt::encoding::one_byte));
}

inline oracle::bits to_bits(const wt::bit_vector& bv)
{
    oracle::bits b(bv.size());
    for (std::uint64_t i = 0; i < bv.size(); ++i) {
        b[i] = bv.get(i);
    }
    return b;
}

inline std::vector<oracle::bits> level_bits(const wt::wavelet_tree& t)
{
    std::vector<oracle::bits> out;
    for (const auto& lv : t.levels()) {
        out.push_back(to_bits(lv.bits()));
    }
    return out;
}

} // namespace fixture

#endif
