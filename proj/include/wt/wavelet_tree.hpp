#ifndef WT_WAVELET_TREE_HPP
#define WT_WAVELET_TREE_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "bitvec.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "parallel.hpp"

namespace wt {

/// Largest alphabet the library accepts (codes must fit 32 bits).
inline constexpr std::uint64_t max_sigma = std::uint64_t{1} << 32;

/// ceil(lg sigma); zero for a one-symbol alphabet.
constexpr unsigned levels_for(std::uint64_t sigma) noexcept
{
    return sigma <= 1 ? 0u : static_cast<unsigned>(std::bit_width(sigma - 1));
}

/// Node that represents symbol s at `level` of a tree with `levels` levels:
/// the `level` most significant bits of the levels-bit code of s.
constexpr std::uint64_t node_of(std::uint64_t s, unsigned level, unsigned levels) noexcept
{
    const auto shift = levels - level;
    return shift >= 64 ? 0 : s >> shift;
}

/// Bit written for symbol s at `level`: 0 routes it to the left child.
constexpr bool code_bit(std::uint64_t s, unsigned level, unsigned levels) noexcept
{
    return (s >> (levels - level - 1)) & 1u;
}

/// Balanced binary wavelet tree in the level-wise layout: one n-bit bitmap
/// per level and no per-node topology. Within a level the bits of node v
/// precede those of node v + 1, and each node keeps sequence order, so the
/// two children of a node occupy exactly the parent's span on the next
/// level. Node boundaries are recovered with rank during traversal.
///
/// Immutable once built; safe to query from any number of threads.
class wavelet_tree {
public:
    static constexpr std::array<char, 4> magic = {'W', 'T', 'L', 'V'};
    static constexpr std::uint16_t format_version = 1;

    /// Per-level indices visited by access, relative to the start of the
    /// node at that level.
    struct access_result {
        std::uint64_t symbol = 0;
        std::vector<std::uint64_t> node_relative_index;
    };

    wavelet_tree() = default;

    wavelet_tree(std::uint64_t n, std::uint64_t sigma, std::vector<level_bitmap> levels)
        : levels_(std::move(levels)), n_(n), sigma_(sigma)
    {
        validate_shape();
    }

    /// Attaches rank/select directories to raw level bitmaps, one task per
    /// level.
    static wavelet_tree from_levels(std::uint64_t n, std::uint64_t sigma, std::vector<bit_vector> bits,
                                    const par::executor& ex)
    {
        std::vector<level_bitmap> levels(bits.size());
        ex.parallel_for({0, bits.size()}, [&](std::uint64_t i) { levels[i] = level_bitmap(std::move(bits[i])); });
        return wavelet_tree(n, sigma, std::move(levels));
    }

    static wavelet_tree from_levels(std::uint64_t n, std::uint64_t sigma, std::vector<bit_vector> bits)
    {
        return from_levels(n, sigma, std::move(bits), par::executor(1));
    }

    std::uint64_t size() const noexcept { return n_; }
    std::uint64_t sigma() const noexcept { return sigma_; }
    unsigned level_count() const noexcept { return static_cast<unsigned>(levels_.size()); }
    const level_bitmap& level(unsigned i) const { return levels_.at(i); }
    const std::vector<level_bitmap>& levels() const noexcept { return levels_; }

    std::uint64_t access(std::uint64_t i) const { return trace_access(i, false).symbol; }

    access_result access_with_trace(std::uint64_t i) const { return trace_access(i, true); }

    /// Occurrences of c in positions [0, i].
    std::uint64_t rank(std::uint64_t c, std::uint64_t i) const
    {
        check_symbol(c, "rank");
        check_position(i, "rank");
        const auto levels = level_count();
        std::uint64_t start = 0;
        std::uint64_t end = n_;
        std::uint64_t count = i + 1;
        for (unsigned l = 0; l < levels; ++l) {
            const auto& lv = levels_[l];
            const auto ones_start = lv.rank1_exclusive(start);
            const auto ones_node = lv.rank1_exclusive(end) - ones_start;
            const auto ones_prefix = lv.rank1_exclusive(start + count) - ones_start;
            const auto zeros_node = (end - start) - ones_node;
            if (code_bit(c, l, levels)) {
                count = ones_prefix;
                start += zeros_node;
            } else {
                count -= ones_prefix;
                end = start + zeros_node;
            }
            if (count == 0) {
                return 0;
            }
        }
        return count;
    }

    /// Position of the j-th (1-based) occurrence of c.
    std::uint64_t select(std::uint64_t c, std::uint64_t j) const
    {
        check_symbol(c, "select");
        const auto levels = level_count();
        std::vector<std::uint64_t> starts(levels);
        std::uint64_t start = 0;
        std::uint64_t end = n_;
        for (unsigned l = 0; l < levels; ++l) {
            const auto& lv = levels_[l];
            starts[l] = start;
            const auto ones_start = lv.rank1_exclusive(start);
            const auto zeros_node = (end - start) - (lv.rank1_exclusive(end) - ones_start);
            if (code_bit(c, l, levels)) {
                start += zeros_node;
            } else {
                end = start + zeros_node;
            }
        }
        if (j == 0 || j > end - start) {
            throw not_found_error("select: symbol " + std::to_string(c) + " has " + std::to_string(end - start) +
                                  " occurrences, ordinal " + std::to_string(j) + " requested");
        }
        auto rel = j - 1;
        for (unsigned l = levels; l-- > 0;) {
            const auto& lv = levels_[l];
            const bool bit = code_bit(c, l, levels);
            const auto pos = lv.select(bit, lv.rank_exclusive(bit, starts[l]) + rel + 1);
            rel = pos - starts[l];
        }
        return rel;
    }

    /// Bytes held by bitmaps and directories.
    std::uint64_t size_in_bytes() const noexcept
    {
        std::uint64_t total = 0;
        for (const auto& lv : levels_) {
            total += lv.bits().size_in_bytes() + lv.directory().size_in_bits() / 8;
        }
        return total;
    }

    friend bool operator==(const wavelet_tree& a, const wavelet_tree& b) noexcept
    {
        return a.n_ == b.n_ && a.sigma_ == b.sigma_ && a.levels_ == b.levels_;
    }

    /// "WTLV" | version u16 | n u64 | sigma u64 | levels u16 | each level's
    /// bit vector in level order. All integers little-endian.
    void serialize(std::ostream& out) const
    {
        out.write(magic.data(), magic.size());
        io::write_le<std::uint16_t>(out, format_version);
        io::write_le<std::uint64_t>(out, n_);
        io::write_le<std::uint64_t>(out, sigma_);
        io::write_le<std::uint16_t>(out, static_cast<std::uint16_t>(levels_.size()));
        for (const auto& lv : levels_) {
            lv.bits().serialize(out);
        }
        if (!out) {
            throw format_error("failed writing wavelet tree");
        }
    }

    static wavelet_tree deserialize(std::istream& in)
    {
        std::array<char, 4> got{};
        in.read(got.data(), got.size());
        if (in.gcount() != static_cast<std::streamsize>(got.size()) || got != magic) {
            throw format_error("bad magic: not a wavelet tree stream");
        }
        const auto version = io::read_le<std::uint16_t>(in, "format version");
        if (version != format_version) {
            throw format_error("unsupported wavelet tree format version " + std::to_string(version));
        }
        const auto n = io::read_le<std::uint64_t>(in, "sequence length");
        const auto sigma = io::read_le<std::uint64_t>(in, "alphabet size");
        const auto count = io::read_le<std::uint16_t>(in, "level count");
        if (sigma == 0 || sigma > max_sigma || count != levels_for(sigma)) {
            throw format_error("inconsistent alphabet size / level count in header");
        }
        std::vector<level_bitmap> levels;
        levels.reserve(count);
        for (unsigned l = 0; l < count; ++l) {
            auto bits = bit_vector::deserialize(in);
            if (bits.size() != n) {
                throw format_error("level " + std::to_string(l) + " has " + std::to_string(bits.size()) +
                                   " bits, expected " + std::to_string(n));
            }
            levels.emplace_back(std::move(bits));
        }
        return wavelet_tree(n, sigma, std::move(levels));
    }

private:
    access_result trace_access(std::uint64_t i, bool keep_trace) const
    {
        check_position(i, "access");
        access_result out;
        const auto levels = level_count();
        if (keep_trace) {
            out.node_relative_index.reserve(levels);
        }
        std::uint64_t start = 0;
        std::uint64_t end = n_;
        std::uint64_t pos = i;
        std::uint64_t symbol = 0;
        for (unsigned l = 0; l < levels; ++l) {
            const auto& lv = levels_[l];
            if (keep_trace) {
                out.node_relative_index.push_back(pos - start);
            }
            const bool bit = lv.get_unchecked(pos);
            const auto ones_start = lv.rank1_exclusive(start);
            const auto ones_before = lv.rank1_exclusive(pos) - ones_start;
            const auto zeros_node = (end - start) - (lv.rank1_exclusive(end) - ones_start);
            if (bit) {
                start += zeros_node;
                pos = start + ones_before;
            } else {
                pos = start + (pos - start - ones_before);
                end = start + zeros_node;
            }
            symbol = (symbol << 1) | static_cast<std::uint64_t>(bit);
        }
        out.symbol = symbol;
        return out;
    }

    void check_position(std::uint64_t i, const char* op) const
    {
        if (i >= n_) {
            throw index_error(std::string(op) + ": position " + std::to_string(i) + " out of range for length " +
                              std::to_string(n_));
        }
    }

    void check_symbol(std::uint64_t c, const char* op) const
    {
        if (c >= sigma_) {
            throw index_error(std::string(op) + ": symbol " + std::to_string(c) + " outside alphabet of size " +
                              std::to_string(sigma_));
        }
    }

    void validate_shape() const
    {
        if (sigma_ == 0 || sigma_ > max_sigma) {
            throw validation_error("alphabet size must be in [1, 2^32]");
        }
        if (levels_.size() != levels_for(sigma_)) {
            throw validation_error("expected " + std::to_string(levels_for(sigma_)) + " levels, got " +
                                   std::to_string(levels_.size()));
        }
        for (const auto& lv : levels_) {
            if (lv.size() != n_) {
                throw validation_error("level bitmap length differs from sequence length");
            }
        }
    }

    std::vector<level_bitmap> levels_;
    std::uint64_t n_ = 0;
    std::uint64_t sigma_ = 1;
};

} // namespace wt

#endif
