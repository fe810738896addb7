#ifndef WT_BITVEC_HPP
#define WT_BITVEC_HPP

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <string>

#include "errors.hpp"
#include "io.hpp"
#include "memory.hpp"

namespace wt {

namespace detail {

constexpr std::uint64_t word_bits = 64;

constexpr std::uint64_t low_mask(std::uint64_t count) noexcept
{
    return count >= word_bits ? ~std::uint64_t{0} : (std::uint64_t{1} << count) - 1;
}

constexpr std::uint64_t words_for(std::uint64_t bits) noexcept
{
    return bits / word_bits + (bits % word_bits != 0 ? 1 : 0);
}

/// Position of the r-th (1-based) set bit of w. Requires popcount(w) >= r.
inline unsigned select_in_word(std::uint64_t w, std::uint64_t r) noexcept
{
    for (std::uint64_t k = 1; k < r; ++k) {
        w &= w - 1;
    }
    return static_cast<unsigned>(std::countr_zero(w));
}

} // namespace detail

/// Fixed-length bit sequence. Bit i is stored in word i / 64 at in-word
/// position i % 64, least-significant bit first. Bits past size() in the
/// last word are always zero.
class bit_vector {
public:
    using word_type = std::uint64_t;

    bit_vector() = default;

    explicit bit_vector(std::uint64_t len_bits)
        : words_(detail::words_for(len_bits), 0), len_bits_(len_bits)
    {
    }

    std::uint64_t size() const noexcept { return len_bits_; }
    bool empty() const noexcept { return len_bits_ == 0; }
    std::size_t word_count() const noexcept { return words_.size(); }

    std::span<const word_type> words() const noexcept { return {words_.data(), words_.size()}; }
    std::span<word_type> words() noexcept { return {words_.data(), words_.size()}; }

    bool get(std::uint64_t pos) const
    {
        check(pos, "get");
        return get_unchecked(pos);
    }

    void set(std::uint64_t pos, bool value)
    {
        check(pos, "set");
        auto& w = words_[pos / detail::word_bits];
        const auto bit = word_type{1} << (pos % detail::word_bits);
        w = value ? (w | bit) : (w & ~bit);
    }

    bool get_unchecked(std::uint64_t pos) const noexcept
    {
        return (words_[pos / detail::word_bits] >> (pos % detail::word_bits)) & 1u;
    }

    /// Sets a bit to one without bounds checking; used by the builders,
    /// which always write into zero-initialized storage.
    void set_one_unchecked(std::uint64_t pos) noexcept
    {
        words_[pos / detail::word_bits] |= word_type{1} << (pos % detail::word_bits);
    }

    /// The 64 bits starting at pos, zero-filled past the end of storage.
    word_type extract_word(std::uint64_t pos) const noexcept
    {
        const auto q = pos / detail::word_bits;
        const auto r = pos % detail::word_bits;
        if (q >= words_.size()) {
            return 0;
        }
        word_type lo = words_[q] >> r;
        if (r != 0 && q + 1 < words_.size()) {
            lo |= words_[q + 1] << (detail::word_bits - r);
        }
        return lo;
    }

    std::uint64_t size_in_bytes() const noexcept { return words_.size() * sizeof(word_type); }

    friend bool operator==(const bit_vector& a, const bit_vector& b) noexcept
    {
        return a.len_bits_ == b.len_bits_ && std::equal(a.words_.begin(), a.words_.end(), b.words_.begin());
    }

    /// [len_bits: u64 LE][words: ceil(len_bits / 64) x u64 LE]
    void serialize(std::ostream& out) const
    {
        io::write_le<std::uint64_t>(out, len_bits_);
        if constexpr (std::endian::native == std::endian::little) {
            out.write(reinterpret_cast<const char*>(words_.data()),
                      static_cast<std::streamsize>(words_.size() * sizeof(word_type)));
        } else {
            for (auto w : words_) {
                io::write_le<std::uint64_t>(out, w);
            }
        }
    }

    static bit_vector deserialize(std::istream& in)
    {
        const auto len = io::read_le<std::uint64_t>(in, "bit vector length");
        if (len > (std::uint64_t{1} << 62)) {
            throw format_error("bit vector length out of range");
        }
        bit_vector bv(len);
        if constexpr (std::endian::native == std::endian::little) {
            const auto bytes = static_cast<std::streamsize>(bv.words_.size() * sizeof(word_type));
            in.read(reinterpret_cast<char*>(bv.words_.data()), bytes);
            if (in.gcount() != bytes) {
                throw format_error("truncated stream while reading bit vector words");
            }
        } else {
            for (auto& w : bv.words_) {
                w = io::read_le<std::uint64_t>(in, "bit vector word");
            }
        }
        if (!bv.words_.empty() && (bv.words_.back() & ~detail::low_mask(tail_bits(len))) != 0) {
            throw format_error("bit vector has nonzero padding bits");
        }
        return bv;
    }

private:
    static std::uint64_t tail_bits(std::uint64_t len) noexcept
    {
        const auto r = len % detail::word_bits;
        return r == 0 ? detail::word_bits : r;
    }

    void check(std::uint64_t pos, const char* op) const
    {
        if (pos >= len_bits_) {
            throw index_error(std::string("bit_vector::") + op + ": position " + std::to_string(pos) +
                              " out of range for length " + std::to_string(len_bits_));
        }
    }

    memory::tracked_vector<word_type> words_;
    std::uint64_t len_bits_ = 0;
};

namespace detail {

inline void merge_word_atomic(std::uint64_t& word, std::uint64_t bits, std::uint64_t mask) noexcept
{
    std::atomic_ref<std::uint64_t> ref(word);
    auto old = ref.load(std::memory_order_relaxed);
    while (!ref.compare_exchange_weak(old, (old & ~mask) | (bits & mask), std::memory_order_acq_rel,
                                      std::memory_order_relaxed)) {
    }
}

inline void check_range(const bit_vector& bv, std::uint64_t off, std::uint64_t nbits, const char* which)
{
    if (off > bv.size() || nbits > bv.size() - off) {
        throw index_error(std::string("parallel_bitarray_concat: ") + which + " range [" + std::to_string(off) +
                          ", " + std::to_string(off) + "+" + std::to_string(nbits) + ") exceeds length " +
                          std::to_string(bv.size()));
    }
}

} // namespace detail

/// Copies src[src_off, src_off + nbits) into dst[dst_off, dst_off + nbits).
///
/// Safe to call concurrently on the same dst as long as the destination bit
/// ranges are pairwise disjoint. Words only partly covered by the range are
/// updated with a compare-and-swap on the covered bits; words covered whole
/// belong to exactly one range and take plain stores.
inline void parallel_bitarray_concat(bit_vector& dst, const bit_vector& src, std::uint64_t dst_off,
                                     std::uint64_t src_off, std::uint64_t nbits)
{
    detail::check_range(src, src_off, nbits, "source");
    detail::check_range(dst, dst_off, nbits, "destination");
    if (nbits == 0) {
        return;
    }

    auto dw = dst.words();
    auto remaining = nbits;
    auto d = dst_off;
    auto s = src_off;

    const auto head_shift = d % detail::word_bits;
    if (head_shift != 0 || remaining < detail::word_bits) {
        const auto take = std::min(remaining, detail::word_bits - head_shift);
        const auto mask = detail::low_mask(take);
        detail::merge_word_atomic(dw[d / detail::word_bits], (src.extract_word(s) & mask) << head_shift,
                                  mask << head_shift);
        d += take;
        s += take;
        remaining -= take;
    }
    while (remaining >= detail::word_bits) {
        dw[d / detail::word_bits] = src.extract_word(s);
        d += detail::word_bits;
        s += detail::word_bits;
        remaining -= detail::word_bits;
    }
    if (remaining != 0) {
        const auto mask = detail::low_mask(remaining);
        detail::merge_word_atomic(dw[d / detail::word_bits], src.extract_word(s) & mask, mask);
    }
}

/// Sampled rank counts over a bit_vector.
///
/// Two sampling levels: cumulative 64-bit counts every 4096 bits (the
/// superblocks) and 16-bit counts relative to the enclosing superblock every
/// 512 bits. The directory costs 64/4096 + 16/512 = 4.69% of the bitmap.
/// rank adds at most eight word popcounts to two table reads; select binary
/// searches the superblocks, then scans blocks and words.
///
/// The directory does not keep a reference to its bit vector; every query
/// takes the vector it was built from.
class rank_select_directory {
public:
    static constexpr std::uint64_t superblock_bits = 4096;
    static constexpr std::uint64_t block_bits = 512;
    static constexpr std::uint64_t words_per_block = block_bits / detail::word_bits;
    static constexpr std::uint64_t blocks_per_superblock = superblock_bits / block_bits;

    rank_select_directory() : superblocks_(1, 0), blocks_(1, 0) {}

    explicit rank_select_directory(const bit_vector& bv)
        : superblocks_(bv.size() / superblock_bits + 1, 0), blocks_(bv.size() / block_bits + 1, 0),
          len_bits_(bv.size())
    {
        const auto words = bv.words();
        std::uint64_t total = 0;
        std::uint64_t in_super = 0;
        for (std::uint64_t b = 0; b < blocks_.size(); ++b) {
            if (b % blocks_per_superblock == 0) {
                superblocks_[b / blocks_per_superblock] = total;
                in_super = 0;
            }
            blocks_[b] = static_cast<std::uint16_t>(in_super);
            const auto first = b * words_per_block;
            const auto last = std::min<std::uint64_t>(first + words_per_block, words.size());
            for (auto w = first; w < last; ++w) {
                const auto pc = static_cast<std::uint64_t>(std::popcount(words[w]));
                total += pc;
                in_super += pc;
            }
        }
        ones_ = total;
    }

    std::uint64_t sample_rate() const noexcept { return superblock_bits; }
    std::span<const std::uint64_t> superblock_counts() const noexcept
    {
        return {superblocks_.data(), superblocks_.size()};
    }

    std::uint64_t size() const noexcept { return len_bits_; }
    std::uint64_t ones() const noexcept { return ones_; }
    std::uint64_t zeros() const noexcept { return len_bits_ - ones_; }

    std::uint64_t size_in_bits() const noexcept
    {
        return superblocks_.size() * 64 + blocks_.size() * 16;
    }

    /// Number of one bits in [0, end). Requires end <= size().
    std::uint64_t rank1_exclusive(const bit_vector& bv, std::uint64_t end) const noexcept
    {
        const auto block = end / block_bits;
        auto count = superblocks_[end / superblock_bits] + blocks_[block];
        const auto words = bv.words();
        const auto last_word = end / detail::word_bits;
        for (auto w = block * words_per_block; w < last_word; ++w) {
            count += static_cast<std::uint64_t>(std::popcount(words[w]));
        }
        if (const auto r = end % detail::word_bits; r != 0) {
            count += static_cast<std::uint64_t>(std::popcount(words[last_word] & detail::low_mask(r)));
        }
        return count;
    }

    std::uint64_t rank_exclusive(const bit_vector& bv, bool bit, std::uint64_t end) const noexcept
    {
        const auto ones = rank1_exclusive(bv, end);
        return bit ? ones : end - ones;
    }

    /// Number of `bit` values in [0, i], inclusive of i.
    std::uint64_t rank(const bit_vector& bv, bool bit, std::uint64_t i) const
    {
        if (i >= len_bits_) {
            throw index_error("rank: position " + std::to_string(i) + " out of range for length " +
                              std::to_string(len_bits_));
        }
        return rank_exclusive(bv, bit, i + 1);
    }

    /// Position of the j-th (1-based) occurrence of `bit`.
    std::uint64_t select(const bit_vector& bv, bool bit, std::uint64_t j) const
    {
        const auto available = bit ? ones_ : zeros();
        if (j == 0 || j > available) {
            throw not_found_error("select: ordinal " + std::to_string(j) + " not in [1, " +
                                  std::to_string(available) + "]");
        }
        return bit ? select_impl<true>(bv, j) : select_impl<false>(bv, j);
    }

private:
    template <bool Bit>
    std::uint64_t count_before_superblock(std::uint64_t sb) const noexcept
    {
        return Bit ? superblocks_[sb] : sb * superblock_bits - superblocks_[sb];
    }

    template <bool Bit>
    std::uint64_t count_in_super_before_block(std::uint64_t b) const noexcept
    {
        const auto offset = (b % blocks_per_superblock) * block_bits;
        return Bit ? blocks_[b] : offset - blocks_[b];
    }

    template <bool Bit>
    std::uint64_t select_impl(const bit_vector& bv, std::uint64_t j) const noexcept
    {
        // Last superblock whose preceding count is < j.
        std::uint64_t lo = 0;
        std::uint64_t hi = superblocks_.size();
        while (hi - lo > 1) {
            const auto mid = lo + (hi - lo) / 2;
            if (count_before_superblock<Bit>(mid) < j) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        const auto sb = lo;
        auto remaining = j - count_before_superblock<Bit>(sb);

        auto block = sb * blocks_per_superblock;
        const auto block_end = std::min<std::uint64_t>(block + blocks_per_superblock, blocks_.size());
        while (block + 1 < block_end && count_in_super_before_block<Bit>(block + 1) < remaining) {
            ++block;
        }
        remaining -= count_in_super_before_block<Bit>(block);

        const auto words = bv.words();
        for (auto w = block * words_per_block; w < words.size(); ++w) {
            const auto word = Bit ? words[w] : ~words[w];
            const auto pc = static_cast<std::uint64_t>(std::popcount(word));
            if (pc >= remaining) {
                return w * detail::word_bits + detail::select_in_word(word, remaining);
            }
            remaining -= pc;
        }
        return len_bits_; // unreachable for valid j
    }

    memory::tracked_vector<std::uint64_t> superblocks_;
    memory::tracked_vector<std::uint16_t> blocks_;
    std::uint64_t len_bits_ = 0;
    std::uint64_t ones_ = 0;
};

/// One level of a wavelet tree: its bitmap plus the rank/select directory.
class level_bitmap {
public:
    level_bitmap() = default;
    explicit level_bitmap(bit_vector bits) : bits_(std::move(bits)), dir_(bits_) {}

    const bit_vector& bits() const noexcept { return bits_; }
    const rank_select_directory& directory() const noexcept { return dir_; }

    std::uint64_t size() const noexcept { return bits_.size(); }
    bool get(std::uint64_t pos) const { return bits_.get(pos); }
    bool get_unchecked(std::uint64_t pos) const noexcept { return bits_.get_unchecked(pos); }

    std::uint64_t rank(bool bit, std::uint64_t i) const { return dir_.rank(bits_, bit, i); }
    std::uint64_t rank_exclusive(bool bit, std::uint64_t end) const noexcept
    {
        return dir_.rank_exclusive(bits_, bit, end);
    }
    std::uint64_t rank1_exclusive(std::uint64_t end) const noexcept { return dir_.rank1_exclusive(bits_, end); }
    std::uint64_t select(bool bit, std::uint64_t j) const { return dir_.select(bits_, bit, j); }

    friend bool operator==(const level_bitmap& a, const level_bitmap& b) noexcept { return a.bits_ == b.bits_; }

private:
    bit_vector bits_;
    rank_select_directory dir_;
};

} // namespace wt

#endif
