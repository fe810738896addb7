#ifndef WT_CONSTRUCT_HPP
#define WT_CONSTRUCT_HPP

#include <algorithm>
#include <atomic>
#include <concepts>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bitvec.hpp"
#include "errors.hpp"
#include "memory.hpp"
#include "parallel.hpp"
#include "sequence.hpp"
#include "wavelet_tree.hpp"

namespace wt {

namespace detail {

template <std::unsigned_integral Sym>
void validate_symbols(std::span<const Sym> seq, std::uint64_t sigma, const par::executor& ex)
{
    if (sigma == 0 || sigma > max_sigma) {
        throw validation_error("alphabet size must be in [1, 2^32]");
    }
    constexpr std::uint64_t chunk = 1 << 16;
    const auto chunks = (seq.size() + chunk - 1) / chunk;
    std::atomic<bool> bad{false};
    ex.parallel_for({0, chunks}, [&](std::uint64_t c) {
        const auto lo = c * chunk;
        const auto hi = std::min<std::uint64_t>(lo + chunk, seq.size());
        std::uint64_t mx = 0;
        for (auto j = lo; j < hi; ++j) {
            mx = std::max<std::uint64_t>(mx, seq[j]);
        }
        if (hi > lo && mx >= sigma) {
            bad.store(true, std::memory_order_relaxed);
        }
    });
    if (bad.load()) {
        throw validation_error("sequence contains a symbol >= sigma (" + std::to_string(sigma) + ")");
    }
}

/// One counting-sort pass for `level` over seq. `cursor` arrives holding
/// exclusive node offsets and leaves holding node end offsets.
template <std::unsigned_integral Sym>
void place_level_bits(std::span<const Sym> seq, unsigned level, unsigned levels, std::span<std::uint64_t> cursor,
                      bit_vector& out)
{
    const auto node_shift = levels - level;
    const auto bit_shift = levels - level - 1;
    for (const auto raw : seq) {
        const auto s = static_cast<std::uint64_t>(raw);
        const auto pos = cursor[s >> node_shift]++;
        if ((s >> bit_shift) & 1u) {
            out.set_one_unchecked(pos);
        }
    }
}

template <std::unsigned_integral Sym>
void count_nodes(std::span<const Sym> seq, unsigned level, unsigned levels, std::span<std::uint64_t> counts)
{
    std::fill(counts.begin(), counts.end(), 0);
    const auto node_shift = levels - level;
    for (const auto raw : seq) {
        ++counts[static_cast<std::uint64_t>(raw) >> node_shift];
    }
}

/// Builds one level bitmap of seq: node sizes, their exclusive prefix sum,
/// then a stable placement sweep. The prefix sum runs on `ex`.
template <std::unsigned_integral Sym>
bit_vector build_level(std::span<const Sym> seq, unsigned level, unsigned levels, const par::executor& ex)
{
    bit_vector out(seq.size());
    memory::tracked_vector<std::uint64_t> cursor(std::uint64_t{1} << level, 0);
    count_nodes(seq, level, levels, std::span<std::uint64_t>(cursor));
    par::parallel_prefix_sum(cursor, ex);
    place_level_bits(seq, level, levels, std::span<std::uint64_t>(cursor), out);
    return out;
}

} // namespace detail

/// Level bitmaps of seq built one level after another on the calling thread.
template <std::unsigned_integral Sym>
std::vector<bit_vector> build_sequential_levels(std::span<const Sym> seq, std::uint64_t sigma)
{
    const par::executor ex(1);
    detail::validate_symbols(seq, sigma, ex);
    const auto levels = levels_for(sigma);
    std::vector<bit_vector> out;
    out.reserve(levels);
    for (unsigned l = 0; l < levels; ++l) {
        out.push_back(detail::build_level(seq, l, levels, ex));
    }
    return out;
}

/// Per-level parallel construction: every level is an independent task
/// that sweeps the whole input twice. Only min(p, levels) workers find
/// level tasks; the prefix sum inside a level may use the rest.
template <std::unsigned_integral Sym>
std::vector<bit_vector> build_pwt_levels(std::span<const Sym> seq, std::uint64_t sigma, const par::executor& ex)
{
    detail::validate_symbols(seq, sigma, ex);
    const auto levels = levels_for(sigma);
    std::vector<bit_vector> out(levels);
    ex.parallel_for({0, levels}, [&](std::uint64_t l) {
        out[l] = detail::build_level(seq, static_cast<unsigned>(l), levels, ex);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Domain decomposition.
// ---------------------------------------------------------------------------

/// Segment s of a k-way split of n symbols: segments are floor(n / k) long
/// and the last one also takes the remainder.
struct segment_bounds {
    std::uint64_t offset = 0;
    std::uint64_t length = 0;
};

inline segment_bounds segment_of(std::uint64_t n, std::uint64_t k, std::uint64_t s) noexcept
{
    const auto base = n / k;
    return {s * base, s + 1 == k ? n - (k - 1) * base : base};
}

/// Node offsets of every (segment, level, node) of a domain decomposition.
///
/// local(s, i) has 2^i + 1 entries: exclusive offsets of the nodes inside
/// segment s's level-i bitmap and, last, the segment length. global(s, i)
/// has 2^i entries: it first receives segment s's node sizes and is then
/// rewritten in place with the position of each node block in the final
/// level-i bitmap.
class offset_tables {
public:
    offset_tables() = default;

    offset_tables(std::uint64_t segments, unsigned levels)
        : segments_(segments), levels_(levels), stride_((std::uint64_t{1} << levels) - 1 + levels),
          local_(segments * stride_, 0), global_(segments * stride_, 0)
    {
    }

    std::uint64_t segments() const noexcept { return segments_; }
    unsigned levels() const noexcept { return levels_; }

    std::span<std::uint64_t> local(std::uint64_t s, unsigned i) noexcept
    {
        return {local_.data() + s * stride_ + row(i), nodes(i) + 1};
    }
    std::span<const std::uint64_t> local(std::uint64_t s, unsigned i) const noexcept
    {
        return {local_.data() + s * stride_ + row(i), nodes(i) + 1};
    }
    std::span<std::uint64_t> global(std::uint64_t s, unsigned i) noexcept
    {
        return {global_.data() + s * stride_ + row(i), nodes(i)};
    }
    std::span<const std::uint64_t> global(std::uint64_t s, unsigned i) const noexcept
    {
        return {global_.data() + s * stride_ + row(i), nodes(i)};
    }

    static constexpr std::uint64_t nodes(unsigned i) noexcept { return std::uint64_t{1} << i; }

private:
    // Rows for levels < i take sum(2^l + 1) = 2^i - 1 + i entries.
    static constexpr std::uint64_t row(unsigned i) noexcept { return nodes(i) - 1 + i; }

    std::uint64_t segments_ = 0;
    unsigned levels_ = 0;
    std::uint64_t stride_ = 0;
    memory::tracked_vector<std::uint64_t> local_;
    memory::tracked_vector<std::uint64_t> global_;
};

/// Level bitmaps of one segment, built as if the segment were the whole
/// input, without rank/select directories.
struct partial_wt {
    segment_bounds segment;
    std::vector<bit_vector> levels;
};

/// Builds segment `s`'s partial tree and fills its rows of `tables`: local
/// rows get exclusive offsets plus the length sentinel, global rows get the
/// raw node sizes. Levels are built in parallel.
template <std::unsigned_integral Sym>
partial_wt create_partial_ba(std::span<const Sym> seq, std::uint64_t sigma, std::uint64_t s, std::uint64_t k,
                             offset_tables& tables, const par::executor& ex)
{
    if (k == 0 || s >= k) {
        throw validation_error("create_partial_ba: segment id out of range");
    }
    const auto levels = levels_for(sigma);
    partial_wt out{segment_of(seq.size(), k, s), std::vector<bit_vector>(levels)};
    const auto part = seq.subspan(out.segment.offset, out.segment.length);

    ex.parallel_for({0, levels}, [&](std::uint64_t li) {
        const auto l = static_cast<unsigned>(li);
        auto sizes = tables.global(s, l);
        auto local = tables.local(s, l);
        detail::count_nodes(part, l, levels, sizes);
        std::copy(sizes.begin(), sizes.end(), local.begin());
        local.back() = par::sequential_prefix_sum(local.first(sizes.size()));

        memory::tracked_vector<std::uint64_t> cursor(local.begin(), local.end() - 1);
        bit_vector bits(part.size());
        detail::place_level_bits(part, l, levels, std::span<std::uint64_t>(cursor), bits);
        out.levels[l] = std::move(bits);
    });
    return out;
}

/// Turns the per-segment node sizes in the global rows into final-bitmap
/// offsets. Blocks are ordered node-major and segment-minor, so level i's
/// column (v, 0), (v, 1), ..., (v, k-1), (v+1, 0), ... is scanned once.
inline void globalize_offsets(offset_tables& tables, std::uint64_t n, const par::executor& ex)
{
    const auto k = tables.segments();
    const auto levels = tables.levels();
    ex.parallel_for({0, levels}, [&](std::uint64_t li) {
        const auto l = static_cast<unsigned>(li);
        const auto nodes = offset_tables::nodes(l);
        memory::tracked_vector<std::uint64_t> column(nodes * k);
        for (std::uint64_t s = 0; s < k; ++s) {
            const auto sizes = tables.global(s, l);
            for (std::uint64_t v = 0; v < nodes; ++v) {
                column[v * k + s] = sizes[v];
            }
        }
        const auto total = par::parallel_prefix_sum(column, ex);
        if (total != n) {
            throw invariant_error("level " + std::to_string(l) + " node sizes sum to " + std::to_string(total) +
                                  ", expected " + std::to_string(n));
        }
        for (std::uint64_t s = 0; s < k; ++s) {
            auto offsets = tables.global(s, l);
            for (std::uint64_t v = 0; v < nodes; ++v) {
                offsets[v] = column[v * k + s];
            }
        }
    });
}

/// Copies every (level, segment, node) block of the partial trees into
/// fresh zeroed n-bit level bitmaps. All blocks of all levels are copied
/// concurrently; neighbouring blocks may share a boundary word.
inline std::vector<bit_vector> merge_ba(std::uint64_t n, std::uint64_t sigma, std::span<const partial_wt> partials,
                                        const offset_tables& tables, const par::executor& ex)
{
    const auto levels = levels_for(sigma);
    const auto k = static_cast<std::uint64_t>(partials.size());
    if (tables.segments() != k || tables.levels() != levels) {
        throw invariant_error("merge_ba: offset tables do not match the partial trees");
    }

    for (unsigned l = 0; l < levels; ++l) {
        std::uint64_t covered = 0;
        for (std::uint64_t s = 0; s < k; ++s) {
            const auto local = tables.local(s, l);
            const auto global = tables.global(s, l);
            if (partials[s].levels.size() != levels || local.back() != partials[s].levels[l].size()) {
                throw invariant_error("merge_ba: segment " + std::to_string(s) + " level " + std::to_string(l) +
                                      " length disagrees with its offsets");
            }
            for (std::uint64_t v = 0; v < global.size(); ++v) {
                const auto nb = local[v + 1] - local[v];
                if (local[v + 1] < local[v] || global[v] > n || nb > n - global[v]) {
                    throw invariant_error("merge_ba: block out of bounds");
                }
                covered += nb;
            }
        }
        if (covered != n) {
            throw invariant_error("merge_ba: level " + std::to_string(l) + " blocks cover " +
                                  std::to_string(covered) + " bits, expected " + std::to_string(n));
        }
    }

    std::vector<bit_vector> out;
    out.reserve(levels);
    for (unsigned l = 0; l < levels; ++l) {
        out.emplace_back(n);
    }
    ex.parallel_for({0, levels}, [&](std::uint64_t li) {
        const auto l = static_cast<unsigned>(li);
        const auto nodes = offset_tables::nodes(l);
        ex.parallel_for({0, k * nodes}, [&](std::uint64_t t) {
            const auto s = t / nodes;
            const auto v = t % nodes;
            const auto local = tables.local(s, l);
            const auto nb = local[v + 1] - local[v];
            if (nb != 0) {
                parallel_bitarray_concat(out[l], partials[s].levels[l], tables.global(s, l)[v], local[v], nb);
            }
        });
    });
    return out;
}

/// Domain-decomposition construction with k segments: partial trees in
/// parallel, per-level offset globalization, block merge. Partial trees are
/// released before returning.
template <std::unsigned_integral Sym>
std::vector<bit_vector> build_dd_levels(std::span<const Sym> seq, std::uint64_t sigma, std::uint64_t k,
                                        const par::executor& ex)
{
    const auto n = static_cast<std::uint64_t>(seq.size());
    if (k == 0 || (n > 0 && k > n) || (n == 0 && k > 1)) {
        throw validation_error("segment count " + std::to_string(k) + " must be in [1, n] (n = " +
                               std::to_string(n) + ")");
    }
    detail::validate_symbols(seq, sigma, ex);
    const auto levels = levels_for(sigma);

    offset_tables tables(k, levels);
    std::vector<partial_wt> partials(k);
    ex.parallel_for({0, k}, [&](std::uint64_t s) { partials[s] = create_partial_ba(seq, sigma, s, k, tables, ex); });
    globalize_offsets(tables, n, ex);
    return merge_ba(n, sigma, partials, tables, ex);
}

// ---------------------------------------------------------------------------
// Complete trees.
// ---------------------------------------------------------------------------

enum class algorithm { seq, pwt, dd };

template <std::unsigned_integral Sym>
wavelet_tree build_sequential(std::span<const Sym> seq, std::uint64_t sigma)
{
    return wavelet_tree::from_levels(seq.size(), sigma, build_sequential_levels(seq, sigma));
}

template <std::unsigned_integral Sym>
wavelet_tree build_pwt(std::span<const Sym> seq, std::uint64_t sigma, std::size_t threads)
{
    const par::executor ex(threads);
    return wavelet_tree::from_levels(seq.size(), sigma, build_pwt_levels(seq, sigma, ex), ex);
}

template <std::unsigned_integral Sym>
wavelet_tree build_dd(std::span<const Sym> seq, std::uint64_t sigma, std::size_t threads, std::uint64_t k)
{
    const par::executor ex(threads);
    return wavelet_tree::from_levels(seq.size(), sigma, build_dd_levels(seq, sigma, k, ex), ex);
}

inline wavelet_tree build_sequential(const symbol_sequence& seq) { return build_sequential(seq.view(), seq.sigma); }

inline wavelet_tree build_pwt(const symbol_sequence& seq, std::size_t threads)
{
    return build_pwt(seq.view(), seq.sigma, threads);
}

inline wavelet_tree build_dd(const symbol_sequence& seq, std::size_t threads, std::uint64_t k)
{
    return build_dd(seq.view(), seq.sigma, threads, k);
}

/// Level bitmaps only, for callers that time construction without the
/// rank/select directories.
template <std::unsigned_integral Sym>
std::vector<bit_vector> build_levels(algorithm algo, std::span<const Sym> seq, std::uint64_t sigma,
                                     const par::executor& ex, std::uint64_t k)
{
    switch (algo) {
    case algorithm::seq:
        return build_sequential_levels(seq, sigma);
    case algorithm::pwt:
        return build_pwt_levels(seq, sigma, ex);
    case algorithm::dd:
        return build_dd_levels(seq, sigma, k, ex);
    }
    throw validation_error("unknown algorithm");
}

} // namespace wt

#endif
