#ifndef WT_INGEST_HPP
#define WT_INGEST_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "bitvec.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "sequence.hpp"
#include "wavelet_tree.hpp"

namespace wt {

/// Bijection between the raw codes observed in an input and [0, sigma).
class alphabet_map {
public:
    static constexpr std::array<char, 4> magic = {'W', 'T', 'A', 'M'};

    alphabet_map() = default;

    /// Dense code c is assigned to raw_codes[c]. Codes must be distinct.
    explicit alphabet_map(std::vector<std::uint32_t> raw_codes, encoding enc = encoding::four_byte)
        : inverse_(std::move(raw_codes)), encoding_(enc)
    {
        sorted_.resize(inverse_.size());
        for (std::uint32_t c = 0; c < inverse_.size(); ++c) {
            sorted_[c] = {inverse_[c], c};
        }
        std::sort(sorted_.begin(), sorted_.end());
        const auto dup = std::adjacent_find(sorted_.begin(), sorted_.end(),
                                            [](const auto& a, const auto& b) { return a.first == b.first; });
        if (dup != sorted_.end()) {
            throw validation_error("alphabet_map: raw code " + std::to_string(dup->first) + " listed twice");
        }
    }

    std::uint64_t sigma() const noexcept { return inverse_.size(); }
    encoding source_encoding() const noexcept { return encoding_; }
    const std::vector<std::uint32_t>& raw_codes() const noexcept { return inverse_; }

    std::optional<std::uint32_t> forward(std::uint32_t raw) const noexcept
    {
        const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), std::pair<std::uint32_t, std::uint32_t>{raw, 0});
        if (it == sorted_.end() || it->first != raw) {
            return std::nullopt;
        }
        return it->second;
    }

    std::uint32_t inverse(std::uint64_t code) const
    {
        if (code >= inverse_.size()) {
            throw index_error("alphabet_map: code " + std::to_string(code) + " out of range");
        }
        return inverse_[code];
    }

    /// "WTAM" | encoding u8 | sigma u64 | raw codes u32 x sigma (LE)
    void serialize(std::ostream& out) const
    {
        out.write(magic.data(), magic.size());
        io::write_le<std::uint8_t>(out, static_cast<std::uint8_t>(encoding_));
        io::write_le<std::uint64_t>(out, inverse_.size());
        for (auto raw : inverse_) {
            io::write_le<std::uint32_t>(out, raw);
        }
    }

    static alphabet_map deserialize(std::istream& in)
    {
        std::array<char, 4> got{};
        in.read(got.data(), got.size());
        if (in.gcount() != static_cast<std::streamsize>(got.size()) || got != magic) {
            throw format_error("bad magic: missing alphabet section");
        }
        const auto enc = io::read_le<std::uint8_t>(in, "alphabet encoding");
        if (enc != 1 && enc != 4) {
            throw format_error("unknown alphabet encoding " + std::to_string(enc));
        }
        const auto sigma = io::read_le<std::uint64_t>(in, "alphabet size");
        if (sigma > max_sigma) {
            throw format_error("alphabet size out of range");
        }
        std::vector<std::uint32_t> raw(sigma);
        for (auto& r : raw) {
            r = io::read_le<std::uint32_t>(in, "alphabet code");
        }
        return alphabet_map(std::move(raw), static_cast<encoding>(enc));
    }

    friend bool operator==(const alphabet_map& a, const alphabet_map& b) noexcept
    {
        return a.inverse_ == b.inverse_ && a.encoding_ == b.encoding_;
    }

private:
    std::vector<std::uint32_t> inverse_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> sorted_;
    encoding encoding_ = encoding::four_byte;
};

inline std::vector<std::uint32_t> load_sequence(const std::filesystem::path& path, encoding enc)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw format_error("cannot open " + path.string());
    }
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw format_error("read failure on " + path.string());
    }
    std::vector<std::uint32_t> codes;
    if (enc == encoding::one_byte) {
        codes.resize(bytes.size());
        std::transform(bytes.begin(), bytes.end(), codes.begin(),
                       [](char c) { return static_cast<std::uint32_t>(static_cast<unsigned char>(c)); });
        return codes;
    }
    if (bytes.size() % 4 != 0) {
        throw format_error(path.string() + ": length " + std::to_string(bytes.size()) +
                           " is not a multiple of 4 for a 4-byte encoding");
    }
    codes.resize(bytes.size() / 4);
    for (std::size_t i = 0; i < codes.size(); ++i) {
        const auto* b = reinterpret_cast<const unsigned char*>(bytes.data() + 4 * i);
        codes[i] = std::uint32_t{b[0]} | std::uint32_t{b[1]} << 8 | std::uint32_t{b[2]} << 16 |
                   std::uint32_t{b[3]} << 24;
    }
    return codes;
}

inline void write_sequence(const std::filesystem::path& path, std::span<const std::uint32_t> codes, encoding enc)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw format_error("cannot create " + path.string());
    }
    if (enc == encoding::one_byte) {
        std::vector<char> bytes(codes.size());
        for (std::size_t i = 0; i < codes.size(); ++i) {
            if (codes[i] > 0xFF) {
                throw validation_error("code " + std::to_string(codes[i]) + " does not fit one byte");
            }
            bytes[i] = static_cast<char>(codes[i]);
        }
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    } else {
        for (auto c : codes) {
            io::write_le<std::uint32_t>(out, c);
        }
    }
    if (!out) {
        throw format_error("write failure on " + path.string());
    }
}

/// Maps raw codes onto [0, sigma) in ascending raw-code order. Presence of
/// each code is marked in a bitmap over [0, max]; the dense code of x is
/// then rank1(x) - 1.
inline std::pair<symbol_sequence, alphabet_map> remap_contiguous(std::span<const std::uint32_t> raw,
                                                                 encoding enc = encoding::four_byte)
{
    if (raw.empty()) {
        throw validation_error("remap_contiguous: empty input");
    }
    const auto max_code = *std::max_element(raw.begin(), raw.end());
    bit_vector present(std::uint64_t{max_code} + 1);
    for (auto x : raw) {
        present.set_one_unchecked(x);
    }
    const rank_select_directory dir(present);

    std::vector<std::uint32_t> inverse;
    inverse.reserve(dir.ones());
    for (std::uint64_t j = 1; j <= dir.ones(); ++j) {
        inverse.push_back(static_cast<std::uint32_t>(dir.select(present, true, j)));
    }

    symbol_sequence seq;
    seq.sigma = inverse.size();
    seq.source_encoding = enc;
    seq.symbols.resize(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        seq.symbols[i] = static_cast<std::uint32_t>(dir.rank1_exclusive(present, raw[i]));
    }
    return {std::move(seq), alphabet_map(std::move(inverse), enc)};
}

/// Encodes raw with a caller-supplied map; every raw code must be mapped.
inline symbol_sequence remap_with(std::span<const std::uint32_t> raw, const alphabet_map& map)
{
    symbol_sequence seq;
    seq.sigma = map.sigma();
    seq.source_encoding = map.source_encoding();
    seq.symbols.resize(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto code = map.forward(raw[i]);
        if (!code) {
            throw validation_error("raw code " + std::to_string(raw[i]) + " missing from alphabet map");
        }
        seq.symbols[i] = *code;
    }
    return seq;
}

enum class dataset_kind { cont, rand };

inline const char* to_string(dataset_kind kind) noexcept { return kind == dataset_kind::cont ? "cont" : "rand"; }

namespace detail {

inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound)
{
    // Rejection sampling keeps the result identical on every standard library.
    const auto threshold = (0 - bound) % bound;
    for (;;) {
        const auto x = rng();
        if (x >= threshold) {
            return x % bound;
        }
    }
}

} // namespace detail

/// Synthetic locality datasets. `cont` writes each symbol n / sigma times
/// in ascending order (the first n mod sigma symbols get one extra copy);
/// `rand` is a seeded Fisher-Yates shuffle of the same multiset.
inline symbol_sequence gen_dataset(dataset_kind kind, std::uint64_t n, std::uint64_t sigma, std::uint64_t seed)
{
    if (sigma == 0 || sigma > max_sigma) {
        throw validation_error("sigma must be in [1, 2^32]");
    }
    if (sigma > n) {
        throw validation_error("sigma (" + std::to_string(sigma) + ") exceeds n (" + std::to_string(n) + ")");
    }
    symbol_sequence seq;
    seq.sigma = sigma;
    seq.source_encoding = sigma <= 256 ? encoding::one_byte : encoding::four_byte;
    seq.symbols.resize(n);
    const auto per = n / sigma;
    const auto extra = n % sigma;
    std::uint64_t pos = 0;
    for (std::uint64_t c = 0; c < sigma; ++c) {
        const auto reps = per + (c < extra ? 1 : 0);
        std::fill_n(seq.symbols.begin() + static_cast<std::ptrdiff_t>(pos), reps, static_cast<std::uint32_t>(c));
        pos += reps;
    }
    if (kind == dataset_kind::rand) {
        std::mt19937_64 rng(seed);
        for (auto i = n; i > 1; --i) {
            const auto j = detail::uniform_below(rng, i);
            std::swap(seq.symbols[i - 1], seq.symbols[j]);
        }
    }
    return seq;
}

/// FNV-1a over the little-endian bytes of every symbol.
inline std::uint64_t sequence_hash(std::span<const std::uint32_t> symbols) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (auto s : symbols) {
        for (int b = 0; b < 4; ++b) {
            h ^= (s >> (8 * b)) & 0xFFu;
            h *= 0x100000001b3ull;
        }
    }
    return h;
}

} // namespace wt

#endif
