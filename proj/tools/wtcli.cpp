// wtcli: build, query, generate and benchmark level-wise wavelet trees.
//
// Exit codes: 0 success, 2 input error, 3 query out of range, 4 internal
// invariant violation.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <wt/wt.hpp>

namespace {

constexpr int exit_input = 2;
constexpr int exit_range = 3;
constexpr int exit_invariant = 4;

struct query_range_error : wt::error {
    using wt::error::error;
};

std::size_t default_threads()
{
    if (const char* env = std::getenv("WT_THREADS"); env != nullptr && *env != '\0') {
        try {
            const auto v = std::stoul(env);
            if (v > 0) {
                return v;
            }
        } catch (const std::exception&) {
        }
        throw wt::validation_error(std::string("WT_THREADS must be a positive integer, got '") + env + "'");
    }
    return wt::par::hardware_threads();
}

wt::encoding parse_encoding(const std::string& s)
{
    if (s == "1b") {
        return wt::encoding::one_byte;
    }
    if (s == "4b") {
        return wt::encoding::four_byte;
    }
    throw wt::validation_error("encoding must be 1b or 4b");
}

wt::dataset_kind parse_kind(const std::string& s)
{
    if (s == "cont") {
        return wt::dataset_kind::cont;
    }
    if (s == "rand") {
        return wt::dataset_kind::rand;
    }
    throw wt::validation_error("dataset kind must be cont or rand");
}

std::uint64_t parse_u64(const std::string& s, const char* what)
{
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) {
        throw wt::validation_error(std::string("invalid ") + what + " '" + s + "'");
    }
    return v;
}

std::string hex64(std::uint64_t h)
{
    std::ostringstream os;
    os << "0x" << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

// --- build ------------------------------------------------------------------

struct build_options {
    std::string input;
    std::string encoding = "1b";
    std::string algo = "dd";
    std::optional<std::size_t> threads;
    std::optional<std::uint64_t> segments;
    std::string output;
};

int run_build(const build_options& opt)
{
    const auto enc = parse_encoding(opt.encoding);
    const auto algo = wt::bench::parse_algorithm(opt.algo);
    const auto threads = opt.threads.value_or(default_threads());
    if (threads == 0) {
        throw wt::validation_error("--threads must be >= 1");
    }

    const auto raw = wt::load_sequence(opt.input, enc);
    auto [seq, map] = wt::remap_contiguous(raw, enc);
    const auto segments =
        opt.segments.value_or(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(seq.size(), 1)));

    wt::wavelet_tree tree;
    switch (algo) {
    case wt::algorithm::seq:
        tree = wt::build_sequential(seq);
        break;
    case wt::algorithm::pwt:
        tree = wt::build_pwt(seq, threads);
        break;
    case wt::algorithm::dd:
        tree = wt::build_dd(seq, threads, segments);
        break;
    }

    std::ofstream out(opt.output, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw wt::format_error("cannot create " + opt.output);
    }
    tree.serialize(out);
    map.serialize(out);
    if (!out) {
        throw wt::format_error("write failure on " + opt.output);
    }
    std::cerr << "built " << opt.algo << " index: n=" << tree.size() << " sigma=" << tree.sigma()
              << " levels=" << tree.level_count() << '\n';
    return 0;
}

// --- query ------------------------------------------------------------------

struct query_options {
    std::string index;
    std::string op;
    std::optional<std::uint64_t> pos;
    std::optional<std::string> symbol;
    std::optional<std::uint64_t> ordinal;
};

std::uint32_t parse_raw_symbol(const std::string& s, wt::encoding enc)
{
    if (enc == wt::encoding::one_byte && s.size() == 1) {
        return static_cast<unsigned char>(s[0]);
    }
    const auto v = parse_u64(s, "symbol");
    if (v > 0xFFFFFFFFull) {
        throw query_range_error("symbol out of range");
    }
    return static_cast<std::uint32_t>(v);
}

std::string format_raw_symbol(std::uint32_t raw, wt::encoding enc)
{
    if (enc == wt::encoding::one_byte) {
        return std::string(1, static_cast<char>(raw));
    }
    return std::to_string(raw);
}

int run_query(const query_options& opt)
{
    std::ifstream in(opt.index, std::ios::binary);
    if (!in) {
        throw wt::format_error("cannot open " + opt.index);
    }
    const auto tree = wt::wavelet_tree::deserialize(in);
    const auto map = wt::alphabet_map::deserialize(in);
    if (map.sigma() != tree.sigma()) {
        throw wt::format_error("alphabet section does not match the tree");
    }

    const auto need = [](const auto& v, const char* flag) {
        if (!v) {
            throw wt::validation_error(std::string("--op requires ") + flag);
        }
        return *v;
    };

    try {
        if (opt.op == "access") {
            const auto code = tree.access(need(opt.pos, "--pos"));
            std::cout << format_raw_symbol(map.inverse(code), map.source_encoding()) << '\n';
        } else if (opt.op == "rank") {
            const auto raw = parse_raw_symbol(need(opt.symbol, "--symbol"), map.source_encoding());
            const auto pos = need(opt.pos, "--pos");
            const auto code = map.forward(raw);
            if (pos >= tree.size()) {
                throw query_range_error("position " + std::to_string(pos) + " out of range for length " +
                                        std::to_string(tree.size()));
            }
            std::cout << (code ? tree.rank(*code, pos) : 0) << '\n';
        } else if (opt.op == "select") {
            const auto raw = parse_raw_symbol(need(opt.symbol, "--symbol"), map.source_encoding());
            const auto ordinal = need(opt.ordinal, "--ordinal");
            const auto code = map.forward(raw);
            if (!code) {
                throw query_range_error("symbol does not occur in the sequence");
            }
            std::cout << tree.select(*code, ordinal) << '\n';
        } else {
            throw wt::validation_error("unknown --op '" + opt.op + "'");
        }
    } catch (const wt::index_error& e) {
        throw query_range_error(e.what());
    } catch (const wt::not_found_error& e) {
        throw query_range_error(e.what());
    }
    return 0;
}

// --- gen --------------------------------------------------------------------

struct gen_options {
    std::string kind;
    std::uint64_t n = 0;
    std::uint64_t sigma = 0;
    std::uint64_t seed = 42;
    std::string encoding = "auto";
    std::string output;
};

std::string metadata_line(wt::dataset_kind kind, const wt::symbol_sequence& seq, std::uint64_t seed)
{
    std::ostringstream os;
    os << "kind=" << wt::to_string(kind) << " n=" << seq.size() << " sigma=" << seq.sigma << " seed=" << seed
       << " encoding=" << (seq.source_encoding == wt::encoding::one_byte ? "1b" : "4b")
       << " hash=" << hex64(wt::sequence_hash(seq.symbols));
    return os.str();
}

int run_gen(const gen_options& opt)
{
    const auto kind = parse_kind(opt.kind);
    auto seq = wt::gen_dataset(kind, opt.n, opt.sigma, opt.seed);
    if (opt.encoding != "auto") {
        seq.source_encoding = parse_encoding(opt.encoding);
    }
    wt::write_sequence(opt.output, seq.symbols, seq.source_encoding);
    const auto meta = metadata_line(kind, seq, opt.seed);
    std::ofstream side(opt.output + ".meta", std::ios::trunc);
    side << meta << '\n';
    if (!side) {
        throw wt::format_error("cannot write " + opt.output + ".meta");
    }
    std::cout << meta << '\n';
    return 0;
}

// --- bench ------------------------------------------------------------------

struct bench_options {
    std::string input;
    std::string gen;
    std::string encoding = "1b";
    std::vector<std::string> algos = {"seq", "pwt", "dd"};
    std::vector<std::size_t> threads;
    std::vector<std::uint64_t> segments;
    unsigned reps = 5;
    std::string csv = "-";
    bool include_dirs = false;
};

wt::symbol_sequence bench_input(const bench_options& opt)
{
    if (!opt.gen.empty()) {
        std::vector<std::string> parts;
        std::stringstream ss(opt.gen);
        for (std::string part; std::getline(ss, part, ':');) {
            parts.push_back(part);
        }
        if (parts.size() != 4) {
            throw wt::validation_error("--gen expects kind:n:sigma:seed");
        }
        const auto kind = parse_kind(parts[0]);
        const auto seed = parse_u64(parts[3], "seed");
        auto seq = wt::gen_dataset(kind, parse_u64(parts[1], "n"), parse_u64(parts[2], "sigma"), seed);
        std::cerr << "dataset " << metadata_line(kind, seq, seed) << '\n';
        return seq;
    }
    const auto enc = parse_encoding(opt.encoding);
    auto raw = wt::load_sequence(opt.input, enc);
    return wt::remap_contiguous(raw, enc).first;
}

int run_bench(const bench_options& opt)
{
    if (opt.input.empty() == opt.gen.empty()) {
        throw wt::validation_error("exactly one of --input or --gen is required");
    }
    if (opt.algos.empty()) {
        throw wt::validation_error("--algos must name at least one algorithm");
    }
    std::vector<wt::algorithm> algos;
    for (const auto& a : opt.algos) {
        algos.push_back(wt::bench::parse_algorithm(a));
    }
    const auto threads = opt.threads.empty() ? std::vector<std::size_t>{default_threads()} : opt.threads;
    for (auto p : threads) {
        if (p == 0) {
            throw wt::validation_error("thread counts must be >= 1");
        }
    }

    const auto seq = bench_input(opt);

    std::ofstream file;
    if (opt.csv != "-") {
        file.open(opt.csv, std::ios::trunc);
        if (!file) {
            throw wt::format_error("cannot create " + opt.csv);
        }
    }
    std::ostream& out = opt.csv == "-" ? std::cout : file;
    out << wt::bench::csv_header << '\n';

    const auto emit = [&](const wt::bench::bench_case& c) {
        out << wt::bench::to_csv(wt::bench::run_case(seq, c, opt.reps, opt.include_dirs)) << '\n';
        out.flush();
    };
    for (auto algo : algos) {
        if (algo == wt::algorithm::seq) {
            emit({algo, 1, 1});
            continue;
        }
        for (auto p : threads) {
            if (algo == wt::algorithm::pwt) {
                emit({algo, p, 1});
            } else if (opt.segments.empty()) {
                emit({algo, p, std::min<std::uint64_t>(p, std::max<std::uint64_t>(seq.size(), 1))});
            } else {
                for (auto k : opt.segments) {
                    emit({algo, p, k});
                }
            }
        }
    }
    return 0;
}

template <class F>
int guarded(F&& body)
{
    try {
        return body();
    } catch (const query_range_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_range;
    } catch (const wt::invariant_error& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return exit_invariant;
    } catch (const wt::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return exit_input;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Level-wise wavelet tree construction and queries"};
    app.require_subcommand(1);

    build_options bopt;
    auto* build = app.add_subcommand("build", "Build an index file from a raw sequence");
    build->add_option("--input", bopt.input, "Raw sequence file")->required();
    build->add_option("--encoding", bopt.encoding, "Symbol width: 1b or 4b (little-endian)")
        ->check(CLI::IsMember({"1b", "4b"}));
    build->add_option("--algo", bopt.algo, "Construction algorithm")->check(CLI::IsMember({"seq", "pwt", "dd"}));
    build->add_option("--threads", bopt.threads, "Worker count (default: WT_THREADS or all cores)");
    build->add_option("--segments", bopt.segments, "dd segment count (default: threads)");
    build->add_option("--output", bopt.output, "Index file to write")->required();

    query_options qopt;
    auto* query = app.add_subcommand("query", "Run access/rank/select against an index file");
    query->add_option("--index", qopt.index, "Index file")->required();
    query->add_option("--op", qopt.op, "access, rank or select")
        ->required()
        ->check(CLI::IsMember({"access", "rank", "select"}));
    query->add_option("--pos", qopt.pos, "Position (0-based)");
    query->add_option("--symbol", qopt.symbol, "Raw symbol: a character for 1b indexes, else a number");
    query->add_option("--ordinal", qopt.ordinal, "Occurrence number for select (1-based)");

    gen_options gopt;
    auto* gen = app.add_subcommand("gen", "Generate a cont/rand dataset");
    gen->add_option("--kind", gopt.kind, "cont or rand")->required()->check(CLI::IsMember({"cont", "rand"}));
    gen->add_option("--n", gopt.n, "Sequence length")->required();
    gen->add_option("--sigma", gopt.sigma, "Alphabet size")->required();
    gen->add_option("--seed", gopt.seed, "PRNG seed");
    gen->add_option("--encoding", gopt.encoding, "auto, 1b or 4b")->check(CLI::IsMember({"auto", "1b", "4b"}));
    gen->add_option("--output", gopt.output, "Dataset file (metadata goes to <output>.meta)")->required();

    bench_options xopt;
    auto* bench = app.add_subcommand("bench", "Time constructions and write CSV");
    auto* in_opt = bench->add_option("--input", xopt.input, "Raw sequence file");
    auto* gen_opt = bench->add_option("--gen", xopt.gen, "Generated dataset kind:n:sigma:seed");
    in_opt->excludes(gen_opt);
    bench->add_option("--encoding", xopt.encoding, "Encoding of --input")->check(CLI::IsMember({"1b", "4b"}));
    bench->add_option("--algos", xopt.algos, "Algorithms to run")->delimiter(',');
    bench->add_option("--threads", xopt.threads, "Thread counts")->delimiter(',');
    bench->add_option("--segments", xopt.segments, "dd segment counts (default: k = threads)")->delimiter(',');
    bench->add_option("--reps", xopt.reps, "Repetitions per configuration (median reported)")
        ->check(CLI::PositiveNumber);
    bench->add_option("--csv", xopt.csv, "CSV output path, - for stdout");
    bench->add_flag("--include-dirs", xopt.include_dirs, "Include rank/select directory construction in timings");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_input;
    }

    if (*build) {
        return guarded([&] { return run_build(bopt); });
    }
    if (*query) {
        return guarded([&] { return run_query(qopt); });
    }
    if (*gen) {
        return guarded([&] { return run_gen(gopt); });
    }
    return guarded([&] { return run_bench(xopt); });
}
