// Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
// criterion fails. Criteria that depend on hardware the machine lacks are
// reported as SKIP together with the measurements that were possible.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <wt/wt.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

namespace {

using span32 = std::span<const std::uint32_t>;
using clock_type = std::chrono::steady_clock;

enum class verdict { pass, fail, skip };

struct outcome {
    verdict v = verdict::pass;
    std::string detail;
};

outcome pass(std::string d) { return {verdict::pass, std::move(d)}; }
outcome fail(std::string d) { return {verdict::fail, std::move(d)}; }

double seconds_since(clock_type::time_point t0)
{
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

// 1 -------------------------------------------------------------------------
outcome golden_example()
{
    const auto seq = fixture::fig2_sequence();
    const std::vector<std::uint64_t> expect_trace = {24, 7, 4, 2};
    double worst_ms = 0;
    for (auto algo : {wt::algorithm::seq, wt::algorithm::pwt, wt::algorithm::dd}) {
        const wt::par::executor ex(4);
        // Warm the scheduler so thread start-up is not billed to the build.
        (void)wt::build_levels(algo, seq.view(), seq.sigma, ex, 3);

        const auto t0 = clock_type::now();
        const auto tree = wt::wavelet_tree::from_levels(seq.size(), seq.sigma,
                                                        wt::build_levels(algo, seq.view(), seq.sigma, ex, 3), ex);
        const auto r = tree.access_with_trace(24);
        bool all = true;
        for (std::uint64_t i = 0; i < seq.size(); ++i) {
            all = all && tree.access(i) == seq.symbols[i];
        }
        const auto ms = seconds_since(t0) * 1e3;
        worst_ms = std::max(worst_ms, ms);

        const auto name = wt::bench::to_string(algo);
        if (oracle::fig2_alphabet[r.symbol] != 't') {
            return fail(std::string(name) + ": access(24) != 't'");
        }
        if (r.node_relative_index != expect_trace) {
            return fail(std::string(name) + ": traversal differs from 24->7->4->2");
        }
        if (!all) {
            return fail(std::string(name) + ": access does not reconstruct the input");
        }
    }
    if (worst_ms >= 1.0) {
        return fail("slowest build+queries took " + std::to_string(worst_ms) + " ms (limit 1 ms)");
    }
    return pass("seq/pwt/dd: access(24)='t' via 24->7->4->2, 30/30 reconstructed, slowest " +
                std::to_string(worst_ms) + " ms");
}

// 2 -------------------------------------------------------------------------
outcome oracle_equivalence()
{
    const auto t0 = clock_type::now();
    std::mt19937_64 rng(2024);
    const std::vector<std::uint64_t> sigmas = {1, 2, 3, 4, 16, 27, 230, 1u << 10, 1u << 14};
    const std::vector<std::size_t> threads = {1, 2, 3, 8};
    std::uniform_int_distribution<std::uint64_t> n_d(1, 10'000);
    for (int c = 0; c < 200; ++c) {
        const auto n = n_d(rng);
        const auto sigma = sigmas[rng() % sigmas.size()];
        const auto p = threads[rng() % threads.size()];
        const std::vector<std::uint64_t> ks = {1, 2, 3, 7, 16, n};
        const auto k = std::min(ks[rng() % ks.size()], n);
        const auto s = oracle::random_sequence(rng, n, sigma);

        const auto base = wt::build_sequential_levels(span32(s), sigma);
        const wt::par::executor ex(p);
        if (wt::build_pwt_levels(span32(s), sigma, ex) != base) {
            return fail("case " + std::to_string(c) + ": pwt differs (n=" + std::to_string(n) + ")");
        }
        auto dd = wt::build_dd_levels(span32(s), sigma, k, ex);
        if (dd != base) {
            return fail("case " + std::to_string(c) + ": dd differs (n=" + std::to_string(n) +
                        " k=" + std::to_string(k) + ")");
        }
        const auto tree = wt::wavelet_tree::from_levels(n, sigma, std::move(dd), ex);
        const auto occ = oracle::occurrences(s, sigma);
        std::uniform_int_distribution<std::uint64_t> pos(0, n - 1);
        for (int q = 0; q < 1000; ++q) {
            const auto i = pos(rng);
            if (tree.access(i) != s[i]) {
                return fail("case " + std::to_string(c) + ": access mismatch");
            }
            const auto ci = s[pos(rng)];
            if (tree.rank(ci, i) != oracle::rank_sym_scan(s, ci, i)) {
                return fail("case " + std::to_string(c) + ": rank mismatch");
            }
            const auto cs = s[pos(rng)];
            const auto j = 1 + rng() % occ[cs].size();
            if (tree.select(cs, j) != occ[cs][j - 1]) {
                return fail("case " + std::to_string(c) + ": select mismatch");
            }
        }
    }
    const auto secs = seconds_since(t0);
    if (secs >= 60) {
        return fail("suite took " + std::to_string(secs) + " s (limit 60 s)");
    }
    return pass("200 cases identical, 3x1000 queries each, " + std::to_string(secs) + " s");
}

// 3 -------------------------------------------------------------------------
outcome merge_stress()
{
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<std::uint64_t> n_d(500, 6000);
    std::uniform_int_distribution<std::uint64_t> k_d(2, 16);
    const std::vector<std::uint64_t> sigmas = {2, 4, 16, 64, 300};
    const wt::par::executor par8(8);
    const wt::par::executor seq1(1);
    std::uint64_t shared_boundaries = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto n = n_d(rng);
        const auto k = k_d(rng);
        // Keep segment lengths off word multiples so segment ends share words.
        if ((n / k) % 64 == 0) {
            ++n;
        }
        const auto sigma = sigmas[rng() % sigmas.size()];
        const auto s = oracle::random_sequence(rng, n, sigma);
        const auto L = wt::levels_for(sigma);

        wt::offset_tables tables(k, L);
        std::vector<wt::partial_wt> parts(k);
        par8.parallel_for({0, k}, [&](std::uint64_t seg) {
            parts[seg] = wt::create_partial_ba(span32(s), sigma, seg, k, tables, par8);
        });
        wt::globalize_offsets(tables, n, par8);
        for (unsigned l = 0; l < L; ++l) {
            for (std::uint64_t seg = 0; seg < k; ++seg) {
                const auto g = tables.global(seg, l);
                const auto loc = tables.local(seg, l);
                for (std::uint64_t v = 0; v < g.size(); ++v) {
                    const auto nb = loc[v + 1] - loc[v];
                    shared_boundaries += nb != 0 && (g[v] + nb) % 64 != 0;
                }
            }
        }

        const auto concurrent = wt::merge_ba(n, sigma, parts, tables, par8);
        const auto sequential = wt::merge_ba(n, sigma, parts, tables, seq1);
        if (concurrent != sequential) {
            return fail("trial " + std::to_string(trial) + ": p=8 merge differs from sequential merge");
        }
        if (sequential != wt::build_sequential_levels(span32(s), sigma)) {
            return fail("trial " + std::to_string(trial) + ": merge differs from sequential build");
        }
    }
    return pass("100 trials bit-identical at p=8, " + std::to_string(shared_boundaries) +
                " blocks ended inside a shared word");
}

// 4 -------------------------------------------------------------------------
outcome prefix_sum_determinism()
{
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<std::size_t> len(0, 100'000);
    std::uniform_int_distribution<std::uint64_t> val(0, std::uint64_t{1} << 40);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::uint64_t> a(len(rng));
        for (auto& x : a) {
            x = val(rng);
        }
        std::vector<std::uint64_t> expect(a.size());
        std::uint64_t total = 0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            expect[j] = total;
            total += a[j];
        }
        for (std::size_t p : {1u, 2u, 4u, 8u}) {
            auto b = a;
            if (wt::par::parallel_prefix_sum(b, p) != total || b != expect) {
                return fail("trial " + std::to_string(trial) + " p=" + std::to_string(p));
            }
        }
    }
    return pass("100 arrays x p in {1,2,4,8} equal the sequential scan");
}

// 5 -------------------------------------------------------------------------
outcome space_bounds()
{
    const std::uint64_t n = 10'000'000;
    const std::uint64_t sigma = 4;
    const std::uint64_t k = 8;
    const auto seq = wt::gen_dataset(wt::dataset_kind::rand, n, sigma, 5);
    const double level_bytes = static_cast<double>(n) * wt::levels_for(sigma) / 8;

    std::uint64_t pwt_peak = 0;
    {
        wt::memory::peak_scope scope;
        {
            const auto tree = wt::build_pwt(seq, k);
        }
        pwt_peak = scope.peak_extra_bytes();
    }
    std::uint64_t dd_peak = 0;
    {
        wt::memory::peak_scope scope;
        {
            const auto tree = wt::build_dd(seq, k, k);
        }
        dd_peak = scope.peak_extra_bytes();
    }
    const double pwt_limit = 1.10 * level_bytes + 64 * 1024;
    const double dd_limit = 2.20 * level_bytes + static_cast<double>(k * sigma * wt::levels_for(sigma) * 16);
    std::ostringstream os;
    os << "pwt peak " << pwt_peak << " B (limit " << static_cast<std::uint64_t>(pwt_limit) << "), dd k=8 peak "
       << dd_peak << " B (limit " << static_cast<std::uint64_t>(dd_limit) << ")";
    if (static_cast<double>(pwt_peak) > pwt_limit || static_cast<double>(dd_peak) > dd_limit) {
        return fail(os.str());
    }
    return pass(os.str());
}

// 6 -------------------------------------------------------------------------
outcome directory_overhead()
{
    double worst = 0;
    for (std::uint64_t bits : {1'000'000ull, 1'000'003ull, 4'194'304ull, 10'000'000ull, 123'456'789ull}) {
        const wt::bit_vector bv(bits);
        const wt::rank_select_directory dir(bv);
        worst = std::max(worst, static_cast<double>(dir.size_in_bits()) / static_cast<double>(bits));
    }
    const auto msg = "worst overhead " + std::to_string(100 * worst) + "% of bitmap bits";
    return worst <= 0.06 ? pass(msg) : fail(msg);
}

// 7 -------------------------------------------------------------------------
outcome speedup_sanity()
{
    const auto hw = wt::par::hardware_threads();
    const auto time_case = [](const wt::symbol_sequence& seq, wt::algorithm algo, std::size_t p, std::uint64_t k) {
        return wt::bench::run_case(seq, {algo, p, k}, 3, false).median_seconds;
    };
    std::ostringstream os;
    if (hw < 4) {
        const auto seq = wt::gen_dataset(wt::dataset_kind::rand, 10'000'000, 4, 7);
        const auto t1 = time_case(seq, wt::algorithm::dd, 1, 4);
        const auto t4 = time_case(seq, wt::algorithm::dd, 4, 4);
        os << "needs >= 4 cores, machine has " << hw << "; report only: dd n=1e7 sigma=4 k=4 p=1 " << t1
           << " s, p=4 " << t4 << " s (ratio " << t4 / t1 << ")";
        return {verdict::skip, os.str()};
    }
    const auto dd_seq = wt::gen_dataset(wt::dataset_kind::rand, 100'000'000, 4, 7);
    const auto dd1 = time_case(dd_seq, wt::algorithm::dd, 1, 4);
    const auto dd4 = time_case(dd_seq, wt::algorithm::dd, 4, 4);

    const std::uint64_t big_sigma = 1u << 14;
    const auto pwt_seq = wt::gen_dataset(wt::dataset_kind::rand, 10'000'000, big_sigma, 7);
    const auto pwt1 = time_case(pwt_seq, wt::algorithm::pwt, 1, 1);
    const auto pwtL = time_case(pwt_seq, wt::algorithm::pwt, wt::levels_for(big_sigma), 1);

    os << "dd p=4/p=1 = " << dd4 / dd1 << " (need <= 0.6); pwt p=1/p=14 = " << pwt1 / pwtL << " (need >= 2)";
    if (dd4 > 0.6 * dd1 || pwt1 < 2 * pwtL) {
        return fail(os.str());
    }
    return pass(os.str());
}

// 8 -------------------------------------------------------------------------
outcome serialization_round_trip()
{
    std::mt19937_64 rng(8);
    const std::vector<std::uint64_t> sigmas = {1, 2, 5, 16, 200, 4096, 70000};
    for (int t = 0; t < 50; ++t) {
        const auto sigma = sigmas[rng() % sigmas.size()];
        const auto n = rng() % 5000;
        const auto s = oracle::random_sequence(rng, n, sigma);
        const auto tree = wt::build_dd(span32(s), sigma, 4, std::max<std::uint64_t>(1, std::min<std::uint64_t>(n, 4)));
        std::stringstream ss;
        tree.serialize(ss);
        const auto back = wt::wavelet_tree::deserialize(ss);
        if (!(back == tree)) {
            return fail("tree " + std::to_string(t) + ": bitmap words differ");
        }
        for (std::uint64_t i = 0; i < n; i += 1 + n / 200) {
            const auto c = s[i];
            if (back.access(i) != s[i] || back.rank(c, i) != tree.rank(c, i) ||
                back.select(c, back.rank(c, i)) != i) {
                return fail("tree " + std::to_string(t) + ": query answers differ");
            }
        }
    }
    return pass("50 trees round-trip with identical words and answers");
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<outcome()>>> criteria = {
        {"1 golden example", golden_example},
        {"2 oracle equivalence", oracle_equivalence},
        {"3 merge concurrency stress", merge_stress},
        {"4 prefix-sum determinism", prefix_sum_determinism},
        {"5 space bounds", space_bounds},
        {"6 directory overhead", directory_overhead},
        {"7 speedup sanity", speedup_sanity},
        {"8 serialization round-trip", serialization_round_trip},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = fail(std::string("exception: ") + e.what());
        }
        const char* tag = o.v == verdict::pass ? "PASS" : o.v == verdict::fail ? "FAIL" : "SKIP";
        failed += o.v == verdict::fail;
        std::cout << "[" << tag << "] " << name << ": " << o.detail << std::endl;
    }
    std::cout << (failed == 0 ? "acceptance: all criteria met" : "acceptance: FAILED") << std::endl;
    return failed == 0 ? 0 : 1;
}
