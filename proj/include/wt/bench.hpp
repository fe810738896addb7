#ifndef WT_BENCH_HPP
#define WT_BENCH_HPP

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "construct.hpp"
#include "errors.hpp"
#include "memory.hpp"
#include "parallel.hpp"
#include "sequence.hpp"
#include "wavelet_tree.hpp"

namespace wt::bench {

inline const char* to_string(algorithm algo) noexcept
{
    switch (algo) {
    case algorithm::seq:
        return "seq";
    case algorithm::pwt:
        return "pwt";
    case algorithm::dd:
        return "dd";
    }
    return "?";
}

inline algorithm parse_algorithm(std::string_view name)
{
    if (name == "seq") {
        return algorithm::seq;
    }
    if (name == "pwt") {
        return algorithm::pwt;
    }
    if (name == "dd") {
        return algorithm::dd;
    }
    throw validation_error("unknown algorithm '" + std::string(name) + "' (expected seq, pwt or dd)");
}

struct bench_record {
    algorithm algo = algorithm::seq;
    std::uint64_t n = 0;
    std::uint64_t sigma = 0;
    std::size_t threads = 1;
    std::uint64_t segments = 1;
    unsigned reps = 1;
    double median_seconds = 0;
    std::uint64_t peak_extra_bytes = 0;
    bool dirs_included = false;
};

inline constexpr std::string_view csv_header =
    "algo,n,sigma,threads,segments,reps,median_seconds,peak_extra_bytes,dirs_included";

inline std::string to_csv(const bench_record& r)
{
    std::ostringstream os;
    os.precision(9);
    os << to_string(r.algo) << ',' << r.n << ',' << r.sigma << ',' << r.threads << ',' << r.segments << ','
       << r.reps << ',' << std::fixed << r.median_seconds << ',' << r.peak_extra_bytes << ','
       << (r.dirs_included ? 1 : 0);
    return os.str();
}

/// Middle element, or the mean of the two middle elements for even sizes.
inline double median(std::vector<double> xs)
{
    if (xs.empty()) {
        throw validation_error("median of an empty sample");
    }
    std::sort(xs.begin(), xs.end());
    const auto mid = xs.size() / 2;
    return xs.size() % 2 == 1 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
}

struct bench_case {
    algorithm algo = algorithm::seq;
    std::size_t threads = 1;
    std::uint64_t segments = 1;
};

/// Times `reps` constructions and reports the median wall time and the
/// largest tracked peak. The executor is created outside the timed region.
/// Directory construction is timed only when include_dirs is set.
inline bench_record run_case(const symbol_sequence& seq, const bench_case& c, unsigned reps, bool include_dirs)
{
    if (reps == 0) {
        throw validation_error("repetitions must be >= 1");
    }
    const auto threads = c.algo == algorithm::seq ? std::size_t{1} : c.threads;
    const auto segments = c.algo == algorithm::dd ? c.segments : 1;
    const par::executor ex(threads);

    std::vector<double> times;
    std::uint64_t peak = 0;
    for (unsigned r = 0; r < reps; ++r) {
        double seconds = 0;
        {
            memory::peak_scope scope;
            const auto t0 = std::chrono::steady_clock::now();
            auto levels = build_levels(c.algo, seq.view(), seq.sigma, ex, segments);
            if (include_dirs) {
                auto tree = wavelet_tree::from_levels(seq.size(), seq.sigma, std::move(levels), ex);
                seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            } else {
                seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            }
            peak = std::max<std::uint64_t>(peak, scope.peak_extra_bytes());
        }
        times.push_back(std::max(seconds, 1e-9));
    }
    return {c.algo, seq.size(), seq.sigma, threads, segments, reps, median(times), peak, include_dirs};
}

} // namespace wt::bench

#endif
