#ifndef WT_PARALLEL_HPP
#define WT_PARALLEL_HPP

#include <algorithm>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <tbb/blocked_range.h>
#include <tbb/global_control.h>
#include <tbb/info.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

#include "errors.hpp"

namespace wt::par {

/// Half-open iteration range [lo, hi).
struct task_range {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;

    task_range() = default;
    task_range(std::uint64_t lo_, std::uint64_t hi_) : lo(lo_), hi(hi_)
    {
        if (lo > hi) {
            throw validation_error("task_range: lo > hi");
        }
    }

    std::uint64_t size() const noexcept { return hi - lo; }
    bool empty() const noexcept { return lo == hi; }
};

inline std::size_t hardware_threads() noexcept
{
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Fork-join executor with a fixed worker budget, scheduled by TBB's
/// work-stealing runtime. A budget of one runs everything inline on the
/// calling thread, without touching the runtime.
///
/// Budgets above the machine's core count are honored (oversubscription),
/// which the concurrency tests rely on.
class executor {
public:
    explicit executor(std::size_t threads = hardware_threads()) : threads_(std::max<std::size_t>(1, threads))
    {
        if (threads_ > 1) {
            if (threads_ > static_cast<std::size_t>(tbb::info::default_concurrency())) {
                control_ = std::make_unique<tbb::global_control>(tbb::global_control::max_allowed_parallelism,
                                                                 threads_);
            }
            arena_ = std::make_unique<tbb::task_arena>(static_cast<int>(threads_));
        }
    }

    executor(const executor&) = delete;
    executor& operator=(const executor&) = delete;

    std::size_t concurrency() const noexcept { return threads_; }
    bool sequential() const noexcept { return threads_ == 1; }

    /// Runs body(i) once for every i in range and returns when all calls
    /// have finished. The range is split by recursive halving down to
    /// `grain` indices per task. An exception thrown by any body cancels
    /// the remaining work and is rethrown here.
    template <class Body>
    void parallel_for(task_range range, Body&& body, std::uint64_t grain = 1) const
    {
        if (range.empty()) {
            return;
        }
        if (sequential() || range.size() == 1) {
            for (auto i = range.lo; i < range.hi; ++i) {
                body(i);
            }
            return;
        }
        arena_->execute([&] {
            tbb::parallel_for(tbb::blocked_range<std::uint64_t>(range.lo, range.hi, std::max<std::uint64_t>(1, grain)),
                              [&](const tbb::blocked_range<std::uint64_t>& r) {
                                  for (auto i = r.begin(); i != r.end(); ++i) {
                                      body(i);
                                  }
                              });
        });
    }

private:
    std::size_t threads_;
    std::unique_ptr<tbb::global_control> control_;
    std::unique_ptr<tbb::task_arena> arena_;
};

template <class Body>
void parallel_for(task_range range, Body&& body, std::size_t threads)
{
    executor ex(threads);
    ex.parallel_for(range, std::forward<Body>(body));
}

namespace detail {

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t out = 0;
    if (__builtin_add_overflow(a, b, &out)) {
        throw arithmetic_error("prefix sum overflows 64-bit counter");
    }
    return out;
}

} // namespace detail

/// In-place exclusive scan; returns the sum of the original elements.
inline std::uint64_t sequential_prefix_sum(std::span<std::uint64_t> a)
{
    std::uint64_t running = 0;
    for (auto& x : a) {
        const auto v = x;
        x = running;
        running = detail::checked_add(running, v);
    }
    return running;
}

/// Arrays shorter than this are scanned sequentially.
inline constexpr std::size_t prefix_sum_cutoff = 4096;

/// In-place exclusive scan; returns the sum of the original elements.
///
/// Two passes over one block per worker: blocks compute their totals in
/// parallel, the block totals are scanned sequentially, then every block
/// rescans itself starting from its offset. The result does not depend on
/// the worker count.
inline std::uint64_t parallel_prefix_sum(std::span<std::uint64_t> a, const executor& ex)
{
    const auto n = a.size();
    if (ex.sequential() || n < prefix_sum_cutoff) {
        return sequential_prefix_sum(a);
    }
    const auto blocks = std::min<std::size_t>(ex.concurrency(), n);
    const auto block_len = (n + blocks - 1) / blocks;
    std::vector<std::uint64_t> totals(blocks, 0);

    ex.parallel_for({0, blocks}, [&](std::uint64_t b) {
        const auto lo = b * block_len;
        const auto hi = std::min<std::size_t>(lo + block_len, n);
        std::uint64_t sum = 0;
        for (auto j = lo; j < hi; ++j) {
            sum = detail::checked_add(sum, a[j]);
        }
        totals[b] = sum;
    });

    const auto total = sequential_prefix_sum(totals);

    ex.parallel_for({0, blocks}, [&](std::uint64_t b) {
        const auto lo = b * block_len;
        const auto hi = std::min<std::size_t>(lo + block_len, n);
        auto running = totals[b];
        for (auto j = lo; j < hi; ++j) {
            const auto v = a[j];
            a[j] = running;
            running += v;
        }
    });
    return total;
}

inline std::uint64_t parallel_prefix_sum(std::span<std::uint64_t> a, std::size_t threads)
{
    if (threads <= 1 || a.size() < prefix_sum_cutoff) {
        return sequential_prefix_sum(a);
    }
    executor ex(threads);
    return parallel_prefix_sum(a, ex);
}

} // namespace wt::par

#endif
