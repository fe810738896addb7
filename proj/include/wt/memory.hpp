#ifndef WT_MEMORY_HPP
#define WT_MEMORY_HPP

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <new>
#include <vector>

namespace wt::memory {

// Process-wide counter of bytes held by tracked containers. Construction
// code allocates all of its working storage through tracking_allocator so
// that peak extra space can be reported without an allocator shim.
class tracker {
public:
    static tracker& instance() noexcept
    {
        static tracker t;
        return t;
    }

    void on_allocate(std::size_t bytes) noexcept
    {
        auto now = current_.fetch_add(bytes, std::memory_order_relaxed) + bytes;
        auto peak = peak_.load(std::memory_order_relaxed);
        while (now > peak &&
               !peak_.compare_exchange_weak(peak, now, std::memory_order_relaxed)) {
        }
    }

    void on_deallocate(std::size_t bytes) noexcept
    {
        current_.fetch_sub(bytes, std::memory_order_relaxed);
    }

    std::size_t current() const noexcept { return current_.load(std::memory_order_relaxed); }
    std::size_t peak() const noexcept { return peak_.load(std::memory_order_relaxed); }

    void reset_peak() noexcept { peak_.store(current(), std::memory_order_relaxed); }

private:
    tracker() = default;

    std::atomic<std::size_t> current_{0};
    std::atomic<std::size_t> peak_{0};
};

template <class T>
struct tracking_allocator {
    using value_type = T;

    tracking_allocator() noexcept = default;
    template <class U>
    tracking_allocator(const tracking_allocator<U>&) noexcept {}

    T* allocate(std::size_t count)
    {
        auto* p = std::allocator<T>{}.allocate(count);
        tracker::instance().on_allocate(count * sizeof(T));
        return p;
    }

    void deallocate(T* p, std::size_t count) noexcept
    {
        tracker::instance().on_deallocate(count * sizeof(T));
        std::allocator<T>{}.deallocate(p, count);
    }

    template <class U>
    bool operator==(const tracking_allocator<U>&) const noexcept { return true; }
};

template <class T>
using tracked_vector = std::vector<T, tracking_allocator<T>>;

/// Measures the high-water mark of tracked bytes above the level current at
/// construction. Not meaningful when other threads allocate tracked memory
/// for unrelated work at the same time.
class peak_scope {
public:
    peak_scope() noexcept : baseline_(tracker::instance().current())
    {
        tracker::instance().reset_peak();
    }

    std::size_t peak_extra_bytes() const noexcept
    {
        auto peak = tracker::instance().peak();
        return peak > baseline_ ? peak - baseline_ : 0;
    }

private:
    std::size_t baseline_;
};

} // namespace wt::memory

#endif
