#include "wvrecon/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace wvrecon {

namespace {

unsigned env_default() {
    if (const char* s = std::getenv("WVRECON_THREADS")) {
        long v = std::strtol(s, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

std::atomic<unsigned>& cap() {
    static std::atomic<unsigned> value{0};
    return value;
}

}  // namespace

void set_max_threads(unsigned n) { cap().store(n); }

unsigned max_threads() {
    unsigned c = cap().load();
    return c == 0 ? env_default() : c;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;

    constexpr std::size_t kBlock = 32;
    const std::size_t blocks = (n + kBlock - 1) / kBlock;
    unsigned workers = max_threads();
    if (workers > blocks) workers = static_cast<unsigned>(blocks);

    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    auto body = [&] {
        for (;;) {
            const std::size_t b = next.fetch_add(1);
            if (b >= blocks) return;
            const std::size_t lo = b * kBlock;
            const std::size_t hi = lo + kBlock < n ? lo + kBlock : n;
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
}

}  // namespace wvrecon
