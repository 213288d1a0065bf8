#include "aplab/parallel.hpp"

#include "aplab/util.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace aplab {

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_thread_count(unsigned n) { g_threads.store(n); }

unsigned thread_count() {
    unsigned n = g_threads.load();
    if (n == 0) {
        n = std::thread::hardware_concurrency();
        if (n == 0) n = 1;
    }
    return n;
}

void for_each_block(std::uint64_t n, std::uint64_t block_size,
                    const std::function<void(std::size_t, std::uint64_t, std::uint64_t)>& fn) {
    if (n == 0) return;
    const std::size_t nblocks = block_count(n, block_size);
    const unsigned workers = std::min<std::uint64_t>(thread_count(), nblocks);

    if (workers <= 1) {
        for (std::size_t b = 0; b < nblocks; ++b) {
            std::uint64_t lo = b * block_size;
            std::uint64_t hi = std::min<std::uint64_t>(lo + block_size, n);
            fn(b, lo, hi);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        try {
            for (;;) {
                std::size_t b = next.fetch_add(1);
                if (b >= nblocks) break;
                std::uint64_t lo = b * block_size;
                std::uint64_t hi = std::min<std::uint64_t>(lo + block_size, n);
                fn(b, lo, hi);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(nblocks); // stop handing out work
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned i = 0; i + 1 < workers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

double reduce_blocks(std::uint64_t n, std::uint64_t block_size,
                     const std::function<double(std::uint64_t, std::uint64_t)>& block_sum) {
    std::vector<double> partial(block_count(n, block_size), 0.0);
    for_each_block(n, block_size, [&](std::size_t b, std::uint64_t lo, std::uint64_t hi) {
        partial[b] = block_sum(lo, hi);
    });
    return kahan_sum(partial);
}

std::uint64_t reduce_blocks_u64(std::uint64_t n, std::uint64_t block_size,
                                const std::function<std::uint64_t(std::uint64_t, std::uint64_t)>& block_sum) {
    std::vector<std::uint64_t> partial(block_count(n, block_size), 0);
    for_each_block(n, block_size, [&](std::size_t b, std::uint64_t lo, std::uint64_t hi) {
        partial[b] = block_sum(lo, hi);
    });
    std::uint64_t total = 0;
    for (std::uint64_t v : partial) total += v;
    return total;
}

} // namespace aplab
