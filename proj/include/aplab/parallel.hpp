#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace aplab {

// Global worker cap. 0 restores the hardware default.
void set_thread_count(unsigned n);
unsigned thread_count();

// Splits [0, n) into fixed-size blocks and runs fn(block_index, begin, end)
// on a small worker pool. Block boundaries depend only on n and block_size,
// never on the number of workers, so per-block results reduced in block order
// are identical for any thread count.
void for_each_block(std::uint64_t n, std::uint64_t block_size,
                    const std::function<void(std::size_t, std::uint64_t, std::uint64_t)>& fn);

inline std::size_t block_count(std::uint64_t n, std::uint64_t block_size) {
    return static_cast<std::size_t>((n + block_size - 1) / block_size);
}

// Per-block partial sums combined in block order. Deterministic by design.
double reduce_blocks(std::uint64_t n, std::uint64_t block_size,
                     const std::function<double(std::uint64_t, std::uint64_t)>& block_sum);

std::uint64_t reduce_blocks_u64(std::uint64_t n, std::uint64_t block_size,
                                const std::function<std::uint64_t(std::uint64_t, std::uint64_t)>& block_sum);

} // namespace aplab
