#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace aplab {

struct APWitness {
    std::uint64_t first = 0;
    std::uint64_t step = 0;
    std::uint32_t length = 0;
};

struct APCountOptions {
    std::uint64_t max_sieve_limit = 2'000'000'000ull;
    std::uint64_t segment_size = 1ull << 20;
};

struct APCountRecord {
    std::uint64_t n = 0;
    std::uint32_t k = 0;
    std::uint64_t count = 0;
    std::uint64_t sieve_limit = 0;
};

// Exact #{(x,d) : 1 <= x,d <= n, x, x+d, ..., x+(k-1)d all prime}. Terms are
// plain integers up to k*n, no wraparound; d = 0 is excluded by the range.
APCountRecord count_prime_aps(std::uint64_t n, std::uint32_t k, const APCountOptions& opts = {});

// All terms congruent to residue mod modulus.
struct APFilter {
    std::uint64_t residue = 0;
    std::uint64_t modulus = 1;
};

// Lexicographically first witnesses by (first, step).
std::vector<APWitness> list_prime_aps(std::uint64_t n, std::uint32_t k, std::size_t max_results,
                                      std::optional<APFilter> filter = {},
                                      const APCountOptions& opts = {});

// True iff every term passes is_prime_64. Throws input_error when the last
// term overflows 64 bits.
bool verify_ap(const APWitness& w);

} // namespace aplab
