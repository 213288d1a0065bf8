#pragma once

#include "aplab/sequence.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace aplab {

inline constexpr std::uint64_t default_table_budget = 2ull << 30;
inline constexpr std::uint64_t default_segment_size = 1ull << 20;

// Primality bitmap plus smallest-prime-factor table for 0..limit inclusive.
struct PrimeTable {
    std::uint64_t limit = 0;
    std::uint64_t prime_count = 0;
    std::vector<std::uint64_t> bits;
    std::vector<std::uint32_t> spf;

    bool is_prime(std::uint64_t n) const {
        return n <= limit && ((bits[n >> 6] >> (n & 63)) & 1);
    }

    template <class Fn>
    void for_each_prime(Fn fn) const {
        for (std::uint64_t w = 0; w < bits.size(); ++w) {
            std::uint64_t word = bits[w];
            while (word) {
                unsigned b = static_cast<unsigned>(__builtin_ctzll(word));
                fn((w << 6) + b);
                word &= word - 1;
            }
        }
    }
};

// Linear sieve. Throws resource_error when the estimated footprint exceeds
// budget_bytes (spf entries are 4 bytes each, so the limit must fit uint32).
PrimeTable sieve_primes(std::uint64_t limit, std::uint64_t budget_bytes = default_table_budget);

// On-disk format: magic "PRIMTBL1", u64 limit, bitmap, u32 spf entries, all
// little-endian, CRC-32 trailer.
void save_prime_table(const PrimeTable& table, const std::string& path);
PrimeTable load_prime_table(const std::string& path);

// Primality bitmap alone, built segment by segment; usable far beyond the
// PrimeTable budget since there is no spf array.
struct PrimeBitmap {
    std::uint64_t limit = 0;
    std::vector<std::uint64_t> words;

    bool test(std::uint64_t n) const { return (words[n >> 6] >> (n & 63)) & 1; }
};

PrimeBitmap build_prime_bitmap(std::uint64_t limit, std::uint64_t segment_size = default_segment_size);

// Primes in [lo, hi] ascending, streamed without a full bitmap.
void for_each_prime(std::uint64_t lo, std::uint64_t hi, const std::function<void(std::uint64_t)>& fn,
                    std::uint64_t segment_size = default_segment_size);

// p^e <= limit with e >= 2, sorted by value; second member is log p.
std::vector<std::pair<std::uint64_t, double>> proper_prime_powers(std::uint64_t limit);

// Sum of Lambda(n) over n <= limit, streamed; deterministic for any thread count.
double chebyshev_psi(std::uint64_t limit, std::uint64_t segment_size = default_segment_size);

// values[i] = Lambda(i) for 0 <= i < n (log p on prime powers p^m, else 0).
SequenceVector von_mangoldt_table(std::uint64_t n);

// mu[i] for 0 <= i <= n; mu[0] = 0.
std::vector<std::int8_t> mobius_table(std::uint64_t n, std::uint64_t budget_bytes = default_table_budget);

} // namespace aplab
