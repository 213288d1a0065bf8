#include "aplab/prime_aps.hpp"

#include "aplab/errors.hpp"
#include "aplab/parallel.hpp"
#include "aplab/prime_table.hpp"
#include "aplab/primality.hpp"

#include <algorithm>

namespace aplab {

namespace {

std::uint64_t checked_sieve_limit(std::uint64_t n, std::uint32_t k, const APCountOptions& opts) {
    if (n < 1) throw input_error("count_prime_aps: n must be >= 1");
    if (k < 3) throw input_error("count_prime_aps: k must be >= 3");
    if (n > opts.max_sieve_limit / k)
        throw resource_error("count_prime_aps: k*n = " + std::to_string(k) + "*" + std::to_string(n) +
                             " exceeds the sieve budget " + std::to_string(opts.max_sieve_limit));
    return static_cast<std::uint64_t>(k) * n;
}

// Primes up to `limit` as a sorted vector.
std::vector<std::uint64_t> primes_upto(const PrimeBitmap& bm, std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p <= limit; ++p)
        if (bm.test(p)) out.push_back(p);
    return out;
}

} // namespace

APCountRecord count_prime_aps(std::uint64_t n, std::uint32_t k, const APCountOptions& opts) {
    const std::uint64_t limit = checked_sieve_limit(n, k, opts);
    const PrimeBitmap bm = build_prime_bitmap(limit, opts.segment_size);

    // Pairs of primes (x, q=x+d) with d in [1, n] determine the progression;
    // the remaining terms are bitmap lookups. qs extends xs, so the q-range
    // for xs[i] starts at index i+1.
    const std::vector<std::uint64_t> qs = primes_upto(bm, std::min(limit, 2 * n));
    std::size_t nx = 0;
    while (nx < qs.size() && qs[nx] <= n) ++nx;

    const std::uint64_t count = reduce_blocks_u64(nx, 256, [&](std::uint64_t lo, std::uint64_t hi) {
        std::uint64_t c = 0;
        for (std::uint64_t i = lo; i < hi; ++i) {
            const std::uint64_t x = qs[i];
            const std::uint64_t qmax = x + n;
            for (std::size_t j = i + 1; j < qs.size() && qs[j] <= qmax; ++j) {
                const std::uint64_t d = qs[j] - x;
                std::uint64_t term = qs[j] + d;
                bool ok = bm.test(term);
                for (std::uint32_t t = 3; ok && t < k; ++t) {
                    term += d;
                    ok = bm.test(term);
                }
                c += ok;
            }
        }
        return c;
    });

    return APCountRecord{n, k, count, limit};
}

std::vector<APWitness> list_prime_aps(std::uint64_t n, std::uint32_t k, std::size_t max_results,
                                      std::optional<APFilter> filter, const APCountOptions& opts) {
    const std::uint64_t limit = checked_sieve_limit(n, k, opts);
    if (filter) {
        if (filter->modulus < 1) throw input_error("list_prime_aps: filter modulus must be >= 1");
        if (filter->residue >= filter->modulus)
            throw input_error("list_prime_aps: filter residue must lie in [0, modulus)");
    }
    std::vector<APWitness> out;
    if (max_results == 0) return out;

    const PrimeBitmap bm = build_prime_bitmap(limit, opts.segment_size);
    const std::vector<std::uint64_t> qs = primes_upto(bm, std::min(limit, 2 * n));
    std::size_t nx = 0;
    while (nx < qs.size() && qs[nx] <= n) ++nx;

    for (std::uint64_t i = 0; i < nx && out.size() < max_results; ++i) {
        const std::uint64_t x = qs[i];
        if (filter && x % filter->modulus != filter->residue) continue;
        const std::uint64_t qmax = x + n;
        for (std::size_t j = i + 1; j < qs.size() && qs[j] <= qmax; ++j) {
            const std::uint64_t d = qs[j] - x;
            bool ok = true;
            std::uint64_t term = x;
            for (std::uint32_t t = 1; ok && t < k; ++t) {
                term += d;
                ok = bm.test(term) && (!filter || term % filter->modulus == filter->residue);
            }
            if (ok) {
                out.push_back(APWitness{x, d, k});
                if (out.size() >= max_results) break;
            }
        }
    }
    return out;
}

bool verify_ap(const APWitness& w) {
    if (w.length < 3) throw input_error("verify_ap: length must be >= 3");
    if (w.step < 1) throw input_error("verify_ap: step must be >= 1");
    const __uint128_t last =
        static_cast<__uint128_t>(w.first) + static_cast<__uint128_t>(w.length - 1) * w.step;
    if (last > static_cast<__uint128_t>(UINT64_MAX))
        throw input_error("verify_ap: last term overflows 64 bits");

    std::uint64_t term = w.first;
    for (std::uint32_t j = 0; j < w.length; ++j, term += w.step)
        if (!is_prime_64(term)) return false;
    return true;
}

} // namespace aplab
