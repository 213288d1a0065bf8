#include "aplab/prime_table.hpp"

#include "aplab/errors.hpp"
#include "aplab/parallel.hpp"
#include "aplab/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace aplab {

namespace {

std::uint64_t isqrt_u64(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Simple odd sieve for the base primes of segmented runs.
std::vector<std::uint64_t> small_primes_upto(std::uint64_t limit) {
    std::vector<std::uint64_t> primes;
    if (limit < 2) return primes;
    std::vector<bool> comp(limit + 1, false);
    for (std::uint64_t i = 2; i * i <= limit; ++i)
        if (!comp[i])
            for (std::uint64_t j = i * i; j <= limit; j += i) comp[j] = true;
    for (std::uint64_t i = 2; i <= limit; ++i)
        if (!comp[i]) primes.push_back(i);
    return primes;
}

void append_u64_le(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void append_u32_le(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t read_u64_le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

std::uint32_t read_u32_le(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
}

constexpr char table_magic[9] = "PRIMTBL1";

} // namespace

PrimeTable sieve_primes(std::uint64_t limit, std::uint64_t budget_bytes) {
    if (limit < 2) throw input_error("sieve_primes: limit must be >= 2");
    if (limit > std::numeric_limits<std::uint32_t>::max())
        throw resource_error("sieve_primes: limit exceeds the 4-byte spf range");

    const std::uint64_t entries = limit + 1;
    // spf + bitmap + the transient prime list used by the linear sieve
    const std::uint64_t estimate =
        entries * 4 + entries / 8 + 8 + (entries / 10) * 4;
    if (estimate > budget_bytes)
        throw resource_error("sieve_primes: estimated " + std::to_string(estimate) +
                             " bytes exceeds budget " + std::to_string(budget_bytes));

    PrimeTable t;
    t.limit = limit;
    t.spf.assign(entries, 0);
    t.bits.assign((entries + 63) / 64, 0);

    std::vector<std::uint32_t> primes;
    primes.reserve(entries / 10 + 16);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (t.spf[i] == 0) {
            t.spf[i] = static_cast<std::uint32_t>(i);
            primes.push_back(static_cast<std::uint32_t>(i));
            t.bits[i >> 6] |= 1ull << (i & 63);
        }
        for (std::uint32_t p : primes) {
            if (p > t.spf[i] || i * p > limit) break;
            t.spf[i * p] = p;
        }
    }
    t.prime_count = primes.size();
    return t;
}

void save_prime_table(const PrimeTable& table, const std::string& path) {
    std::string buf;
    const std::uint64_t entries = table.limit + 1;
    const std::uint64_t bitmap_bytes = (entries + 7) / 8;
    buf.reserve(16 + bitmap_bytes + entries * 4 + 4);
    buf.append(table_magic, 8);
    append_u64_le(buf, table.limit);
    for (std::uint64_t i = 0; i < bitmap_bytes; ++i) {
        std::uint64_t word = table.bits[i / 8];
        buf.push_back(static_cast<char>((word >> (8 * (i % 8))) & 0xFF));
    }
    for (std::uint64_t i = 0; i < entries; ++i) append_u32_le(buf, table.spf[i]);
    append_u32_le(buf, crc32(buf.data(), buf.size()));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw input_error("cannot open for writing: " + path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw input_error("write failed: " + path);
}

PrimeTable load_prime_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open: " + path);
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < 20) throw input_error("prime table file truncated: " + path);
    if (std::memcmp(buf.data(), table_magic, 8) != 0)
        throw input_error("bad magic in prime table file: " + path);

    const auto* bytes = reinterpret_cast<const unsigned char*>(buf.data());
    std::uint32_t stored_crc = read_u32_le(bytes + buf.size() - 4);
    if (crc32(buf.data(), buf.size() - 4) != stored_crc)
        throw input_error("CRC mismatch in prime table file: " + path);

    PrimeTable t;
    t.limit = read_u64_le(bytes + 8);
    const std::uint64_t entries = t.limit + 1;
    const std::uint64_t bitmap_bytes = (entries + 7) / 8;
    if (buf.size() != 16 + bitmap_bytes + entries * 4 + 4)
        throw input_error("prime table file has inconsistent size: " + path);

    t.bits.assign((entries + 63) / 64, 0);
    const unsigned char* bm = bytes + 16;
    for (std::uint64_t i = 0; i < bitmap_bytes; ++i)
        t.bits[i / 8] |= static_cast<std::uint64_t>(bm[i]) << (8 * (i % 8));
    t.spf.resize(entries);
    const unsigned char* sp = bm + bitmap_bytes;
    for (std::uint64_t i = 0; i < entries; ++i) t.spf[i] = read_u32_le(sp + i * 4);
    std::uint64_t count = 0;
    for (std::uint64_t w : t.bits) count += static_cast<std::uint64_t>(__builtin_popcountll(w));
    t.prime_count = count;
    return t;
}

PrimeBitmap build_prime_bitmap(std::uint64_t limit, std::uint64_t segment_size) {
    if (limit < 2) throw input_error("build_prime_bitmap: limit must be >= 2");
    segment_size = std::max<std::uint64_t>(segment_size, 1 << 12);
    segment_size = (segment_size + 63) & ~63ull; // whole words per segment

    PrimeBitmap bm;
    bm.limit = limit;
    bm.words.assign((limit + 64) / 64, ~0ull);

    const auto base = small_primes_upto(isqrt_u64(limit));
    const std::uint64_t nseg = (limit + segment_size) / segment_size;

    for_each_block(nseg, 1, [&](std::size_t, std::uint64_t seg, std::uint64_t) {
        const std::uint64_t lo = seg * segment_size;
        const std::uint64_t hi = std::min(lo + segment_size - 1, limit);
        for (std::uint64_t p : base) {
            if (p * p > hi) break;
            std::uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
            for (std::uint64_t m = start; m <= hi; m += p)
                bm.words[m >> 6] &= ~(1ull << (m & 63));
        }
    });
    bm.words[0] &= ~3ull; // 0 and 1
    std::uint64_t tail = limit & 63;
    if (tail != 63) bm.words.back() &= (1ull << (tail + 1)) - 1;
    return bm;
}

void for_each_prime(std::uint64_t lo, std::uint64_t hi, const std::function<void(std::uint64_t)>& fn,
                    std::uint64_t segment_size) {
    if (hi < 2 || hi < lo) return;
    lo = std::max<std::uint64_t>(lo, 2);
    segment_size = std::max<std::uint64_t>(segment_size, 1 << 12);
    const auto base = small_primes_upto(isqrt_u64(hi));

    std::vector<std::uint8_t> comp(segment_size);
    for (std::uint64_t seg_lo = lo; seg_lo <= hi; seg_lo += segment_size) {
        const std::uint64_t seg_hi = std::min(seg_lo + segment_size - 1, hi);
        const std::uint64_t len = seg_hi - seg_lo + 1;
        std::fill(comp.begin(), comp.begin() + len, 0);
        for (std::uint64_t p : base) {
            if (p * p > seg_hi) break;
            std::uint64_t start = std::max(p * p, ((seg_lo + p - 1) / p) * p);
            for (std::uint64_t m = start; m <= seg_hi; m += p) comp[m - seg_lo] = 1;
        }
        for (std::uint64_t i = 0; i < len; ++i)
            if (!comp[i]) fn(seg_lo + i);
    }
}

std::vector<std::pair<std::uint64_t, double>> proper_prime_powers(std::uint64_t limit) {
    std::vector<std::pair<std::uint64_t, double>> out;
    if (limit < 4) return out;
    const std::uint64_t root = isqrt_u64(limit);
    for_each_prime(2, root, [&](std::uint64_t p) {
        double lp = std::log(static_cast<double>(p));
        for (std::uint64_t q = p * p;; q *= p) {
            out.emplace_back(q, lp);
            if (q > limit / p) break;
        }
    });
    std::sort(out.begin(), out.end());
    return out;
}

double chebyshev_psi(std::uint64_t limit, std::uint64_t segment_size) {
    if (limit < 2) return 0.0;
    segment_size = std::max<std::uint64_t>(segment_size, 1 << 12);
    const auto base = small_primes_upto(isqrt_u64(limit));
    const std::uint64_t nseg = (limit + segment_size) / segment_size;

    std::vector<double> partial(nseg, 0.0);
    for_each_block(nseg, 1, [&](std::size_t, std::uint64_t seg, std::uint64_t) {
        const std::uint64_t lo = std::max<std::uint64_t>(seg * segment_size, 2);
        const std::uint64_t hi = std::min(seg * segment_size + segment_size - 1, limit);
        if (lo > hi) return;
        std::vector<std::uint8_t> comp(hi - lo + 1, 0);
        for (std::uint64_t p : base) {
            if (p * p > hi) break;
            std::uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
            for (std::uint64_t m = start; m <= hi; m += p) comp[m - lo] = 1;
        }
        Kahan acc;
        for (std::uint64_t i = 0; i <= hi - lo; ++i)
            if (!comp[i]) acc.add(std::log(static_cast<double>(lo + i)));
        partial[seg] = acc.value();
    });

    Kahan total;
    for (double v : partial) total.add(v);
    for (const auto& [q, lp] : proper_prime_powers(limit)) total.add(lp);
    return total.value();
}

SequenceVector von_mangoldt_table(std::uint64_t n) {
    if (n < 2) throw input_error("von_mangoldt_table: n must be >= 2");
    SequenceVector seq(n, SeqKind::lambda);
    for_each_prime(2, n - 1, [&](std::uint64_t p) {
        seq.values[p] = std::log(static_cast<double>(p));
    });
    for (const auto& [q, lp] : proper_prime_powers(n - 1)) seq.values[q] = lp;
    return seq;
}

std::vector<std::int8_t> mobius_table(std::uint64_t n, std::uint64_t budget_bytes) {
    if (n < 1) throw input_error("mobius_table: n must be >= 1");
    std::vector<std::int8_t> mu(n + 1, 0);
    mu[1] = 1;
    if (n < 2) return mu;
    PrimeTable t = sieve_primes(n, budget_bytes);
    for (std::uint64_t i = 2; i <= n; ++i) {
        std::uint64_t p = t.spf[i];
        std::uint64_t m = i / p;
        mu[i] = (m % p == 0) ? 0 : static_cast<std::int8_t>(-mu[m]);
    }
    return mu;
}

} // namespace aplab
