#pragma once

#include "aplab/prime_table.hpp"
#include "aplab/sequence.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace aplab {

struct GYConfig {
    std::uint64_t n = 0;
    std::uint64_t r = 0;                 // truncation R = floor(n^c)
    double exponent = 0.0;               // c, recorded
    double majorization_constant = 0.0;  // log n / log R
};

// Validates 2 <= R <= n and 0 < c < 1/2.
GYConfig make_gy_config(std::uint64_t n, double exponent);

// lambda[d] = mu(d) * log(R/d) / log R for 1 <= d <= R; lambda[0] unused.
struct WeightTable {
    std::uint64_t r = 0;
    std::vector<double> lambda;
};

WeightTable gy_weights(std::uint64_t r);

// sigma_lambda(n) = (sum_{d|n, d<=R} lambda_d)^2, via spf divisor enumeration.
double selberg_sigma(std::uint64_t n, const WeightTable& weights, const PrimeTable& table);

// nu(n) = log N for n <= R, else (sum_{d|n,d<=R} mu(d) log(R/d))^2 / log R.
// Index 0 takes the small-branch value log N.
SequenceVector gy_measure(const GYConfig& cfg, std::uint64_t budget_bytes = 1ull << 31);

struct MajorizationReport {
    double bound = 0.0; // log N / log R
    double prime_max_ratio = 0.0;
    std::uint64_t prime_argmax = 0;
    double prime_power_max_ratio = 0.0;
    std::uint64_t prime_power_argmax = 0;
    std::uint64_t primes_scanned = 0;
    bool nu_constant_on_primes = false; // nu == log R bitwise on every prime in (R, N)
};

// Max of Lambda(n)/nu(n) over primes in (R, N), with prime powers reported
// separately.
MajorizationReport majorization_report(const SequenceVector& nu, const SequenceVector& lambda,
                                       std::uint64_t r);

// Mean of nu(i) nu(i+h) over 1 <= i <= N-1-h.
double nu_pair_correlation(const SequenceVector& nu, std::uint64_t h);

struct WTrickConfig {
    std::uint32_t w = 0;      // cutoff
    std::uint64_t big_w = 1;  // prod_{p < w} p
    std::uint64_t phi_w = 1;  // prod_{p < w} (p - 1)
};

WTrickConfig make_w_trick(std::uint32_t w);

// lambda_tilde(i) = (phi(W)/W) * Lambda(W i + 1) for 0 <= i < n.
std::pair<WTrickConfig, SequenceVector> w_trick_lambda(std::uint64_t n, std::uint32_t w,
                                                       std::uint64_t max_sieve_limit = 2'000'000'000ull);

// nu_tilde(i) = (phi(W)/W) * log N for W i + 1 <= R, else (phi(W)/W) *
// (sum_{d | Wi+1, d<=R, gcd(d,W)=1} mu(d) log(R/d))^2 / log R.
SequenceVector w_trick_measure(std::uint64_t n, std::uint64_t r, std::uint32_t w,
                               std::uint64_t budget_bytes = 1ull << 31);

// Streaming diagnostics without materializing the vector; usable to n = 1e8+.
struct GYStats {
    GYConfig cfg;
    double mean = 0.0;           // adopted normalization (single 1/log R outside the square)
    double mean_displayed = 0.0; // the fully normalized variant, for the report
    MajorizationReport maj;
    std::vector<std::pair<std::uint64_t, double>> pair_correlations; // (h, value)
};

GYStats gy_measure_stats(std::uint64_t n, double exponent, std::span<const std::uint64_t> lags,
                         std::uint64_t segment_size = default_segment_size);

} // namespace aplab
