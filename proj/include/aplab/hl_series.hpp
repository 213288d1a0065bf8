#pragma once

#include <cstdint>

namespace aplab {

// gamma_k = prod_p alpha_p^(k), truncated at truncation_prime with a rigorous
// bound on the relative error of the omitted tail.
struct SingularSeriesValue {
    std::uint32_t k = 0;
    double value = 0.0;
    std::uint64_t truncation_prime = 0;
    double tail_bound = 0.0;
};

struct PredictionRecord {
    std::uint64_t n = 0;
    std::uint32_t k = 0;
    double crude = 0.0;
    double refined = 0.0;
    std::uint64_t quadrature_cells = 0;
};

// alpha_p^(k): (1/p)(p/(p-1))^{k-1} for p <= k, (1-(k-1)/p)(p/(p-1))^{k-1}
// for p >= k; the branches agree at p = k. Throws input_error if p is not prime.
double local_density(std::uint64_t p, std::uint32_t k);

// Product over p <= P with P chosen so that the tail bound 4k^2/P <= tol.
SingularSeriesValue singular_series(std::uint32_t k, double tol,
                                    std::uint64_t max_truncation_prime = 200'000'000ull);

// gamma_k * n^2 / (log n)^k, natural log.
double hl_crude(double n, std::uint32_t k, const SingularSeriesValue& gamma);

// Replaces (log n)^{-k} by the 2-D integral of prod_{j<k} 1/log(x + j d) over
// [2,n] x [1,n], midpoint rule on a log-spaced grid with grid^2 cells.
PredictionRecord hl_refined(std::uint64_t n, std::uint32_t k, const SingularSeriesValue& gamma,
                            std::uint32_t grid = 256);

double ap_log_integrand(double x, double d, std::uint32_t k);

// Twin-type constant S(h) = 2 prod_{p>=3}(1 - 1/(p-1)^2) * prod_{p|h, p>=3}
// (p-1)/(p-2), truncated with tail bound <= 1e-6. Throws input_error for odd h.
double binary_singular_series(std::uint64_t h);

} // namespace aplab
