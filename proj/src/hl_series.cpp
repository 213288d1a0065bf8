#include "aplab/hl_series.hpp"

#include "aplab/errors.hpp"
#include "aplab/parallel.hpp"
#include "aplab/prime_table.hpp"
#include "aplab/primality.hpp"
#include "aplab/util.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace aplab {

double local_density(std::uint64_t p, std::uint32_t k) {
    if (k < 3) throw input_error("local_density: k must be >= 3");
    if (!is_prime_64(p)) throw input_error("local_density: p = " + std::to_string(p) + " is not prime");
    const double pd = static_cast<double>(p);
    const double ratio = std::pow(pd / (pd - 1.0), static_cast<double>(k - 1));
    if (p <= k) return ratio / pd;
    return (1.0 - static_cast<double>(k - 1) / pd) * ratio;
}

SingularSeriesValue singular_series(std::uint32_t k, double tol, std::uint64_t max_truncation_prime) {
    if (k < 3) throw input_error("singular_series: k must be >= 3");
    if (!(tol > 0.0 && tol < 1.0)) throw input_error("singular_series: tol must lie in (0,1)");

    // |alpha_p - 1| <= 2k^2/p^2 for p > max(2k, 10), so the omitted log-tail
    // past P is below sum_{m>P} 4k^2/m^2 <= 4k^2/P.
    const double k2 = 4.0 * static_cast<double>(k) * static_cast<double>(k);
    std::uint64_t cutoff = static_cast<std::uint64_t>(std::ceil(k2 / tol));
    cutoff = std::max<std::uint64_t>(cutoff, std::max<std::uint64_t>(2 * k, 10));
    if (cutoff > max_truncation_prime)
        throw resource_error("singular_series: truncation prime " + std::to_string(cutoff) +
                             " exceeds the prime-table budget " + std::to_string(max_truncation_prime));

    Kahan log_sum;
    for_each_prime(2, cutoff, [&](std::uint64_t p) {
        log_sum.add(std::log(local_density(p, k)));
    });

    SingularSeriesValue out;
    out.k = k;
    out.value = std::exp(log_sum.value());
    out.truncation_prime = cutoff;
    out.tail_bound = k2 / static_cast<double>(cutoff);
    return out;
}

double hl_crude(double n, std::uint32_t k, const SingularSeriesValue& gamma) {
    if (!(n >= 3.0)) throw input_error("hl_crude: n must be >= 3");
    const double ln = std::log(n);
    return gamma.value * n * n / std::pow(ln, static_cast<double>(k));
}

double ap_log_integrand(double x, double d, std::uint32_t k) {
    double prod = 1.0;
    for (std::uint32_t j = 0; j < k; ++j) prod *= std::log(x + static_cast<double>(j) * d);
    return 1.0 / prod;
}

PredictionRecord hl_refined(std::uint64_t n, std::uint32_t k, const SingularSeriesValue& gamma,
                            std::uint32_t grid) {
    if (n < 16) throw input_error("hl_refined: n must be >= 16");
    if (grid < 2) throw input_error("hl_refined: grid must be >= 2");

    const double nd = static_cast<double>(n);
    const double g = static_cast<double>(grid);
    // geometric nodes: x over [2, n], d over [1, n]
    std::vector<double> xs(grid + 1), ds(grid + 1);
    for (std::uint32_t i = 0; i <= grid; ++i) {
        xs[i] = 2.0 * std::pow(nd / 2.0, static_cast<double>(i) / g);
        ds[i] = std::pow(nd, static_cast<double>(i) / g);
    }
    xs[grid] = nd;
    ds[grid] = nd;

    const double integral = reduce_blocks(grid, 8, [&](std::uint64_t lo, std::uint64_t hi) {
        Kahan acc;
        for (std::uint64_t i = lo; i < hi; ++i) {
            const double xm = 0.5 * (xs[i] + xs[i + 1]);
            const double xw = xs[i + 1] - xs[i];
            for (std::uint32_t j = 0; j < grid; ++j) {
                const double dm = 0.5 * (ds[j] + ds[j + 1]);
                const double dw = ds[j + 1] - ds[j];
                acc.add(xw * dw * ap_log_integrand(xm, dm, k));
            }
        }
        return acc.value();
    });

    PredictionRecord rec;
    rec.n = n;
    rec.k = k;
    rec.crude = hl_crude(nd, k, gamma);
    rec.refined = gamma.value * integral;
    rec.quadrature_cells = static_cast<std::uint64_t>(grid) * grid;
    return rec;
}

double binary_singular_series(std::uint64_t h) {
    if (h == 0 || h % 2 != 0) throw input_error("binary_singular_series: h must be even and nonzero");

    // 2 * prod_{3<=p<=P}(1 - 1/(p-1)^2); log-tail past P is under 2/P, so
    // P = 4e6 pins the relative error below 1e-6.
    static const double twin_product = [] {
        Kahan log_sum;
        for_each_prime(3, 4'000'000, [&](std::uint64_t p) {
            const double pm1 = static_cast<double>(p) - 1.0;
            log_sum.add(std::log1p(-1.0 / (pm1 * pm1)));
        });
        return 2.0 * std::exp(log_sum.value());
    }();

    double value = twin_product;
    std::uint64_t rest = h;
    while (rest % 2 == 0) rest /= 2;
    for (std::uint64_t p = 3; p * p <= rest; p += 2) {
        if (rest % p == 0) {
            value *= static_cast<double>(p - 1) / static_cast<double>(p - 2);
            while (rest % p == 0) rest /= p;
        }
    }
    if (rest > 1) value *= static_cast<double>(rest - 1) / static_cast<double>(rest - 2);
    return value;
}

} // namespace aplab
