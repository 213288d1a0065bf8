#include "aplab/gy_sieve.hpp"

#include "aplab/errors.hpp"
#include "aplab/parallel.hpp"
#include "aplab/primality.hpp"
#include "aplab/util.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace aplab {

namespace {

// Squarefree d <= R with mu(d) != 0 and the attached coefficient
// mu(d) * log(R/d). Shared by the vector and streaming builders.
struct DivisorWeights {
    std::vector<std::uint32_t> d;
    std::vector<double> coef;
    double log_r = 0.0;
};

DivisorWeights make_divisor_weights(std::uint64_t r) {
    DivisorWeights w;
    w.log_r = std::log(static_cast<double>(r));
    const auto mu = mobius_table(r);
    w.d.reserve(r / 2);
    w.coef.reserve(r / 2);
    for (std::uint64_t d = 1; d <= r; ++d) {
        if (mu[d] == 0) continue;
        const double c = static_cast<double>(mu[d]) *
                         std::log(static_cast<double>(r) / static_cast<double>(d));
        w.d.push_back(static_cast<std::uint32_t>(d));
        w.coef.push_back(c);
    }
    return w;
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
    // extended euclid; gcd(a, m) must be 1
    std::int64_t t = 0, newt = 1;
    std::int64_t r = static_cast<std::int64_t>(m), newr = static_cast<std::int64_t>(a % m);
    while (newr != 0) {
        std::int64_t q = r / newr;
        std::int64_t tmp = t - q * newt;
        t = newt;
        newt = tmp;
        tmp = r - q * newr;
        r = newr;
        newr = tmp;
    }
    if (r != 1) throw internal_error("inverse_mod: arguments not coprime");
    if (t < 0) t += static_cast<std::int64_t>(m);
    return static_cast<std::uint64_t>(t);
}

// Divisor-sum accumulation over a window [lo, hi): for each weight d, add the
// coefficient mu(d) log(R/d) to every index in d's arithmetic progression,
// in ascending-d order (a fixed order keeps the sums bit-reproducible).
void accumulate_window(std::vector<double>& s, std::uint64_t lo, std::uint64_t hi,
                       const DivisorWeights& w,
                       const std::vector<std::uint64_t>& first_index) {
    std::fill(s.begin(), s.begin() + (hi - lo), 0.0);
    for (std::size_t t = 0; t < w.d.size(); ++t) {
        const std::uint64_t d = w.d[t];
        const double c = w.coef[t];
        std::uint64_t i = first_index[t];
        if (i < lo) i += ((lo - i) + d - 1) / d * d;
        for (; i < hi; i += d) s[i - lo] += c;
    }
}

} // namespace

GYConfig make_gy_config(std::uint64_t n, double exponent) {
    if (n < 4) throw input_error("make_gy_config: n must be >= 4");
    if (!(exponent > 0.0 && exponent < 0.5))
        throw input_error("make_gy_config: exponent must lie in (0, 1/2)");
    GYConfig cfg;
    cfg.n = n;
    cfg.exponent = exponent;
    cfg.r = static_cast<std::uint64_t>(std::pow(static_cast<double>(n), exponent));
    if (cfg.r < 2) throw input_error("make_gy_config: truncation R below 2; raise n or exponent");
    if (cfg.r > n) cfg.r = n;
    cfg.majorization_constant = std::log(static_cast<double>(n)) / std::log(static_cast<double>(cfg.r));
    return cfg;
}

WeightTable gy_weights(std::uint64_t r) {
    if (r < 2) throw input_error("gy_weights: r must be >= 2");
    WeightTable t;
    t.r = r;
    t.lambda.assign(r + 1, 0.0);
    const auto mu = mobius_table(r);
    const double log_r = std::log(static_cast<double>(r));
    for (std::uint64_t d = 1; d <= r; ++d) {
        if (mu[d] == 0) continue;
        t.lambda[d] = static_cast<double>(mu[d]) *
                      std::log(static_cast<double>(r) / static_cast<double>(d)) / log_r;
    }
    return t;
}

double selberg_sigma(std::uint64_t n, const WeightTable& weights, const PrimeTable& table) {
    if (n < 1) throw input_error("selberg_sigma: n must be >= 1");
    if (n > table.limit) throw resource_error("selberg_sigma: n exceeds the factorization table");

    // distinct primes of n
    std::vector<std::uint64_t> primes;
    std::uint64_t m = n;
    while (m > 1) {
        std::uint64_t p = table.spf[m];
        primes.push_back(p);
        while (m % p == 0) m /= p;
    }
    // squarefree divisors <= R carry the only nonzero weights
    double sum = 0.0;
    std::vector<std::uint64_t> divs{1};
    for (std::uint64_t p : primes) {
        std::size_t sz = divs.size();
        for (std::size_t i = 0; i < sz; ++i) {
            std::uint64_t d = divs[i] * p;
            if (d <= weights.r) divs.push_back(d);
        }
    }
    std::sort(divs.begin(), divs.end());
    for (std::uint64_t d : divs) sum += weights.lambda[d];
    return sum * sum;
}

SequenceVector gy_measure(const GYConfig& cfg, std::uint64_t budget_bytes) {
    if (cfg.n * 8 > budget_bytes)
        throw resource_error("gy_measure: vector of " + std::to_string(cfg.n) +
                             " doubles exceeds budget; use gy_measure_stats");
    const DivisorWeights w = make_divisor_weights(cfg.r);
    std::vector<std::uint64_t> first(w.d.size());
    for (std::size_t t = 0; t < w.d.size(); ++t) first[t] = w.d[t]; // first positive multiple

    SequenceVector nu(cfg.n, SeqKind::nu);
    const double log_n = std::log(static_cast<double>(cfg.n));
    const std::uint64_t window = 1ull << 18;

    for_each_block(cfg.n, window, [&](std::size_t, std::uint64_t lo, std::uint64_t hi) {
        std::vector<double> s(hi - lo);
        accumulate_window(s, lo, hi, w, first);
        for (std::uint64_t i = lo; i < hi; ++i) {
            if (i <= cfg.r) {
                nu.values[i] = log_n;
            } else {
                const double si = s[i - lo];
                // a prime beyond R keeps the single d = 1 term
                nu.values[i] = (si == w.log_r) ? w.log_r : si * si / w.log_r;
            }
        }
    });
    return nu;
}

MajorizationReport majorization_report(const SequenceVector& nu, const SequenceVector& lambda,
                                       std::uint64_t r) {
    if (nu.n != lambda.n) throw input_error("majorization_report: vectors must share n");
    const std::uint64_t n = nu.n;
    MajorizationReport rep;
    rep.bound = std::log(static_cast<double>(n)) / std::log(static_cast<double>(r));
    rep.nu_constant_on_primes = true;
    const double log_r = std::log(static_cast<double>(r));

    const PrimeBitmap bm = build_prime_bitmap(n - 1);
    for (std::uint64_t p = r + 1; p < n; ++p) {
        if (!bm.test(p)) continue;
        ++rep.primes_scanned;
        if (nu.values[p] != log_r) rep.nu_constant_on_primes = false;
        const double ratio = lambda.values[p] / nu.values[p];
        if (ratio > rep.prime_max_ratio) {
            rep.prime_max_ratio = ratio;
            rep.prime_argmax = p;
        }
    }
    for (const auto& [q, lp] : proper_prime_powers(n - 1)) {
        if (q <= r || nu.values[q] <= 0.0) continue;
        const double ratio = lambda.values[q] / nu.values[q];
        if (ratio > rep.prime_power_max_ratio) {
            rep.prime_power_max_ratio = ratio;
            rep.prime_power_argmax = q;
        }
    }
    return rep;
}

double nu_pair_correlation(const SequenceVector& nu, std::uint64_t h) {
    if (h < 1 || h + 2 > nu.n) throw input_error("nu_pair_correlation: need 1 <= h < n - 1");
    const std::uint64_t count = nu.n - 1 - h; // i runs over [1, n-1-h]
    const double sum = reduce_blocks(count, 1ull << 16, [&](std::uint64_t lo, std::uint64_t hi) {
        Kahan acc;
        for (std::uint64_t i = lo; i < hi; ++i)
            acc.add(nu.values[i + 1] * nu.values[i + 1 + h]);
        return acc.value();
    });
    return sum / static_cast<double>(count);
}

WTrickConfig make_w_trick(std::uint32_t w) {
    if (w < 2) throw input_error("make_w_trick: w must be >= 2");
    WTrickConfig cfg;
    cfg.w = w;
    for (std::uint64_t p = 2; p < w; ++p) {
        if (!is_prime_64(p)) continue;
        cfg.big_w *= p;
        cfg.phi_w *= p - 1;
    }
    return cfg;
}

std::pair<WTrickConfig, SequenceVector> w_trick_lambda(std::uint64_t n, std::uint32_t w,
                                                       std::uint64_t max_sieve_limit) {
    if (n < 2) throw input_error("w_trick_lambda: n must be >= 2");
    WTrickConfig cfg = make_w_trick(w);
    if (cfg.big_w > (max_sieve_limit - 1) / n)
        throw resource_error("w_trick_lambda: W*n exceeds the sieve budget");
    const std::uint64_t limit = cfg.big_w * n + 1;
    const double scale = static_cast<double>(cfg.phi_w) / static_cast<double>(cfg.big_w);

    SequenceVector seq(n, SeqKind::lambda_tilde);
    const PrimeBitmap bm = build_prime_bitmap(limit);
    for_each_block(n, 1ull << 18, [&](std::size_t, std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            const std::uint64_t m = cfg.big_w * i + 1;
            if (m >= 2 && bm.test(m)) seq.values[i] = scale * std::log(static_cast<double>(m));
        }
    });
    for (const auto& [q, lp] : proper_prime_powers(limit))
        if (q % cfg.big_w == 1) {
            const std::uint64_t i = (q - 1) / cfg.big_w;
            if (i < n) seq.values[i] = scale * lp;
        }
    return {cfg, std::move(seq)};
}

SequenceVector w_trick_measure(std::uint64_t n, std::uint64_t r, std::uint32_t w,
                               std::uint64_t budget_bytes) {
    if (r < 2 || r > n) throw input_error("w_trick_measure: need 2 <= r <= n");
    if (n * 8 > budget_bytes) throw resource_error("w_trick_measure: vector exceeds budget");
    const WTrickConfig cfg = make_w_trick(w);
    const double scale = static_cast<double>(cfg.phi_w) / static_cast<double>(cfg.big_w);
    const double log_n = std::log(static_cast<double>(n));

    DivisorWeights wt = make_divisor_weights(r);
    // keep only d coprime to W; other d never divide W i + 1
    std::vector<std::uint32_t> ds;
    std::vector<double> cs;
    std::vector<std::uint64_t> first;
    for (std::size_t t = 0; t < wt.d.size(); ++t) {
        const std::uint64_t d = wt.d[t];
        if (std::gcd<std::uint64_t>(d, cfg.big_w) != 1) continue;
        ds.push_back(wt.d[t]);
        cs.push_back(wt.coef[t]);
        // W i + 1 == 0 (mod d)  =>  i == -W^{-1} (mod d)
        first.push_back(d == 1 ? 0 : (d - inverse_mod(cfg.big_w % d, d)) % d);
    }
    DivisorWeights wf;
    wf.d = std::move(ds);
    wf.coef = std::move(cs);
    wf.log_r = wt.log_r;

    SequenceVector nu(n, SeqKind::nu_tilde);
    const std::uint64_t window = 1ull << 18;
    for_each_block(n, window, [&](std::size_t, std::uint64_t lo, std::uint64_t hi) {
        std::vector<double> s(hi - lo);
        std::fill(s.begin(), s.end(), 0.0);
        for (std::size_t t = 0; t < wf.d.size(); ++t) {
            const std::uint64_t d = wf.d[t];
            const double c = wf.coef[t];
            std::uint64_t i = first[t];
            if (i < lo) i += ((lo - i) + d - 1) / d * d;
            for (; i < hi; i += d) s[i - lo] += c;
        }
        for (std::uint64_t i = lo; i < hi; ++i) {
            const std::uint64_t m = cfg.big_w * i + 1;
            if (m <= r) {
                nu.values[i] = scale * log_n;
            } else {
                const double si = s[i - lo];
                nu.values[i] = scale * ((si == wf.log_r) ? wf.log_r : si * si / wf.log_r);
            }
        }
    });
    return nu;
}

GYStats gy_measure_stats(std::uint64_t n, double exponent, std::span<const std::uint64_t> lags,
                         std::uint64_t segment_size) {
    GYStats out;
    out.cfg = make_gy_config(n, exponent);
    const std::uint64_t r = out.cfg.r;
    const DivisorWeights w = make_divisor_weights(r);
    std::vector<std::uint64_t> first(w.d.size());
    for (std::size_t t = 0; t < w.d.size(); ++t) first[t] = w.d[t];

    const double log_n = std::log(static_cast<double>(n));
    const double log_r = w.log_r;
    std::uint64_t max_lag = 0;
    for (std::uint64_t h : lags) {
        if (h < 1 || h + 2 > n) throw input_error("gy_measure_stats: lag out of range");
        max_lag = std::max(max_lag, h);
    }

    segment_size = std::max<std::uint64_t>(segment_size, std::max<std::uint64_t>(max_lag * 4, 1 << 14));
    const std::size_t nseg = block_count(n, segment_size);
    struct SegPartial {
        double mean = 0.0, mean_displayed = 0.0;
        std::vector<double> corr;
        double prime_max = 0.0;
        std::uint64_t prime_arg = 0;
        double power_max = 0.0;
        std::uint64_t power_arg = 0;
        std::uint64_t primes = 0;
        bool exact = true;
    };
    std::vector<SegPartial> parts(nseg);

    const auto powers = proper_prime_powers(n - 1);
    const std::uint64_t sqrt_n = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n))) + 1;
    std::vector<std::uint64_t> base;
    for_each_prime(2, sqrt_n, [&](std::uint64_t p) { base.push_back(p); });

    for_each_block(nseg, 1, [&](std::size_t, std::uint64_t seg, std::uint64_t) {
        const std::uint64_t lo = seg * segment_size;
        const std::uint64_t hi = std::min(lo + segment_size, n);
        const std::uint64_t ext_hi = std::min(hi + max_lag, n); // overlap for the lag products
        SegPartial& part = parts[seg];
        part.corr.assign(lags.size(), 0.0);

        std::vector<double> s(ext_hi - lo);
        accumulate_window(s, lo, ext_hi, w, first);
        std::vector<double> nu_vals(ext_hi - lo);
        for (std::uint64_t i = lo; i < ext_hi; ++i) {
            if (i <= r) {
                nu_vals[i - lo] = log_n;
            } else {
                const double si = s[i - lo];
                nu_vals[i - lo] = (si == log_r) ? log_r : si * si / log_r;
            }
        }

        // composite marking for the majorization scan
        std::vector<std::uint8_t> comp(hi - lo, 0);
        for (std::uint64_t p : base) {
            if (p * p >= hi) break;
            const std::uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
            for (std::uint64_t m = start; m < hi; m += p) comp[m - lo] = 1;
        }

        Kahan mean_acc, disp_acc;
        for (std::uint64_t i = lo; i < hi; ++i) {
            const double v = nu_vals[i - lo];
            mean_acc.add(v);
            disp_acc.add(i <= r ? v : v / (log_r * log_r));
            if (i > r && i >= 2 && !comp[i - lo]) {
                ++part.primes;
                if (nu_vals[i - lo] != log_r) part.exact = false;
                const double lam = std::log(static_cast<double>(i));
                const double ratio = lam / nu_vals[i - lo];
                if (ratio > part.prime_max) {
                    part.prime_max = ratio;
                    part.prime_arg = i;
                }
            }
        }
        part.mean = mean_acc.value();
        part.mean_displayed = disp_acc.value();

        // prime powers inside [lo, hi)
        auto it = std::lower_bound(powers.begin(), powers.end(), lo,
                                   [](const auto& a, std::uint64_t v) { return a.first < v; });
        for (; it != powers.end() && it->first < hi; ++it) {
            const auto [q, lp] = *it;
            if (q <= r) continue;
            const double ratio = lp / nu_vals[q - lo];
            if (ratio > part.power_max) {
                part.power_max = ratio;
                part.power_arg = q;
            }
        }

        for (std::size_t li = 0; li < lags.size(); ++li) {
            const std::uint64_t h = lags[li];
            Kahan acc;
            const std::uint64_t start = std::max<std::uint64_t>(lo, 1);
            for (std::uint64_t i = start; i < hi; ++i) {
                if (i + h >= ext_hi) break;
                acc.add(nu_vals[i - lo] * nu_vals[i + h - lo]);
            }
            part.corr[li] = acc.value();
        }
    });

    Kahan mean_acc, disp_acc;
    std::vector<Kahan> corr_acc(lags.size());
    MajorizationReport& rep = out.maj;
    rep.bound = out.cfg.majorization_constant;
    rep.nu_constant_on_primes = true;
    for (const SegPartial& part : parts) {
        mean_acc.add(part.mean);
        disp_acc.add(part.mean_displayed);
        for (std::size_t li = 0; li < lags.size(); ++li) corr_acc[li].add(part.corr[li]);
        rep.primes_scanned += part.primes;
        if (!part.exact) rep.nu_constant_on_primes = false;
        if (part.prime_max > rep.prime_max_ratio) {
            rep.prime_max_ratio = part.prime_max;
            rep.prime_argmax = part.prime_arg;
        }
        if (part.power_max > rep.prime_power_max_ratio) {
            rep.prime_power_max_ratio = part.power_max;
            rep.prime_power_argmax = part.power_arg;
        }
    }
    out.mean = mean_acc.value() / static_cast<double>(n);
    out.mean_displayed = disp_acc.value() / static_cast<double>(n);
    for (std::size_t li = 0; li < lags.size(); ++li)
        out.pair_correlations.emplace_back(lags[li],
                                           corr_acc[li].value() / static_cast<double>(n - 1 - lags[li]));
    return out;
}

} // namespace aplab
