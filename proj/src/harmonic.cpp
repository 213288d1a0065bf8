#include "aplab/harmonic.hpp"

#include "aplab/errors.hpp"
#include "aplab/parallel.hpp"
#include "aplab/util.hpp"

#include <algorithm>
#include <cmath>

namespace aplab {

namespace {

std::vector<cplx> widen(const SequenceVector& f) {
    std::vector<cplx> out(f.n);
    for (std::uint64_t i = 0; i < f.n; ++i) out[i] = cplx(f.values[i], 0.0);
    return out;
}

// Complex sum over [0, n) with fixed block boundaries; bit-identical for any
// thread count.
cplx reduce_complex(std::uint64_t n, std::uint64_t block,
                    const std::function<cplx(std::uint64_t, std::uint64_t)>& fn) {
    std::vector<cplx> partial(block_count(n, block), cplx(0, 0));
    for_each_block(n, block, [&](std::size_t b, std::uint64_t lo, std::uint64_t hi) {
        partial[b] = fn(lo, hi);
    });
    Kahan re, im;
    for (const cplx& c : partial) {
        re.add(c.real());
        im.add(c.imag());
    }
    return {re.value(), im.value()};
}

double measured_density(const SequenceVector& f) {
    std::uint64_t ones = 0;
    for (double v : f.values) ones += (v == 1.0);
    return static_cast<double>(ones) / static_cast<double>(f.n);
}

} // namespace

cplx t_k_core(std::span<const cplx> f, std::uint32_t k, const HarmonicBudget& budget) {
    const std::uint64_t n = f.size();
    if (n == 0) throw input_error("t_k: empty input");
    if (k < 1) throw input_error("t_k: k must be >= 1");
    if (n > budget.tk_max_n)
        throw resource_error("t_k: n = " + std::to_string(n) + " above brute-force budget " +
                             std::to_string(budget.tk_max_n));

    cplx total = reduce_complex(n, 64, [&](std::uint64_t xlo, std::uint64_t xhi) {
        Kahan re, im;
        for (std::uint64_t x = xlo; x < xhi; ++x) {
            for (std::uint64_t d = 0; d < n; ++d) {
                cplx prod = f[x];
                std::uint64_t idx = x;
                for (std::uint32_t j = 1; j < k; ++j) {
                    idx += d;
                    if (idx >= n) idx -= n;
                    prod *= f[idx];
                }
                re.add(prod.real());
                im.add(prod.imag());
            }
        }
        return cplx(re.value(), im.value());
    });
    const double inv = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    return total * inv;
}

TkReport t_k(const SequenceVector& f, std::uint32_t k, const HarmonicBudget& budget) {
    TkReport rep;
    rep.k = k;
    rep.value = t_k_core(widen(f), k, budget);
    if (f.kind == SeqKind::indicator) {
        rep.density = measured_density(f);
        rep.random_model = std::pow(rep.density, static_cast<double>(k));
    }
    return rep;
}

cplx t_k_distinct(const std::vector<const SequenceVector*>& fs, const HarmonicBudget& budget) {
    if (fs.empty()) throw input_error("t_k_distinct: no inputs");
    const std::uint64_t n = fs[0]->n;
    const std::uint32_t k = static_cast<std::uint32_t>(fs.size());
    for (const auto* f : fs)
        if (f->n != n) throw input_error("t_k_distinct: inputs must share n");
    if (n > budget.tk_max_n) throw resource_error("t_k_distinct: above brute-force budget");

    cplx total = reduce_complex(n, 64, [&](std::uint64_t xlo, std::uint64_t xhi) {
        Kahan re, im;
        for (std::uint64_t x = xlo; x < xhi; ++x) {
            for (std::uint64_t d = 0; d < n; ++d) {
                double prod = fs[0]->values[x];
                std::uint64_t idx = x;
                for (std::uint32_t j = 1; j < k; ++j) {
                    idx += d;
                    if (idx >= n) idx -= n;
                    prod *= fs[j]->values[idx];
                }
                re.add(prod);
            }
        }
        return cplx(re.value(), im.value());
    });
    const double inv = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    return total * inv;
}

cplx t3_via_fourier(std::span<const cplx> f) {
    const std::uint64_t n = f.size();
    if (n == 0) throw input_error("t3_via_fourier: empty input");
    const Spectrum s = dft(f);
    Kahan re, im;
    for (std::uint64_t r = 0; r < n; ++r) {
        const std::uint64_t minus2r = (2 * n - (2 * r) % n) % n;
        const cplx term = s.coef[r] * s.coef[r] * s.coef[minus2r];
        re.add(term.real());
        im.add(term.imag());
    }
    return {re.value(), im.value()};
}

cplx t3_via_fourier(const SequenceVector& f) { return t3_via_fourier(widen(f)); }

std::vector<BiasEntry> linear_bias_scan(const SequenceVector& f, double alpha, std::size_t top_m) {
    if (f.n < 2) throw input_error("linear_bias_scan: need n >= 2");
    std::vector<cplx> g(f.n);
    for (std::uint64_t i = 0; i < f.n; ++i) g[i] = cplx(f.values[i] - alpha, 0.0);
    const Spectrum s = dft(g);

    // E g e(+rx/n) under our convention is ghat(-r) = coef[n - r]
    std::vector<BiasEntry> entries;
    entries.reserve(f.n - 1);
    for (std::uint64_t r = 1; r < f.n; ++r)
        entries.push_back(BiasEntry{r, s.coef[f.n - r]});
    std::stable_sort(entries.begin(), entries.end(), [](const BiasEntry& a, const BiasEntry& b) {
        return std::norm(a.value) > std::norm(b.value);
    });
    if (entries.size() > top_m) entries.resize(top_m);
    return entries;
}

std::optional<BiasEntry> dichotomy_witness_3(const SequenceVector& indicator, double eta) {
    indicator.validate();
    if (indicator.kind != SeqKind::indicator)
        throw input_error("dichotomy_witness_3: input must be an indicator sequence");
    if (indicator.n % 2 == 0)
        throw input_error("dichotomy_witness_3: even n unsupported (r -> -2r is not injective)");
    if (!(eta > 0.0)) throw input_error("dichotomy_witness_3: eta must be positive");

    const double alpha = measured_density(indicator);
    const cplx t3 = t3_via_fourier(indicator);
    const double gap = std::abs(t3.real() - alpha * alpha * alpha);
    if (gap < eta) return std::nullopt;

    std::vector<cplx> g(indicator.n);
    for (std::uint64_t i = 0; i < indicator.n; ++i)
        g[i] = cplx(indicator.values[i] - alpha, 0.0);
    const Spectrum s = dft(g);
    std::uint64_t best = 1;
    double best_norm = -1.0;
    for (std::uint64_t r = 1; r < indicator.n; ++r) {
        const double nr = std::norm(s.coef[r]);
        if (nr > best_norm) {
            best_norm = nr;
            best = r;
        }
    }
    // report the frequency of the character e(rx/n): our peak at coef[r*]
    // corresponds to r = n - r*
    return BiasEntry{indicator.n - best, s.coef[best]};
}

cplx correlate(std::span<const double> f, const PhaseSpec& q, double alpha) {
    const std::uint64_t n = f.size();
    if (n == 0) throw input_error("correlate: empty input");
    return reduce_complex(n, 1ull << 14, [&](std::uint64_t lo, std::uint64_t hi) {
        Kahan re, im;
        for (std::uint64_t x = lo; x < hi; ++x) {
            const cplx qx = phase_eval(q, x);
            const double fx = f[x] - alpha;
            re.add(fx * qx.real());
            im.add(fx * qx.imag());
        }
        return cplx(re.value(), im.value());
    }) / static_cast<double>(n);
}

cplx correlate(const SequenceVector& f, const PhaseSpec& q, double alpha) {
    return correlate(std::span<const double>(f.values), q, alpha);
}

namespace {

// D2 g as the double convolution (1/n^2) sum_s (conj(g) * conj(g))(s) g(s - x).
std::vector<cplx> dual2(std::span<const cplx> f) {
    const std::uint64_t n = f.size();
    std::vector<cplx> conv(n, cplx(0, 0));
    for (std::uint64_t u = 0; u < n; ++u) {
        const cplx fu = std::conj(f[u]);
        for (std::uint64_t v = 0; v < n; ++v) {
            std::uint64_t s = u + v;
            if (s >= n) s -= n;
            conv[s] += fu * std::conj(f[v]);
        }
    }
    std::vector<cplx> out(n);
    const double inv = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    for (std::uint64_t x = 0; x < n; ++x) {
        cplx acc(0, 0);
        for (std::uint64_t s = 0; s < n; ++s) {
            std::uint64_t idx = s + n - x;
            if (idx >= n) idx -= n;
            acc += conv[s] * f[idx];
        }
        out[x] = acc * inv;
    }
    return out;
}

std::vector<cplx> multiplicative_derivative(std::span<const cplx> f, std::uint64_t c) {
    const std::uint64_t n = f.size();
    std::vector<cplx> g(n);
    for (std::uint64_t x = 0; x < n; ++x) {
        std::uint64_t xc = x + c;
        if (xc >= n) xc -= n;
        g[x] = f[x] * std::conj(f[xc]);
    }
    return g;
}

// ||g||_{U^2}^4 = E_a |E_x g(x) conj(g(x+a))|^2
double u2_fourth(std::span<const cplx> g) {
    const std::uint64_t n = g.size();
    Kahan acc;
    for (std::uint64_t a = 0; a < n; ++a) {
        cplx corr(0, 0);
        for (std::uint64_t x = 0; x < n; ++x) {
            std::uint64_t xa = x + a;
            if (xa >= n) xa -= n;
            corr += g[x] * std::conj(g[xa]);
        }
        acc.add(std::norm(corr));
    }
    const double n3 = static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(n);
    return acc.value() / n3;
}

} // namespace

std::vector<cplx> dual_function_core(std::span<const cplx> f, int order, const HarmonicBudget& budget) {
    const std::uint64_t n = f.size();
    if (n == 0) throw input_error("dual_function: empty input");
    if (order == 2) {
        if (n > budget.dual2_max_n) throw resource_error("dual_function: n above order-2 budget");
        return dual2(f);
    }
    if (order != 3) throw input_error("dual_function: order must be 2 or 3");
    if (n > budget.dual3_max_n) throw resource_error("dual_function: n above order-3 budget");

    // D3 f(x) = E_c conj(f(x+c)) D2(Delta_c f)(x)
    const std::size_t nblocks = block_count(n, 16);
    std::vector<std::vector<cplx>> partial(nblocks);
    for_each_block(n, 16, [&](std::size_t b, std::uint64_t clo, std::uint64_t chi) {
        std::vector<cplx> acc(n, cplx(0, 0));
        for (std::uint64_t c = clo; c < chi; ++c) {
            const auto g = multiplicative_derivative(f, c);
            const auto d2 = dual2(g);
            for (std::uint64_t x = 0; x < n; ++x) {
                std::uint64_t xc = x + c;
                if (xc >= n) xc -= n;
                acc[x] += std::conj(f[xc]) * d2[x];
            }
        }
        partial[b] = std::move(acc);
    });
    std::vector<cplx> out(n, cplx(0, 0));
    for (const auto& acc : partial)
        for (std::uint64_t x = 0; x < n; ++x) out[x] += acc[x];
    const double inv = 1.0 / static_cast<double>(n);
    for (cplx& v : out) v *= inv;
    return out;
}

SequenceVector dual_function(const SequenceVector& f, int order, const HarmonicBudget& budget) {
    const auto core = dual_function_core(widen(f), order, budget);
    SequenceVector out(f.n, SeqKind::generic);
    for (std::uint64_t i = 0; i < f.n; ++i) out.values[i] = core[i].real();
    return out;
}

double gowers_norm_core(std::span<const cplx> f, int d, const HarmonicBudget& budget) {
    const std::uint64_t n = f.size();
    if (n == 0) throw input_error("gowers_norm: empty input");
    double avg = 0.0;
    if (d == 2) {
        if (n > budget.dual2_max_n) throw resource_error("gowers_norm: n above U^2 budget");
        avg = u2_fourth(f);
    } else if (d == 3) {
        if (n > budget.dual3_max_n) throw resource_error("gowers_norm: n above U^3 budget");
        avg = reduce_blocks(n, 16, [&](std::uint64_t clo, std::uint64_t chi) {
            Kahan acc;
            for (std::uint64_t c = clo; c < chi; ++c)
                acc.add(u2_fourth(multiplicative_derivative(f, c)));
            return acc.value();
        }) / static_cast<double>(n);
    } else {
        throw input_error("gowers_norm: d must be 2 or 3");
    }
    if (avg < -1e-9) throw internal_error("gowers_norm: average went negative beyond tolerance");
    if (avg < 0.0) avg = 0.0;
    return std::pow(avg, d == 2 ? 0.25 : 0.125);
}

double gowers_norm(const SequenceVector& f, int d, const HarmonicBudget& budget) {
    return gowers_norm_core(widen(f), d, budget);
}

cplx mean_complex(std::span<const cplx> f) {
    if (f.empty()) throw input_error("mean_complex: empty input");
    Kahan re, im;
    for (const cplx& c : f) {
        re.add(c.real());
        im.add(c.imag());
    }
    return cplx(re.value(), im.value()) / static_cast<double>(f.size());
}

} // namespace aplab
