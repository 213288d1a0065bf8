#include "aplab/fourier.hpp"

#include "aplab/errors.hpp"

#include <cmath>
#include <numbers>

namespace aplab {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

bool is_pow2(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2, no normalization.
void fft_pow2(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? two_pi : -two_pi) / static_cast<double>(len);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                cplx u = a[i + j];
                cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

// Unnormalized transform of arbitrary length via the chirp-z embedding.
// Exponents are reduced mod 2n before the trig call to keep full precision.
std::vector<cplx> dft_any(std::span<const cplx> f, bool inverse) {
    const std::uint64_t n = f.size();
    std::vector<cplx> out(n);
    if (n == 1) {
        out[0] = f[0];
        return out;
    }
    if (is_pow2(n)) {
        std::vector<cplx> a(f.begin(), f.end());
        fft_pow2(a, inverse);
        return a;
    }
    std::uint64_t m = 1;
    while (m < 2 * n - 1) m <<= 1;

    const double sign = inverse ? 1.0 : -1.0;
    std::vector<cplx> chirp(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        const std::uint64_t sq = (static_cast<__uint128_t>(i) * i) % (2 * n);
        const double ang = sign * std::numbers::pi * static_cast<double>(sq) / static_cast<double>(n);
        chirp[i] = cplx(std::cos(ang), std::sin(ang));
    }
    std::vector<cplx> a(m, cplx(0, 0)), b(m, cplx(0, 0));
    for (std::uint64_t i = 0; i < n; ++i) a[i] = f[i] * chirp[i];
    b[0] = cplx(1, 0);
    for (std::uint64_t i = 1; i < n; ++i) b[i] = b[m - i] = std::conj(chirp[i]);
    fft_pow2(a, false);
    fft_pow2(b, false);
    for (std::uint64_t i = 0; i < m; ++i) a[i] *= b[i];
    fft_pow2(a, true);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::uint64_t i = 0; i < n; ++i) out[i] = a[i] * inv_m * chirp[i];
    return out;
}

} // namespace

Spectrum dft(std::span<const cplx> f) {
    if (f.empty()) throw input_error("dft: empty input");
    Spectrum s;
    s.n = f.size();
    s.coef = dft_any(f, false);
    const double inv_n = 1.0 / static_cast<double>(s.n);
    for (cplx& c : s.coef) c *= inv_n;
    return s;
}

Spectrum dft(const SequenceVector& f) {
    std::vector<cplx> tmp(f.n);
    for (std::uint64_t i = 0; i < f.n; ++i) tmp[i] = cplx(f.values[i], 0.0);
    return dft(tmp);
}

std::vector<cplx> idft(const Spectrum& s) {
    if (s.coef.size() != s.n || s.n == 0) throw input_error("idft: malformed spectrum");
    return dft_any(s.coef, true);
}

double spectrum_energy(const Spectrum& s) {
    double sum = 0.0;
    for (const cplx& c : s.coef) sum += std::norm(c);
    return sum;
}

} // namespace aplab
