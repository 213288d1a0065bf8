#pragma once

#include "aplab/sequence.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace aplab {

using cplx = std::complex<double>;

// coef[r] = E_x f(x) e(-2 pi i r x / n).
struct Spectrum {
    std::uint64_t n = 0;
    std::vector<cplx> coef;
};

// O(n log n) for every n: radix-2 when n is a power of two, Bluestein otherwise.
Spectrum dft(std::span<const cplx> f);
Spectrum dft(const SequenceVector& f);

// f(x) = sum_r coef[r] e(+2 pi i r x / n).
std::vector<cplx> idft(const Spectrum& s);

// sum_r |coef[r]|^2 (equals E|f|^2 by Parseval).
double spectrum_energy(const Spectrum& s);

} // namespace aplab
