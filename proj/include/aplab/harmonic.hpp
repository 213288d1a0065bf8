#pragma once

#include "aplab/fourier.hpp"
#include "aplab/phases.hpp"
#include "aplab/sequence.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace aplab {

struct HarmonicBudget {
    std::uint64_t tk_max_n = 40'000;    // brute-force T_k
    std::uint64_t dual2_max_n = 8'192;  // O(n^2) dual / U^2
    std::uint64_t dual3_max_n = 768;    // O(n^3) dual / U^3
};

struct TkReport {
    std::uint32_t k = 0;
    cplx value{0.0, 0.0};
    double density = -1.0;      // set when the input is an indicator
    double random_model = -1.0; // density^k
};

// T_k(f) = E_{x,d in Z/nZ} f(x) f(x+d) ... f(x+(k-1)d); d runs over the whole
// group, including 0; indices wrap mod n.
cplx t_k_core(std::span<const cplx> f, std::uint32_t k, const HarmonicBudget& budget = {});
TkReport t_k(const SequenceVector& f, std::uint32_t k, const HarmonicBudget& budget = {});
cplx t_k_distinct(const std::vector<const SequenceVector*>& fs, const HarmonicBudget& budget = {});

// T_3 via the spectral identity sum_r fhat(r)^2 fhat(-2r); valid for every n.
cplx t3_via_fourier(std::span<const cplx> f);
cplx t3_via_fourier(const SequenceVector& f);

struct BiasEntry {
    std::uint64_t r = 0;
    cplx value{0.0, 0.0};
};

// E_x (f(x) - alpha) e(r x / n) for all r != 0, the top_m largest in modulus,
// sorted descending.
std::vector<BiasEntry> linear_bias_scan(const SequenceVector& f, double alpha, std::size_t top_m);

// When |T_3(A) - alpha^3| >= eta, returns a nonzero frequency whose balanced
// Fourier coefficient has modulus >= eta/alpha. Odd n only.
std::optional<BiasEntry> dichotomy_witness_3(const SequenceVector& indicator, double eta);

// E_x (f(x) - alpha) q(x).
cplx correlate(const SequenceVector& f, const PhaseSpec& q, double alpha = 0.0);
cplx correlate(std::span<const double> f, const PhaseSpec& q, double alpha = 0.0);

// D2 f(x) = E_{a,b} conj(f(x+a) f(x+b)) f(x+a+b);
// D3 f(x) = E_{a,b,c} over the parallelepiped minus the base vertex.
std::vector<cplx> dual_function_core(std::span<const cplx> f, int order,
                                     const HarmonicBudget& budget = {});
SequenceVector dual_function(const SequenceVector& f, int order, const HarmonicBudget& budget = {});

// ||f||_{U^2} = (E_{x,a,b} f conj(f(.+a)) conj(f(.+b)) f(.+a+b))^{1/4};
// ||f||_{U^3} = (E_c ||Delta_c f||_{U^2}^4)^{1/8}.
double gowers_norm_core(std::span<const cplx> f, int d, const HarmonicBudget& budget = {});
double gowers_norm(const SequenceVector& f, int d, const HarmonicBudget& budget = {});

cplx mean_complex(std::span<const cplx> f);

} // namespace aplab
