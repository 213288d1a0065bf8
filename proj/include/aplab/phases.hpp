#pragma once

#include "aplab/fourier.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace aplab {

// q(x) = e(r x / n)
struct LinearPhase {
    std::int64_t r = 0;
    std::uint64_t n = 0;
};

// q(x) = e((a x^2 + b x) / n)
struct QuadraticPhase {
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::uint64_t n = 0;
};

// q(x) = e(sum_i x alpha_i {x beta_i} + sum_j x delta_j); {.} = fractional part
struct BilinearTerm {
    double alpha = 0.0;
    double beta = 0.0;
};

struct GeneralizedPhase {
    std::vector<BilinearTerm> bilinear;
    std::vector<double> linear;
};

struct PhaseSpec {
    std::variant<LinearPhase, QuadraticPhase, GeneralizedPhase> spec;

    static PhaseSpec linear(std::int64_t r, std::uint64_t n) { return {LinearPhase{r, n}}; }
    static PhaseSpec quadratic(std::int64_t a, std::int64_t b, std::uint64_t n) {
        return {QuadraticPhase{a, b, n}};
    }
    static PhaseSpec generalized(std::vector<BilinearTerm> bl, std::vector<double> lin) {
        return {GeneralizedPhase{std::move(bl), std::move(lin)}};
    }
};

// Underlying real phase theta(x) in [0, 1). Generalized phases are evaluated
// with paired-double products so the fractional parts stay accurate over the
// supported domain x < 2^32.
double phase_theta(const PhaseSpec& q, std::uint64_t x);

// e(2 pi i theta(x)); always unit modulus.
cplx phase_eval(const PhaseSpec& q, std::uint64_t x);

// Negates every integer/real coefficient; evaluates to the complex conjugate.
PhaseSpec phase_conjugate(const PhaseSpec& q);

std::string phase_label(const PhaseSpec& q);

struct PhaseDictionary {
    std::vector<PhaseSpec> phases;
    std::string description;
    std::size_t size_budget = 0;
};

// r in [-max_r, max_r] \ {0}.
PhaseDictionary linear_dictionary(std::uint64_t n, std::int64_t max_r);

// a in [-max_a, max_a], b in [-max_b, max_b], (a,b) != (0,0).
PhaseDictionary quadratic_dictionary(std::uint64_t n, std::int64_t max_a, std::int64_t max_b);

void append_dictionary(PhaseDictionary& into, const PhaseDictionary& from);

// Every phase's conjugate must be present.
bool conjugation_closed(const PhaseDictionary& dict);

} // namespace aplab
