#pragma once

#include "aplab/sequence.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace aplab {

enum class SetLabel { random, interval, behrend, sparse3ap, quadratic_level };

const char* to_string(SetLabel label);

struct SetSpec {
    std::uint64_t n = 0;
    SequenceVector indicator;
    SetLabel label = SetLabel::random;
    double density = 0.0; // ones / n, exact
    std::map<std::string, double> params;
    bool composite_modulus_warning = false;
};

// Each x included independently with probability alpha (deterministic given
// the seed; the generator draw is fixed, not implementation-defined).
SetSpec random_set(std::uint64_t n, double alpha, std::uint64_t seed);

// A = {1, ..., floor(alpha n)}.
SetSpec interval_set(std::uint64_t n, double alpha);

// Digit vectors a in {0..d-1}^dims on the sphere sum a_i^2 = rho, mapped by
// sum a_i (2d-1)^i. Always 3-AP-free; the zero vector is dropped.
std::vector<std::uint64_t> behrend_sphere(unsigned dims, std::uint64_t d, std::uint64_t rho);

// Largest 3-AP-free set <= m the parameter scan finds: spheres over a (dims,
// d) grid, plus the union of all d = 2 shells ({0,1} digits base 3), which
// stays 3-AP-free because adding two such numbers never carries.
std::vector<std::uint64_t> behrend_set(std::uint64_t m);

// A = {2L u + v mod N : u in B, 1 <= v <= L} with N = 2 L M.
SetSpec sparse_3ap_set(std::uint64_t m, std::uint64_t l);
SetSpec sparse_3ap_set(const std::vector<std::uint64_t>& behrend, std::uint64_t m, std::uint64_t l);

// A = {x : representative of x^2 mod n in (-n/2, n/2] lies in [-alpha n/2,
// alpha n/2]}. Composite n sets a warning flag but still computes.
SetSpec quadratic_level_set(std::uint64_t n, double alpha);

// Exhaustive pairwise check for x < y < z with x + z = 2y.
bool is_3ap_free(const std::vector<std::uint64_t>& sorted_values);

// Signed representative of x^2 mod n in (-n/2, n/2].
std::int64_t square_representative(std::uint64_t x, std::uint64_t n);

} // namespace aplab
