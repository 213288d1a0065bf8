#pragma once

#include <cstdint>

namespace aplab {

// Exact primality for any 64-bit unsigned integer: strong-pseudoprime test
// with the fixed 7-witness set {2, 325, 9375, 28178, 450775, 9780504,
// 1795265022}, verified to cover all n < 2^64.
bool is_prime_64(std::uint64_t n);

// (a * b) mod m without overflow.
std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m);

// (a ^ e) mod m.
std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m);

} // namespace aplab
