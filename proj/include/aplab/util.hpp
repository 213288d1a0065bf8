#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace aplab {

// CRC-32 (IEEE reflected polynomial 0xEDB88320), used by the on-disk formats.
std::uint32_t crc32(const void* data, std::size_t len, std::uint32_t seed = 0);

// Compensated accumulator. Summation order must stay fixed wherever results
// are required to be bit-identical across thread counts.
struct Kahan {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

// Sum of a span in index order with compensation.
double kahan_sum(std::span<const double> xs);

} // namespace aplab
