#include "aplab/util.hpp"

#include <array>

namespace aplab {

namespace {

std::array<std::uint32_t, 256> make_crc_table() {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
        std::uint32_t c = i;
        for (int k = 0; k < 8; ++k)
            c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : (c >> 1);
        t[i] = c;
    }
    return t;
}

const std::array<std::uint32_t, 256> crc_table = make_crc_table();

} // namespace

std::uint32_t crc32(const void* data, std::size_t len, std::uint32_t seed) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint32_t c = seed ^ 0xFFFFFFFFu;
    for (std::size_t i = 0; i < len; ++i)
        c = crc_table[(c ^ p[i]) & 0xFF] ^ (c >> 8);
    return c ^ 0xFFFFFFFFu;
}

double kahan_sum(std::span<const double> xs) {
    Kahan acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

} // namespace aplab
