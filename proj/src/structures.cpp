#include "aplab/structures.hpp"

#include "aplab/errors.hpp"
#include "aplab/primality.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

namespace aplab {

const char* to_string(SetLabel label) {
    switch (label) {
        case SetLabel::random: return "random";
        case SetLabel::interval: return "interval";
        case SetLabel::behrend: return "behrend";
        case SetLabel::sparse3ap: return "sparse3ap";
        case SetLabel::quadratic_level: return "quadratic_level";
    }
    return "random";
}

namespace {

double measured(const SequenceVector& ind) {
    std::uint64_t ones = 0;
    for (double v : ind.values) ones += (v == 1.0);
    return static_cast<double>(ones) / static_cast<double>(ind.n);
}

} // namespace

SetSpec random_set(std::uint64_t n, double alpha, std::uint64_t seed) {
    if (n < 1) throw input_error("random_set: n must be >= 1");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw input_error("random_set: alpha must lie in [0, 1)");
    SetSpec s;
    s.n = n;
    s.label = SetLabel::random;
    s.indicator = SequenceVector(n, SeqKind::indicator);
    std::mt19937_64 rng(seed);
    for (std::uint64_t x = 0; x < n; ++x) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < alpha) s.indicator.values[x] = 1.0;
    }
    s.density = measured(s.indicator);
    s.params = {{"alpha", alpha}, {"seed", static_cast<double>(seed)}};
    return s;
}

SetSpec interval_set(std::uint64_t n, double alpha) {
    if (n < 2) throw input_error("interval_set: n must be >= 2");
    if (!(alpha > 0.0 && alpha < 0.5)) throw input_error("interval_set: alpha must lie in (0, 1/2)");
    SetSpec s;
    s.n = n;
    s.label = SetLabel::interval;
    s.indicator = SequenceVector(n, SeqKind::indicator);
    const std::uint64_t m = static_cast<std::uint64_t>(alpha * static_cast<double>(n));
    for (std::uint64_t x = 1; x <= m && x < n; ++x) s.indicator.values[x] = 1.0;
    s.density = measured(s.indicator);
    s.params = {{"alpha", alpha}};
    return s;
}

std::vector<std::uint64_t> behrend_sphere(unsigned dims, std::uint64_t d, std::uint64_t rho) {
    if (dims < 1 || d < 2) throw input_error("behrend_sphere: need dims >= 1 and d >= 2");
    const std::uint64_t base = 2 * d - 1;
    std::vector<std::uint64_t> out;
    std::vector<std::uint64_t> digit(dims, 0);
    for (;;) {
        std::uint64_t norm = 0, value = 0, scale = 1;
        for (unsigned i = 0; i < dims; ++i) {
            norm += digit[i] * digit[i];
            value += digit[i] * scale;
            scale *= base;
        }
        if (norm == rho && value > 0) out.push_back(value);
        unsigned pos = 0;
        while (pos < dims && ++digit[pos] == d) digit[pos++] = 0;
        if (pos == dims) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint64_t> behrend_set(std::uint64_t m) {
    if (m < 10) throw input_error("behrend_set: m must be >= 10");

    std::vector<std::uint64_t> best;

    // all {0,1}-digit base-3 integers <= m; digit sums of two members never
    // reach 3, so x + z = 2y forces equal digits
    {
        std::vector<std::uint64_t> digits{0};
        for (std::uint64_t power = 1; power <= m; power *= 3) {
            const std::size_t sz = digits.size();
            for (std::size_t i = 0; i < sz; ++i) {
                const std::uint64_t v = digits[i] + power;
                if (v <= m) digits.push_back(v);
            }
            if (power > m / 3) break;
        }
        std::sort(digits.begin(), digits.end());
        digits.erase(digits.begin()); // drop 0
        best = std::move(digits);
    }

    // sphere scan: for each dimension take the largest d with (2d-1)^dims <= m
    for (unsigned dims = 2; dims <= 12; ++dims) {
        std::uint64_t d = 2;
        auto fits = [&](std::uint64_t dd) {
            __uint128_t v = 1;
            for (unsigned i = 0; i < dims; ++i) {
                v *= (2 * dd - 1);
                if (v > m) return false;
            }
            return true;
        };
        if (!fits(2)) break;
        while (fits(d + 1)) ++d;

        const std::uint64_t max_rho = dims * (d - 1) * (d - 1);
        std::vector<std::uint32_t> shell(max_rho + 1, 0);
        std::vector<std::uint64_t> digit(dims, 0);
        for (;;) {
            std::uint64_t norm = 0;
            for (unsigned i = 0; i < dims; ++i) norm += digit[i] * digit[i];
            ++shell[norm];
            unsigned pos = 0;
            while (pos < dims && ++digit[pos] == d) digit[pos++] = 0;
            if (pos == dims) break;
        }
        std::uint64_t rho = 1;
        for (std::uint64_t q = 1; q <= max_rho; ++q)
            if (shell[q] > shell[rho]) rho = q;
        if (shell[rho] > best.size()) best = behrend_sphere(dims, d, rho);
    }
    return best;
}

SetSpec sparse_3ap_set(std::uint64_t m, std::uint64_t l) {
    return sparse_3ap_set(behrend_set(m), m, l);
}

SetSpec sparse_3ap_set(const std::vector<std::uint64_t>& behrend, std::uint64_t m, std::uint64_t l) {
    if (l < 1) throw input_error("sparse_3ap_set: l must be >= 1");
    const std::uint64_t b = behrend.size();
    if (b * b < m)
        throw input_error("sparse_3ap_set: progression-free set too small (|B| = " +
                          std::to_string(b) + ", need |B|^2 >= " + std::to_string(m) + ")");
    for (std::uint64_t u : behrend)
        if (u < 1 || u > m) throw input_error("sparse_3ap_set: set member outside {1..m}");

    SetSpec s;
    s.n = 2 * l * m;
    s.label = SetLabel::sparse3ap;
    s.indicator = SequenceVector(s.n, SeqKind::indicator);
    for (std::uint64_t u : behrend)
        for (std::uint64_t v = 1; v <= l; ++v)
            s.indicator.values[(2 * l * u + v) % s.n] = 1.0;
    s.density = measured(s.indicator);
    s.params = {{"m", static_cast<double>(m)},
                {"l", static_cast<double>(l)},
                {"behrend_size", static_cast<double>(b)}};
    return s;
}

std::int64_t square_representative(std::uint64_t x, std::uint64_t n) {
    const std::uint64_t sq = mulmod_u64(x % n, x % n, n);
    if (2 * sq > n) return static_cast<std::int64_t>(sq) - static_cast<std::int64_t>(n);
    return static_cast<std::int64_t>(sq);
}

SetSpec quadratic_level_set(std::uint64_t n, double alpha) {
    if (n < 3) throw input_error("quadratic_level_set: n must be >= 3");
    if (!(alpha > 0.0 && alpha < 1.0)) throw input_error("quadratic_level_set: alpha in (0,1)");
    SetSpec s;
    s.n = n;
    s.label = SetLabel::quadratic_level;
    s.composite_modulus_warning = !is_prime_64(n);
    s.indicator = SequenceVector(n, SeqKind::indicator);
    const double half_window = alpha * static_cast<double>(n) / 2.0;
    for (std::uint64_t x = 0; x < n; ++x) {
        const std::int64_t rep = square_representative(x, n);
        if (std::abs(static_cast<double>(rep)) <= half_window) s.indicator.values[x] = 1.0;
    }
    s.density = measured(s.indicator);
    s.params = {{"alpha", alpha}, {"n_is_prime", s.composite_modulus_warning ? 0.0 : 1.0}};
    return s;
}

bool is_3ap_free(const std::vector<std::uint64_t>& sorted_values) {
    std::unordered_set<std::uint64_t> members(sorted_values.begin(), sorted_values.end());
    for (std::size_t i = 0; i < sorted_values.size(); ++i)
        for (std::size_t j = i + 1; j < sorted_values.size(); ++j) {
            const std::uint64_t x = sorted_values[i], y = sorted_values[j];
            if (members.count(2 * y - x)) return false; // z = 2y - x > y
        }
    return true;
}

} // namespace aplab
