#include "aplab/phases.hpp"

#include "aplab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace aplab {

namespace {

struct dd {
    double hi = 0.0;
    double lo = 0.0;
};

dd two_sum(double a, double b) {
    double s = a + b;
    double t = s - a;
    return {s, (a - (s - t)) + (b - t)};
}

dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

dd dd_add(dd a, dd b) {
    dd s = two_sum(a.hi, b.hi);
    double lo = s.lo + a.lo + b.lo;
    dd r = two_sum(s.hi, lo);
    return r;
}

dd dd_mul(dd a, dd b) {
    dd p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return two_sum(p.hi, p.lo);
}

// fractional part in [0, 1)
dd dd_frac(dd a) {
    double f = a.hi - std::floor(a.hi); // exact: the bits below the binary point
    dd r = two_sum(f, a.lo);
    if (r.hi >= 1.0) r.hi -= 1.0;
    if (r.hi < 0.0) r.hi += 1.0;
    return r;
}

double frac_to_unit(dd a) {
    double v = dd_frac(a).hi;
    if (v >= 1.0) v = 0.0;
    return v;
}

std::uint64_t normalize_mod(std::int64_t v, std::uint64_t n) {
    std::int64_t m = v % static_cast<std::int64_t>(n);
    if (m < 0) m += static_cast<std::int64_t>(n);
    return static_cast<std::uint64_t>(m);
}

void check_domain(std::uint64_t n, std::uint64_t x) {
    if (n < 1) throw input_error("phase: modulus must be positive");
    if (n > (1ull << 32)) throw input_error("phase: modulus above 2^32 unsupported");
    if (x >= (1ull << 32)) throw input_error("phase: argument above 2^32 unsupported");
}

} // namespace

double phase_theta(const PhaseSpec& q, std::uint64_t x) {
    if (const auto* lin = std::get_if<LinearPhase>(&q.spec)) {
        check_domain(lin->n, x);
        const std::uint64_t r = normalize_mod(lin->r, lin->n);
        const std::uint64_t t = (r * (x % lin->n)) % lin->n;
        return static_cast<double>(t) / static_cast<double>(lin->n);
    }
    if (const auto* quad = std::get_if<QuadraticPhase>(&q.spec)) {
        check_domain(quad->n, x);
        const std::uint64_t n = quad->n;
        const std::uint64_t xr = x % n;
        const std::uint64_t x2 = (xr * xr) % n;
        const std::uint64_t a = normalize_mod(quad->a, n);
        const std::uint64_t b = normalize_mod(quad->b, n);
        const std::uint64_t t = ((a * x2) % n + (b * xr) % n) % n;
        return static_cast<double>(t) / static_cast<double>(n);
    }
    const auto& gen = std::get<GeneralizedPhase>(q.spec);
    if (x >= (1ull << 32)) throw input_error("phase: argument above 2^32 unsupported");
    const double xd = static_cast<double>(x);
    dd total{0.0, 0.0};
    for (const BilinearTerm& term : gen.bilinear) {
        dd xb = two_prod(xd, term.beta);
        dd fb = dd_frac(xb);
        dd xa = two_prod(xd, term.alpha);
        total = dd_add(total, dd_frac(dd_mul(xa, fb)));
    }
    for (double delta : gen.linear) total = dd_add(total, dd_frac(two_prod(xd, delta)));
    return frac_to_unit(total);
}

cplx phase_eval(const PhaseSpec& q, std::uint64_t x) {
    const double theta = phase_theta(q, x);
    const double ang = 2.0 * std::numbers::pi * theta;
    return cplx(std::cos(ang), std::sin(ang));
}

PhaseSpec phase_conjugate(const PhaseSpec& q) {
    if (const auto* lin = std::get_if<LinearPhase>(&q.spec))
        return PhaseSpec::linear(-lin->r, lin->n);
    if (const auto* quad = std::get_if<QuadraticPhase>(&q.spec))
        return PhaseSpec::quadratic(-quad->a, -quad->b, quad->n);
    const auto& gen = std::get<GeneralizedPhase>(q.spec);
    GeneralizedPhase out;
    for (const BilinearTerm& t : gen.bilinear) out.bilinear.push_back({-t.alpha, t.beta});
    for (double d : gen.linear) out.linear.push_back(-d);
    return {out};
}

std::string phase_label(const PhaseSpec& q) {
    std::ostringstream os;
    if (const auto* lin = std::get_if<LinearPhase>(&q.spec)) {
        os << "linear(r=" << lin->r << ")";
    } else if (const auto* quad = std::get_if<QuadraticPhase>(&q.spec)) {
        os << "quadratic(a=" << quad->a << ",b=" << quad->b << ")";
    } else {
        const auto& gen = std::get<GeneralizedPhase>(q.spec);
        os << "generalized(";
        for (std::size_t i = 0; i < gen.bilinear.size(); ++i)
            os << (i ? "+" : "") << "x*" << gen.bilinear[i].alpha << "*{x*" << gen.bilinear[i].beta << "}";
        for (double d : gen.linear) os << "+x*" << d;
        os << ")";
    }
    return os.str();
}

PhaseDictionary linear_dictionary(std::uint64_t n, std::int64_t max_r) {
    if (max_r < 1) throw input_error("linear_dictionary: max_r must be >= 1");
    PhaseDictionary d;
    d.description = "linear |r|<=" + std::to_string(max_r);
    for (std::int64_t r = 1; r <= max_r; ++r) {
        d.phases.push_back(PhaseSpec::linear(r, n));
        d.phases.push_back(PhaseSpec::linear(-r, n));
    }
    d.size_budget = d.phases.size();
    return d;
}

PhaseDictionary quadratic_dictionary(std::uint64_t n, std::int64_t max_a, std::int64_t max_b) {
    if (max_a < 1 && max_b < 1) throw input_error("quadratic_dictionary: empty coefficient box");
    PhaseDictionary d;
    d.description = "quadratic |a|<=" + std::to_string(max_a) + " |b|<=" + std::to_string(max_b);
    for (std::int64_t a = -max_a; a <= max_a; ++a)
        for (std::int64_t b = -max_b; b <= max_b; ++b) {
            if (a == 0 && b == 0) continue;
            d.phases.push_back(PhaseSpec::quadratic(a, b, n));
        }
    d.size_budget = d.phases.size();
    return d;
}

void append_dictionary(PhaseDictionary& into, const PhaseDictionary& from) {
    into.phases.insert(into.phases.end(), from.phases.begin(), from.phases.end());
    if (!into.description.empty() && !from.description.empty()) into.description += " + ";
    into.description += from.description;
    into.size_budget = into.phases.size();
}

bool conjugation_closed(const PhaseDictionary& dict) {
    auto same = [](const PhaseSpec& a, const PhaseSpec& b) {
        if (a.spec.index() != b.spec.index()) return false;
        if (const auto* la = std::get_if<LinearPhase>(&a.spec)) {
            const auto& lb = std::get<LinearPhase>(b.spec);
            return la->r == lb.r && la->n == lb.n;
        }
        if (const auto* qa = std::get_if<QuadraticPhase>(&a.spec)) {
            const auto& qb = std::get<QuadraticPhase>(b.spec);
            return qa->a == qb.a && qa->b == qb.b && qa->n == qb.n;
        }
        const auto& ga = std::get<GeneralizedPhase>(a.spec);
        const auto& gb = std::get<GeneralizedPhase>(b.spec);
        if (ga.bilinear.size() != gb.bilinear.size() || ga.linear.size() != gb.linear.size())
            return false;
        for (std::size_t i = 0; i < ga.bilinear.size(); ++i)
            if (ga.bilinear[i].alpha != gb.bilinear[i].alpha ||
                ga.bilinear[i].beta != gb.bilinear[i].beta)
                return false;
        for (std::size_t i = 0; i < ga.linear.size(); ++i)
            if (ga.linear[i] != gb.linear[i]) return false;
        return true;
    };
    for (const PhaseSpec& q : dict.phases) {
        const PhaseSpec c = phase_conjugate(q);
        bool found = false;
        for (const PhaseSpec& other : dict.phases)
            if (same(c, other)) {
                found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

} // namespace aplab
