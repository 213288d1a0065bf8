#include "aplab/sequence.hpp"

#include "aplab/errors.hpp"
#include "aplab/parallel.hpp"
#include "aplab/util.hpp"

namespace aplab {

const char* to_string(SeqKind kind) {
    switch (kind) {
        case SeqKind::lambda: return "lambda";
        case SeqKind::lambda_tilde: return "lambda_tilde";
        case SeqKind::nu: return "nu";
        case SeqKind::nu_tilde: return "nu_tilde";
        case SeqKind::indicator: return "indicator";
        case SeqKind::generic: return "generic";
    }
    return "generic";
}

SeqKind seq_kind_from_string(std::string_view s) {
    if (s == "lambda") return SeqKind::lambda;
    if (s == "lambda_tilde") return SeqKind::lambda_tilde;
    if (s == "nu") return SeqKind::nu;
    if (s == "nu_tilde") return SeqKind::nu_tilde;
    if (s == "indicator") return SeqKind::indicator;
    if (s == "generic") return SeqKind::generic;
    throw input_error("unknown sequence kind: " + std::string(s));
}

double SequenceVector::mean() const {
    if (n == 0) throw input_error("mean of empty sequence");
    double s = reduce_blocks(n, 1ull << 16, [&](std::uint64_t lo, std::uint64_t hi) {
        Kahan acc;
        for (std::uint64_t i = lo; i < hi; ++i) acc.add(values[i]);
        return acc.value();
    });
    return s / static_cast<double>(n);
}

void SequenceVector::validate() const {
    if (values.size() != n) throw input_error("sequence length does not match n");
    switch (kind) {
        case SeqKind::indicator:
            for (double v : values)
                if (v != 0.0 && v != 1.0) throw input_error("indicator sequence has value outside {0,1}");
            break;
        case SeqKind::lambda:
        case SeqKind::lambda_tilde:
        case SeqKind::nu:
        case SeqKind::nu_tilde:
            for (double v : values)
                if (v < 0.0) throw input_error("nonnegative sequence kind has a negative value");
            break;
        case SeqKind::generic:
            break;
    }
}

} // namespace aplab
