#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace aplab {

enum class SeqKind { lambda, lambda_tilde, nu, nu_tilde, indicator, generic };

const char* to_string(SeqKind kind);
SeqKind seq_kind_from_string(std::string_view s);

// Dense real-valued function on {0, ..., n-1}. Index i carries the value of
// the underlying arithmetic function at the integer i.
struct SequenceVector {
    std::uint64_t n = 0;
    SeqKind kind = SeqKind::generic;
    std::vector<double> values;

    SequenceVector() = default;
    SequenceVector(std::uint64_t len, SeqKind k) : n(len), kind(k), values(len, 0.0) {}

    double mean() const;

    // length == n; indicator values in {0,1}; lambda/nu family nonnegative.
    void validate() const;
};

} // namespace aplab
