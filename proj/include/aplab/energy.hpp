#pragma once

#include "aplab/harmonic.hpp"
#include "aplab/phases.hpp"
#include "aplab/sequence.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace aplab {

// Sigma-algebra as cell labels on {0..n-1}.
struct Partition {
    std::uint64_t n = 0;
    std::vector<std::uint32_t> cell_id;
    std::uint32_t cell_count = 0;
};

Partition trivial_partition(std::uint64_t n);
Partition discrete_partition(std::uint64_t n);

// Cells renumbered by first occurrence; equal canonical forms mean the same
// cell structure up to relabeling.
Partition canonical_relabel(const Partition& p);

// Intersects p's cells with the J level sets of q's real phase.
Partition refine_by_phase(const Partition& p, const PhaseSpec& q, unsigned grid_j,
                          std::uint64_t cell_cap = 1'000'000);

// Constant on each cell, equal to the cell mean; empty cells contribute 0.
SequenceVector conditional_expectation(const SequenceVector& f, const Partition& p);

// ||E(f|p)||_2, the mean-square root.
double energy(const SequenceVector& f, const Partition& p);

enum class TerminationReason { no_correlation, max_steps };

const char* to_string(TerminationReason r);

struct DecompositionStep {
    std::optional<PhaseSpec> phase; // explicit-dictionary steps
    int dual_order = 0;             // 2 or 3 when the obstruction is a dual function
    std::size_t phase_index = 0;
    cplx correlation{0.0, 0.0};
    double energy_after = 0.0;
    double energy_gain = 0.0;
    std::uint32_t cells_after = 0;
};

struct MajorantDiagnostics {
    double majorant_energy = 0.0;        // ||E(nu|p)||_2
    double structured_sup = 0.0;         // ||F||_inf
    double majorant_condexp_sup = 0.0;   // ||E(nu|p)||_inf
};

struct DecompositionTrace {
    double eta = 0.0;
    unsigned grid = 0;
    std::vector<DecompositionStep> steps;
    SequenceVector structured; // F_s = E(f | final partition)
    SequenceVector remainder;  // f - F_s
    TerminationReason terminated_by = TerminationReason::no_correlation;
    Partition final_partition;
    double final_energy = 0.0;
    double final_sup_correlation = 0.0; // fresh scan of the remainder
    std::size_t final_sup_index = 0;
    std::optional<MajorantDiagnostics> majorant;
};

struct DecomposeOptions {
    double eta = 0.05;
    unsigned grid_j = 16;
    unsigned max_steps = 8;
    std::uint64_t cell_cap = 1'000'000;
};

// Iterates: f_j = f - E(f|p_j); pick the dictionary phase maximizing |E f_j q|
// (ties to the lower index); below eta stop, otherwise refine by its level
// sets. Optional majorant adds the energy-cap and sup-norm diagnostics.
DecompositionTrace decompose(const SequenceVector& f, const SequenceVector* majorant,
                             const PhaseDictionary& dict, const DecomposeOptions& opts);

// Soft-obstruction variant: the step obstruction is the dual function of the
// current remainder (order 2 or 3) instead of an explicit phase, and the stop
// rule is ||f_j||_{U^order} < eta; E f_j D(f_j) equals that norm to the 2^order,
// so a large norm certifies the correlation. Refinement is by level sets of
// arg(D)/2pi. Closure properties of these obstructions are not checked.
DecompositionTrace decompose_soft(const SequenceVector& f, const SequenceVector* majorant,
                                  int order, const DecomposeOptions& opts,
                                  const HarmonicBudget& budget = {});

struct T4Report {
    double t4_input = 0.0;
    double t4_structured = 0.0;
    double difference = 0.0;
};

T4Report t4_report(const SequenceVector& f, const SequenceVector& structured,
                   const HarmonicBudget& budget = {});

} // namespace aplab
