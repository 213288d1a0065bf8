#include "aplab/energy.hpp"

#include "aplab/errors.hpp"
#include "aplab/parallel.hpp"
#include "aplab/util.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace aplab {

Partition trivial_partition(std::uint64_t n) {
    if (n == 0) throw input_error("trivial_partition: n must be positive");
    Partition p;
    p.n = n;
    p.cell_id.assign(n, 0);
    p.cell_count = 1;
    return p;
}

Partition discrete_partition(std::uint64_t n) {
    if (n == 0 || n > UINT32_MAX) throw input_error("discrete_partition: bad n");
    Partition p;
    p.n = n;
    p.cell_id.resize(n);
    for (std::uint64_t i = 0; i < n; ++i) p.cell_id[i] = static_cast<std::uint32_t>(i);
    p.cell_count = static_cast<std::uint32_t>(n);
    return p;
}

Partition canonical_relabel(const Partition& p) {
    Partition out;
    out.n = p.n;
    out.cell_id.resize(p.n);
    std::vector<std::uint32_t> remap(p.cell_count, UINT32_MAX);
    std::uint32_t next = 0;
    for (std::uint64_t i = 0; i < p.n; ++i) {
        std::uint32_t c = p.cell_id[i];
        if (remap[c] == UINT32_MAX) remap[c] = next++;
        out.cell_id[i] = remap[c];
    }
    out.cell_count = next;
    return out;
}

namespace {

// Intersect p's cells with J level sets; theta_of(x) must land in [0, 1).
// New labels follow first occurrence in x order.
template <class ThetaFn>
Partition refine_by_levels(const Partition& p, unsigned grid_j, std::uint64_t cell_cap,
                           ThetaFn theta_of) {
    if (grid_j < 2) throw input_error("refine: grid must be >= 2");
    Partition out;
    out.n = p.n;
    out.cell_id.resize(p.n);

    std::unordered_map<std::uint64_t, std::uint32_t> ids;
    ids.reserve(p.cell_count * 2);
    std::uint32_t next = 0;
    for (std::uint64_t x = 0; x < p.n; ++x) {
        const double theta = theta_of(x);
        auto level = static_cast<std::uint64_t>(theta * grid_j);
        if (level >= grid_j) level = grid_j - 1;
        const std::uint64_t key = static_cast<std::uint64_t>(p.cell_id[x]) * grid_j + level;
        auto [it, inserted] = ids.try_emplace(key, next);
        if (inserted) {
            if (++next > cell_cap)
                throw resource_error("refine: cell count exceeds cap " + std::to_string(cell_cap));
        }
        out.cell_id[x] = it->second;
    }
    out.cell_count = next;
    return out;
}

} // namespace

Partition refine_by_phase(const Partition& p, const PhaseSpec& q, unsigned grid_j,
                          std::uint64_t cell_cap) {
    return refine_by_levels(p, grid_j, cell_cap,
                            [&](std::uint64_t x) { return phase_theta(q, x); });
}

SequenceVector conditional_expectation(const SequenceVector& f, const Partition& p) {
    if (f.n != p.n) throw input_error("conditional_expectation: length mismatch");
    std::vector<double> sum(p.cell_count, 0.0);
    std::vector<std::uint64_t> count(p.cell_count, 0);
    for (std::uint64_t x = 0; x < p.n; ++x) {
        sum[p.cell_id[x]] += f.values[x];
        ++count[p.cell_id[x]];
    }
    std::vector<double> mean(p.cell_count, 0.0);
    for (std::uint32_t c = 0; c < p.cell_count; ++c)
        if (count[c] > 0) mean[c] = sum[c] / static_cast<double>(count[c]);

    SequenceVector out(f.n, SeqKind::generic);
    for (std::uint64_t x = 0; x < p.n; ++x) out.values[x] = mean[p.cell_id[x]];
    return out;
}

double energy(const SequenceVector& f, const Partition& p) {
    if (f.n != p.n) throw input_error("energy: length mismatch");
    std::vector<double> sum(p.cell_count, 0.0);
    std::vector<std::uint64_t> count(p.cell_count, 0);
    for (std::uint64_t x = 0; x < p.n; ++x) {
        sum[p.cell_id[x]] += f.values[x];
        ++count[p.cell_id[x]];
    }
    Kahan acc;
    for (std::uint32_t c = 0; c < p.cell_count; ++c)
        if (count[c] > 0) acc.add(sum[c] * sum[c] / static_cast<double>(count[c]));
    return std::sqrt(acc.value() / static_cast<double>(p.n));
}

const char* to_string(TerminationReason r) {
    return r == TerminationReason::no_correlation ? "no_correlation" : "max_steps";
}

namespace {

struct ScanResult {
    std::size_t index = 0;
    cplx value{0.0, 0.0};
    double modulus = 0.0;
};

ScanResult scan_dictionary(const SequenceVector& fj, const PhaseDictionary& dict) {
    std::vector<cplx> corr(dict.phases.size());
    for (std::size_t i = 0; i < dict.phases.size(); ++i)
        corr[i] = correlate(fj, dict.phases[i], 0.0);
    ScanResult best;
    best.modulus = -1.0;
    for (std::size_t i = 0; i < corr.size(); ++i) {
        const double m = std::abs(corr[i]);
        if (m > best.modulus) {
            best.modulus = m;
            best.index = i;
            best.value = corr[i];
        }
    }
    return best;
}

} // namespace

DecompositionTrace decompose(const SequenceVector& f, const SequenceVector* majorant,
                             const PhaseDictionary& dict, const DecomposeOptions& opts) {
    if (!(opts.eta > 0.0)) throw input_error("decompose: eta must be positive");
    if (opts.max_steps < 1) throw input_error("decompose: max_steps must be >= 1");
    if (dict.phases.empty()) throw input_error("decompose: empty dictionary");
    if (majorant && majorant->n != f.n) throw input_error("decompose: majorant length mismatch");

    DecompositionTrace trace;
    trace.eta = opts.eta;
    trace.grid = opts.grid_j;

    Partition p = trivial_partition(f.n);
    double current_energy = energy(f, p);
    trace.terminated_by = TerminationReason::max_steps;

    for (unsigned step = 0; step < opts.max_steps; ++step) {
        SequenceVector cond = conditional_expectation(f, p);
        SequenceVector fj(f.n, SeqKind::generic);
        for (std::uint64_t x = 0; x < f.n; ++x) fj.values[x] = f.values[x] - cond.values[x];

        const ScanResult best = scan_dictionary(fj, dict);
        if (best.modulus < opts.eta) {
            trace.terminated_by = TerminationReason::no_correlation;
            break;
        }
        p = refine_by_phase(p, dict.phases[best.index], opts.grid_j, opts.cell_cap);
        const double e = energy(f, p);
        DecompositionStep rec;
        rec.phase = dict.phases[best.index];
        rec.phase_index = best.index;
        rec.correlation = best.value;
        rec.energy_after = e;
        rec.energy_gain = e - current_energy;
        rec.cells_after = p.cell_count;
        trace.steps.push_back(rec);
        current_energy = e;
    }

    trace.structured = conditional_expectation(f, p);
    trace.structured.kind = SeqKind::generic;
    trace.remainder = SequenceVector(f.n, SeqKind::generic);
    for (std::uint64_t x = 0; x < f.n; ++x)
        trace.remainder.values[x] = f.values[x] - trace.structured.values[x];
    trace.final_partition = std::move(p);
    trace.final_energy = current_energy;

    const ScanResult final_scan = scan_dictionary(trace.remainder, dict);
    trace.final_sup_correlation = final_scan.modulus;
    trace.final_sup_index = final_scan.index;

    if (majorant) {
        MajorantDiagnostics diag;
        diag.majorant_energy = energy(*majorant, trace.final_partition);
        double fs = 0.0;
        for (double v : trace.structured.values) fs = std::max(fs, std::abs(v));
        diag.structured_sup = fs;
        SequenceVector nu_cond = conditional_expectation(*majorant, trace.final_partition);
        double ns = 0.0;
        for (double v : nu_cond.values) ns = std::max(ns, std::abs(v));
        diag.majorant_condexp_sup = ns;
        trace.majorant = diag;
    }
    return trace;
}

DecompositionTrace decompose_soft(const SequenceVector& f, const SequenceVector* majorant,
                                  int order, const DecomposeOptions& opts,
                                  const HarmonicBudget& budget) {
    if (order != 2 && order != 3) throw input_error("decompose_soft: order must be 2 or 3");
    if (!(opts.eta > 0.0)) throw input_error("decompose_soft: eta must be positive");
    if (opts.max_steps < 1) throw input_error("decompose_soft: max_steps must be >= 1");
    if (majorant && majorant->n != f.n) throw input_error("decompose_soft: majorant length mismatch");

    DecompositionTrace trace;
    trace.eta = opts.eta;
    trace.grid = opts.grid_j;

    Partition p = trivial_partition(f.n);
    double current_energy = energy(f, p);
    trace.terminated_by = TerminationReason::max_steps;

    std::vector<cplx> fj(f.n);
    auto remainder_of = [&](const Partition& part) {
        const SequenceVector cond = conditional_expectation(f, part);
        for (std::uint64_t x = 0; x < f.n; ++x)
            fj[x] = cplx(f.values[x] - cond.values[x], 0.0);
    };

    for (unsigned step = 0; step < opts.max_steps; ++step) {
        remainder_of(p);
        const double norm = gowers_norm_core(fj, order, budget);
        if (norm < opts.eta) {
            trace.terminated_by = TerminationReason::no_correlation;
            break;
        }
        const std::vector<cplx> dual = dual_function_core(fj, order, budget);
        cplx pairing(0, 0);
        for (std::uint64_t x = 0; x < f.n; ++x) pairing += fj[x] * dual[x];
        pairing /= static_cast<double>(f.n);

        p = refine_by_levels(p, opts.grid_j, opts.cell_cap, [&](std::uint64_t x) {
            double theta = std::arg(dual[x]) / (2.0 * std::numbers::pi);
            if (theta < 0.0) theta += 1.0;
            return theta < 1.0 ? theta : 0.0;
        });
        const double e = energy(f, p);
        DecompositionStep rec;
        rec.dual_order = order;
        rec.correlation = pairing;
        rec.energy_after = e;
        rec.energy_gain = e - current_energy;
        rec.cells_after = p.cell_count;
        trace.steps.push_back(rec);
        current_energy = e;
    }

    trace.structured = conditional_expectation(f, p);
    trace.structured.kind = SeqKind::generic;
    trace.remainder = SequenceVector(f.n, SeqKind::generic);
    for (std::uint64_t x = 0; x < f.n; ++x)
        trace.remainder.values[x] = f.values[x] - trace.structured.values[x];
    trace.final_partition = std::move(p);
    trace.final_energy = current_energy;

    remainder_of(trace.final_partition);
    trace.final_sup_correlation = gowers_norm_core(fj, order, budget);
    trace.final_sup_index = 0;

    if (majorant) {
        MajorantDiagnostics diag;
        diag.majorant_energy = energy(*majorant, trace.final_partition);
        double fs = 0.0;
        for (double v : trace.structured.values) fs = std::max(fs, std::abs(v));
        diag.structured_sup = fs;
        SequenceVector nu_cond = conditional_expectation(*majorant, trace.final_partition);
        double ns = 0.0;
        for (double v : nu_cond.values) ns = std::max(ns, std::abs(v));
        diag.majorant_condexp_sup = ns;
        trace.majorant = diag;
    }
    return trace;
}

T4Report t4_report(const SequenceVector& f, const SequenceVector& structured,
                   const HarmonicBudget& budget) {
    if (f.n != structured.n) throw input_error("t4_report: length mismatch");
    T4Report rep;
    rep.t4_input = t_k(f, 4, budget).value.real();
    rep.t4_structured = t_k(structured, 4, budget).value.real();
    rep.difference = rep.t4_input - rep.t4_structured;
    return rep;
}

} // namespace aplab
