#include "aplab/reports.hpp"

#include "aplab/errors.hpp"
#include "aplab/gy_sieve.hpp"
#include "aplab/hl_series.hpp"
#include "aplab/prime_aps.hpp"
#include "aplab/prime_table.hpp"
#include "aplab/structures.hpp"
#include "aplab/util.hpp"
#include "aplab/version.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

namespace aplab {

void save_sequence(const SequenceVector& seq, const std::string& path, const json& params) {
    std::string raw(seq.values.size() * 8, '\0');
    for (std::size_t i = 0; i < seq.values.size(); ++i) {
        std::uint64_t bits;
        std::memcpy(&bits, &seq.values[i], 8);
        for (int b = 0; b < 8; ++b) raw[i * 8 + b] = static_cast<char>((bits >> (8 * b)) & 0xFF);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw input_error("cannot open for writing: " + path);
    out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (!out) throw input_error("write failed: " + path);

    json side;
    side["n"] = seq.n;
    side["kind"] = to_string(seq.kind);
    side["params"] = params;
    side["crc32"] = crc32(raw.data(), raw.size());
    std::ofstream sout(path + ".json", std::ios::trunc);
    if (!sout) throw input_error("cannot open for writing: " + path + ".json");
    sout << side.dump(2) << "\n";
}

SequenceVector load_sequence(const std::string& path, json* sidecar) {
    std::ifstream sin(path + ".json");
    if (!sin) throw input_error("cannot open sidecar: " + path + ".json");
    json side = json::parse(sin);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open: " + path);
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    const std::uint64_t n = side.at("n").get<std::uint64_t>();
    if (raw.size() != n * 8) throw input_error("sequence file size mismatch: " + path);
    if (crc32(raw.data(), raw.size()) != side.at("crc32").get<std::uint32_t>())
        throw input_error("CRC mismatch in sequence file: " + path);

    SequenceVector seq(n, seq_kind_from_string(side.at("kind").get<std::string>()));
    const auto* bytes = reinterpret_cast<const unsigned char*>(raw.data());
    for (std::uint64_t i = 0; i < n; ++i) {
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[i * 8 + b]) << (8 * b);
        std::memcpy(&seq.values[i], &bits, 8);
    }
    if (sidecar) *sidecar = side;
    return seq;
}

void save_set_spec(const SetSpec& set, const std::string& path) {
    json params;
    params["label"] = to_string(set.label);
    params["density"] = set.density;
    for (const auto& [key, value] : set.params) params[key] = value;
    if (set.composite_modulus_warning) params["composite_modulus_warning"] = true;
    save_sequence(set.indicator, path, params);
}

json spectrum_to_json(const Spectrum& s, std::size_t top_m) {
    std::vector<std::pair<double, std::uint64_t>> order;
    order.reserve(s.n);
    for (std::uint64_t r = 0; r < s.n; ++r) order.emplace_back(std::norm(s.coef[r]), r);
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    if (order.size() > top_m) order.resize(top_m);
    json out = json::array();
    for (const auto& [sq, r] : order)
        out.push_back({{"r", r},
                       {"re", s.coef[r].real()},
                       {"im", s.coef[r].imag()},
                       {"modulus", std::sqrt(sq)}});
    return out;
}

json phase_to_json(const PhaseSpec& q) {
    json out;
    if (const auto* lin = std::get_if<LinearPhase>(&q.spec)) {
        out["type"] = "linear";
        out["r"] = lin->r;
    } else if (const auto* quad = std::get_if<QuadraticPhase>(&q.spec)) {
        out["type"] = "quadratic";
        out["a"] = quad->a;
        out["b"] = quad->b;
    } else {
        const auto& gen = std::get<GeneralizedPhase>(q.spec);
        out["type"] = "generalized";
        json terms = json::array();
        for (const auto& t : gen.bilinear) terms.push_back({{"alpha", t.alpha}, {"beta", t.beta}});
        out["terms"] = terms;
        out["linear"] = gen.linear;
    }
    out["label"] = phase_label(q);
    return out;
}

json bias_entries_to_json(const std::vector<BiasEntry>& entries) {
    json out = json::array();
    for (const BiasEntry& e : entries)
        out.push_back({{"r", e.r},
                       {"re", e.value.real()},
                       {"im", e.value.imag()},
                       {"modulus", std::abs(e.value)}});
    return out;
}

json trace_to_json(const DecompositionTrace& trace, const T4Report* t4) {
    json out;
    out["eta"] = trace.eta;
    out["grid"] = trace.grid;
    json steps = json::array();
    for (const DecompositionStep& s : trace.steps) {
        json phase = s.phase ? phase_to_json(*s.phase)
                             : json{{"type", "dual"}, {"order", s.dual_order}};
        steps.push_back({{"phase", std::move(phase)},
                         {"corr_re", s.correlation.real()},
                         {"corr_im", s.correlation.imag()},
                         {"energy", s.energy_after},
                         {"energy_gain", s.energy_gain},
                         {"cells", s.cells_after}});
    }
    out["steps"] = steps;
    if (t4) {
        out["t4_f"] = t4->t4_input;
        out["t4_F"] = t4->t4_structured;
    }
    out["terminated_by"] = to_string(trace.terminated_by);
    out["final_energy"] = trace.final_energy;
    out["final_sup_correlation"] = trace.final_sup_correlation;
    out["final_cells"] = trace.final_partition.cell_count;
    if (trace.majorant) {
        out["majorant_energy"] = trace.majorant->majorant_energy;
        out["structured_sup"] = trace.majorant->structured_sup;
        out["majorant_condexp_sup"] = trace.majorant->majorant_condexp_sup;
    }
    return out;
}

namespace {

std::uint64_t need_u64(const json& params, const char* key) {
    if (!params.contains(key))
        throw input_error(std::string("missing required parameter: ") + key);
    return params.at(key).get<std::uint64_t>();
}

json gamma_to_json(const SingularSeriesValue& g) {
    return {{"k", g.k},
            {"value", g.value},
            {"truncation_prime", g.truncation_prime},
            {"tail_bound", g.tail_bound}};
}

SequenceVector pm1_vector(std::uint64_t n, std::uint64_t seed) {
    SequenceVector f(n, SeqKind::generic);
    std::mt19937_64 rng(seed);
    for (std::uint64_t i = 0; i < n; ++i) f.values[i] = (rng() & 1) ? 1.0 : -1.0;
    return f;
}

} // namespace

json build_count_aps_report(const json& params) {
    const std::uint64_t n = need_u64(params, "n");
    const auto k = params.value<std::uint32_t>("k", 3);
    const double tol = params.value("tol", 1e-5);
    const auto quad_grid = params.value<std::uint32_t>("quad_grid", 256);

    const APCountRecord rec = count_prime_aps(n, k);
    const SingularSeriesValue gamma = singular_series(k, tol);

    json results;
    results["n"] = n;
    results["k"] = k;
    results["count"] = rec.count;
    results["sieve_limit"] = rec.sieve_limit;
    results["gamma"] = gamma_to_json(gamma);
    if (n >= 3) {
        const double crude = hl_crude(static_cast<double>(n), k, gamma);
        results["crude"] = crude;
        results["ratio_crude"] = static_cast<double>(rec.count) / crude;
    }
    if (n >= 16) {
        const PredictionRecord pred = hl_refined(n, k, gamma, quad_grid);
        results["refined"] = pred.refined;
        results["quadrature_cells"] = pred.quadrature_cells;
        results["ratio_refined"] = static_cast<double>(rec.count) / pred.refined;
    }
    return results;
}

json build_gamma_report(const json& params) {
    const auto k = static_cast<std::uint32_t>(need_u64(params, "k"));
    const double tol = params.value("tol", 1e-5);
    return gamma_to_json(singular_series(k, tol));
}

json build_gy_report(const json& params) {
    const std::uint64_t n = need_u64(params, "n");
    const double c = params.value("c", 0.45);
    std::vector<std::uint64_t> lags = params.value("lags", std::vector<std::uint64_t>{1, 2, 4, 6});

    json results;
    results["n"] = n;

    if (params.value("synthetic", std::string()) == "ones") {
        SequenceVector ones(n, SeqKind::nu);
        std::fill(ones.values.begin(), ones.values.end(), 1.0);
        results["synthetic"] = "ones";
        results["mean"] = ones.mean();
        json corr = json::array();
        for (std::uint64_t h : lags)
            corr.push_back({{"h", h}, {"value", nu_pair_correlation(ones, h)}});
        results["pair_correlations"] = corr;
        return results;
    }

    const GYStats stats = gy_measure_stats(n, c, lags);
    results["c"] = c;
    results["r"] = stats.cfg.r;
    results["mean"] = stats.mean;
    results["mean_displayed_normalization"] = stats.mean_displayed;
    results["majorization"] = {{"bound", stats.maj.bound},
                               {"prime_max_ratio", stats.maj.prime_max_ratio},
                               {"prime_argmax", stats.maj.prime_argmax},
                               {"prime_power_max_ratio", stats.maj.prime_power_max_ratio},
                               {"prime_power_argmax", stats.maj.prime_power_argmax},
                               {"primes_scanned", stats.maj.primes_scanned},
                               {"nu_constant_on_primes", stats.maj.nu_constant_on_primes}};
    json corr = json::array();
    for (const auto& [h, v] : stats.pair_correlations) corr.push_back({{"h", h}, {"value", v}});
    results["pair_correlations"] = corr;

    if (params.contains("w")) {
        const auto w = params.at("w").get<std::uint32_t>();
        auto [cfg, lam] = w_trick_lambda(n, w);
        results["w"] = w;
        results["big_w"] = cfg.big_w;
        results["phi_w"] = cfg.phi_w;
        results["lambda_tilde_mean"] = lam.mean();
        SequenceVector nu_t = w_trick_measure(n, stats.cfg.r, w);
        results["nu_tilde_mean"] = nu_t.mean();
    }
    return results;
}

json build_bias_report(const json& params) {
    const std::uint64_t n = need_u64(params, "n");
    const std::string input = params.value("input", std::string("lambda"));
    const double alpha = params.value("alpha", 1.0);
    const auto top = params.value<std::size_t>("top", 5);

    json results;
    results["n"] = n;
    results["input"] = input;

    if (params.contains("w_list")) {
        const auto ws = params.at("w_list").get<std::vector<std::uint32_t>>();
        json sweep = json::array();
        for (std::uint32_t w : ws) {
            auto [cfg, lam] = w_trick_lambda(n, w);
            const auto top1 = linear_bias_scan(lam, alpha, 1);
            sweep.push_back({{"w", w},
                             {"big_w", cfg.big_w},
                             {"sup_bias", top1.empty() ? 0.0 : std::abs(top1[0].value)},
                             {"top_r", top1.empty() ? 0 : top1[0].r}});
        }
        results["sweep"] = sweep;
        return results;
    }

    SequenceVector f;
    if (input == "lambda") {
        f = von_mangoldt_table(n);
    } else if (input == "lambda_tilde") {
        f = w_trick_lambda(n, params.value<std::uint32_t>("w", 5)).second;
    } else if (input == "constant") {
        f = SequenceVector(n, SeqKind::generic);
        std::fill(f.values.begin(), f.values.end(), alpha);
    } else {
        throw input_error("bias: unknown input kind " + input);
    }
    results["alpha"] = alpha;
    results["top"] = bias_entries_to_json(linear_bias_scan(f, alpha, top));
    return results;
}

json build_decompose_report(const json& params) {
    const std::uint64_t n = need_u64(params, "n");
    const std::string input = params.value("input", std::string("lambda_tilde"));
    const double eta = params.value("eta", 0.02);
    const auto grid = params.value<unsigned>("grid", 16);
    const auto max_steps = params.value<unsigned>("max_steps", 8);
    const double alpha = params.value("alpha", 0.1);
    const double c = params.value("c", 0.45);
    const auto w = params.value<std::uint32_t>("w", 5);
    const auto dict_a = params.value<std::int64_t>("dict_quadratic_a", 5);
    const auto dict_b = params.value<std::int64_t>("dict_quadratic_b", 0);
    const auto dict_r = params.value<std::int64_t>("dict_linear_r", 5);

    PhaseDictionary dict = quadratic_dictionary(n, dict_a, dict_b);
    append_dictionary(dict, linear_dictionary(n, dict_r));

    SequenceVector f;
    SequenceVector majorant;
    bool have_majorant = false;
    if (input == "lambda_tilde") {
        f = w_trick_lambda(n, w).second;
        const GYConfig cfg = make_gy_config(n, c);
        majorant = w_trick_measure(n, cfg.r, w);
        have_majorant = true;
    } else if (input == "quadratic_level") {
        const SetSpec set = quadratic_level_set(n, alpha);
        f = SequenceVector(n, SeqKind::generic);
        for (std::uint64_t i = 0; i < n; ++i)
            f.values[i] = set.indicator.values[i] - set.density;
    } else if (input == "random_pm1") {
        f = pm1_vector(n, need_u64(params, "seed"));
    } else {
        throw input_error("decompose: unknown input kind " + input);
    }

    DecomposeOptions opts;
    opts.eta = eta;
    opts.grid_j = grid;
    opts.max_steps = max_steps;
    opts.cell_cap = params.value<std::uint64_t>("cell_cap", 1'000'000);

    const std::string dict_kind = params.value("dict", std::string("phases"));
    DecompositionTrace trace;
    if (dict_kind == "soft2" || dict_kind == "soft3") {
        HarmonicBudget budget;
        budget.dual2_max_n = 16'384;
        trace = decompose_soft(f, have_majorant ? &majorant : nullptr,
                               dict_kind == "soft2" ? 2 : 3, opts, budget);
    } else if (dict_kind == "phases") {
        trace = decompose(f, have_majorant ? &majorant : nullptr, dict, opts);
    } else {
        throw input_error("decompose: unknown dict kind " + dict_kind);
    }

    json results;
    results["n"] = n;
    results["input"] = input;
    HarmonicBudget budget;
    if (n <= budget.tk_max_n) {
        const T4Report t4 = t4_report(f, trace.structured, budget);
        results["trace"] = trace_to_json(trace, &t4);
    } else {
        results["trace"] = trace_to_json(trace, nullptr);
    }
    return results;
}

json build_primes_report(const json& params) {
    const std::uint64_t n = need_u64(params, "n");
    const PrimeBitmap bm = build_prime_bitmap(n);
    std::uint64_t count = 0;
    for (std::uint64_t w : bm.words) count += static_cast<std::uint64_t>(__builtin_popcountll(w));
    const double psi = chebyshev_psi(n);
    json results;
    results["limit"] = n;
    results["prime_count"] = count;
    results["psi"] = psi;
    results["mean_von_mangoldt"] = psi / static_cast<double>(n);
    return results;
}

json build_structures_report(const json& params) {
    const std::string kind = params.value("set", std::string("behrend"));
    json results;
    results["set"] = kind;
    HarmonicBudget budget;

    if (kind == "behrend") {
        const std::uint64_t m = need_u64(params, "m");
        const auto set = behrend_set(m);
        results["m"] = m;
        results["size"] = set.size();
        results["ap_free"] = is_3ap_free(set);
        return results;
    }
    if (kind == "sparse3ap") {
        const std::uint64_t m = need_u64(params, "m");
        const std::uint64_t l = need_u64(params, "l");
        const SetSpec s = sparse_3ap_set(m, l);
        results["n"] = s.n;
        results["density"] = s.density;
        results["behrend_size"] = s.params.at("behrend_size");
        results["t3"] = t3_via_fourier(s.indicator).real();
        results["alpha_cubed"] = s.density * s.density * s.density;
        return results;
    }
    if (kind == "quadratic_level") {
        const std::uint64_t n = need_u64(params, "n");
        const double alpha = params.value("alpha", 0.1);
        const SetSpec s = quadratic_level_set(n, alpha);
        results["n"] = n;
        results["alpha"] = alpha;
        results["density"] = s.density;
        results["n_is_prime"] = !s.composite_modulus_warning;
        const auto top1 = linear_bias_scan(s.indicator, s.density, 1);
        results["sup_linear_bias"] = top1.empty() ? 0.0 : std::abs(top1[0].value);
        if (n <= budget.tk_max_n) results["t4"] = t_k(s.indicator, 4, budget).value.real();
        return results;
    }
    if (kind == "random") {
        const std::uint64_t n = need_u64(params, "n");
        const double alpha = params.value("alpha", 0.3);
        const SetSpec s = random_set(n, alpha, need_u64(params, "seed"));
        results["n"] = n;
        results["density"] = s.density;
        results["t3"] = t3_via_fourier(s.indicator).real();
        results["alpha_cubed"] = s.density * s.density * s.density;
        return results;
    }
    if (kind == "interval") {
        const std::uint64_t n = need_u64(params, "n");
        const double alpha = params.value("alpha", 0.2);
        const SetSpec s = interval_set(n, alpha);
        results["n"] = n;
        results["density"] = s.density;
        results["t3"] = t3_via_fourier(s.indicator).real();
        return results;
    }
    throw input_error("structures: unknown set kind " + kind);
}

json build_verify_ap_report(const json& params) {
    APWitness w;
    w.first = need_u64(params, "first");
    w.step = need_u64(params, "step");
    w.length = static_cast<std::uint32_t>(params.value<std::uint64_t>("k", 3));
    json results;
    results["first"] = w.first;
    results["step"] = w.step;
    results["k"] = w.length;
    results["valid"] = verify_ap(w);
    return results;
}

json merge_config(const std::string* config_path, const json& flag_params) {
    json params = json::object();
    if (config_path) {
        std::ifstream in(*config_path);
        if (!in) throw input_error("cannot open config file: " + *config_path);
        params = json::parse(in, nullptr, true, true);
        if (!params.is_object()) throw input_error("config file must hold one JSON object");
    }
    for (auto it = flag_params.begin(); it != flag_params.end(); ++it)
        params[it.key()] = it.value();
    return params;
}

json run_command(const std::string& command, const json& params) {
    if (command == "count-aps") return build_count_aps_report(params);
    if (command == "gamma") return build_gamma_report(params);
    if (command == "gy") return build_gy_report(params);
    if (command == "bias") return build_bias_report(params);
    if (command == "decompose") return build_decompose_report(params);
    if (command == "primes") return build_primes_report(params);
    if (command == "structures") return build_structures_report(params);
    if (command == "verify-ap") return build_verify_ap_report(params);
    throw input_error("unknown command: " + command);
}

json make_envelope(const std::string& command, const json& params, const json& results,
                   double runtime_ms) {
    json env;
    env["schema_version"] = 1;
    env["command"] = command;
    env["params"] = params;
    env["results"] = results;
    env["runtime_ms"] = runtime_ms;
    env["library"] = library_version;
    return env;
}

json make_error_envelope(const std::string& command, const json& params, const std::string& type,
                         const std::string& message) {
    json env;
    env["schema_version"] = 1;
    env["command"] = command;
    env["params"] = params;
    env["results"] = nullptr;
    env["error"] = {{"type", type}, {"message", message}};
    env["library"] = library_version;
    return env;
}

namespace {

void flatten_into(const json& node, const std::string& prefix, std::string& out) {
    if (node.is_object()) {
        for (auto it = node.begin(); it != node.end(); ++it)
            flatten_into(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    } else if (node.is_array()) {
        for (std::size_t i = 0; i < node.size(); ++i)
            flatten_into(node[i], prefix + "[" + std::to_string(i) + "]", out);
    } else {
        out += prefix;
        out += ",";
        out += node.dump();
        out += "\n";
    }
}

} // namespace

std::string flatten_csv(const json& results) {
    std::string out = "key,value\n";
    flatten_into(results, "", out);
    return out;
}

} // namespace aplab
