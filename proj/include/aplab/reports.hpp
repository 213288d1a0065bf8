#pragma once

#include "aplab/energy.hpp"
#include "aplab/harmonic.hpp"
#include "aplab/sequence.hpp"

#include <json.hpp>

#include <string>

namespace aplab {

using json = nlohmann::ordered_json;

// Raw little-endian doubles at `path`, JSON sidecar at `path + ".json"` with
// {"n", "kind", "params", "crc32"}.
void save_sequence(const SequenceVector& seq, const std::string& path, const json& params);
SequenceVector load_sequence(const std::string& path, json* sidecar = nullptr);

// Same container; the construction label and parameters ride in the sidecar.
void save_set_spec(const struct SetSpec& set, const std::string& path);

json phase_to_json(const PhaseSpec& q);
json bias_entries_to_json(const std::vector<BiasEntry>& entries);
json trace_to_json(const DecompositionTrace& trace, const T4Report* t4);

// Top-m coefficients as (r, re, im, modulus), sorted by modulus descending.
json spectrum_to_json(const Spectrum& s, std::size_t top_m);

// One builder per CLI command; `params` is the merged config/flag object.
json build_count_aps_report(const json& params);
json build_gamma_report(const json& params);
json build_gy_report(const json& params);
json build_bias_report(const json& params);
json build_decompose_report(const json& params);
json build_primes_report(const json& params);
json build_structures_report(const json& params);
json build_verify_ap_report(const json& params);

// Dispatch by command name ("count-aps", "gamma", "gy", "bias", "decompose",
// "primes", "structures", "verify-ap").
json run_command(const std::string& command, const json& params);

// One JSON object from `config_path` (optional), with `flag_params` entries
// overriding file entries.
json merge_config(const std::string* config_path, const json& flag_params);

json make_envelope(const std::string& command, const json& params, const json& results,
                   double runtime_ms);
json make_error_envelope(const std::string& command, const json& params, const std::string& type,
                         const std::string& message);

// Flattened projection of the results object: "dotted.path,value" lines.
std::string flatten_csv(const json& results);

} // namespace aplab
