#include "aplab/errors.hpp"
#include "aplab/parallel.hpp"
#include "aplab/reports.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using aplab::json;

struct CommonFlags {
    std::optional<std::string> config;
    std::optional<std::uint64_t> n;
    std::optional<std::uint32_t> k;
    std::optional<double> c;
    std::optional<std::uint32_t> w;
    std::optional<double> alpha;
    std::optional<double> eta;
    std::optional<unsigned> grid;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<double> tol;
    std::optional<std::string> set;
    std::optional<std::uint64_t> m;
    std::optional<std::uint64_t> l;
    std::optional<std::uint64_t> first;
    std::optional<std::uint64_t> step;
    std::optional<std::string> input;
    std::string format = "json";
    std::optional<std::string> out;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config, "JSON config file; flags override its entries");
    cmd->add_option("--n", f.n, "main size parameter N");
    cmd->add_option("--k", f.k, "progression length k");
    cmd->add_option("--c", f.c, "truncation exponent, R = N^c");
    cmd->add_option("--w", f.w, "W-trick cutoff w (W = product of primes < w)");
    cmd->add_option("--alpha", f.alpha, "density parameter");
    cmd->add_option("--eta", f.eta, "correlation threshold");
    cmd->add_option("--grid", f.grid, "level-set grid J");
    cmd->add_option("--seed", f.seed, "random seed");
    cmd->add_option("--threads", f.threads, "worker thread cap (0 = hardware)");
    cmd->add_option("--tol", f.tol, "singular series tail tolerance");
    cmd->add_option("--set", f.set, "structures: set kind");
    cmd->add_option("--m", f.m, "structures: Behrend range M");
    cmd->add_option("--l", f.l, "structures: interval length L");
    cmd->add_option("--first", f.first, "verify-ap: first term");
    cmd->add_option("--step", f.step, "verify-ap: common difference");
    cmd->add_option("--input", f.input, "input kind for bias/decompose");
    cmd->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", f.out, "output path (default stdout)");
}

json merge_params(const CommonFlags& f) {
    json params = json::object();
    if (f.n) params["n"] = *f.n;
    if (f.k) params["k"] = *f.k;
    if (f.c) params["c"] = *f.c;
    if (f.w) params["w"] = *f.w;
    if (f.alpha) params["alpha"] = *f.alpha;
    if (f.eta) params["eta"] = *f.eta;
    if (f.grid) params["grid"] = *f.grid;
    if (f.seed) params["seed"] = *f.seed;
    if (f.tol) params["tol"] = *f.tol;
    if (f.set) params["set"] = *f.set;
    if (f.m) params["m"] = *f.m;
    if (f.l) params["l"] = *f.l;
    if (f.first) params["first"] = *f.first;
    if (f.step) params["step"] = *f.step;
    if (f.input) params["input"] = *f.input;
    if (f.threads) params["threads"] = *f.threads;
    return aplab::merge_config(f.config ? &*f.config : nullptr, params);
}

void emit(const json& envelope, const CommonFlags& f) {
    std::string text;
    if (f.format == "csv") {
        if (envelope.contains("results") && !envelope.at("results").is_null())
            text = aplab::flatten_csv(envelope.at("results"));
        else
            text = aplab::flatten_csv(envelope.at("error"));
    } else {
        text = envelope.dump(2) + "\n";
    }
    if (f.out) {
        std::ofstream out(*f.out, std::ios::trunc);
        if (!out) throw aplab::input_error("cannot open output file: " + *f.out);
        out << text;
    } else {
        std::cout << text;
    }
}

int run(const std::string& command, const CommonFlags& flags) {
    json params;
    try {
        params = merge_params(flags);
        if (params.contains("threads"))
            aplab::set_thread_count(params.at("threads").get<unsigned>());

        const auto start = std::chrono::steady_clock::now();
        const json results = aplab::run_command(command, params);
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        emit(aplab::make_envelope(command, params, results, ms), flags);
        return 0;
    } catch (const aplab::input_error& e) {
        emit(aplab::make_error_envelope(command, params, "input", e.what()), flags);
        return 1;
    } catch (const aplab::resource_error& e) {
        emit(aplab::make_error_envelope(command, params, "resource", e.what()), flags);
        return 2;
    } catch (const std::exception& e) {
        emit(aplab::make_error_envelope(command, params, "internal", e.what()), flags);
        return 3;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"aplab: arithmetic progressions in the primes, empirically"};
    app.require_subcommand(1);

    const std::vector<std::string> commands = {"count-aps", "gamma",  "gy",         "bias",
                                               "decompose", "primes", "structures", "verify-ap"};
    std::vector<CommonFlags> flags(commands.size());
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        CLI::App* sub = app.add_subcommand(commands[i]);
        add_common(sub, flags[i]);
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);

    for (std::size_t i = 0; i < commands.size(); ++i)
        if (subs[i]->parsed()) return run(commands[i], flags[i]);
    return 1;
}
