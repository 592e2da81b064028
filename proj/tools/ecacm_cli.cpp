// Command-line front end. Talks to the library only through the C API.

#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "ecacm.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct ConfigDeleter {
    void operator()(ecacm_config* c) const { ecacm_config_destroy(c); }
};
struct ExperimentDeleter {
    void operator()(ecacm_experiment* e) const { ecacm_experiment_destroy(e); }
};
using ConfigPtr = std::unique_ptr<ecacm_config, ConfigDeleter>;
using ExperimentPtr = std::unique_ptr<ecacm_experiment, ExperimentDeleter>;

struct StringDeleter {
    void operator()(char* s) const { ecacm_free_string(s); }
};
using CString = std::unique_ptr<char, StringDeleter>;

int report(ecacm_status status, const char* context) {
    std::fprintf(stderr, "ecacm: %s: %s: %s\n", context, ecacm_status_string(status), ecacm_last_error());
    return status == ECACM_ERR_INVALID_ARGUMENT || status == ECACM_ERR_DOMAIN ? kExitUsage : kExitRuntime;
}

struct RunOptions {
    std::string config_file;
    // (key, value) for every flag given on the command line.
    std::vector<std::pair<std::string, std::string>> overrides;
    bool quiet = false;
    bool show_config = false;
};

void progress(int rule, uint64_t seed, int ok, void* user) {
    if (*static_cast<bool*>(user)) return;
    std::fprintf(stderr, "rule %3d seed %llu %s\n", rule, static_cast<unsigned long long>(seed),
                 ok ? "done" : "FAILED");
}

int do_run(const RunOptions& opts) {
    ecacm_config* raw = nullptr;
    if (auto st = ecacm_config_create(&raw); st != ECACM_OK) return report(st, "config");
    ConfigPtr config(raw);
    if (!opts.config_file.empty()) {
        if (auto st = ecacm_config_load_file(config.get(), opts.config_file.c_str()); st != ECACM_OK)
            return st == ECACM_ERR_IO ? report(ECACM_ERR_INVALID_ARGUMENT, "config file")
                                      : report(st, "config file");
    }
    for (const auto& [key, value] : opts.overrides) {
        if (auto st = ecacm_config_set(config.get(), key.c_str(), value.c_str()); st != ECACM_OK)
            return report(st, ("--" + key).c_str());
    }
    if (auto st = ecacm_config_validate(config.get()); st != ECACM_OK) return report(st, "config");
    if (opts.show_config) {
        char* dump = nullptr;
        if (ecacm_config_dump(config.get(), &dump) == ECACM_OK) {
            std::fputs(CString(dump).get(), stderr);
        }
    }

    bool quiet = opts.quiet;
    ecacm_experiment* exp_raw = nullptr;
    if (auto st = ecacm_run(config.get(), progress, &quiet, &exp_raw); st != ECACM_OK) return report(st, "run");
    ExperimentPtr exp(exp_raw);
    if (auto st = ecacm_experiment_write(exp.get(), nullptr); st != ECACM_OK) return report(st, "write");

    int failures = 0;
    for (size_t i = 0; i < ecacm_experiment_trace_count(exp.get()); ++i) {
        int rule = 0, ok = 0;
        uint64_t seed = 0;
        const char* error = nullptr;
        ecacm_experiment_trace(exp.get(), i, &rule, &seed, nullptr, &ok, &error);
        if (!ok) {
            ++failures;
            std::fprintf(stderr, "ecacm: rule %d seed %llu failed: %s\n", rule,
                         static_cast<unsigned long long>(seed), error);
        }
    }

    size_t count = 0;
    ecacm_experiment_ranking(exp.get(), nullptr, nullptr, 0, &count);
    std::vector<int> rules(count);
    std::vector<double> rates(count);
    ecacm_experiment_ranking(exp.get(), rules.data(), rates.data(), count, &count);
    if (!opts.quiet) {
        std::printf("rank  rule  growth (bits/doubling)\n");
        for (size_t i = 0; i < count; ++i) {
            if (std::isnan(rates[i])) std::printf("%4zu  %4d  -\n", i + 1, rules[i]);
            else std::printf("%4zu  %4d  %+.4f\n", i + 1, rules[i], rates[i]);
        }
    }
    return failures == 0 ? 0 : kExitRuntime;
}

int do_rules() {
    size_t count = 0;
    ecacm_canonical_rules(nullptr, 0, &count);
    std::vector<int> rules(count);
    if (auto st = ecacm_canonical_rules(rules.data(), rules.size(), &count); st != ECACM_OK)
        return report(st, "rules");
    std::printf("# %zu canonical rules; orbit under mirror and complement\n", count);
    for (int r : rules) {
        int orbit[4];
        size_t n = 0;
        if (auto st = ecacm_rule_orbit(r, orbit, &n); st != ECACM_OK) return report(st, "orbit");
        std::printf("%d:", r);
        for (size_t i = 0; i < n; ++i) std::printf(" %d", orbit[i]);
        std::printf("\n");
    }
    return 0;
}

struct AnalyzeOptions {
    int rule = 110;
    size_t width = 4000;
    size_t t = 100;
    uint64_t seed = 1;
    int window_l = 6;
    double chi2_alpha = 0.05;
    bool kink_filter = false;
    bool machine = false;
    bool gram = false;
};

int do_analyze(const AnalyzeOptions& opts) {
    std::vector<uint8_t> rows;
    try {
        rows.resize(opts.width * opts.t);
    } catch (const std::exception&) {
        return report(ECACM_ERR_RESOURCE, "analyze");
    }
    if (auto st = ecacm_evolve(opts.rule, opts.width, opts.t, opts.seed, opts.kink_filter ? 1 : 0, rows.data());
        st != ECACM_OK)
        return report(st, "evolve");
    const uint8_t* row = rows.data() + (opts.t - 1) * opts.width;
    ecacm_point p{};
    if (auto st = ecacm_analyze_row(row, opts.width, opts.window_l, opts.chi2_alpha, 1, &p); st != ECACM_OK)
        return report(st, "analyze");
    std::printf("rule %d seed %llu t %zu width %zu L %d\n", opts.rule, static_cast<unsigned long long>(opts.seed),
                opts.t, opts.width, opts.window_l);
    std::printf("c_q %.12g\nc_mu %.12g\nn_states %llu\ngram_dim %llu\n", p.c_q, p.c_mu,
                static_cast<unsigned long long>(p.n_states), static_cast<unsigned long long>(p.gram_dim));
    if (opts.machine || opts.gram) {
        char* machine = nullptr;
        char* gram = nullptr;
        if (auto st = ecacm_dump_row(row, opts.width, opts.window_l, opts.chi2_alpha,
                                     opts.machine ? &machine : nullptr, opts.gram ? &gram : nullptr);
            st != ECACM_OK)
            return report(st, "dump");
        if (machine) std::fputs(CString(machine).get(), stdout);
        if (gram) std::fputs(CString(gram).get(), stdout);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum and classical statistical complexity of elementary cellular automata"};
    app.require_subcommand(1);

    RunOptions run_opts;
    auto* run = app.add_subcommand("run", "Evolve rules and infer C_q and C_mu over time");
    run->add_option("--config", run_opts.config_file, "Flat key = value file; flags override it");

    // Flags are kept as text and handed to the library in command-line order.
    struct Flag {
        const char* name;
        const char* key;
        const char* help;
    };
    const std::vector<Flag> valued = {
        {"--rules", "rules", "Comma-separated rule numbers or all-canonical"},
        {"--width", "width", "Cells per row (W)"},
        {"--tmax", "tmax", "Number of updates"},
        {"--window-l", "window-l", "Past/future length L"},
        {"--seeds", "seeds", "Comma-separated seeds"},
        {"--chi2-alpha", "chi2-alpha", "Significance level for state merging"},
        {"--out", "out", "Output directory"},
        {"--format", "format", "Subset of csv,json,svg"},
        {"--futures", "futures", "Conditional future estimator: chained or direct"},
        {"--schedule", "schedule", "Comma-separated sample times (default: decade schedule)"},
        {"--threads", "threads", "Worker threads (0: all cores)"},
    };
    std::vector<std::string> values(valued.size());
    std::vector<CLI::Option*> valued_opts;
    for (size_t i = 0; i < valued.size(); ++i)
        valued_opts.push_back(run->add_option(valued[i].name, values[i], valued[i].help));
    bool classical = true;
    auto* classical_opt = run->add_flag("--classical,!--no-classical", classical, "Infer C_mu as well as C_q");
    bool kink = false;
    auto* kink_opt = run->add_flag("--kink-filter", kink, "Keep only adjacent pairs of 1s before inference");
    bool pbm = false;
    auto* pbm_opt = run->add_flag("--pbm", pbm, "Write each trajectory as a PBM image");
    run->add_flag("--quiet,-q", run_opts.quiet, "Suppress progress and ranking output");
    run->add_flag("--show-config", run_opts.show_config, "Print the effective configuration");

    auto* rules = app.add_subcommand("rules", "List the 88 canonical rules and their symmetry orbits");

    AnalyzeOptions an;
    auto* analyze = app.add_subcommand("analyze", "Infer complexity of one row and optionally dump the models");
    analyze->add_option("--rule", an.rule, "Rule number")->required();
    analyze->add_option("--width", an.width, "Cells per row");
    analyze->add_option("--t", an.t, "Timestep to analyse");
    analyze->add_option("--seed", an.seed, "Seed of the random initial row");
    analyze->add_option("--window-l", an.window_l, "Past/future length L");
    analyze->add_option("--chi2-alpha", an.chi2_alpha, "Significance level for state merging");
    analyze->add_flag("--kink-filter", an.kink_filter, "Apply the kink filter first");
    analyze->add_flag("--machine", an.machine, "Print the inferred machine as an edge list");
    analyze->add_flag("--gram", an.gram, "Print the Gram matrix and its spectrum");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    if (run->parsed()) {
        for (size_t i = 0; i < valued.size(); ++i)
            if (valued_opts[i]->count() > 0) run_opts.overrides.emplace_back(valued[i].key, values[i]);
        if (classical_opt->count() > 0) run_opts.overrides.emplace_back("classical", classical ? "true" : "false");
        if (kink_opt->count() > 0) run_opts.overrides.emplace_back("kink-filter", "true");
        if (pbm_opt->count() > 0) run_opts.overrides.emplace_back("pbm", "true");
        return do_run(run_opts);
    }
    if (rules->parsed()) return do_rules();
    if (analyze->parsed()) return do_analyze(an);
    return kExitUsage;
}
