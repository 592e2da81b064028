#include "ecacm.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "ecacm/classical.hpp"
#include "ecacm/config.hpp"
#include "ecacm/errors.hpp"
#include "ecacm/harness.hpp"
#include "ecacm/output.hpp"
#include "ecacm/process_stats.hpp"
#include "ecacm/quantum.hpp"

struct ecacm_config {
    ecacm::harness::ExperimentConfig value;
};

struct ecacm_experiment {
    ecacm::harness::ExperimentConfig config;
    std::vector<ecacm::harness::ComplexityTrace> traces;
    ecacm::harness::SpectrumReport report;
};

namespace {

thread_local std::string last_error;

ecacm_status fail(ecacm_status status, const std::string& message) {
    last_error = message;
    return status;
}

// Maps the library's exception types onto status codes.
template <typename F>
ecacm_status guarded(F&& body) {
    try {
        last_error.clear();
        body();
        return ECACM_OK;
    } catch (const ecacm::config::ConfigError& e) {
        return fail(ECACM_ERR_INVALID_ARGUMENT, e.what());
    } catch (const ecacm::DomainError& e) {
        return fail(ECACM_ERR_DOMAIN, e.what());
    } catch (const ecacm::NumericalError& e) {
        return fail(ECACM_ERR_NUMERICAL, e.what());
    } catch (const ecacm::IoError& e) {
        return fail(ECACM_ERR_IO, e.what());
    } catch (const ecacm::ResourceError& e) {
        return fail(ECACM_ERR_RESOURCE, e.what());
    } catch (const std::bad_alloc&) {
        return fail(ECACM_ERR_RESOURCE, "out of memory");
    } catch (const std::exception& e) {
        return fail(ECACM_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(ECACM_ERR_INTERNAL, "unknown error");
    }
}

char* copy_string(const std::string& s) {
    auto* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

ecacm::eca::Tape tape_from_cells(const uint8_t* cells, size_t width) {
    if (cells == nullptr || width == 0) throw ecacm::DomainError("row must be non-empty");
    return ecacm::eca::Tape::from_cells({cells, width});
}

void fill_point(const ecacm::harness::RowComplexity& v, uint64_t t, ecacm_point* out) {
    out->t = t;
    out->c_q = v.c_q;
    out->c_mu = v.c_mu;
    out->n_states = v.n_states;
    out->gram_dim = v.gram_dim;
    out->past_entropy = v.past_entropy;
    out->gram_trace = v.gram_trace;
    out->gram_min_eigenvalue = v.gram_min_eigenvalue;
    out->stationary_residual = v.stationary_residual;
}

#define ECACM_REQUIRE(cond, what)                                          \
    do {                                                                   \
        if (!(cond)) return fail(ECACM_ERR_INVALID_ARGUMENT, what);        \
    } while (0)

}  // namespace

extern "C" {

const char* ecacm_version(void) { return "1.0.0"; }

const char* ecacm_last_error(void) { return last_error.c_str(); }

const char* ecacm_status_string(ecacm_status status) {
    switch (status) {
        case ECACM_OK: return "ok";
        case ECACM_ERR_INVALID_ARGUMENT: return "invalid argument";
        case ECACM_ERR_DOMAIN: return "domain error";
        case ECACM_ERR_NUMERICAL: return "numerical error";
        case ECACM_ERR_IO: return "I/O error";
        case ECACM_ERR_RESOURCE: return "resource error";
        case ECACM_ERR_BUFFER_TOO_SMALL: return "buffer too small";
        case ECACM_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void ecacm_free_string(char* s) { delete[] s; }

ecacm_status ecacm_canonical_rules(int* out, size_t capacity, size_t* count) {
    ECACM_REQUIRE(count != nullptr, "count must not be null");
    const auto rules = ecacm::eca::canonical_rules();
    *count = rules.size();
    if (out == nullptr || capacity < rules.size())
        return fail(ECACM_ERR_BUFFER_TOO_SMALL, "need room for " + std::to_string(rules.size()) + " rules");
    std::copy(rules.begin(), rules.end(), out);
    return ECACM_OK;
}

ecacm_status ecacm_rule_orbit(int rule, int out[4], size_t* count) {
    ECACM_REQUIRE(out != nullptr && count != nullptr, "output pointers must not be null");
    return guarded([&] {
        const auto orbit = ecacm::eca::rule_symmetries(rule);
        std::copy(orbit.begin(), orbit.end(), out);
        *count = orbit.size();
    });
}

ecacm_status ecacm_config_create(ecacm_config** out) {
    ECACM_REQUIRE(out != nullptr, "out must not be null");
    return guarded([&] { *out = new ecacm_config{}; });
}

void ecacm_config_destroy(ecacm_config* config) { delete config; }

ecacm_status ecacm_config_set(ecacm_config* config, const char* key, const char* value) {
    ECACM_REQUIRE(config != nullptr && key != nullptr && value != nullptr, "arguments must not be null");
    return guarded([&] { ecacm::config::apply_setting(config->value, key, value); });
}

ecacm_status ecacm_config_load_file(ecacm_config* config, const char* path) {
    ECACM_REQUIRE(config != nullptr && path != nullptr, "arguments must not be null");
    return guarded([&] { ecacm::config::load_file(config->value, path); });
}

ecacm_status ecacm_config_validate(const ecacm_config* config) {
    ECACM_REQUIRE(config != nullptr, "config must not be null");
    return guarded([&] { config->value.validate(); });
}

ecacm_status ecacm_config_dump(const ecacm_config* config, char** out) {
    ECACM_REQUIRE(config != nullptr && out != nullptr, "arguments must not be null");
    return guarded([&] { *out = copy_string(ecacm::config::dump(config->value)); });
}

ecacm_status ecacm_run(const ecacm_config* config, ecacm_progress_fn progress, void* user,
                       ecacm_experiment** out) {
    ECACM_REQUIRE(config != nullptr && out != nullptr, "arguments must not be null");
    *out = nullptr;
    return guarded([&] {
        auto exp = std::make_unique<ecacm_experiment>();
        exp->config = config->value;
        ecacm::harness::Progress cb;
        if (progress != nullptr) {
            cb = [progress, user](const ecacm::harness::ComplexityTrace& tr) {
                progress(tr.rule, tr.seed, tr.ok() ? 1 : 0, user);
            };
        }
        exp->traces = ecacm::harness::run_experiment(exp->config, cb);
        exp->report = ecacm::harness::rank_spectrum(exp->traces);
        *out = exp.release();
    });
}

void ecacm_experiment_destroy(ecacm_experiment* experiment) { delete experiment; }

size_t ecacm_experiment_trace_count(const ecacm_experiment* experiment) {
    return experiment == nullptr ? 0 : experiment->traces.size();
}

ecacm_status ecacm_experiment_trace(const ecacm_experiment* experiment, size_t index, int* rule,
                                    uint64_t* seed, size_t* n_points, int* ok, const char** error) {
    ECACM_REQUIRE(experiment != nullptr, "experiment must not be null");
    if (index >= experiment->traces.size()) return fail(ECACM_ERR_INVALID_ARGUMENT, "trace index out of range");
    const auto& tr = experiment->traces[index];
    if (rule) *rule = tr.rule;
    if (seed) *seed = tr.seed;
    if (n_points) *n_points = tr.points.size();
    if (ok) *ok = tr.ok() ? 1 : 0;
    if (error) *error = tr.error.c_str();
    return ECACM_OK;
}

ecacm_status ecacm_experiment_point(const ecacm_experiment* experiment, size_t trace, size_t point,
                                    ecacm_point* out) {
    ECACM_REQUIRE(experiment != nullptr && out != nullptr, "arguments must not be null");
    if (trace >= experiment->traces.size()) return fail(ECACM_ERR_INVALID_ARGUMENT, "trace index out of range");
    const auto& tr = experiment->traces[trace];
    if (point >= tr.points.size()) return fail(ECACM_ERR_INVALID_ARGUMENT, "point index out of range");
    fill_point(tr.points[point].value, tr.points[point].t, out);
    return ECACM_OK;
}

ecacm_status ecacm_experiment_ranking(const ecacm_experiment* experiment, int* rules, double* rates,
                                      size_t capacity, size_t* count) {
    ECACM_REQUIRE(experiment != nullptr && count != nullptr, "arguments must not be null");
    const auto& ranking = experiment->report.ranking;
    *count = ranking.size();
    if (capacity < ranking.size())
        return fail(ECACM_ERR_BUFFER_TOO_SMALL, "need room for " + std::to_string(ranking.size()) + " rules");
    for (size_t i = 0; i < ranking.size(); ++i) {
        if (rules) rules[i] = ranking[i];
        if (rates) {
            const auto& rate = experiment->report.find(ranking[i])->growth_rate;
            rates[i] = rate ? *rate : std::numeric_limits<double>::quiet_NaN();
        }
    }
    return ECACM_OK;
}

ecacm_status ecacm_experiment_csv(const ecacm_experiment* experiment, char** out) {
    ECACM_REQUIRE(experiment != nullptr && out != nullptr, "arguments must not be null");
    return guarded([&] {
        std::ostringstream os;
        ecacm::output::write_csv(os, experiment->traces);
        *out = copy_string(os.str());
    });
}

ecacm_status ecacm_experiment_write(const ecacm_experiment* experiment, const char* out_dir) {
    ECACM_REQUIRE(experiment != nullptr, "experiment must not be null");
    return guarded([&] {
        auto cfg = experiment->config;
        if (out_dir != nullptr) cfg.out_dir = out_dir;
        ecacm::output::emit_outputs(experiment->traces, experiment->report, cfg);
    });
}

ecacm_status ecacm_analyze_row(const uint8_t* cells, size_t width, int window_l, double chi2_alpha,
                               int classical, ecacm_point* out) {
    ECACM_REQUIRE(out != nullptr, "out must not be null");
    return guarded([&] {
        ecacm::harness::RowOptions opts;
        opts.window_l = window_l;
        opts.chi2_alpha = chi2_alpha;
        opts.classical = classical != 0;
        fill_point(ecacm::harness::analyze_row(tape_from_cells(cells, width), opts), 0, out);
    });
}

ecacm_status ecacm_dump_row(const uint8_t* cells, size_t width, int window_l, double chi2_alpha,
                            char** machine_dump, char** gram_dump) {
    return guarded([&] {
        const auto row = tape_from_cells(cells, width);
        if (machine_dump != nullptr) {
            std::ostringstream os;
            ecacm::classical::dump_machine(os, ecacm::classical::infer_classical(row, window_l, chi2_alpha).machine);
            *machine_dump = copy_string(os.str());
        }
        if (gram_dump != nullptr) {
            const auto windows = ecacm::stats::count_windows(row, window_l + 1);
            const auto g = ecacm::quantum::gram_matrix(windows.prefix_marginal(window_l),
                                                       ecacm::stats::chained_conditional_futures(windows));
            std::ostringstream os;
            ecacm::quantum::dump_gram(os, g, ecacm::quantum::symmetric_spectrum(g));
            *gram_dump = copy_string(os.str());
        }
    });
}

ecacm_status ecacm_evolve(int rule, size_t width, size_t t_max, uint64_t seed, int kink_filter,
                          uint8_t* rows_out) {
    ECACM_REQUIRE(rows_out != nullptr, "rows_out must not be null");
    return guarded([&] {
        const auto traj = ecacm::eca::run_seeded(rule, width, t_max, seed);
        for (size_t t = 0; t < traj.rows.size(); ++t) {
            const auto row = kink_filter ? ecacm::eca::kink_filter(traj.rows[t]) : traj.rows[t];
            for (size_t i = 0; i < width; ++i) rows_out[t * width + i] = row[i] ? 1 : 0;
        }
    });
}

}  // extern "C"
