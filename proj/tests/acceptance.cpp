// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <stdexcept>
#include <sstream>
#include <string>
#include <vector>

#include "ecacm/classical.hpp"
#include "ecacm/harness.hpp"
#include "ecacm/output.hpp"
#include "ecacm/quantum.hpp"
#include "oracles.hpp"

using namespace ecacm;
using harness::ComplexityTrace;
using harness::ExperimentConfig;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail.clear();
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& s) {
        if (pass) detail += (detail.empty() ? "" : "; ") + s;
    }
};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

int failures = 0;

void report(int id, const char* name, const std::function<Verdict()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v.pass = false;
        v.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failures;
    std::printf("%s criterion %d (%s): %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str(), secs);
    std::fflush(stdout);
}

ExperimentConfig base(std::vector<int> rules, std::size_t width, std::size_t t_max,
                      std::vector<std::uint64_t> seeds) {
    ExperimentConfig c;
    c.rules = std::move(rules);
    c.width = width;
    c.t_max = t_max;
    c.seeds = std::move(seeds);
    c.window_l = 6;
    return c;
}

void require_ok(Verdict& v, const std::vector<ComplexityTrace>& traces) {
    for (const auto& tr : traces)
        v.require(tr.ok(), "rule " + std::to_string(tr.rule) + " seed " + std::to_string(tr.seed) + " failed: " +
                               tr.error);
}

// Runs shared by several criteria.
std::vector<ComplexityTrace> c2_traces, c3_traces, c3_scaled_traces, c4_traces;

const ExperimentConfig c4_config = base({30, 22, 18, 122, 54, 110}, 16000, 1000, {1, 2, 3});

}  // namespace

int main() {
    report(1, "exact oracles", [] {
        Verdict v;
        struct Case {
            const char* name;
            eca::Tape row;
            std::size_t states;
            double value;
        };
        const double l3 = std::log2(3.0);
        const std::vector<Case> cases{
            {"all-zeros", eca::Tape(64000), 1, 0.0},
            {"all-ones", eca::Tape(64000).complemented(), 1, 0.0},
            {"alternating", oracle::periodic_row("01", 64000), 2, 1.0},
            {"period-3", oracle::periodic_row("001", 64000), 3, l3},
        };
        for (const auto& c : cases) {
            const auto r = harness::analyze_row(c.row, harness::RowOptions{});
            v.require(r.n_states == c.states, std::string(c.name) + " states " + std::to_string(r.n_states));
            v.require(std::abs(r.c_mu - c.value) <= 1e-9, std::string(c.name) + " C_mu " + num(r.c_mu));
            v.require(std::abs(r.c_q - c.value) <= 1e-9, std::string(c.name) + " C_q " + num(r.c_q));
        }
        v.note("4 processes within 1e-9");
        return v;
    });

    report(2, "class I vanishes", [] {
        Verdict v;
        c2_traces = harness::run_experiment(base({0, 8, 32, 128}, 8000, 200, {1, 2, 3, 4, 5}));
        require_ok(v, c2_traces);
        double worst = 0.0;
        for (const auto& tr : c2_traces)
            for (const auto& p : tr.points)
                if (p.t >= 50) worst = std::max(worst, p.value.c_q);
        v.require(worst <= 1e-6, "max C_q for t >= 50 is " + num(worst));
        v.note("max C_q for t >= 50: " + num(worst));
        return v;
    });

    report(3, "rule 30 negligible", [] {
        Verdict v;
        c3_traces = harness::run_experiment(base({30}, 64000, 1000, {1, 2, 3, 4, 5}));
        c3_scaled_traces = harness::run_experiment(base({30}, 16000, 1000, {1, 2, 3, 4, 5}));
        require_ok(v, c3_traces);
        require_ok(v, c3_scaled_traces);
        auto worst = [](const std::vector<ComplexityTrace>& traces) {
            double w = 0.0;
            for (const auto& tr : traces)
                for (const auto& p : tr.points) w = std::max(w, p.value.c_q);
            return w;
        };
        const double full = worst(c3_traces), scaled = worst(c3_scaled_traces);
        v.require(full <= 0.05, "W=64000 max C_q " + num(full) + " > 0.05");
        v.require(scaled <= 0.1, "W=16000 max C_q " + num(scaled) + " > 0.1");
        v.note("max C_q " + num(full) + " at W=64000, " + num(scaled) + " at W=16000");
        return v;
    });

    report(4, "spectrum ordering", [] {
        Verdict v;
        c4_traces = harness::run_experiment(c4_config);
        require_ok(v, c4_traces);
        const auto rep = harness::rank_spectrum(c4_traces);
        auto rate = [&](int r) {
            const auto* s = rep.find(r);
            if (s == nullptr || !s->growth_rate) throw std::runtime_error("no rate for rule " + std::to_string(r));
            return *s->growth_rate;
        };
        v.require(rate(110) > rate(54), "rate(110) <= rate(54)");
        for (int hi : {54, 122, 18})
            for (int lo : {22, 30})
                v.require(rate(hi) > rate(lo),
                          "rate(" + std::to_string(hi) + ") <= rate(" + std::to_string(lo) + ")");
        const auto* s110 = rep.find(110);
        double at10 = NAN, at1000 = NAN;
        for (std::size_t i = 0; i < s110->t.size(); ++i) {
            if (s110->t[i] == 10) at10 = s110->mean_cq[i];
            if (s110->t[i] == 1000) at1000 = s110->mean_cq[i];
        }
        v.require(at1000 - at10 >= 0.5, "rule 110 gain " + num(at1000 - at10) + " < 0.5");
        std::string order;
        for (int r : rep.ranking) order += (order.empty() ? "" : " > ") + std::to_string(r);
        v.note("ranking " + order + "; rates 110 " + num(rate(110)) + ", 54 " + num(rate(54)) + ", 122 " +
               num(rate(122)) + ", 18 " + num(rate(18)) + ", 22 " + num(rate(22)) + ", 30 " + num(rate(30)) +
               "; rule 110 gain " + num(at1000 - at10));
        return v;
    });

    report(5, "quantum advantage", [] {
        Verdict v;
        // Exact golden-mean distributions at L = 6.
        const int L = 6;
        const std::uint32_t n = 1U << L;
        std::vector<double> pasts(n);
        stats::ConditionalFutures futures(L);
        for (std::uint32_t p = 0; p < n; ++p) {
            const std::string ps = oracle::bits(p, L);
            pasts[p] = oracle::golden_mean_word(ps);
            if (pasts[p] == 0.0) continue;
            std::vector<double> row(n);
            for (std::uint32_t f = 0; f < n; ++f)
                row[f] = oracle::golden_mean_word(ps + oracle::bits(f, L)) / pasts[p];
            futures.set_row(p, row);
        }
        const double c_q = quantum::quantum_statistical_memory(quantum::gram_matrix(pasts, futures));
        Eigen::MatrixXd t0(2, 2), t1(2, 2);
        t0 << 0.5, 1.0, 0.0, 0.0;
        t1 << 0.0, 0.0, 0.5, 0.0;
        const double c_mu = classical::statistical_complexity(classical::make_machine({t0, t1}));
        v.require(c_q < c_mu, "golden mean C_q " + num(c_q) + " >= C_mu " + num(c_mu));

        std::size_t rows = 0;
        for (const auto* set : {&c2_traces, &c3_traces, &c3_scaled_traces, &c4_traces}) {
            v.require(!set->empty(), "an earlier criterion produced no rows");
            for (const auto& tr : *set)
                for (const auto& p : tr.points) {
                    ++rows;
                    if (p.value.c_q > p.value.past_entropy)
                        v.require(false, "rule " + std::to_string(tr.rule) + " t " + std::to_string(p.t) +
                                             " C_q " + num(p.value.c_q) + " > H " + num(p.value.past_entropy));
                }
        }
        v.note("golden mean C_q " + num(c_q) + " < C_mu " + num(c_mu) + "; C_q <= H(pasts) on " +
               std::to_string(rows) + " rows");
        return v;
    });

    report(6, "light cone", [] {
        Verdict v;
        eca::Rng pick(20240601);
        std::uniform_int_distribution<int> rule_d(0, 255), width_d(1, 64), t_d(1, 16);
        for (int i = 0; i < 100; ++i) {
            const int rule = rule_d(pick);
            const auto width = static_cast<std::size_t>(width_d(pick));
            const auto t_max = static_cast<std::size_t>(t_d(pick));
            const std::uint64_t seed = pick();
            eca::Rng ra(seed), rb(seed);
            const eca::Tape init_a = eca::random_tape(width, ra);
            const eca::Tape init_b = eca::random_tape(width, rb);
            const auto a = eca::run_open_boundary(init_a, eca::RuleTable(rule), t_max, ra, t_max);
            const auto b = eca::run_open_boundary(init_b, eca::RuleTable(rule), t_max, rb, 2 * t_max);
            for (std::size_t t = 1; t <= t_max; ++t)
                if (!(a.row(t) == b.row(t)))
                    v.require(false, "rule " + std::to_string(rule) + " W " + std::to_string(width) + " t " +
                                         std::to_string(t));
        }
        v.note("100 pairs identical under pad t_max and 2 t_max");
        return v;
    });

    report(7, "numerical hygiene", [] {
        Verdict v;
        double trace_err = 0.0, min_eig = 0.0, residual = 0.0;
        std::size_t rows = 0;
        for (const auto* set : {&c3_traces, &c3_scaled_traces, &c4_traces}) {
            v.require(!set->empty(), "an earlier criterion produced no rows");
            for (const auto& tr : *set)
                for (const auto& p : tr.points) {
                    ++rows;
                    trace_err = std::max(trace_err, std::abs(p.value.gram_trace - 1.0));
                    min_eig = std::min(min_eig, p.value.gram_min_eigenvalue);
                    residual = std::max(residual, p.value.stationary_residual);
                }
        }
        v.require(trace_err <= 1e-9, "trace error " + num(trace_err));
        v.require(min_eig >= -1e-9, "min eigenvalue " + num(min_eig));
        v.require(residual <= 1e-10, "stationary residual " + num(residual));
        v.note(std::to_string(rows) + " rows; max |Tr G - 1| " + num(trace_err) + ", min eigenvalue " +
               num(min_eig) + ", max residual " + num(residual));
        return v;
    });

    report(8, "reproducibility", [] {
        Verdict v;
        v.require(!c4_traces.empty(), "criterion 4 produced no rows");
        std::ostringstream first, second;
        output::write_csv(first, c4_traces);
        auto again = c4_config;
        again.threads = 2;
        output::write_csv(second, harness::run_experiment(again));
        v.require(first.str() == second.str(), "CSV differs between runs");
        v.note(std::to_string(first.str().size()) + " CSV bytes identical");
        return v;
    });

    return failures;
}
