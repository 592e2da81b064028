#include "ecacm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include "ecacm/classical.hpp"
#include "ecacm/errors.hpp"
#include "ecacm/output.hpp"
#include "ecacm/process_stats.hpp"
#include "ecacm/quantum.hpp"

namespace ecacm::harness {

RowComplexity analyze_row(const eca::Tape& row, const RowOptions& options) {
    const int L = options.window_l;
    if (L < 1) throw DomainError("window length L must be at least 1");
    RowComplexity out;

    stats::ConditionalFutures futures(L);
    std::vector<double> past_probs;
    if (options.futures == FuturesEstimator::Chained) {
        const auto windows = stats::count_windows(row, L + 1);
        futures = stats::chained_conditional_futures(windows);
        past_probs = windows.prefix_marginal(L).probabilities();
    } else {
        const auto windows = stats::count_windows(row, 2 * L);
        futures = stats::conditional_futures(windows);
        past_probs = windows.prefix_marginal(L).probabilities();
    }
    out.past_entropy = stats::shannon_entropy(past_probs);

    const auto gram = quantum::gram_matrix(past_probs, futures);
    const auto spectrum = quantum::symmetric_spectrum(gram);
    out.gram_dim = gram.dimension();
    out.gram_trace = gram.trace();
    out.gram_min_eigenvalue = spectrum.min();
    out.c_q = quantum::quantum_statistical_memory(gram);

    if (options.classical) {
        const auto cl = classical::infer_classical(row, L, options.chi2_alpha);
        out.c_mu = cl.c_mu;
        out.n_states = cl.machine.num_states();
        out.stationary_residual = cl.machine.stationary_residual();
    } else {
        out.c_mu = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

void ExperimentConfig::validate() const {
    if (rules.empty()) throw DomainError("rules: at least one rule is required");
    for (int r : rules)
        if (r < 0 || r > 255) throw DomainError("rules: " + std::to_string(r) + " outside [0, 255]");
    if (window_l < 1 || 2 * window_l > stats::kMaxWindow)
        throw DomainError("window-l: must lie in [1, " + std::to_string(stats::kMaxWindow / 2) + "]");
    if (width < static_cast<std::size_t>(2 * window_l)) throw DomainError("width: must be at least 2L");
    if (t_max < 1) throw DomainError("tmax: must be at least 1");
    if (seeds.empty()) throw DomainError("seeds: at least one seed is required");
    if (!(chi2_alpha > 0.0 && chi2_alpha < 1.0)) throw DomainError("chi2-alpha: must lie in (0, 1)");
    const auto sched = effective_schedule();
    if (sched.empty()) throw DomainError("schedule: empty");
    for (std::size_t i = 0; i < sched.size(); ++i) {
        if (sched[i] < 1 || sched[i] > t_max) throw DomainError("schedule: times must lie in [1, tmax]");
        if (i > 0 && sched[i] <= sched[i - 1]) throw DomainError("schedule: must be strictly increasing");
    }
}

std::vector<std::size_t> ExperimentConfig::effective_schedule() const {
    return schedule.empty() ? sampling_schedule(t_max) : schedule;
}

RowOptions ExperimentConfig::row_options() const {
    return {window_l, chi2_alpha, classical, futures};
}

std::vector<std::size_t> sampling_schedule(std::size_t t_max) {
    std::vector<std::size_t> out;
    for (std::size_t decade = 1; decade <= t_max; decade *= 10) {
        for (std::size_t m = 1; m <= 9; ++m) {
            const std::size_t t = m * decade;
            if (t > t_max) break;
            out.push_back(t);
        }
        if (decade > std::numeric_limits<std::size_t>::max() / 10) break;
    }
    if (t_max >= 1 && (out.empty() || out.back() != t_max)) out.push_back(t_max);
    return out;
}

ComplexityTrace run_unit(const ExperimentConfig& config, int rule, std::uint64_t seed,
                         const std::filesystem::path* pbm_path) {
    ComplexityTrace trace{rule, seed, {}, {}};
    try {
        const auto schedule = config.effective_schedule();
        const auto options = config.row_options();
        eca::Rng rng(seed);
        const eca::Tape initial = eca::random_tape(config.width, rng);
        eca::OpenBoundaryEvolver evolver(initial, eca::RuleTable(rule), config.t_max, rng);

        std::ofstream pbm;
        if (pbm_path != nullptr) {
            pbm.open(*pbm_path, std::ios::binary);
            if (!pbm) throw IoError("cannot open " + pbm_path->string() + " for writing");
            output::write_pbm_header(pbm, config.width, config.t_max, true);
        }

        auto next = schedule.begin();
        for (std::size_t t = 1; t <= config.t_max; ++t) {
            evolver.step();
            const bool sampled = next != schedule.end() && *next == t;
            if (!sampled && pbm_path == nullptr) continue;
            eca::Tape row = evolver.centre();
            if (config.kink_filter) row = eca::kink_filter(row);
            if (pbm_path != nullptr) output::write_pbm_row(pbm, row, true);
            if (sampled) {
                trace.points.push_back({t, analyze_row(row, options)});
                ++next;
            }
        }
        if (pbm_path != nullptr && !pbm) throw IoError("failed writing " + pbm_path->string());
    } catch (const std::exception& e) {
        trace.error = e.what();
    }
    return trace;
}

std::vector<ComplexityTrace> run_experiment(const ExperimentConfig& config, const Progress& progress) {
    config.validate();
    struct Unit {
        int rule;
        std::uint64_t seed;
    };
    std::vector<Unit> units;
    for (int r : config.rules)
        for (auto s : config.seeds) units.push_back({r, s});
    std::sort(units.begin(), units.end(), [](const Unit& a, const Unit& b) {
        return a.rule != b.rule ? a.rule < b.rule : a.seed < b.seed;
    });
    units.erase(std::unique(units.begin(), units.end(),
                            [](const Unit& a, const Unit& b) { return a.rule == b.rule && a.seed == b.seed; }),
                units.end());

    if (config.pbm) std::filesystem::create_directories(config.out_dir);

    std::vector<ComplexityTrace> traces(units.size());
    std::atomic<std::size_t> next{0};
    std::mutex progress_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < units.size(); i = next++) {
            std::filesystem::path pbm;
            if (config.pbm) pbm = config.out_dir / output::pbm_filename(units[i].rule, units[i].seed);
            traces[i] = run_unit(config, units[i].rule, units[i].seed, config.pbm ? &pbm : nullptr);
            if (progress) {
                std::lock_guard lock(progress_mutex);
                progress(traces[i]);
            }
        }
    };
    unsigned n_threads = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
    n_threads = std::clamp<unsigned>(n_threads, 1, static_cast<unsigned>(std::max<std::size_t>(1, units.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    }
    return traces;
}

double growth_rate(std::span<const std::size_t> t, std::span<const double> c_q) {
    if (t.size() != c_q.size()) throw DomainError("time and value series differ in length");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < 10) continue;
        x.push_back(std::log2(static_cast<double>(t[i])));
        y.push_back(c_q[i]);
    }
    if (x.size() < 2) throw DomainError("growth rate needs at least two points with t >= 10");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

const RuleStatistics* SpectrumReport::find(int rule) const {
    for (const auto& r : rules)
        if (r.rule == rule) return &r;
    return nullptr;
}

int SpectrumReport::rank_of(int rule) const {
    const auto it = std::find(ranking.begin(), ranking.end(), rule);
    return it == ranking.end() ? -1 : static_cast<int>(it - ranking.begin());
}

namespace {

// Population mean and standard deviation; NaN when any value is NaN.
std::pair<double, double> mean_std(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / n)};
}

}  // namespace

SpectrumReport rank_spectrum(const std::vector<ComplexityTrace>& traces) {
    std::map<int, std::vector<const ComplexityTrace*>> by_rule;
    for (const auto& tr : traces)
        if (tr.ok() && !tr.points.empty()) by_rule[tr.rule].push_back(&tr);

    SpectrumReport report;
    for (const auto& [rule, group] : by_rule) {
        RuleStatistics st;
        st.rule = rule;
        st.seeds = group.size();
        std::map<std::size_t, std::pair<std::vector<double>, std::vector<double>>> at;
        for (const auto* tr : group)
            for (const auto& p : tr->points) {
                at[p.t].first.push_back(p.value.c_q);
                at[p.t].second.push_back(p.value.c_mu);
            }
        for (const auto& [t, values] : at) {
            st.t.push_back(t);
            const auto [mq, sq] = mean_std(values.first);
            const auto [mm, sm] = mean_std(values.second);
            st.mean_cq.push_back(mq);
            st.std_cq.push_back(sq);
            st.mean_cmu.push_back(mm);
            st.std_cmu.push_back(sm);
        }
        const auto qualifying = std::count_if(st.t.begin(), st.t.end(), [](auto t) { return t >= 10; });
        if (qualifying >= 2) st.growth_rate = growth_rate(st.t, st.mean_cq);
        report.rules.push_back(std::move(st));
    }

    for (const auto& st : report.rules) report.ranking.push_back(st.rule);
    std::stable_sort(report.ranking.begin(), report.ranking.end(), [&](int a, int b) {
        const auto& ra = report.find(a)->growth_rate;
        const auto& rb = report.find(b)->growth_rate;
        if (ra.has_value() != rb.has_value()) return ra.has_value();
        if (ra && *ra != *rb) return *ra > *rb;
        return a < b;
    });
    return report;
}

}  // namespace ecacm::harness
