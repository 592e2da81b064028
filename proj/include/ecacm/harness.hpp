#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecacm/eca.hpp"

namespace ecacm::harness {

enum class FuturesEstimator {
    Chained,  // one-step conditionals from (L+1)-windows, chained L times
    Direct,   // 2L-window frequency counting
};

struct RowOptions {
    int window_l = 6;
    double chi2_alpha = 0.05;
    bool classical = true;
    FuturesEstimator futures = FuturesEstimator::Chained;
};

// Everything measured on one row. c_mu is NaN when the classical path is
// disabled.
struct RowComplexity {
    double c_q = 0.0;
    double c_mu = 0.0;
    std::size_t n_states = 0;
    std::size_t gram_dim = 0;
    double past_entropy = 0.0;  // Shannon entropy of the length-L pasts
    double gram_trace = 0.0;
    double gram_min_eigenvalue = 0.0;
    double stationary_residual = 0.0;
};

RowComplexity analyze_row(const eca::Tape& row, const RowOptions& options);

struct Formats {
    bool csv = true;
    bool json = true;
    bool svg = true;
};

struct ExperimentConfig {
    std::vector<int> rules = eca::canonical_rules();
    std::size_t width = 64000;
    int window_l = 6;
    std::size_t t_max = 1000;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    double chi2_alpha = 0.05;
    std::vector<std::size_t> schedule;  // empty: sampling_schedule(t_max)
    bool classical = true;
    bool kink_filter = false;
    bool pbm = false;
    FuturesEstimator futures = FuturesEstimator::Chained;
    std::filesystem::path out_dir = "out";
    Formats formats;
    unsigned threads = 0;  // 0: hardware concurrency

    // Throws DomainError naming the offending field.
    void validate() const;
    std::vector<std::size_t> effective_schedule() const;
    RowOptions row_options() const;
};

struct TracePoint {
    std::size_t t = 0;
    RowComplexity value;
};

struct ComplexityTrace {
    int rule = 0;
    std::uint64_t seed = 0;
    std::vector<TracePoint> points;
    std::string error;  // non-empty when the unit failed

    bool ok() const { return error.empty(); }
};

// 1..9, 10..90, 100..900, ... up to t_max, with t_max appended if missed.
std::vector<std::size_t> sampling_schedule(std::size_t t_max);

// One (rule, seed) unit. Writes a PBM of the analysed rows when
// `pbm_path` is given.
ComplexityTrace run_unit(const ExperimentConfig& config, int rule, std::uint64_t seed,
                         const std::filesystem::path* pbm_path = nullptr);

using Progress = std::function<void(const ComplexityTrace&)>;

// All (rule, seed) units on a bounded worker pool; traces sorted by
// (rule, seed). Failed units carry an error message instead of aborting
// the run.
std::vector<ComplexityTrace> run_experiment(const ExperimentConfig& config,
                                            const Progress& progress = {});

// Least-squares slope of C_q against log2 t over points with t >= 10,
// in bits per doubling of t.
double growth_rate(std::span<const std::size_t> t, std::span<const double> c_q);

struct RuleStatistics {
    int rule = 0;
    std::size_t seeds = 0;
    std::vector<std::size_t> t;
    std::vector<double> mean_cq, std_cq;
    std::vector<double> mean_cmu, std_cmu;  // NaN when the classical path was off
    std::optional<double> growth_rate;      // absent with < 2 points at t >= 10
};

struct SpectrumReport {
    std::vector<RuleStatistics> rules;  // ascending rule number
    std::vector<int> ranking;           // descending growth rate, ties by rule

    const RuleStatistics* find(int rule) const;
    // Position in `ranking`, or -1.
    int rank_of(int rule) const;
};

// Mean and population standard deviation across seeds at each t. Failed
// traces are skipped; rules without a rate rank last.
SpectrumReport rank_spectrum(const std::vector<ComplexityTrace>& traces);

}  // namespace ecacm::harness
