#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ecacm/eca.hpp"
#include "ecacm/harness.hpp"

namespace ecacm::output {

// "%.12g"; NaN becomes the empty string.
std::string format_number(double x);

inline constexpr const char* kCsvHeader = "rule,seed,t,c_q,c_mu,n_states,gram_dim";

// One line per trace point, traces in the given order. Failed traces
// contribute the points they completed.
void write_csv(std::ostream& os, const std::vector<harness::ComplexityTrace>& traces);

void write_json(std::ostream& os, const std::vector<harness::ComplexityTrace>& traces,
                const harness::SpectrumReport& report, const harness::ExperimentConfig& config);

// Mean C_q and C_mu against log-scaled t with +-1 std bands.
void write_svg(std::ostream& os, const harness::RuleStatistics& stats);

void write_pbm_header(std::ostream& os, std::size_t width, std::size_t height, bool binary);
void write_pbm_row(std::ostream& os, const eca::Tape& row, bool binary);
void write_pbm(std::ostream& os, const eca::Trajectory& trajectory, bool binary = true);

std::string pbm_filename(int rule, std::uint64_t seed);
std::string svg_filename(int rule);

// Writes the formats enabled in config.formats into config.out_dir and
// returns the paths written, in order: CSV, JSON, SVGs by rule.
std::vector<std::filesystem::path> emit_outputs(const std::vector<harness::ComplexityTrace>& traces,
                                                const harness::SpectrumReport& report,
                                                const harness::ExperimentConfig& config);

}  // namespace ecacm::output
