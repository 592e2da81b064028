#include "ecacm/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "ecacm/errors.hpp"

namespace ecacm::output {
namespace {

using nlohmann::ordered_json;

ordered_json number_or_null(double x) { return std::isnan(x) ? ordered_json(nullptr) : ordered_json(x); }

std::string futures_name(harness::FuturesEstimator f) {
    return f == harness::FuturesEstimator::Chained ? "chained" : "direct";
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    return os;
}

void finish(std::ofstream& os, const std::filesystem::path& path) {
    os.flush();
    if (!os) throw IoError("failed writing " + path.string());
}

std::string fixed(double x, int digits) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return {};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void write_csv(std::ostream& os, const std::vector<harness::ComplexityTrace>& traces) {
    os << kCsvHeader << '\n';
    for (const auto& tr : traces) {
        for (const auto& p : tr.points) {
            os << tr.rule << ',' << tr.seed << ',' << p.t << ',' << format_number(p.value.c_q) << ','
               << format_number(p.value.c_mu) << ',' << p.value.n_states << ',' << p.value.gram_dim
               << '\n';
        }
    }
}

void write_json(std::ostream& os, const std::vector<harness::ComplexityTrace>& traces,
                const harness::SpectrumReport& report, const harness::ExperimentConfig& config) {
    ordered_json j;
    ordered_json cfg;
    cfg["rules"] = config.rules;
    cfg["width"] = config.width;
    cfg["window_l"] = config.window_l;
    cfg["t_max"] = config.t_max;
    cfg["seeds"] = config.seeds;
    cfg["chi2_alpha"] = config.chi2_alpha;
    cfg["schedule"] = config.effective_schedule();
    cfg["classical"] = config.classical;
    cfg["kink_filter"] = config.kink_filter;
    cfg["futures"] = futures_name(config.futures);
    j["config"] = cfg;

    ordered_json rules = ordered_json::array();
    for (const auto& st : report.rules) {
        ordered_json r;
        r["rule"] = st.rule;
        r["seeds"] = st.seeds;
        r["growth_rate"] = st.growth_rate ? ordered_json(*st.growth_rate) : ordered_json(nullptr);
        ordered_json pts = ordered_json::array();
        for (std::size_t i = 0; i < st.t.size(); ++i) {
            pts.push_back({{"t", st.t[i]},
                           {"mean_c_q", st.mean_cq[i]},
                           {"std_c_q", st.std_cq[i]},
                           {"mean_c_mu", number_or_null(st.mean_cmu[i])},
                           {"std_c_mu", number_or_null(st.std_cmu[i])}});
        }
        r["points"] = std::move(pts);
        rules.push_back(std::move(r));
    }
    j["rules"] = std::move(rules);
    j["ranking"] = report.ranking;

    ordered_json failures = ordered_json::array();
    for (const auto& tr : traces)
        if (!tr.ok()) failures.push_back({{"rule", tr.rule}, {"seed", tr.seed}, {"error", tr.error}});
    j["failures"] = std::move(failures);
    os << j.dump(2) << '\n';
}

void write_svg(std::ostream& os, const harness::RuleStatistics& st) {
    constexpr double W = 640, H = 400, left = 60, right = 20, top = 40, bottom = 50;
    const double pw = W - left - right, ph = H - top - bottom;

    const double t_lo = st.t.empty() ? 1.0 : static_cast<double>(st.t.front());
    const double t_hi = st.t.empty() ? 10.0 : static_cast<double>(st.t.back());
    const double lx0 = std::floor(std::log10(t_lo));
    double lx1 = std::ceil(std::log10(t_hi));
    if (lx1 <= lx0) lx1 = lx0 + 1;
    double y_max = 0.0;
    for (std::size_t i = 0; i < st.t.size(); ++i) {
        y_max = std::max(y_max, st.mean_cq[i] + st.std_cq[i]);
        if (!std::isnan(st.mean_cmu[i])) y_max = std::max(y_max, st.mean_cmu[i] + st.std_cmu[i]);
    }
    y_max = y_max <= 0.0 ? 1.0 : std::ceil(y_max * 1.1 * 4.0) / 4.0;

    auto px = [&](double t) { return left + (std::log10(t) - lx0) / (lx1 - lx0) * pw; };
    auto py = [&](double v) { return top + ph - v / y_max * ph; };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">Rule " << st.rule
       << "</text>\n";

    // Axes, decade ticks and y grid.
    os << "<g stroke=\"black\" fill=\"none\">\n";
    os << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
       << "\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph << "\"/>\n";
    os << "</g>\n";
    for (int e = static_cast<int>(lx0); e <= static_cast<int>(lx1); ++e) {
        const double x = px(std::pow(10.0, e));
        os << "<line x1=\"" << fixed(x, 2) << "\" y1=\"" << top + ph << "\" x2=\"" << fixed(x, 2) << "\" y2=\""
           << top + ph + 5 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << fixed(x, 2) << "\" y=\"" << top + ph + 20 << "\" text-anchor=\"middle\">10<tspan dy=\"-6\" font-size=\"9\">"
           << e << "</tspan></text>\n";
    }
    for (int i = 0; i <= 4; ++i) {
        const double v = y_max * i / 4.0;
        const double y = py(v);
        os << "<line x1=\"" << left << "\" y1=\"" << fixed(y, 2) << "\" x2=\"" << left + pw << "\" y2=\""
           << fixed(y, 2) << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << left - 6 << "\" y=\"" << fixed(y + 4, 2) << "\" text-anchor=\"end\">"
           << fixed(v, 2) << "</text>\n";
    }
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 8 << "\" text-anchor=\"middle\">t</text>\n";
    os << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << top + ph / 2 << ")\">bits</text>\n";

    auto series = [&](const std::vector<double>& mean, const std::vector<double>& sd, const char* colour,
                      const char* label, double legend_y) {
        if (st.t.empty() || std::isnan(mean.front())) return;
        std::ostringstream band, line;
        for (std::size_t i = 0; i < st.t.size(); ++i)
            band << (i ? " " : "") << fixed(px(static_cast<double>(st.t[i])), 2) << ','
                 << fixed(py(std::min(y_max, mean[i] + sd[i])), 2);
        for (std::size_t i = st.t.size(); i-- > 0;)
            band << ' ' << fixed(px(static_cast<double>(st.t[i])), 2) << ','
                 << fixed(py(std::max(0.0, mean[i] - sd[i])), 2);
        for (std::size_t i = 0; i < st.t.size(); ++i)
            line << (i ? " " : "") << fixed(px(static_cast<double>(st.t[i])), 2) << ','
                 << fixed(py(mean[i]), 2);
        os << "<polygon points=\"" << band.str() << "\" fill=\"" << colour << "\" fill-opacity=\"0.25\" stroke=\"none\"/>\n";
        os << "<polyline points=\"" << line.str() << "\" fill=\"none\" stroke=\"" << colour
           << "\" stroke-width=\"1.5\"/>\n";
        os << "<line x1=\"" << left + 10 << "\" y1=\"" << legend_y << "\" x2=\"" << left + 30 << "\" y2=\""
           << legend_y << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << left + 36 << "\" y=\"" << legend_y + 4 << "\">" << label << "</text>\n";
    };
    series(st.mean_cq, st.std_cq, "#1f5fbf", "C_q", top + 12);
    series(st.mean_cmu, st.std_cmu, "#c0392b", "C_mu", top + 28);
    os << "</svg>\n";
}

void write_pbm_header(std::ostream& os, std::size_t width, std::size_t height, bool binary) {
    os << (binary ? "P4" : "P1") << '\n' << width << ' ' << height << '\n';
}

void write_pbm_row(std::ostream& os, const eca::Tape& row, bool binary) {
    if (!binary) {
        for (std::size_t i = 0; i < row.width(); ++i) os << (i ? " " : "") << (row[i] ? '1' : '0');
        os << '\n';
        return;
    }
    std::string bytes((row.width() + 7) / 8, '\0');
    for (std::size_t i = 0; i < row.width(); ++i)
        if (row[i]) bytes[i / 8] = static_cast<char>(bytes[i / 8] | (0x80 >> (i % 8)));
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void write_pbm(std::ostream& os, const eca::Trajectory& trajectory, bool binary) {
    write_pbm_header(os, trajectory.width, trajectory.rows.size(), binary);
    for (const auto& row : trajectory.rows) write_pbm_row(os, row, binary);
}

std::string pbm_filename(int rule, std::uint64_t seed) {
    return "trajectory_rule" + std::to_string(rule) + "_seed" + std::to_string(seed) + ".pbm";
}

std::string svg_filename(int rule) { return "rule" + std::to_string(rule) + ".svg"; }

std::vector<std::filesystem::path> emit_outputs(const std::vector<harness::ComplexityTrace>& traces,
                                                const harness::SpectrumReport& report,
                                                const harness::ExperimentConfig& config) {
    if (traces.empty()) throw DomainError("no traces to emit");
    if (config.effective_schedule().empty()) throw DomainError("empty schedule");
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) throw IoError("cannot create " + config.out_dir.string() + ": " + ec.message());

    std::vector<std::filesystem::path> written;
    if (config.formats.csv) {
        const auto path = config.out_dir / "complexity.csv";
        auto os = open_output(path);
        write_csv(os, traces);
        finish(os, path);
        written.push_back(path);
    }
    if (config.formats.json) {
        const auto path = config.out_dir / "report.json";
        auto os = open_output(path);
        write_json(os, traces, report, config);
        finish(os, path);
        written.push_back(path);
    }
    if (config.formats.svg) {
        for (const auto& st : report.rules) {
            const auto path = config.out_dir / svg_filename(st.rule);
            auto os = open_output(path);
            write_svg(os, st);
            finish(os, path);
            written.push_back(path);
        }
    }
    return written;
}

}  // namespace ecacm::output
