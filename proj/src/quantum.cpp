#include "ecacm/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <ostream>
#include <string>

#include "ecacm/errors.hpp"

namespace ecacm::quantum {
namespace {

constexpr double kNegativeFloor = -1e-9;
constexpr double kTraceTolerance = 1e-6;

std::string fmt12(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

}  // namespace

GramMatrix gram_matrix(std::span<const double> past_probabilities,
                       const stats::ConditionalFutures& futures) {
    const std::size_t n_pasts = std::size_t{1} << futures.past_length();
    if (past_probabilities.size() != n_pasts)
        throw DomainError("past probabilities must cover all 2^L pasts");

    GramMatrix g;
    g.past_length = futures.past_length();
    std::vector<const std::vector<double>*> rows;
    std::vector<double> weight;
    for (std::size_t p = 0; p < n_pasts; ++p) {
        if (past_probabilities[p] <= 0.0) continue;
        const auto* row = futures.find(static_cast<Word>(p));
        if (row == nullptr)
            throw ConsistencyError("no conditional future row for past " +
                                   stats::word_to_string(static_cast<Word>(p), futures.past_length()));
        g.pasts.push_back(static_cast<Word>(p));
        rows.push_back(row);
        weight.push_back(std::sqrt(past_probabilities[p]));
    }

    // Amplitudes sqrt(P(f|p)) so that each overlap is a dot product.
    const auto d = static_cast<Eigen::Index>(g.pasts.size());
    const auto n_futures = static_cast<Eigen::Index>(std::size_t{1} << futures.future_length());
    Eigen::MatrixXd amp(n_futures, d);
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index f = 0; f < n_futures; ++f) amp(f, a) = std::sqrt((*rows[a])[f]);

    g.entries.resize(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = a; b < d; ++b) {
            const double overlap = amp.col(a).dot(amp.col(b));
            const double v = weight[a] * weight[b] * overlap;
            g.entries(a, b) = v;
            g.entries(b, a) = v;
        }
    }
    return g;
}

GramMatrix gram_matrix(const stats::EmpiricalDistribution& past_dist,
                       const stats::ConditionalFutures& futures) {
    if (past_dist.window_length() != futures.past_length())
        throw DomainError("past distribution length differs from conditional past length");
    return gram_matrix(past_dist.probabilities(), futures);
}

double Spectrum::sum() const { return std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0); }

Spectrum symmetric_spectrum(const Eigen::MatrixXd& matrix) {
    if (matrix.rows() != matrix.cols()) throw DomainError("matrix must be square");
    Spectrum s;
    if (matrix.rows() == 0) return s;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("symmetric eigensolver did not converge (dimension " +
                             std::to_string(matrix.rows()) + ", Frobenius norm " +
                             fmt12(matrix.norm()) + ", asymmetry " +
                             fmt12((matrix - matrix.transpose()).cwiseAbs().maxCoeff()) + ")");
    }
    const auto& ev = solver.eigenvalues();
    s.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), std::greater<>());
    return s;
}

double von_neumann_entropy(const Spectrum& spectrum) {
    double h = 0.0;
    for (double lambda : spectrum.eigenvalues) {
        if (lambda < kNegativeFloor)
            throw NumericalError("eigenvalue " + fmt12(lambda) + " below the PSD floor");
        if (lambda > 0.0) h -= lambda * std::log(lambda);
    }
    return std::max(0.0, h / std::log(2.0));
}

double quantum_statistical_memory(const GramMatrix& g) {
    if (std::abs(g.trace() - 1.0) > kTraceTolerance)
        throw DomainError("Gram matrix trace " + fmt12(g.trace()) + " differs from 1");
    return von_neumann_entropy(symmetric_spectrum(g));
}

void dump_gram(std::ostream& os, const GramMatrix& g, const Spectrum& spectrum) {
    const auto d = static_cast<Eigen::Index>(g.dimension());
    os << "# gram dimension " << d << '\n';
    os << "# pasts";
    for (Word p : g.pasts) os << ' ' << stats::word_to_string(p, g.past_length);
    os << '\n';
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) os << (b ? " " : "") << fmt12(g.entries(a, b));
        os << '\n';
    }
    os << "# spectrum\n";
    for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i)
        os << (i ? " " : "") << fmt12(spectrum.eigenvalues[i]);
    os << '\n';
}

}  // namespace ecacm::quantum
