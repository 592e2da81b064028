#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ecacm/process_stats.hpp"

namespace ecacm::quantum {

using stats::Word;

// Overlaps of the inferred quantum memory states, weighted by the square
// roots of past probabilities. Shares its spectrum with the memory's
// steady state. Indexed by observed pasts only.
struct GramMatrix {
    int past_length = 0;
    std::vector<Word> pasts;
    Eigen::MatrixXd entries;

    std::size_t dimension() const { return pasts.size(); }
    double trace() const { return entries.trace(); }
};

// Builds G over every past with nonzero probability in `past_dist`. Throws
// ConsistencyError if such a past has no row in `futures`.
GramMatrix gram_matrix(const stats::EmpiricalDistribution& past_dist,
                       const stats::ConditionalFutures& futures);

// Same from an exact probability vector over all 2^L pasts.
GramMatrix gram_matrix(std::span<const double> past_probabilities,
                       const stats::ConditionalFutures& futures);

struct Spectrum {
    std::vector<double> eigenvalues;  // descending

    double sum() const;
    double min() const { return eigenvalues.empty() ? 0.0 : eigenvalues.back(); }
};

Spectrum symmetric_spectrum(const Eigen::MatrixXd& matrix);
inline Spectrum symmetric_spectrum(const GramMatrix& g) { return symmetric_spectrum(g.entries); }

// Eigenvalues in [-1e-9, 0) are treated as 0; anything more negative
// throws NumericalError.
double von_neumann_entropy(const Spectrum& spectrum);

// -Tr(G log2 G). Throws DomainError when |Tr G - 1| > 1e-6.
double quantum_statistical_memory(const GramMatrix& g);

// G row by row and then its spectrum, 12 significant digits.
void dump_gram(std::ostream& os, const GramMatrix& g, const Spectrum& spectrum);

}  // namespace ecacm::quantum
