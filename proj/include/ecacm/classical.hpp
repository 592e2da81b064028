#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ecacm/eca.hpp"
#include "ecacm/process_stats.hpp"

namespace ecacm::classical {

using stats::Word;

// Count tree over all length-2L windows of a row. Level d holds one node per
// length-d prefix (dense, 2^d slots); a slot with count 0 is an absent node.
// Children of (d, p) are (d+1, 2p) for output 0 and (d+1, 2p+1) for output 1.
class SubTree {
public:
    explicit SubTree(const stats::EmpiricalDistribution& windows);

    int depth() const { return static_cast<int>(levels_.size()) - 1; }
    std::uint64_t count(int level, Word prefix) const { return levels_.at(level).at(prefix); }
    bool has_node(int level, Word prefix) const { return count(level, prefix) != 0; }
    std::span<const std::uint64_t> level(int d) const { return levels_.at(d); }

    // Leaf counts below node (level, prefix): a histogram over the
    // 2^(depth-level) continuations, keyed like Word.
    std::span<const std::uint64_t> futures(int level, Word prefix) const;

    // Observed root-to-leaf paths, ascending.
    std::vector<Word> paths() const;

private:
    std::vector<std::vector<std::uint64_t>> levels_;
};

SubTree build_subtree(const eca::Tape& row, int L);

struct Chi2Result {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

// Two-sample chi-squared homogeneity test. Cells empty in both samples are
// dropped; dof = occupied cells - 1.
Chi2Result chi2_homogeneity(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

// True when the two histograms are statistically indistinguishable
// (p-value >= alpha).
bool chi2_same(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
               double alpha = 0.05);

// Assignment of every observed length-L past to a causal-state label.
struct CausalPartition {
    int past_length = 0;
    std::vector<int> label;  // dense over 2^L pasts; -1 for unobserved
    int num_states = 0;

    std::vector<Word> members(int state) const;
};

CausalPartition merge_states(const SubTree& tree, int L, double alpha = 0.05);

struct EpsilonMachine {
    // transitions[y](k, j) = P(emit y, move to state k | state j)
    std::array<Eigen::MatrixXd, 2> transitions;
    std::vector<double> stationary;
    // Empirical frequency of each state's pasts; used to weight closed
    // classes when the inferred chain is not ergodic.
    std::vector<double> empirical_weights;
    std::vector<std::vector<Word>> state_pasts;

    std::size_t num_states() const { return stationary.size(); }
    // max_k |((T0 + T1) pi - pi)_k|
    double stationary_residual() const;
};

EpsilonMachine build_machine(const SubTree& tree, const CausalPartition& partition);

// Stationary distribution of T0 + T1: lazy power iteration from uniform
// (cap 1e5 iterations, tolerance 1e-12) on each closed class. With several
// closed classes the class distributions are mixed in proportion to the
// empirical mass of their states. Throws NumericalError if an iteration
// does not converge.
std::vector<double> stationary_distribution(const std::array<Eigen::MatrixXd, 2>& transitions,
                                            std::span<const double> empirical_weights);

// Machine with given transitions; stationary computed as above.
EpsilonMachine make_machine(std::array<Eigen::MatrixXd, 2> transitions,
                            std::vector<double> empirical_weights = {});

double statistical_complexity(const EpsilonMachine& machine);

struct ClassicalResult {
    EpsilonMachine machine;
    double c_mu = 0.0;
};

ClassicalResult infer_classical(const eca::Tape& row, int L, double alpha = 0.05);

// Edge list "from, symbol, prob, to" ordered by state then symbol then
// target, followed by the stationary distribution.
void dump_machine(std::ostream& os, const EpsilonMachine& machine);

}  // namespace ecacm::classical
