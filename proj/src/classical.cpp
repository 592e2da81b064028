#include "ecacm/classical.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "ecacm/errors.hpp"

namespace ecacm::classical {
namespace {

constexpr int kMaxIterations = 100000;
constexpr double kTolerance = 1e-12;

std::string fmt12(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// Closed communicating classes of the chain with column-stochastic
// matrix m (edge j -> k when m(k, j) > 0), each ascending, ordered by
// smallest member.
std::vector<std::vector<int>> closed_classes(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (int j = 0; j < n; ++j) {
        reach[j][j] = 1;
        for (int k = 0; k < n; ++k)
            if (m(k, j) > 0.0) reach[j][k] = 1;
    }
    for (int via = 0; via < n; ++via)
        for (int a = 0; a < n; ++a)
            if (reach[a][via])
                for (int b = 0; b < n; ++b)
                    if (reach[via][b]) reach[a][b] = 1;

    std::vector<std::vector<int>> out;
    std::vector<char> assigned(n, 0);
    for (int j = 0; j < n; ++j) {
        if (assigned[j]) continue;
        bool closed = true;
        std::vector<int> cls;
        for (int k = 0; k < n; ++k) {
            if (!reach[j][k]) continue;
            if (reach[k][j]) cls.push_back(k);
            else closed = false;
        }
        for (int k : cls) assigned[k] = 1;
        if (closed) out.push_back(std::move(cls));
    }
    return out;
}

std::vector<double> lazy_power_iteration(const Eigen::MatrixXd& m, const std::vector<int>& members) {
    const auto n = static_cast<Eigen::Index>(members.size());
    Eigen::MatrixXd sub(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) sub(a, b) = m(members[a], members[b]);
    // Lazy chain (I + M) / 2 shares the stationary vector and is aperiodic.
    const Eigen::MatrixXd lazy = 0.5 * (sub + Eigen::MatrixXd::Identity(n, n));
    Eigen::VectorXd pi = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    double delta = 0.0;
    for (int it = 0; it < kMaxIterations; ++it) {
        Eigen::VectorXd next = lazy * pi;
        next /= next.sum();
        delta = (next - pi).cwiseAbs().maxCoeff();
        pi = std::move(next);
        if (delta <= kTolerance) {
            return {pi.data(), pi.data() + n};
        }
    }
    throw NumericalError("stationary distribution did not converge after " +
                         std::to_string(kMaxIterations) + " iterations (class size " +
                         std::to_string(n) + ", last change " + fmt12(delta) + ")");
}

}  // namespace

SubTree::SubTree(const stats::EmpiricalDistribution& windows) {
    const int depth = windows.window_length();
    levels_.resize(static_cast<std::size_t>(depth) + 1);
    levels_[depth].assign(windows.counts().begin(), windows.counts().end());
    for (int d = depth - 1; d >= 0; --d) {
        const auto& below = levels_[d + 1];
        auto& here = levels_[d];
        here.assign(std::size_t{1} << d, 0);
        for (std::size_t p = 0; p < here.size(); ++p) here[p] = below[2 * p] + below[2 * p + 1];
    }
}

std::span<const std::uint64_t> SubTree::futures(int level, Word prefix) const {
    const int span_depth = depth() - level;
    const std::size_t width = std::size_t{1} << span_depth;
    return std::span<const std::uint64_t>(levels_.at(depth())).subspan(prefix * width, width);
}

std::vector<Word> SubTree::paths() const {
    std::vector<Word> out;
    const auto leaves = level(depth());
    for (std::size_t w = 0; w < leaves.size(); ++w)
        if (leaves[w] != 0) out.push_back(static_cast<Word>(w));
    return out;
}

SubTree build_subtree(const eca::Tape& row, int L) {
    if (L < 1) throw DomainError("L must be at least 1");
    return SubTree(stats::count_windows(row, 2 * L));
}

Chi2Result chi2_homogeneity(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    if (a.size() != b.size()) throw DomainError("histograms must share one alphabet");
    const double na = static_cast<double>(std::accumulate(a.begin(), a.end(), std::uint64_t{0}));
    const double nb = static_cast<double>(std::accumulate(b.begin(), b.end(), std::uint64_t{0}));
    if (na == 0.0 || nb == 0.0) throw DomainError("histograms must have at least one count");
    const double n = na + nb;
    Chi2Result r;
    int cells = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double col = static_cast<double>(a[i] + b[i]);
        if (col == 0.0) continue;
        ++cells;
        const double ea = na * col / n;
        const double eb = nb * col / n;
        const double da = static_cast<double>(a[i]) - ea;
        const double db = static_cast<double>(b[i]) - eb;
        r.statistic += da * da / ea + db * db / eb;
    }
    r.dof = cells - 1;
    r.p_value = r.dof == 0 ? 1.0 : boost::math::gamma_q(0.5 * r.dof, 0.5 * r.statistic);
    return r;
}

bool chi2_same(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b, double alpha) {
    return chi2_homogeneity(a, b).p_value >= alpha;
}

std::vector<Word> CausalPartition::members(int state) const {
    std::vector<Word> out;
    for (std::size_t p = 0; p < label.size(); ++p)
        if (label[p] == state) out.push_back(static_cast<Word>(p));
    return out;
}

CausalPartition merge_states(const SubTree& tree, int L, double alpha) {
    if (L < 1 || tree.depth() < 2 * L) throw DomainError("tree depth must be at least 2L");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("chi2 alpha must lie in (0, 1)");
    const auto pasts_level = tree.level(L);
    std::vector<Word> order;
    for (std::size_t p = 0; p < pasts_level.size(); ++p)
        if (pasts_level[p] != 0) order.push_back(static_cast<Word>(p));
    std::stable_sort(order.begin(), order.end(),
                     [&](Word x, Word y) { return pasts_level[x] > pasts_level[y]; });

    // Futures hang 2L - L levels below each depth-L node; with a deeper tree
    // only the first L future symbols are compared.
    const int extra = tree.depth() - 2 * L;
    const std::size_t cells = std::size_t{1} << L;
    auto future_histogram = [&](Word past) {
        const auto raw = tree.futures(L, past);
        std::vector<std::uint64_t> h(cells, 0);
        for (std::size_t i = 0; i < raw.size(); ++i) h[i >> extra] += raw[i];
        return h;
    };

    CausalPartition part;
    part.past_length = L;
    part.label.assign(pasts_level.size(), -1);
    std::vector<std::vector<std::uint64_t>> pooled;
    for (Word past : order) {
        const auto h = future_histogram(past);
        int assigned = -1;
        for (std::size_t s = 0; s < pooled.size(); ++s) {
            if (chi2_same(h, pooled[s], alpha)) {
                assigned = static_cast<int>(s);
                break;
            }
        }
        if (assigned < 0) {
            assigned = static_cast<int>(pooled.size());
            pooled.emplace_back(cells, 0);
        }
        for (std::size_t i = 0; i < cells; ++i) pooled[assigned][i] += h[i];
        part.label[past] = assigned;
    }
    part.num_states = static_cast<int>(pooled.size());
    return part;
}

double EpsilonMachine::stationary_residual() const {
    const auto n = static_cast<Eigen::Index>(stationary.size());
    const Eigen::Map<const Eigen::VectorXd> pi(stationary.data(), n);
    const Eigen::VectorXd r = (transitions[0] + transitions[1]) * pi - pi;
    return n == 0 ? 0.0 : r.cwiseAbs().maxCoeff();
}

std::vector<double> stationary_distribution(const std::array<Eigen::MatrixXd, 2>& transitions,
                                            std::span<const double> empirical_weights) {
    const Eigen::MatrixXd m = transitions[0] + transitions[1];
    const auto n = static_cast<std::size_t>(m.rows());
    if (m.rows() != m.cols() || n == 0) throw DomainError("transition matrices must be square and non-empty");
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (std::abs(m.col(j).sum() - 1.0) > 1e-9)
            throw DomainError("transition column " + std::to_string(j) + " is not stochastic");
    }
    const auto classes = closed_classes(m);
    std::vector<double> pi(n, 0.0);
    std::vector<double> mass(classes.size(), 0.0);
    double total_mass = 0.0;
    if (empirical_weights.size() == n) {
        for (std::size_t c = 0; c < classes.size(); ++c)
            for (int s : classes[c]) mass[c] += empirical_weights[static_cast<std::size_t>(s)];
        total_mass = std::accumulate(mass.begin(), mass.end(), 0.0);
    }
    if (total_mass <= 0.0) {
        std::fill(mass.begin(), mass.end(), 1.0);
        total_mass = static_cast<double>(classes.size());
    }
    for (std::size_t c = 0; c < classes.size(); ++c) {
        if (mass[c] == 0.0) continue;
        const auto local = lazy_power_iteration(m, classes[c]);
        for (std::size_t i = 0; i < local.size(); ++i)
            pi[static_cast<std::size_t>(classes[c][i])] = local[i] * mass[c] / total_mass;
    }
    return pi;
}

EpsilonMachine make_machine(std::array<Eigen::MatrixXd, 2> transitions,
                            std::vector<double> empirical_weights) {
    EpsilonMachine m;
    m.transitions = std::move(transitions);
    m.empirical_weights = std::move(empirical_weights);
    m.stationary = stationary_distribution(m.transitions, m.empirical_weights);
    m.state_pasts.resize(m.stationary.size());
    return m;
}

EpsilonMachine build_machine(const SubTree& tree, const CausalPartition& partition) {
    const int L = partition.past_length;
    if (L < 1 || tree.depth() < L + 1) throw DomainError("tree too shallow for partition");
    const int n = partition.num_states;
    if (n < 1) throw DomainError("partition has no states");
    const auto pasts = tree.level(L);
    const Word mask = static_cast<Word>((1U << L) - 1);

    std::array<Eigen::MatrixXd, 2> t{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
    std::vector<double> column_mass(static_cast<std::size_t>(n), 0.0);
    std::vector<double> weights(static_cast<std::size_t>(n), 0.0);
    std::vector<std::vector<Word>> members(static_cast<std::size_t>(n));
    std::array<std::vector<double>, 2> fallback{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};

    for (std::size_t p = 0; p < pasts.size(); ++p) {
        if (pasts[p] == 0) continue;
        const int j = partition.label.at(p);
        if (j < 0) throw ConsistencyError("observed past " + std::to_string(p) + " has no label");
        weights[j] += static_cast<double>(pasts[p]);
        members[j].push_back(static_cast<Word>(p));
        for (Word y = 0; y < 2; ++y) {
            const Word extended = static_cast<Word>((p << 1) | y);
            const auto c = static_cast<double>(tree.count(L + 1, extended));
            if (c == 0.0) continue;
            fallback[y][j] += c;
            const int k = partition.label.at(extended & mask);
            // A successor seen only in the final window has no label; its
            // mass is dropped and the column renormalised.
            if (k < 0) continue;
            t[y](k, j) += c;
            column_mass[j] += c;
        }
    }
    for (int j = 0; j < n; ++j) {
        if (column_mass[j] > 0.0) {
            t[0].col(j) /= column_mass[j];
            t[1].col(j) /= column_mass[j];
        } else {
            // Every successor unlabeled: keep the emission statistics on a self-loop.
            const double f = fallback[0][j] + fallback[1][j];
            t[0](j, j) = f > 0.0 ? fallback[0][j] / f : 1.0;
            t[1](j, j) = f > 0.0 ? fallback[1][j] / f : 0.0;
        }
    }
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (auto& w : weights) w /= total;

    EpsilonMachine m = make_machine(std::move(t), std::move(weights));
    m.state_pasts = std::move(members);
    return m;
}

double statistical_complexity(const EpsilonMachine& machine) {
    return stats::shannon_entropy(machine.stationary);
}

ClassicalResult infer_classical(const eca::Tape& row, int L, double alpha) {
    const SubTree tree = build_subtree(row, L);
    const CausalPartition part = merge_states(tree, L, alpha);
    ClassicalResult r{build_machine(tree, part), 0.0};
    r.c_mu = statistical_complexity(r.machine);
    return r;
}

void dump_machine(std::ostream& os, const EpsilonMachine& machine) {
    const auto n = static_cast<Eigen::Index>(machine.num_states());
    os << "# states " << n << '\n';
    os << "# state_from, symbol, prob, state_to\n";
    for (Eigen::Index j = 0; j < n; ++j)
        for (int y = 0; y < 2; ++y)
            for (Eigen::Index k = 0; k < n; ++k) {
                const double p = machine.transitions[y](k, j);
                if (p > 0.0) os << j << ", " << y << ", " << fmt12(p) << ", " << k << '\n';
            }
    os << "# stationary\n";
    for (Eigen::Index j = 0; j < n; ++j) os << j << ", " << fmt12(machine.stationary[j]) << '\n';
}

}  // namespace ecacm::classical
