#include "ecacm/process_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ecacm/errors.hpp"

namespace ecacm::stats {

std::string word_to_string(Word word, int length) {
    std::string s(static_cast<std::size_t>(length), '0');
    for (int i = 0; i < length; ++i)
        if ((word >> (length - 1 - i)) & 1U) s[static_cast<std::size_t>(i)] = '1';
    return s;
}

Word word_from_string(const std::string& bits) {
    if (bits.size() > static_cast<std::size_t>(kMaxWindow)) throw DomainError("word too long");
    Word w = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') throw DomainError("word may contain only '0' and '1'");
        w = (w << 1) | static_cast<Word>(c == '1');
    }
    return w;
}

EmpiricalDistribution::EmpiricalDistribution(int window_length, std::vector<std::uint64_t> counts)
    : k_(window_length), counts_(std::move(counts)) {
    if (k_ < 1 || k_ > kMaxWindow) throw DomainError("window length outside [1, 24]");
    if (counts_.size() != (std::size_t{1} << k_))
        throw DomainError("count table size must be 2^window_length");
    total_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::vector<double> EmpiricalDistribution::probabilities() const {
    std::vector<double> p(counts_.size(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = probability(static_cast<Word>(i));
    return p;
}

std::size_t EmpiricalDistribution::support_size() const {
    return static_cast<std::size_t>(
        std::count_if(counts_.begin(), counts_.end(), [](auto c) { return c != 0; }));
}

EmpiricalDistribution EmpiricalDistribution::prefix_marginal(int k) const {
    if (k < 1 || k > k_) throw DomainError("marginal length outside [1, window_length]");
    const int drop = k_ - k;
    std::vector<std::uint64_t> out(std::size_t{1} << k, 0);
    for (std::size_t w = 0; w < counts_.size(); ++w) out[w >> drop] += counts_[w];
    return {k, std::move(out)};
}

EmpiricalDistribution count_windows(const eca::Tape& row, int k) {
    if (k < 1 || k > kMaxWindow) throw DomainError("window length outside [1, 24]");
    if (static_cast<std::size_t>(k) > row.width())
        throw DomainError("window length " + std::to_string(k) + " exceeds row width " +
                          std::to_string(row.width()));
    std::vector<std::uint64_t> counts(std::size_t{1} << k, 0);
    const Word mask = static_cast<Word>((std::uint64_t{1} << k) - 1);
    const auto words = row.words();
    const std::size_t width = row.width();
    Word window = 0;
    std::size_t i = 0;
    for (std::size_t wi = 0; wi < words.size(); ++wi) {
        std::uint64_t bits = words[wi];
        const std::size_t end = std::min<std::size_t>(width, (wi + 1) * 64);
        for (; i < end; ++i, bits >>= 1) {
            window = ((window << 1) | static_cast<Word>(bits & 1U)) & mask;
            if (i + 1 >= static_cast<std::size_t>(k)) ++counts[window];
        }
    }
    return {k, std::move(counts)};
}

void ConditionalFutures::set_row(Word past, std::vector<double> row) {
    if (row.size() != (std::size_t{1} << length_)) throw DomainError("future row has wrong size");
    const auto it = std::lower_bound(pasts_.begin(), pasts_.end(), past);
    const auto pos = static_cast<std::size_t>(it - pasts_.begin());
    if (it != pasts_.end() && *it == past) {
        rows_[pos] = std::move(row);
        return;
    }
    pasts_.insert(it, past);
    rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(row));
}

const std::vector<double>* ConditionalFutures::find(Word past) const {
    const auto it = std::lower_bound(pasts_.begin(), pasts_.end(), past);
    if (it == pasts_.end() || *it != past) return nullptr;
    return &rows_[static_cast<std::size_t>(it - pasts_.begin())];
}

ConditionalFutures conditional_futures(const EmpiricalDistribution& dist2L) {
    const int k = dist2L.window_length();
    if (k % 2 != 0) throw DomainError("direct conditional futures need an even window length");
    if (dist2L.total() == 0) throw DomainError("empty distribution");
    const int L = k / 2;
    const std::size_t n = std::size_t{1} << L;
    const auto counts = dist2L.counts();
    ConditionalFutures out(L);
    for (std::size_t p = 0; p < n; ++p) {
        const auto block = counts.subspan(p * n, n);
        const auto marginal = std::accumulate(block.begin(), block.end(), std::uint64_t{0});
        if (marginal == 0) continue;
        std::vector<double> row(n);
        for (std::size_t f = 0; f < n; ++f)
            row[f] = static_cast<double>(block[f]) / static_cast<double>(marginal);
        out.set_row(static_cast<Word>(p), std::move(row));
    }
    return out;
}

ConditionalFutures chained_conditional_futures(const EmpiricalDistribution& distL1) {
    const int k = distL1.window_length();
    if (k < 2) throw DomainError("chained conditional futures need window length >= 2");
    if (distL1.total() == 0) throw DomainError("empty distribution");
    const int L = k - 1;
    const std::size_t n = std::size_t{1} << L;
    const auto counts = distL1.counts();

    std::uint64_t ones = 0;
    for (std::size_t w = 1; w < counts.size(); w += 2) ones += counts[w];
    const double p_one = static_cast<double>(ones) / static_cast<double>(distL1.total());

    // P(next = 1 | context) for every context of length L.
    std::vector<double> next_one(n, p_one);
    std::vector<bool> observed(n, false);
    for (std::size_t c = 0; c < n; ++c) {
        const std::uint64_t c0 = counts[2 * c], c1 = counts[2 * c + 1];
        if (c0 + c1 == 0) continue;
        observed[c] = true;
        next_one[c] = static_cast<double>(c1) / static_cast<double>(c0 + c1);
    }

    const Word mask = static_cast<Word>(n - 1);
    ConditionalFutures out(L);
    std::vector<double> row(n);
    for (std::size_t p = 0; p < n; ++p) {
        if (!observed[p]) continue;
        for (std::size_t f = 0; f < n; ++f) {
            double prob = 1.0;
            Word context = static_cast<Word>(p);
            for (int j = L - 1; j >= 0 && prob > 0.0; --j) {
                const bool y = (f >> j) & 1U;
                prob *= y ? next_one[context] : 1.0 - next_one[context];
                context = static_cast<Word>(((context << 1) | static_cast<Word>(y)) & mask);
            }
            row[f] = prob;
        }
        out.set_row(static_cast<Word>(p), row);
    }
    return out;
}

double shannon_entropy(std::span<const double> p) {
    double sum = 0.0;
    for (double x : p) {
        if (!(x >= 0.0)) throw DomainError("probability vector has a negative or NaN entry");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw DomainError("probability vector does not sum to 1");
    // Summed in sorted order so any permutation of p gives the same bits.
    std::vector<double> terms;
    terms.reserve(p.size());
    for (double x : p)
        if (x > 0.0) terms.push_back(-x * std::log(x));
    std::sort(terms.begin(), terms.end());
    const double h = std::accumulate(terms.begin(), terms.end(), 0.0);
    return std::max(0.0, h / std::log(2.0));
}

}  // namespace ecacm::stats
