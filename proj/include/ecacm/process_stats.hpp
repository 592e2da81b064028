#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecacm/eca.hpp"

namespace ecacm::stats {

// Length-k binary words are keyed by their value with the first (leftmost)
// symbol as the most significant bit: "011" -> 3.
using Word = std::uint32_t;

std::string word_to_string(Word word, int length);
Word word_from_string(const std::string& bits);

inline constexpr int kMaxWindow = 24;

// Counts of every length-k window in a row, stored densely (2^k cells).
class EmpiricalDistribution {
public:
    EmpiricalDistribution(int window_length, std::vector<std::uint64_t> counts);

    int window_length() const { return k_; }
    std::uint64_t total() const { return total_; }
    std::uint64_t count(Word w) const { return counts_.at(w); }
    std::span<const std::uint64_t> counts() const { return counts_; }
    double probability(Word w) const {
        return total_ == 0 ? 0.0 : static_cast<double>(counts_.at(w)) / static_cast<double>(total_);
    }
    std::vector<double> probabilities() const;
    std::size_t support_size() const;

    // Sums out trailing symbols: the distribution of the first `k` symbols
    // of each counted window.
    EmpiricalDistribution prefix_marginal(int k) const;

private:
    int k_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

// Non-wrapping windows row[i..i+k) for i in [0, W-k].
EmpiricalDistribution count_windows(const eca::Tape& row, int k);

// P(future of length L | past of length L) for every observed past.
// Rows are dense over the 2^L futures; pasts are kept ascending.
class ConditionalFutures {
public:
    explicit ConditionalFutures(int length) : length_(length) {}

    int past_length() const { return length_; }
    int future_length() const { return length_; }
    std::size_t size() const { return pasts_.size(); }
    const std::vector<Word>& pasts() const { return pasts_; }

    void set_row(Word past, std::vector<double> row);
    // nullptr when the past was never observed.
    const std::vector<double>* find(Word past) const;

private:
    int length_;
    std::vector<Word> pasts_;
    std::vector<std::vector<double>> rows_;
};

// Direct estimate from 2L-window counts: row[p][f] = n(p f) / sum_f' n(p f').
ConditionalFutures conditional_futures(const EmpiricalDistribution& dist2L);

// Chained estimate from (L+1)-window counts: the future of length L is the
// product of one-step conditionals P(y | last L symbols), sliding the
// context forward after each symbol. Contexts never observed with a
// successor fall back to the single-symbol marginal.
ConditionalFutures chained_conditional_futures(const EmpiricalDistribution& distL1);

// Shannon entropy in bits; throws DomainError on negative entries or if the
// vector does not sum to 1 within 1e-9.
double shannon_entropy(std::span<const double> p);

}  // namespace ecacm::stats
