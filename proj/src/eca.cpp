#include "ecacm/eca.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <set>
#include <stdexcept>

#include "ecacm/errors.hpp"

namespace ecacm::eca {
namespace {

constexpr std::size_t words_for(std::size_t width) { return (width + 63) / 64; }

void check_rule_number(int rule_number) {
    if (rule_number < 0 || rule_number > 255) {
        throw DomainError("rule number " + std::to_string(rule_number) + " outside [0, 255]");
    }
}

// For every cell i, left_out bit i = cell i-1 and right_out bit i = cell i+1,
// wrapping periodically at the row ends.
void neighbour_words(const Tape& tape, std::vector<std::uint64_t>& left_out,
                     std::vector<std::uint64_t>& right_out) {
    const auto w = tape.words();
    const std::size_t n = w.size();
    const std::size_t width = tape.width();
    left_out.resize(n);
    right_out.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        left_out[k] = (w[k] << 1) | (k > 0 ? w[k - 1] >> 63 : 0);
        right_out[k] = (w[k] >> 1) | (k + 1 < n ? w[k + 1] << 63 : 0);
    }
    const std::size_t last = width - 1;
    if (tape[last]) left_out[0] |= 1ULL;
    if (tape[0]) right_out[last >> 6] |= 1ULL << (last & 63);
    else right_out[last >> 6] &= ~(1ULL << (last & 63));
}

}  // namespace

RuleTable::RuleTable(int rule_number) : number_(rule_number) {
    check_rule_number(rule_number);
    for (int i = 0; i < 8; ++i) table_[i] = static_cast<std::uint8_t>((rule_number >> i) & 1);
}

RuleTable parse_rule(int rule_number) { return RuleTable(rule_number); }

int encode_rule(const std::array<std::uint8_t, 8>& table) {
    int n = 0;
    for (int i = 0; i < 8; ++i) {
        if (table[i] > 1) throw DomainError("rule table entries must be 0 or 1");
        n |= table[i] << i;
    }
    return n;
}

Tape::Tape(std::size_t width) : width_(width), words_(words_for(width), 0) {}

Tape Tape::from_string(std::string_view bits) {
    Tape t(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') t.set(i, true);
        else if (bits[i] != '0') throw DomainError("tape string may contain only '0' and '1'");
    }
    return t;
}

Tape Tape::from_cells(std::span<const std::uint8_t> cells) {
    Tape t(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) t.set(i, cells[i] != 0);
    return t;
}

void Tape::set(std::size_t i, bool value) {
    const std::uint64_t mask = 1ULL << (i & 63);
    if (value) words_[i >> 6] |= mask;
    else words_[i >> 6] &= ~mask;
}

void Tape::clear_tail() {
    if (width_ % 64 != 0) words_.back() &= (1ULL << (width_ % 64)) - 1;
}

Tape Tape::slice(std::size_t offset, std::size_t width) const {
    if (offset + width > width_) throw DomainError("slice exceeds tape width");
    Tape out(width);
    const std::size_t shift = offset & 63;
    const std::size_t base = offset >> 6;
    for (std::size_t k = 0; k < out.words_.size(); ++k) {
        std::uint64_t lo = words_[base + k] >> shift;
        std::uint64_t hi = 0;
        if (shift != 0 && base + k + 1 < words_.size()) hi = words_[base + k + 1] << (64 - shift);
        out.words_[k] = lo | hi;
    }
    out.clear_tail();
    return out;
}

Tape Tape::complemented() const {
    Tape out(*this);
    for (auto& w : out.words_) w = ~w;
    out.clear_tail();
    return out;
}

Tape Tape::reversed() const {
    Tape out(width_);
    for (std::size_t i = 0; i < width_; ++i) out.set(width_ - 1 - i, (*this)[i]);
    return out;
}

std::size_t Tape::popcount() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

std::string Tape::to_string() const {
    std::string s(width_, '0');
    for (std::size_t i = 0; i < width_; ++i)
        if ((*this)[i]) s[i] = '1';
    return s;
}

Tape random_tape(std::size_t width, Rng& rng) {
    Tape t(width);
    for (auto& w : t.words()) w = rng();
    t.clear_tail();
    return t;
}

void step_periodic_into(const Tape& in, const RuleTable& rule, Tape& out) {
    if (in.empty()) throw DomainError("cannot step an empty tape");
    thread_local std::vector<std::uint64_t> left, right;
    neighbour_words(in, left, right);
    if (out.width() != in.width()) out = Tape(in.width());
    const auto centre = in.words();
    auto dst = out.words();
    const auto& table = rule.table();
    for (std::size_t k = 0; k < centre.size(); ++k) {
        const std::uint64_t l = left[k], c = centre[k], r = right[k];
        std::uint64_t acc = 0;
        for (int idx = 0; idx < 8; ++idx) {
            if (!table[idx]) continue;
            acc |= ((idx & 4) ? l : ~l) & ((idx & 2) ? c : ~c) & ((idx & 1) ? r : ~r);
        }
        dst[k] = acc;
    }
    out.clear_tail();
}

Tape step_periodic(const Tape& tape, const RuleTable& rule) {
    Tape out;
    step_periodic_into(tape, rule, out);
    return out;
}

OpenBoundaryEvolver::OpenBoundaryEvolver(const Tape& initial, const RuleTable& rule,
                                         std::size_t t_max, Rng& rng, std::size_t pad)
    : rule_(rule), width_(initial.width()), pad_(pad), t_max_(t_max) {
    if (width_ == 0) throw DomainError("initial tape must be non-empty");
    if (t_max_ == 0) throw DomainError("t_max must be at least 1");
    if (pad_ < t_max_) throw DomainError("padding must be at least t_max");
    constexpr std::size_t limit = std::numeric_limits<std::size_t>::max() / 4;
    if (pad_ > (limit - width_) / 2) throw ResourceError("extended tape width overflows");
    const std::size_t extended = width_ + 2 * pad_;
    try {
        current_ = Tape(extended);
    } catch (const std::bad_alloc&) {
        throw ResourceError("cannot allocate extended tape of width " + std::to_string(extended));
    }
    for (std::size_t i = 0; i < width_; ++i) current_.set(pad_ + i, initial[i]);
    std::uint64_t bits = 0;
    int remaining = 0;
    auto next_bit = [&] {
        if (remaining == 0) {
            bits = rng();
            remaining = 64;
        }
        const bool b = bits & 1U;
        bits >>= 1;
        --remaining;
        return b;
    };
    for (std::size_t j = 0; j < pad_; ++j) {
        current_.set(pad_ - 1 - j, next_bit());
        current_.set(pad_ + width_ + j, next_bit());
    }
    scratch_ = Tape(extended);
}

void OpenBoundaryEvolver::step() {
    if (time_ >= t_max_) throw DomainError("evolver already reached t_max");
    step_periodic_into(current_, rule_, scratch_);
    std::swap(current_, scratch_);
    ++time_;
}

Trajectory run_open_boundary(const Tape& initial, const RuleTable& rule, std::size_t t_max,
                             Rng& rng, std::size_t pad) {
    OpenBoundaryEvolver evolver(initial, rule, t_max, rng, pad == 0 ? t_max : pad);
    Trajectory traj;
    traj.width = initial.width();
    traj.rule_number = rule.number();
    traj.rows.reserve(t_max);
    for (std::size_t t = 1; t <= t_max; ++t) {
        evolver.step();
        traj.rows.push_back(evolver.centre());
    }
    return traj;
}

Trajectory run_seeded(int rule_number, std::size_t width, std::size_t t_max, std::uint64_t seed) {
    Rng rng(seed);
    const Tape initial = random_tape(width, rng);
    Trajectory traj = run_open_boundary(initial, RuleTable(rule_number), t_max, rng);
    traj.seed = seed;
    return traj;
}

int mirror_rule(int rule_number) {
    const RuleTable rule(rule_number);
    std::array<std::uint8_t, 8> t{};
    for (int idx = 0; idx < 8; ++idx) {
        const int swapped = ((idx & 1) << 2) | (idx & 2) | ((idx >> 2) & 1);
        t[idx] = rule[swapped];
    }
    return encode_rule(t);
}

int complement_rule(int rule_number) {
    const RuleTable rule(rule_number);
    std::array<std::uint8_t, 8> t{};
    for (int idx = 0; idx < 8; ++idx) t[idx] = static_cast<std::uint8_t>(1 - rule[7 - idx]);
    return encode_rule(t);
}

std::vector<int> rule_symmetries(int rule_number) {
    check_rule_number(rule_number);
    const int m = mirror_rule(rule_number);
    const std::set<int> orbit{rule_number, m, complement_rule(rule_number), complement_rule(m)};
    return {orbit.begin(), orbit.end()};
}

std::vector<int> canonical_rules() {
    std::vector<int> out;
    for (int r = 0; r < 256; ++r)
        if (rule_symmetries(r).front() == r) out.push_back(r);
    return out;
}

Tape kink_filter(const Tape& tape) {
    if (tape.empty()) return tape;
    std::vector<std::uint64_t> left, right;
    neighbour_words(tape, left, right);
    Tape out(tape.width());
    const auto c = tape.words();
    auto dst = out.words();
    for (std::size_t k = 0; k < c.size(); ++k) dst[k] = c[k] & (left[k] | right[k]);
    out.clear_tail();
    return out;
}

}  // namespace ecacm::eca
