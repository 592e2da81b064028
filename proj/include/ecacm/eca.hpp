#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ecacm::eca {

// Seeded generator used for every random initial condition. The engine is
// fully specified by the C++ standard, so streams agree across platforms.
using Rng = std::mt19937_64;

// Local update map of an elementary CA. Neighbourhoods are indexed as
// 4*left + 2*centre + right, so entry i is bit i of the rule number.
class RuleTable {
public:
    explicit RuleTable(int rule_number);

    int number() const { return number_; }
    bool apply(bool left, bool centre, bool right) const {
        return table_[(left ? 4 : 0) | (centre ? 2 : 0) | (right ? 1 : 0)] != 0;
    }
    std::uint8_t operator[](int neighbourhood) const { return table_.at(neighbourhood); }
    const std::array<std::uint8_t, 8>& table() const { return table_; }

private:
    int number_;
    std::array<std::uint8_t, 8> table_{};
};

RuleTable parse_rule(int rule_number);

// Inverse of parse_rule: bits ordered 111 (bit 7) down to 000 (bit 0).
int encode_rule(const std::array<std::uint8_t, 8>& table);

// Fixed-width row of binary cells, stored 64 per word, least significant
// bit first. Bits past width() in the final word are always zero.
class Tape {
public:
    Tape() = default;
    explicit Tape(std::size_t width);

    static Tape from_string(std::string_view bits);
    static Tape from_cells(std::span<const std::uint8_t> cells);

    std::size_t width() const { return width_; }
    bool empty() const { return width_ == 0; }

    bool operator[](std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
    void set(std::size_t i, bool value);

    std::span<const std::uint64_t> words() const { return words_; }
    std::span<std::uint64_t> words() { return words_; }

    // Zeroes any bits beyond width() in the final word.
    void clear_tail();

    Tape slice(std::size_t offset, std::size_t width) const;
    Tape complemented() const;
    Tape reversed() const;
    std::size_t popcount() const;
    std::string to_string() const;

    bool operator==(const Tape&) const = default;

private:
    std::size_t width_ = 0;
    std::vector<std::uint64_t> words_;
};

Tape random_tape(std::size_t width, Rng& rng);

// One synchronous update with periodic wrap. `out` is resized as needed.
void step_periodic_into(const Tape& in, const RuleTable& rule, Tape& out);
Tape step_periodic(const Tape& tape, const RuleTable& rule);

struct Trajectory {
    std::vector<Tape> rows;  // rows[t-1] is the state after t updates
    std::size_t width = 0;
    int rule_number = 0;
    std::uint64_t seed = 0;

    const Tape& row(std::size_t t) const { return rows.at(t - 1); }
    std::size_t t_max() const { return rows.size(); }
};

// Emulates an open-boundary row of the caller's width. The initial tape is
// embedded in a periodic ring with `pad` random cells on each side drawn
// from `rng`; pad cells are drawn alternately left/right moving outward,
// so the cells nearest the centre do not depend on `pad`. Only the centre
// is ever exposed. Requires pad >= t_max for exact light-cone emulation.
class OpenBoundaryEvolver {
public:
    OpenBoundaryEvolver(const Tape& initial, const RuleTable& rule, std::size_t t_max,
                        Rng& rng, std::size_t pad);
    OpenBoundaryEvolver(const Tape& initial, const RuleTable& rule, std::size_t t_max, Rng& rng)
        : OpenBoundaryEvolver(initial, rule, t_max, rng, t_max) {}

    // Advances one update; throws once t_max updates have been taken.
    void step();
    std::size_t time() const { return time_; }
    std::size_t t_max() const { return t_max_; }
    std::size_t width() const { return width_; }
    Tape centre() const { return current_.slice(pad_, width_); }
    const Tape& extended() const { return current_; }

private:
    RuleTable rule_;
    std::size_t width_;
    std::size_t pad_;
    std::size_t t_max_;
    std::size_t time_ = 0;
    Tape current_;
    Tape scratch_;
};

Trajectory run_open_boundary(const Tape& initial, const RuleTable& rule, std::size_t t_max,
                             Rng& rng, std::size_t pad = 0);

// Draws the centre row from a fresh generator seeded with `seed` and then
// evolves it; the same seed always yields the same centre initial row.
Trajectory run_seeded(int rule_number, std::size_t width, std::size_t t_max, std::uint64_t seed);

int mirror_rule(int rule_number);
int complement_rule(int rule_number);

// Orbit under mirror, complement and both; sorted ascending, size 1, 2 or 4.
std::vector<int> rule_symmetries(int rule_number);

// Minimum of each orbit, ascending. Always 88 entries.
std::vector<int> canonical_rules();

// Keeps a 1 only where a neighbouring cell (periodic) is also 1.
Tape kink_filter(const Tape& tape);

}  // namespace ecacm::eca
