#pragma once

// The weighted bin game (b, M, T): 1 + sum b(t) bins; each turn Maker adds
// weight under the suffix budget M, then the b(t) heaviest live bins die.
// The survivor's weight is Maker's score.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "nrow/rng.hpp"

namespace nrow {

struct BinSchedule {
    std::int64_t T = 0;
    std::vector<std::int64_t> b; // b(1..T), stored 0-based
    std::vector<double> dM;      // dM(s) = M(s) - M(s-1), s = 1..T, stored 0-based

    // Throws ConfigError on T < 1, length mismatch, b < 0 or dM < 0.
    static BinSchedule make(std::vector<std::int64_t> b, std::vector<double> dM);

    std::int64_t bin_count() const; // 1 + sum b
    // Bins alive after `turn` turns: 1 + sum_{s > turn} b(s).
    std::int64_t live_after(std::int64_t turn) const;
    double M(std::int64_t s) const; // M(0) = 0, M(s) = M(T) for s > T
    void validate() const;
};

struct BinState {
    std::vector<std::int64_t> ids; // live bins, ascending
    std::vector<double> weights;   // parallel to ids
    std::int64_t turn = 0;
    std::vector<double> weight_spent; // w(1..turn)

    static BinState start(const BinSchedule& sched);
    double total() const;
    double average() const;
};

// Adds weight to live bins, then kills the b(turn) heaviest (equal weights:
// lowest id first). Throws std::invalid_argument for a dead or unknown bin,
// a negative weight or a finished game, and SuffixBudgetError when some
// suffix ending at T must exceed its budget whatever the remaining turns add.
BinState bin_step(const BinState& state, const BinSchedule& sched, const std::map<std::int64_t, double>& additions);

// sum_s w(s) / (sum_{t >= s} b(t) + 1).
double average_bound(const std::vector<double>& w, const std::vector<std::int64_t>& b);

// (2 / b(T)) sum_t dM(t) / t. Throws InvalidScheduleError naming the first s
// with sum_{t >= s} b(t) < b(T)(T - s + 1) / 2.
double solo_bound(const std::vector<double>& dM, const std::vector<std::int64_t>& b);

// Smallest s whose last-s-turn total exceeds M(s) (relative tolerance 1e-9).
// A play shorter than T is checked as if the remaining turns add nothing.
std::optional<std::int64_t> validate_play(const std::vector<double>& w, const BinSchedule& sched);

struct BinTurn {
    std::int64_t turn = 0;
    double added = 0;
    std::int64_t live_before = 0;
    double average_before_kill = 0;
    double average_after_kill = 0;
    std::vector<std::int64_t> killed;
};

struct BinPlay {
    double final_weight = 0;
    std::vector<double> w;
    std::vector<BinTurn> trace;
};

// Plays w(s) = dM(T - s + 1) spread equally over the live bins.
BinPlay equal_spread_play(const BinSchedule& sched);

// Plays per-turn totals w spread equally over the live bins.
BinPlay spread_play(const BinSchedule& sched, const std::vector<double>& w);

// A random legal play: each turn spends a random share of what the suffix
// budgets still allow, on a random subset of live bins.
BinPlay random_play(const BinSchedule& sched, Rng& rng);

} // namespace nrow
