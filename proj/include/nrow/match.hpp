#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nrow/board.hpp"
#include "nrow/schedule.hpp"
#include "nrow/strategies.hpp"
#include "nrow/transcript.hpp"

namespace nrow {

struct MatchConfig {
    GameMode mode;
    Schedule m = Schedule::power(1.0);
    Schedule b = Schedule::power(1.0);
    std::string maker = "greedy";
    std::string breaker = "split-top";
    std::int64_t max_steps = 0; // 0: smallest t with m(t) >= n, plus 1
    std::uint64_t seed = 1;
};

// Smallest t with m(t) >= n, plus 1. Throws ConfigError if m never gets there.
std::int64_t default_max_steps(const Schedule& m, int n);

struct StepSummary {
    std::int64_t t = 0;
    std::int64_t maker_points = 0;
    std::int64_t breaker_points = 0;
    // Largest Maker count of an active segment after Maker's move; counts
    // below summary_floor(n) are reported as 0.
    std::int64_t max_active = 0;
    // Active segments holding >= summary_floor(n) Maker points that
    // Breaker's move cut.
    std::int64_t segments_split = 0;

    friend bool operator==(const StepSummary&, const StepSummary&) = default;
};

// max(2, ceil(n/8)).
std::int64_t summary_floor(int n);

struct MatchResult {
    Outcome outcome;
    std::vector<StepSummary> summary;

    friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

struct MatchRun {
    MatchResult result;
    Transcript transcript;
};

// maker: greedy | parallel-lines[:C=..,b=..,epsilon=..]
// breaker: split-top[:epsilon=..] | random | idle | line-target[:dx=..,dy=..]
std::unique_ptr<MakerStrategy> make_maker(std::string_view spec, const MatchConfig& cfg);
std::unique_ptr<BreakerStrategy> make_breaker(std::string_view spec, const MatchConfig& cfg);

MatchRun run_match(const MatchConfig& cfg);
// With caller-owned strategies; the transcript records their name().
MatchRun run_match(const MatchConfig& cfg, MakerStrategy& maker, BreakerStrategy& breaker);

// Re-executes a transcript through the rules engine. Throws
// IllegalMoveError on an illegal or over-budget move.
MatchResult replay(const Transcript& transcript);

struct ReplayReport {
    bool ok = true;
    std::int64_t t = 0; // timestep of the first mismatch
    std::string reason;
};

ReplayReport replay_verify(const Transcript& transcript);

// ------------------------------------------------------------ batched game

struct BatchedConfig {
    int n = 64;
    double alpha = 0.5;
    Rational epsilon{1, 2};
    bool directed = false;
    std::string maker = "rectangle";     // rectangle | grid
    std::string breaker = "batched-split"; // batched-split | batched-random | batched-greedy | idle
    std::optional<Schedule> m;           // default power:alpha=<alpha>
    Schedule b = Schedule::zero();
    std::int64_t T = 0;                  // 0: the rectangle Maker's own T
    std::uint64_t seed = 1;
    int max_retries = 100;
};

struct BatchedResult {
    bool breaker_won = false;
    std::int64_t T = 0;
    std::int64_t maker_budget = 0;
    std::int64_t breaker_budget = 0;
    std::int64_t maker_points = 0;
    std::int64_t breaker_points = 0;
    std::int64_t threshold = 0;      // ceil(epsilon * n)
    std::int64_t surviving_runs = 0; // Breaker-free runs with >= threshold Maker points
    std::int64_t longest_run = 0;
    std::vector<GridPoint> maker_set;
    std::vector<BreakerMark> breaker_set;
};

BatchedResult run_batched(const BatchedConfig& cfg);

} // namespace nrow
