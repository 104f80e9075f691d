#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nrow/board.hpp"
#include "nrow/rational.hpp"
#include "nrow/rng.hpp"
#include "nrow/schedule.hpp"

namespace nrow {

struct TurnContext {
    const GameState& state;
    std::int64_t t;      // current timestep, starting at 1
    std::int64_t budget; // points this player may claim now
    Rng& rng;
};

class MakerStrategy {
public:
    virtual ~MakerStrategy() = default;
    virtual std::string name() const = 0;
    virtual std::vector<GridPoint> move(const TurnContext& ctx) = 0;
};

class BreakerStrategy {
public:
    virtual ~BreakerStrategy() = default;
    virtual std::string name() const = 0;
    virtual std::vector<BreakerMark> move(const TurnContext& ctx) = 0;
};

// Breaker points on seg after which every piece holds fewer than
// ceil(eps*n) Maker points or has capacity below n. Uses at most
// 2*ceil(maker_count / (ceil(eps*n) - 1)) points. In batched games a
// counted boundary point may be a Maker point and is played directly.
std::vector<GridPoint> eps_split(const GameState& state, const Segment& seg, Rational eps, int n);

// Upper bound on the size of eps_split's answer.
std::int64_t eps_split_bound(std::int64_t maker_count, Rational eps, int n);

// ---------------------------------------------------------------- Breakers

class SplitTopBreaker : public BreakerStrategy {
public:
    explicit SplitTopBreaker(Rational eps);
    std::string name() const override;
    std::vector<BreakerMark> move(const TurnContext& ctx) override;

    struct Target {
        Segment segment;
        std::vector<GridPoint> points;
    };
    // The splits move() would play, in play order. Deterministic in
    // (state, budget).
    std::vector<Target> plan(const GameState& state, std::int64_t budget) const;
    // max(1, floor(eps * budget / 4)).
    std::int64_t targets_for(std::int64_t budget) const;
    Rational epsilon() const { return eps_; }

private:
    Rational eps_;
};

// Kills the heaviest Breaker-free lines of one direction by playing just
// past their highest Maker point.
class LineTargetBreaker : public BreakerStrategy {
public:
    explicit LineTargetBreaker(Direction dir = {0, 1}) : dir_(dir) {}
    std::string name() const override;
    std::vector<BreakerMark> move(const TurnContext& ctx) override;

private:
    Direction dir_;
};

// Uniform unclaimed points in Maker's bounding box inflated by n.
class RandomBreaker : public BreakerStrategy {
public:
    std::string name() const override { return "random"; }
    std::vector<BreakerMark> move(const TurnContext& ctx) override;
};

class IdleBreaker : public BreakerStrategy {
public:
    std::string name() const override { return "idle"; }
    std::vector<BreakerMark> move(const TurnContext&) override { return {}; }
};

// ------------------------------------------------------------------ Makers

// Extends the richest active segment with consecutive free points; starts a
// fresh row when nothing is worth extending.
class GreedyMaker : public MakerStrategy {
public:
    std::string name() const override { return "greedy"; }
    std::vector<GridPoint> move(const TurnContext& ctx) override;
};

struct ParallelLinesPlan {
    std::int64_t t0 = 0;
    std::int64_t t1 = 0;
    std::int64_t r = 0;      // window length, a power of two
    std::int64_t b = 0;      // Breaker points per turn the plan tolerates
    int halvings = 0;        // log2 r
    Coord x0 = 0;            // lines are x = x0 + i
    Coord stack_height = 0;  // stacks start at y in [0, stack_height)
    std::vector<LineKey> lines;
    std::vector<Coord> base_y;
    std::vector<std::int64_t> placed;
    std::vector<char> live;
    int phase = 0;           // completed rounds
    bool initialized = false;

    std::int64_t live_count() const;
};

// Plays rb+1 fresh parallel vertical lines during the window [t0, t1),
// halving the live set each round, then completes the surviving line.
// Passes before t0.
class ParallelLinesMaker : public MakerStrategy {
public:
    ParallelLinesMaker(int n, Rational eps, std::int64_t b_plan, Schedule m);

    // ceil(C * ln(n + 1)).
    static std::int64_t plan_budget(double C, int n);

    std::string name() const override;
    std::vector<GridPoint> move(const TurnContext& ctx) override;

    const ParallelLinesPlan& plan() const { return plan_; }
    // floor(ceil(n/2) / (4b)) * log2 r.
    std::int64_t guaranteed_points() const;
    // Maker points on the surviving line once the window has closed.
    std::optional<std::int64_t> window_result() const { return window_result_; }
    // Round lengths r/2, r/4, ..., 1, 1.
    std::vector<std::int64_t> round_lengths() const;

private:
    void initialize(const GameState& state);
    void update_liveness(const GameState& state);
    void apply_artificial_kills(std::int64_t target);
    std::int64_t round_target(int round) const;
    void extend(const GameState& state, std::size_t line, std::int64_t count, std::vector<GridPoint>& out);
    std::int64_t line_count(const GameState& state, std::size_t line) const;

    int n_;
    Rational eps_;
    Schedule m_;
    ParallelLinesPlan plan_;
    std::vector<Coord> next_y_;
    std::size_t mark_cursor_ = 0;
    std::size_t rotor_ = 0;
    std::optional<std::int64_t> window_result_;
    GreedyMaker fallback_;
};

// ----------------------------------------------------- Batched set builders

struct RectanglePlan {
    std::int64_t T = 0;
    std::int64_t budget = 0; // sum of ceil(t^alpha), t <= T
    std::int64_t height = 0;
};

RectanglePlan rectangle_plan(int n, double alpha);
// [0, n) x [0, h). Throws ConfigError unless 0 < alpha < 1 and h >= 1.
std::vector<GridPoint> maker_rectangle_batched(int n, double alpha);
// Near-square block of exactly `budget` points, filled row by row.
std::vector<GridPoint> maker_grid_batched(std::int64_t budget);

// Union of eps_splits of every Breaker-free run of >= ceil(eps*n) Maker
// points; throws BudgetExceededError when more than budget points are needed.
std::vector<GridPoint> breaker_batched_split(std::span<const GridPoint> maker, Rational eps, int n,
                                             std::int64_t budget);

struct RandomSplitOutcome {
    std::vector<GridPoint> points;
    int attempts = 0;
    double probability = 0;
    std::int64_t threshold = 0;  // ceil(eps * T^alpha)
    double size_bound = 0;       // (2/eps) * T * ln T
};

// Rejection-samples independent subsets of Maker's points with probability
// min(1, 2 ln T / (eps T^alpha)); throws SamplingFailureError after
// max_retries failures.
RandomSplitOutcome breaker_batched_random(std::span<const GridPoint> maker, Rational eps, double alpha,
                                          std::int64_t T, Rng& rng, int max_retries);

// Directed marks eps-splitting the richest runs first until the budget is
// spent; unlike breaker_batched_split it never fails.
std::vector<BreakerMark> breaker_batched_greedy_directed(std::span<const GridPoint> maker, Rational eps, int n,
                                                         std::int64_t budget);

// Maximal runs of >= min_count Maker points free of blocking marks.
std::vector<Segment> surviving_runs(std::span<const GridPoint> maker, std::span<const BreakerMark> marks,
                                    bool directed, std::int64_t min_count);

} // namespace nrow
