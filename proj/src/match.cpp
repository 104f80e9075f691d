#include "nrow/match.hpp"

#include <algorithm>

#include "nrow/errors.hpp"
#include "nrow/spec_string.hpp"

namespace nrow {

std::int64_t default_max_steps(const Schedule& m, int n) {
    const std::int64_t t = m.first_reaching(n);
    if (t < 0) throw ConfigError("Maker's schedule never reaches n; pass max_steps explicitly");
    return t + 1;
}

std::int64_t summary_floor(int n) { return std::max<std::int64_t>(2, (n + 7) / 8); }

std::unique_ptr<MakerStrategy> make_maker(std::string_view text, const MatchConfig& cfg) {
    const SpecString spec = SpecString::parse(text);
    if (spec.name == "greedy") {
        spec.expect_keys({});
        return std::make_unique<GreedyMaker>();
    }
    if (spec.name == "parallel-lines") {
        spec.expect_keys({"C", "b", "epsilon"});
        const Rational eps = spec.has("epsilon") ? Rational::parse(spec.text("epsilon", "")) : cfg.mode.epsilon;
        const std::int64_t b = spec.has("b") ? spec.integer("b", 0)
                                             : ParallelLinesMaker::plan_budget(spec.number("C", 1.0), cfg.mode.n);
        return std::make_unique<ParallelLinesMaker>(cfg.mode.n, eps, b, cfg.m);
    }
    if (spec.name == "rectangle" || spec.name == "grid")
        throw ConfigError("'" + spec.name + "' is a batched Maker; use the batched game");
    throw ConfigError("unknown Maker strategy '" + spec.name + "'");
}

std::unique_ptr<BreakerStrategy> make_breaker(std::string_view text, const MatchConfig& cfg) {
    const SpecString spec = SpecString::parse(text);
    if (spec.name == "split-top") {
        spec.expect_keys({"epsilon"});
        const Rational eps = spec.has("epsilon") ? Rational::parse(spec.text("epsilon", "")) : cfg.mode.epsilon;
        return std::make_unique<SplitTopBreaker>(eps);
    }
    if (spec.name == "random") {
        spec.expect_keys({});
        return std::make_unique<RandomBreaker>();
    }
    if (spec.name == "idle") {
        spec.expect_keys({});
        return std::make_unique<IdleBreaker>();
    }
    if (spec.name == "line-target") {
        spec.expect_keys({"dx", "dy"});
        return std::make_unique<LineTargetBreaker>(canonical_direction(spec.integer("dx", 0), spec.integer("dy", 1)));
    }
    if (spec.name.rfind("batched-", 0) == 0)
        throw ConfigError("'" + spec.name + "' is a batched Breaker; use the batched game");
    throw ConfigError("unknown Breaker strategy '" + spec.name + "'");
}

namespace {

// Tracks the per-timestep summary. Shared by play and replay so both
// produce identical results.
class Summarizer {
public:
    explicit Summarizer(int n) : n_(n), floor_(summary_floor(n)) {}

    void after_maker(const GameState& state, std::int64_t t, std::int64_t points) {
        cur_ = StepSummary{};
        cur_.t = t;
        cur_.maker_points = points;
        rich_ = state.rich_segments(floor_);
        std::erase_if(rich_, [&](const Segment& s) { return !s.is_active(n_); });
        for (const auto& s : rich_) cur_.max_active = std::max(cur_.max_active, s.maker_count);
    }

    void after_breaker(std::span<const BreakerMark> marks) {
        cur_.breaker_points = static_cast<std::int64_t>(marks.size());
        for (const auto& s : rich_) {
            const bool cut = std::any_of(marks.begin(), marks.end(), [&](const BreakerMark& m) {
                if (!on_line(s.line, m.point) || !blocks(m, s.line)) return false;
                const Coord v = line_param(s.line, m.point);
                return (!s.lo || v > *s.lo) && (!s.hi || v < *s.hi);
            });
            cur_.segments_split += cut;
        }
    }

    StepSummary take() { return cur_; }

private:
    int n_;
    std::int64_t floor_;
    std::vector<Segment> rich_;
    StepSummary cur_;
};

std::vector<BreakerMark> as_marks(std::span<const GridPoint> pts) {
    std::vector<BreakerMark> out;
    out.reserve(pts.size());
    for (auto p : pts) out.push_back({p, std::nullopt});
    return out;
}

} // namespace

MatchRun run_match(const MatchConfig& cfg) {
    auto maker = make_maker(cfg.maker, cfg);
    auto breaker = make_breaker(cfg.breaker, cfg);
    return run_match(cfg, *maker, *breaker);
}

MatchRun run_match(const MatchConfig& cfg, MakerStrategy& maker, BreakerStrategy& breaker) {
    cfg.mode.validate();
    if (cfg.mode.batched) throw ConfigError("batched games are played with run_batched");
    const std::int64_t max_steps = cfg.max_steps > 0 ? cfg.max_steps : default_max_steps(cfg.m, cfg.mode.n);

    MatchRun run;
    auto& h = run.transcript.header;
    h.variant = cfg.mode.variant_name();
    h.n = cfg.mode.n;
    h.epsilon = cfg.mode.epsilon;
    h.directed_marks_occupy = cfg.mode.directed_marks_occupy;
    h.m = cfg.m.to_string();
    h.b = cfg.b.to_string();
    h.maker = maker.name();
    h.breaker = breaker.name();
    h.seed = cfg.seed;
    h.max_steps = max_steps;

    GameState state(cfg.mode);
    Rng maker_rng(cfg.seed, 1);
    Rng breaker_rng(cfg.seed, 2);
    Summarizer summary(cfg.mode.n);
    Outcome outcome;

    for (std::int64_t t = 1; t <= max_steps; ++t) {
        state.set_timestep(t);
        outcome.steps = t;
        const std::int64_t mb = cfg.m(t);
        std::vector<GridPoint> pts = maker.move({state, t, mb, maker_rng});
        if (static_cast<std::int64_t>(pts.size()) > mb)
            throw IllegalMoveError(maker.name() + ": move of " + std::to_string(pts.size()) +
                                   " points exceeds budget " + std::to_string(mb));
        try {
            state.apply_maker(pts);
        } catch (const IllegalMoveError& e) {
            throw e.prefixed(maker.name());
        }
        run.transcript.moves.push_back({t, Player::maker, as_marks(pts)});
        summary.after_maker(state, t, static_cast<std::int64_t>(pts.size()));
        if (state.maker_has_won()) {
            outcome.maker_won = true;
            outcome.tau = t;
            outcome.m_tau = mb;
            run.result.summary.push_back(summary.take());
            break;
        }

        const std::int64_t bb = cfg.b(t);
        std::vector<BreakerMark> marks = breaker.move({state, t, bb, breaker_rng});
        if (static_cast<std::int64_t>(marks.size()) > bb)
            throw IllegalMoveError(breaker.name() + ": move of " + std::to_string(marks.size()) +
                                   " points exceeds budget " + std::to_string(bb));
        try {
            state.apply_breaker(marks);
        } catch (const IllegalMoveError& e) {
            throw e.prefixed(breaker.name());
        }
        summary.after_breaker(marks);
        run.result.summary.push_back(summary.take());
        run.transcript.moves.push_back({t, Player::breaker, std::move(marks)});
    }
    run.result.outcome = outcome;
    run.transcript.outcome = outcome;
    return run;
}

MatchResult replay(const Transcript& tr) {
    const GameMode mode = tr.header.mode();
    const Schedule m = Schedule::parse(tr.header.m);
    const Schedule b = Schedule::parse(tr.header.b);
    GameState state(mode);
    Summarizer summary(mode.n);
    MatchResult result;
    Outcome& outcome = result.outcome;
    std::int64_t expect_t = 1;
    Player expect_player = Player::maker;

    for (const auto& mv : tr.moves) {
        const std::string where = "t=" + std::to_string(mv.t) + " " + to_string(mv.player);
        if (outcome.maker_won) throw IllegalMoveError(where + ": move after Maker already won");
        if (mv.t != expect_t || mv.player != expect_player)
            throw IllegalMoveError(where + ": out of turn order");
        if (tr.header.max_steps > 0 && mv.t > tr.header.max_steps)
            throw IllegalMoveError(where + ": beyond max_steps");
        state.set_timestep(mv.t);
        outcome.steps = mv.t;
        const Schedule& sched = mv.player == Player::maker ? m : b;
        const std::int64_t budget = sched(mv.t);
        if (static_cast<std::int64_t>(mv.points.size()) > budget)
            throw IllegalMoveError(where + ": move exceeds budget " + std::to_string(budget));
        try {
            if (mv.player == Player::maker) {
                std::vector<GridPoint> pts;
                for (const auto& p : mv.points) {
                    if (p.dir) throw IllegalMoveError("Maker points carry no direction", p.point.x, p.point.y);
                    pts.push_back(p.point);
                }
                state.apply_maker(pts);
                summary.after_maker(state, mv.t, static_cast<std::int64_t>(pts.size()));
                if (state.maker_has_won()) {
                    outcome.maker_won = true;
                    outcome.tau = mv.t;
                    outcome.m_tau = budget;
                    result.summary.push_back(summary.take());
                }
                expect_player = Player::breaker;
            } else {
                state.apply_breaker(mv.points);
                summary.after_breaker(mv.points);
                result.summary.push_back(summary.take());
                expect_player = Player::maker;
                ++expect_t;
            }
        } catch (const IllegalMoveError& e) {
            throw e.prefixed(where);
        }
    }
    return result;
}

ReplayReport replay_verify(const Transcript& tr) {
    ReplayReport report;
    MatchResult result;
    try {
        result = replay(tr);
    } catch (const IllegalMoveError& e) {
        report.ok = false;
        report.reason = e.what();
        for (const auto& mv : tr.moves) {
            const std::string tag = "t=" + std::to_string(mv.t) + " ";
            if (report.reason.rfind(tag, 0) == 0) report.t = mv.t;
        }
        return report;
    } catch (const std::exception& e) {
        report.ok = false;
        report.reason = e.what();
        return report;
    }
    if (!tr.outcome) {
        report.ok = false;
        report.t = result.outcome.steps;
        report.reason = "transcript has no outcome record";
    } else if (!(*tr.outcome == result.outcome)) {
        report.ok = false;
        report.t = result.outcome.steps;
        report.reason = "recorded outcome differs from the replayed outcome";
    }
    return report;
}

// ------------------------------------------------------------ batched game

BatchedResult run_batched(const BatchedConfig& cfg) {
    GameMode mode;
    mode.n = cfg.n;
    mode.epsilon = cfg.epsilon;
    mode.batched = true;
    mode.directed = cfg.directed;
    mode.validate();

    BatchedResult res;
    res.threshold = cfg.epsilon.ceil_times(cfg.n);
    const Schedule m = cfg.m ? *cfg.m : Schedule::power(cfg.alpha);
    const SpecString maker = SpecString::parse(cfg.maker);
    const SpecString breaker = SpecString::parse(cfg.breaker);

    if (maker.name == "rectangle") {
        const RectanglePlan plan = rectangle_plan(cfg.n, cfg.alpha);
        res.T = cfg.T > 0 ? cfg.T : plan.T;
        res.maker_budget = cfg.m ? m.cumulative(res.T) : plan.budget;
        res.maker_set = maker_rectangle_batched(cfg.n, cfg.alpha);
    } else if (maker.name == "grid") {
        if (cfg.T <= 0) throw ConfigError("grid Maker needs T");
        res.T = cfg.T;
        res.maker_budget = m.cumulative(res.T);
        res.maker_set = maker_grid_batched(res.maker_budget);
    } else {
        throw ConfigError("unknown batched Maker '" + maker.name + "'");
    }
    if (static_cast<std::int64_t>(res.maker_set.size()) > res.maker_budget)
        throw BudgetExceededError(static_cast<std::int64_t>(res.maker_set.size()), res.maker_budget);
    res.maker_points = static_cast<std::int64_t>(res.maker_set.size());
    res.breaker_budget = cfg.b.cumulative(res.T);

    auto need_mode = [&](bool directed) {
        if (cfg.directed != directed)
            throw ConfigError("'" + breaker.name + "' plays the " + (directed ? "directed" : "standard") +
                              " batched game");
    };
    if (breaker.name == "batched-split") {
        need_mode(false);
        for (auto p : breaker_batched_split(res.maker_set, cfg.epsilon, cfg.n, res.breaker_budget))
            res.breaker_set.push_back({p, std::nullopt});
    } else if (breaker.name == "batched-random") {
        need_mode(false);
        Rng rng(cfg.seed, 2);
        const int retries = static_cast<int>(breaker.integer("max_retries", cfg.max_retries));
        for (auto p : breaker_batched_random(res.maker_set, cfg.epsilon, cfg.alpha, res.T, rng, retries).points)
            res.breaker_set.push_back({p, std::nullopt});
    } else if (breaker.name == "batched-greedy") {
        need_mode(true);
        res.breaker_set = breaker_batched_greedy_directed(res.maker_set, cfg.epsilon, cfg.n, res.breaker_budget);
    } else if (breaker.name != "idle") {
        throw ConfigError("unknown batched Breaker '" + breaker.name + "'");
    }
    if (static_cast<std::int64_t>(res.breaker_set.size()) > res.breaker_budget)
        throw BudgetExceededError(static_cast<std::int64_t>(res.breaker_set.size()), res.breaker_budget);
    res.breaker_points = static_cast<std::int64_t>(res.breaker_set.size());

    const auto runs = surviving_runs(res.maker_set, res.breaker_set, cfg.directed, res.threshold);
    res.surviving_runs = static_cast<std::int64_t>(runs.size());
    for (const auto& r : runs) res.longest_run = std::max(res.longest_run, r.maker_count);
    res.breaker_won = runs.empty();
    return res;
}

} // namespace nrow
