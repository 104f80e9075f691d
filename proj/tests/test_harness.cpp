#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nrow/errors.hpp"
#include "nrow/match.hpp"
#include "nrow/schedule.hpp"
#include "nrow/transcript.hpp"

using namespace nrow;

namespace {

MatchConfig config(int n, Rational eps, const char* m, const char* b, const char* maker, const char* breaker,
                   std::uint64_t seed = 1) {
    MatchConfig cfg;
    cfg.mode = parse_variant("standard", n, eps);
    cfg.m = Schedule::parse(m);
    cfg.b = Schedule::parse(b);
    cfg.maker = maker;
    cfg.breaker = breaker;
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("schedule examples") {
    CHECK(Schedule::power(1.0)(3) == 3);
    CHECK(Schedule::clog(2.0)(7) == 5);
    CHECK(Schedule::power(0.5)(10) == 4);
    CHECK(Schedule::power(0.5)(9) == 3);
    CHECK(Schedule::constant(2.5)(1) == 3);
    CHECK(Schedule::zero()(100) == 0);
    const Schedule l = Schedule::parse("list:1,2,2,5");
    CHECK(l(1) == 1);
    CHECK(l(4) == 5);
    CHECK(l(9) == 5);
    CHECK(l.cumulative(5) == 15);
}

TEST_CASE("schedule parsing") {
    CHECK(Schedule::parse("power:alpha=0.5,c=2") == Schedule::power(0.5, 2.0));
    CHECK(Schedule::parse("clog:c=1.44") == Schedule::clog(1.44));
    CHECK(Schedule::parse("const:c=1") == Schedule::constant(1.0));
    CHECK(Schedule::parse("zero") == Schedule::zero());
    for (const char* text : {"power:alpha=0.5,c=2", "clog:c=20", "const:c=3", "zero", "list:1,2,3"}) {
        CHECK(Schedule::parse(Schedule::parse(text).to_string()) == Schedule::parse(text));
    }
    CHECK_THROWS_AS(Schedule::parse("list:3,2"), InvalidScheduleError);
    CHECK_THROWS_AS(Schedule::parse("nope"), ConfigError);
    CHECK_THROWS_AS(Schedule::parse("power:beta=1"), ConfigError);
    CHECK_THROWS_AS(Schedule::parse("clog:c=-1"), ConfigError);
}

TEST_CASE("schedules are monotone and first_reaching is exact") {
    for (const char* text : {"power:alpha=0.5", "power:alpha=1,c=0.7", "clog:c=3", "const:c=2", "list:0,1,1,4"}) {
        const Schedule s = Schedule::parse(text);
        for (std::int64_t t = 1; t < 300; ++t) CHECK(s(t) <= s(t + 1));
        for (std::int64_t target = 1; target < 12; ++target) {
            const std::int64_t t = s.first_reaching(target, 100000);
            if (t < 0) continue;
            CHECK(s(t) >= target);
            if (t > 1) CHECK(s(t - 1) < target);
        }
    }
    CHECK(Schedule::zero().first_reaching(1, 1000) == -1);
}

TEST_CASE("snapped_ceil absorbs rounding noise") {
    CHECK(snapped_ceil(3.0000000000001) == 3);
    CHECK(snapped_ceil(2.9999999999999) == 3);
    CHECK(snapped_ceil(3.01) == 4);
    CHECK(snapped_ceil(0.0) == 0);
}

TEST_CASE("run_match examples") {
    SUBCASE("greedy against nobody wins at t=3") {
        const auto run = run_match(config(4, Rational(1, 2), "power:alpha=1", "zero", "greedy", "idle"));
        CHECK(run.result.outcome.maker_won);
        CHECK(run.result.outcome.tau == 3);
        CHECK(run.result.outcome.m_tau == 3);
    }
    SUBCASE("huge Breaker budget cannot stop a fresh line at t=n") {
        auto cfg = config(4, Rational(3, 4), "power:alpha=1", "const:c=1000", "greedy", "split-top:epsilon=3/4");
        cfg.max_steps = 10;
        const auto run = run_match(cfg);
        CHECK(run.result.outcome.maker_won);
        CHECK(run.result.outcome.tau == 4);
    }
    SUBCASE("default max_steps") {
        CHECK(default_max_steps(Schedule::power(1.0), 10) == 11);
        CHECK(default_max_steps(Schedule::power(0.5), 4) == 11);
        CHECK_THROWS_AS(default_max_steps(Schedule::zero(), 4), ConfigError);
    }
    SUBCASE("illegal strategy moves name the strategy") {
        struct Cheater : MakerStrategy {
            std::string name() const override { return "cheater"; }
            std::vector<GridPoint> move(const TurnContext&) override { return {{0, 0}, {0, 0}}; }
        } cheater;
        IdleBreaker idle;
        const auto cfg = config(4, Rational(1, 2), "power:alpha=1,c=2", "zero", "greedy", "idle");
        try {
            run_match(cfg, cheater, idle);
            FAIL("expected an illegal move");
        } catch (const IllegalMoveError& e) {
            CHECK(std::string(e.what()).rfind("cheater: ", 0) == 0);
            CHECK(e.x() == 0);
        }
    }
    SUBCASE("over-budget moves are rejected") {
        struct Greedy2 : MakerStrategy {
            std::string name() const override { return "too-many"; }
            std::vector<GridPoint> move(const TurnContext& c) override {
                std::vector<GridPoint> out;
                for (std::int64_t i = 0; i <= c.budget; ++i) out.push_back({i, c.t});
                return out;
            }
        } maker;
        IdleBreaker idle;
        CHECK_THROWS_AS(run_match(config(4, Rational(1, 2), "power:alpha=1", "zero", "greedy", "idle"), maker, idle),
                        IllegalMoveError);
    }
    SUBCASE("unknown strategies") {
        CHECK_THROWS_AS(run_match(config(4, Rational(1, 2), "power:alpha=1", "zero", "nope", "idle")), ConfigError);
        CHECK_THROWS_AS(run_match(config(4, Rational(1, 2), "power:alpha=1", "zero", "greedy", "batched-split")),
                        ConfigError);
    }
}

TEST_CASE("transcripts round-trip through JSONL") {
    const auto run = run_match(config(12, Rational(1, 2), "power:alpha=1", "clog:c=2", "greedy", "random", 9));
    const std::string text = run.transcript.to_jsonl();
    const Transcript back = Transcript::from_jsonl(text);
    CHECK(back == run.transcript);
    CHECK(back.to_jsonl() == text);
    CHECK(text.rfind("{\"record\":\"header\"", 0) == 0);
    CHECK_THROWS_AS(Transcript::from_jsonl("{\"record\":\"move\"}\n"), ConfigError);
    CHECK_THROWS_AS(Transcript::from_jsonl("not json\n"), ConfigError);
}

TEST_CASE("replay_verify examples") {
    const auto run = run_match(config(16, Rational(1, 2), "power:alpha=1", "clog:c=3", "greedy", "split-top"));
    SUBCASE("unmodified") {
        const auto rep = replay_verify(run.transcript);
        CHECK(rep.ok);
        CHECK(replay(run.transcript) == run.result);
    }
    SUBCASE("duplicated point") {
        Transcript bad = run.transcript;
        auto& mv = bad.moves[2];
        REQUIRE(!mv.points.empty());
        mv.points.push_back(mv.points.front());
        const auto rep = replay_verify(bad);
        CHECK_FALSE(rep.ok);
        CHECK(rep.t == mv.t);
    }
    SUBCASE("altered outcome") {
        Transcript bad = run.transcript;
        bad.outcome->tau += 1;
        const auto rep = replay_verify(bad);
        CHECK_FALSE(rep.ok);
        CHECK(rep.reason.find("outcome") != std::string::npos);
    }
    SUBCASE("moves after a win") {
        Transcript bad = run.transcript;
        REQUIRE(bad.outcome->maker_won);
        bad.moves.push_back({bad.outcome->tau, Player::breaker, {}});
        CHECK_FALSE(replay_verify(bad).ok);
    }
}

TEST_CASE("matches are deterministic and respect budgets") {
    const char* breakers[] = {"split-top", "random", "idle", "line-target"};
    for (const char* breaker : breakers) {
        for (std::uint64_t seed : {1u, 2u}) {
            const auto cfg = config(20, Rational(1, 2), "power:alpha=1", "clog:c=2", "greedy", breaker, seed);
            const auto a = run_match(cfg);
            const auto b = run_match(cfg);
            CHECK(a.transcript.to_jsonl() == b.transcript.to_jsonl());
            CHECK(replay_verify(a.transcript).ok);
            for (const auto& mv : a.transcript.moves) {
                const Schedule& s = mv.player == Player::maker ? cfg.m : cfg.b;
                CHECK(static_cast<std::int64_t>(mv.points.size()) <= s(mv.t));
            }
            if (a.result.outcome.maker_won) {
                CHECK(a.transcript.moves.back().player == Player::maker);
                CHECK(a.transcript.moves.back().t == a.result.outcome.tau);
            }
        }
    }
}

TEST_CASE("parallel-lines plays a full match") {
    auto cfg = config(64, Rational(1, 4), "power:alpha=1", "clog:c=1", "parallel-lines:C=1", "split-top");
    const auto run = run_match(cfg);
    CHECK(run.result.outcome.maker_won);
    CHECK(run.result.outcome.m_tau <= 64);
    CHECK(replay_verify(run.transcript).ok);
}

TEST_CASE("run_batched examples") {
    SUBCASE("rectangle beats a unit-budget directed Breaker") {
        BatchedConfig cfg;
        cfg.n = 16;
        cfg.alpha = 0.5;
        cfg.directed = true;
        cfg.breaker = "batched-greedy";
        cfg.b = Schedule::constant(1.0);
        const auto res = run_batched(cfg);
        CHECK(res.T == 64);
        CHECK(res.breaker_points <= res.breaker_budget);
        CHECK_FALSE(res.breaker_won);
    }
    SUBCASE("grid loses to an ample split budget") {
        BatchedConfig cfg;
        cfg.n = 20;
        cfg.epsilon = Rational(1, 2);
        cfg.maker = "grid";
        cfg.T = 30;
        cfg.m = Schedule::power(1.0);
        cfg.b = Schedule::constant(1000.0);
        const auto res = run_batched(cfg);
        CHECK(res.maker_points == 465);
        CHECK(res.breaker_won);
        CHECK(res.surviving_runs == 0);
    }
    SUBCASE("grid against the random Breaker") {
        BatchedConfig cfg;
        cfg.n = 20;
        cfg.epsilon = Rational(1, 2);
        cfg.maker = "grid";
        cfg.breaker = "batched-random";
        cfg.T = 100;
        cfg.alpha = 0.5;
        cfg.b = Schedule::constant(1000.0);
        const auto res = run_batched(cfg);
        CHECK(res.breaker_won);
    }
    SUBCASE("budget overrun") {
        BatchedConfig cfg;
        cfg.n = 20;
        cfg.maker = "grid";
        cfg.T = 30;
        cfg.m = Schedule::power(1.0);
        cfg.b = Schedule::zero();
        CHECK_THROWS_AS(run_batched(cfg), BudgetExceededError);
    }
    SUBCASE("mode mismatch") {
        BatchedConfig cfg;
        cfg.n = 16;
        cfg.breaker = "batched-greedy";
        CHECK_THROWS_AS(run_batched(cfg), ConfigError);
    }
}
