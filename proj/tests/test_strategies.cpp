#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "nrow/errors.hpp"
#include "nrow/kernels.hpp"
#include "nrow/strategies.hpp"

using namespace nrow;

namespace {

GameState board(const char* variant, int n, Rational eps, std::vector<GridPoint> maker,
                std::vector<GridPoint> marks = {}) {
    GameState s(parse_variant(variant, n, eps));
    s.apply_maker(maker);
    std::vector<BreakerMark> m;
    for (auto p : marks) m.push_back({p, std::nullopt});
    s.apply_breaker(m);
    return s;
}

Segment segment_at(const GameState& s, const LineKey& line, GridPoint inside) {
    const Coord v = line_param(line, inside);
    for (auto& seg : s.segments_on_line(line)) {
        if ((!seg.lo || *seg.lo < v) && (!seg.hi || v < *seg.hi)) return seg;
    }
    FAIL("no segment contains the point");
    return {};
}

std::vector<GridPoint> row(std::initializer_list<Coord> xs, Coord y = 0) {
    std::vector<GridPoint> out;
    for (auto x : xs) out.push_back({x, y});
    return out;
}

std::set<GridPoint> as_set(const std::vector<GridPoint>& v) { return {v.begin(), v.end()}; }

std::vector<BreakerMark> undirected(const std::vector<GridPoint>& pts) {
    std::vector<BreakerMark> out;
    for (auto p : pts) out.push_back({p, std::nullopt});
    return out;
}

const LineKey kAxis = line_through({0, 0}, {1, 0});

} // namespace

TEST_CASE("eps_split examples") {
    SUBCASE("alternating Maker points") {
        // n=6 with eps=1/3 keeps ceil(eps*n)=2 while the segment stays unwon.
        const auto s = board("standard", 6, Rational(1, 3), row({0, 2, 4, 6, 8}));
        const auto pts = eps_split(s, segment_at(s, kAxis, {0, 0}), Rational(1, 3), 6);
        CHECK(as_set(pts) == as_set(row({1, 3, 5, 7})));
        GameState after = s;
        after.apply_breaker(undirected(pts));
        for (const auto& seg : after.segments_on_line(kAxis)) CHECK(seg.maker_count <= 1);
    }
    SUBCASE("one Maker point needs nothing") {
        const auto s = board("standard", 6, Rational(1, 2), row({0}));
        const Segment seg = s.segments_on_line(kAxis).front();
        CHECK(eps_split(s, seg, Rational(1, 2), 6).empty());
    }
    SUBCASE("consecutive run") {
        const auto s = board("standard", 4, Rational(1, 2), row({0, 1, 2}));
        const auto pts = eps_split(s, segment_at(s, kAxis, {0, 0}), Rational(1, 2), 4);
        CHECK(as_set(pts) == as_set(row({-1, 3})));
        GameState after = s;
        after.apply_breaker(undirected(pts));
        const Segment mid = segment_at(after, kAxis, {1, 0});
        CHECK(mid.capacity == 3);
        CHECK_FALSE(mid.is_active(4));
    }
    SUBCASE("a won segment is rejected") {
        const auto s = board("standard", 3, Rational(1, 2), row({0, 1, 2}));
        CHECK_THROWS_AS(eps_split(s, segment_at(s, kAxis, {0, 0}), Rational(1, 2), 3), std::invalid_argument);
    }
}

TEST_CASE("eps_split_bound") {
    CHECK(eps_split_bound(5, Rational(2, 5), 5) == 10);
    CHECK(eps_split_bound(3, Rational(1, 2), 4) == 6);
    CHECK(eps_split_bound(0, Rational(1, 2), 10) == 0);
    CHECK_THROWS_AS(eps_split_bound(5, Rational(1, 10), 10), std::invalid_argument);
}

TEST_CASE("eps_split leaves no rich active piece on 500 random segments") {
    std::mt19937_64 gen(7);
    const Direction dirs[] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}, {2, 1}, {1, 3}};
    int checked = 0;
    while (checked < 500) {
        const bool batched = checked % 5 == 4;
        const int n = std::uniform_int_distribution<int>(4, 24)(gen);
        const int num = std::uniform_int_distribution<int>(1, 9)(gen);
        const Rational eps(num, 10);
        const std::int64_t q = eps.ceil_times(n);
        if (q < 2) continue;
        const Direction d = dirs[gen() % 6];
        const LineKey line = line_through({0, 0}, d);

        const Coord span = std::uniform_int_distribution<Coord>(n, 3 * n)(gen);
        std::vector<GridPoint> maker;
        const int count = std::uniform_int_distribution<int>(0, batched ? 2 * n : n - 1)(gen);
        std::set<Coord> params;
        while (static_cast<int>(params.size()) < std::min<int>(count, static_cast<int>(span))) params.insert(gen() % span);
        for (auto v : params) maker.push_back(point_at(line, v));
        std::vector<GridPoint> ends;
        if (gen() % 2) ends.push_back(point_at(line, -1 - static_cast<Coord>(gen() % 3)));
        if (gen() % 2) ends.push_back(point_at(line, span + static_cast<Coord>(gen() % 3)));

        const GameState s = board(batched ? "batched" : "standard", n, eps, maker, ends);
        const Segment seg = segment_at(s, line, point_at(line, 0));
        if (!seg.is_active(n)) continue;
        ++checked;

        const auto pts = eps_split(s, seg, eps, n);
        CHECK(static_cast<std::int64_t>(pts.size()) <= eps_split_bound(seg.maker_count, eps, n));
        GameState after = s;
        const auto marks = undirected(pts);
        for (const auto& m : marks) REQUIRE(after.breaker_may_mark(m));
        after.apply_breaker(marks);
        for (const auto& piece : after.segments_on_line(line)) {
            if (piece.maker_count >= q) CHECK_FALSE(piece.is_active(n));
        }
    }
}

TEST_CASE("split-top examples") {
    SUBCASE("single target, budget 8") {
        const auto s = board("standard", 8, Rational(1, 2), row({0, 1, 2, 3}));
        SplitTopBreaker b(Rational(1, 2));
        const auto plan = b.plan(s, 8);
        REQUIRE(plan.size() == 1);
        const auto expect = eps_split(s, plan[0].segment, Rational(1, 4), 8);
        CHECK(plan[0].points == expect);
        CHECK(!expect.empty());
    }
    SUBCASE("top-1 selection") {
        auto s = board("standard", 8, Rational(1, 2), row({0, 1, 2, 3, 4, 5, 6}));
        s.apply_maker(row({0, 1, 2}, 5));
        SplitTopBreaker b(Rational(1, 2));
        CHECK(b.targets_for(7) == 1);
        const auto plan = b.plan(s, 7);
        REQUIRE(plan.size() == 1);
        CHECK(plan[0].segment.maker_count == 7);
    }
    SUBCASE("ties go to the smaller LineKey") {
        auto s = board("standard", 8, Rational(1, 2), row({0, 1, 2}, 0));
        s.apply_maker(row({0, 1, 2}, 9));
        SplitTopBreaker b(Rational(1, 2));
        const auto plan = b.plan(s, 3);
        REQUIRE(plan.size() == 1);
        const LineKey a = line_through({0, 0}, {1, 0});
        const LineKey c = line_through({0, 9}, {1, 0});
        CHECK(plan[0].segment.line == std::min(a, c));
    }
    SUBCASE("empty board") {
        const GameState s(parse_variant("standard", 8, Rational(1, 2)));
        Rng rng(1);
        SplitTopBreaker b(Rational(1, 2));
        CHECK(b.move({s, 1, 5, rng}).empty());
    }
    SUBCASE("threshold below 2 is a configuration error") {
        const auto s = board("standard", 4, Rational(1, 2), row({0, 1}));
        CHECK_THROWS_AS(SplitTopBreaker(Rational(1, 2)).plan(s, 5), ConfigError);
    }
}

TEST_CASE("split-top is legal and within budget on random boards") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 200; ++trial) {
        const char* variant = trial % 3 == 0 ? "directed" : "standard";
        const int n = 6 + static_cast<int>(gen() % 6);
        GameState s(parse_variant(variant, n, Rational(1, 2)));
        std::uniform_int_distribution<Coord> c(-6, 6);
        std::vector<GridPoint> pts;
        for (int i = 0; i < 30; ++i) {
            const GridPoint p{c(gen), c(gen)};
            if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
        }
        s.apply_maker(pts);
        if (s.maker_has_won()) continue;
        const std::int64_t budget = static_cast<std::int64_t>(gen() % 20);
        Rng rng(trial);
        SplitTopBreaker b(Rational(1, 2));
        const auto move = b.move({s, 1, budget, rng});
        CHECK(static_cast<std::int64_t>(move.size()) <= budget);
        GameState after = s;
        CHECK_NOTHROW(after.apply_breaker(move));
    }
}

TEST_CASE("greedy examples") {
    Rng rng(1);
    GreedyMaker g;
    SUBCASE("empty board") {
        const GameState s(parse_variant("standard", 5, Rational(1, 2)));
        CHECK(g.move({s, 1, 3, rng}) == row({0, 1, 2}));
    }
    SUBCASE("extends the best segment upward") {
        const auto s = board("standard", 5, Rational(1, 2), row({0, 1}));
        CHECK(g.move({s, 2, 2, rng}) == row({2, 3}));
    }
    SUBCASE("falls back when the best segment is full") {
        // Row y=0 holds 3 points boxed in to capacity 3 < n; the column x=7
        // holds 2 and can grow.
        auto s = board("standard", 5, Rational(1, 2), row({0, 1, 2}), row({-1, 3}));
        s.apply_maker(std::vector<GridPoint>{{7, 5}, {7, 6}});
        const auto move = g.move({s, 3, 2, rng});
        CHECK(move == std::vector<GridPoint>{{7, 7}, {7, 8}});
    }
    SUBCASE("never claims an occupied point") {
        auto s = board("standard", 5, Rational(1, 2), row({0, 1}), row({2}));
        const auto move = g.move({s, 2, 4, rng});
        CHECK(move.size() == 4);
        for (auto p : move) CHECK(s.maker_may_claim(p));
    }
}

TEST_CASE("parallel-lines plan") {
    SUBCASE("r=4, b=1 gives 5 lines and halves them") {
        const int n = 10;
        ParallelLinesMaker maker(n, Rational(1, 10), 1, Schedule::power(1.0));
        CHECK(maker.plan().t1 == 10);
        CHECK(maker.plan().r == 4);
        CHECK(maker.plan().t0 == 6);
        CHECK(maker.round_lengths() == std::vector<std::int64_t>{2, 1, 1});

        GameState s(parse_variant("standard", n, Rational(1, 2)));
        Rng rng(1);
        for (std::int64_t t = 1; t <= 7; ++t) {
            const auto move = maker.move({s, t, t, rng});
            if (t < 6) CHECK(move.empty());
            s.apply_maker(move);
        }
        REQUIRE(maker.plan().lines.size() == 5);
        for (auto placed : maker.plan().placed) CHECK(placed >= (2 * 6) / 5);
        s.apply_maker(maker.move({s, 8, 8, rng}));
        CHECK(maker.plan().live_count() == 3);
    }
    SUBCASE("no Breaker: artificial kills still reach one line") {
        const int n = 40;
        ParallelLinesMaker maker(n, Rational(1, 4), 0, Schedule::power(1.0));
        GameState s(parse_variant("standard", n, Rational(1, 4)));
        Rng rng(1);
        for (std::int64_t t = 1; t <= maker.plan().t1; ++t) s.apply_maker(maker.move({s, t, t, rng}));
        CHECK(maker.plan().live_count() == 1);
        REQUIRE(maker.window_result());
        CHECK(*maker.window_result() >= maker.guaranteed_points());
    }
    SUBCASE("lines avoid every earlier point") {
        ParallelLinesMaker maker(10, Rational(1, 10), 1, Schedule::power(1.0));
        auto s = board("standard", 10, Rational(1, 2), {{3, 4}, {-20, 1}});
        Rng rng(1);
        s.apply_maker(maker.move({s, 6, 6, rng}));
        for (const auto& line : maker.plan().lines) {
            CHECK(!on_line(line, {3, 4}));
            CHECK(!on_line(line, {-20, 1}));
        }
    }
    SUBCASE("infeasible window") {
        CHECK_THROWS_AS(ParallelLinesMaker(4, Rational(1, 2), 1, Schedule::power(1.0)), ConfigError);
    }
    SUBCASE("plan budget") {
        CHECK(ParallelLinesMaker::plan_budget(1.44, 512) == 9);
        CHECK(ParallelLinesMaker::plan_budget(0, 512) == 0);
    }
}

TEST_CASE("parallel-lines keeps its guarantee against Breakers within the plan budget") {
    const int n = 64;
    const Rational eps(1, 4);
    const std::int64_t b = 1;
    const Schedule m = Schedule::power(1.0);
    auto run = [&](BreakerStrategy& breaker) {
        ParallelLinesMaker maker(n, eps, b, m);
        GameState s(parse_variant("standard", n, eps));
        Rng rm(1, 1), rb(1, 2);
        for (std::int64_t t = 1; t <= maker.plan().t1; ++t) {
            s.apply_maker(maker.move({s, t, m(t), rm}));
            if (s.maker_has_won()) break;
            s.apply_breaker(breaker.move({s, t, b, rb}));
        }
        if (s.maker_has_won() && !maker.window_result()) return;
        REQUIRE(maker.window_result());
        CHECK(*maker.window_result() >= maker.guaranteed_points());
    };
    SplitTopBreaker split(Rational(1, 4));
    RandomBreaker random;
    LineTargetBreaker target;
    run(split);
    run(random);
    run(target);
}

TEST_CASE("random and idle Breakers") {
    const auto s = board("standard", 5, Rational(1, 2), row({0, 1, 2}), row({3}));
    RandomBreaker r;
    Rng a(5), b(5);
    const auto m1 = r.move({s, 1, 6, a});
    const auto m2 = r.move({s, 1, 6, b});
    CHECK(m1 == m2);
    CHECK(m1.size() == 6);
    std::set<GridPoint> seen;
    for (const auto& m : m1) {
        CHECK(s.breaker_may_mark(m));
        CHECK(seen.insert(m.point).second);
        CHECK(m.point.x >= -5);
        CHECK(m.point.x <= 7);
        CHECK(std::abs(m.point.y) <= 5);
    }
    IdleBreaker idle;
    CHECK(idle.move({s, 1, 6, a}).empty());
}

TEST_CASE("line-target plays just above the heaviest vertical line") {
    auto s = board("standard", 6, Rational(1, 2), {{0, 0}, {0, 1}, {0, 2}, {5, 0}, {5, 1}});
    Rng rng(1);
    LineTargetBreaker b;
    const auto move = b.move({s, 1, 1, rng});
    REQUIRE(move.size() == 1);
    CHECK(move[0].point == GridPoint{0, 3});
}

TEST_CASE("rectangle Maker") {
    const auto plan = rectangle_plan(4, 0.5);
    CHECK(plan.T == 4);
    CHECK(plan.budget == 7);
    CHECK(plan.height == 1);
    CHECK(maker_rectangle_batched(4, 0.5) == row({0, 1, 2, 3}));
    const auto big = rectangle_plan(64, 0.5);
    CHECK(big.T == 1024);
    CHECK(big.height == big.budget / 64);
    CHECK_THROWS_AS(maker_rectangle_batched(4, 1.0), ConfigError);
}

TEST_CASE("grid Maker") {
    const auto pts = maker_grid_batched(10);
    CHECK(pts.size() == 10);
    CHECK(pts.back() == GridPoint{1, 2});
    CHECK(maker_grid_batched(0).empty());
}

TEST_CASE("batched split") {
    std::vector<GridPoint> grid;
    for (Coord x = 0; x < 3; ++x)
        for (Coord y = 0; y < 3; ++y) grid.push_back({x, y});
    SUBCASE("3x3 grid with generous budget") {
        const auto pts = breaker_batched_split(grid, Rational(1, 2), 6, 100);
        for (const auto& g : kernels::rich_line_groups(grid, 3)) {
            CHECK(std::any_of(pts.begin(), pts.end(), [&](GridPoint p) { return on_line(g.line, p); }));
        }
        CHECK(surviving_runs(grid, undirected(pts), false, 3).empty());
    }
    SUBCASE("nothing rich") {
        const std::vector<GridPoint> two{{0, 0}, {5, 1}};
        CHECK(breaker_batched_split(two, Rational(1, 2), 6, 0).empty());
    }
    SUBCASE("budget 0 with a rich line") {
        CHECK_THROWS_AS(breaker_batched_split(row({0, 1, 2}), Rational(1, 2), 6, 0), BudgetExceededError);
    }
}

TEST_CASE("batched random") {
    SUBCASE("clamped probability takes every point") {
        Rng rng(3);
        const auto maker = row({0, 1, 2, 3});
        const auto out = breaker_batched_random(maker, Rational(1, 2), 0.5, 4, rng, 10);
        CHECK(out.probability == 1.0);
        CHECK(as_set(out.points) == as_set(maker));
    }
    SUBCASE("no rich run") {
        Rng rng(3);
        const std::vector<GridPoint> maker{{0, 0}, {10, 3}};
        const auto out = breaker_batched_random(maker, Rational(1, 2), 0.5, 10000, rng, 10);
        CHECK(out.attempts >= 1);
        CHECK(static_cast<double>(out.points.size()) <= out.size_bound);
    }
}

TEST_CASE("strategies are deterministic in seed and history") {
    const auto s = board("standard", 8, Rational(1, 2), row({0, 1, 2, 3, 4}), row({9}));
    for (int seed = 0; seed < 5; ++seed) {
        Rng a(seed), b(seed);
        GreedyMaker g1, g2;
        CHECK(g1.move({s, 3, 4, a}) == g2.move({s, 3, 4, b}));
        SplitTopBreaker s1(Rational(1, 2)), s2(Rational(1, 2));
        CHECK(s1.move({s, 3, 4, a}) == s2.move({s, 3, 4, b}));
        RandomBreaker r1, r2;
        CHECK(r1.move({s, 3, 4, a}) == r2.move({s, 3, 4, b}));
    }
}
