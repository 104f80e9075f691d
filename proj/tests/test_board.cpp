#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <tuple>

#include "nrow/board.hpp"
#include "nrow/errors.hpp"
#include "nrow/kernels.hpp"
#include "oracles.hpp"

using namespace nrow;

namespace {

GameMode mode_of(const char* variant, int n, Rational eps = Rational(1, 2)) {
    return parse_variant(variant, n, eps);
}

void maker(GameState& s, std::vector<GridPoint> pts) { s.apply_maker(pts); }

void breaker(GameState& s, std::vector<GridPoint> pts) {
    std::vector<BreakerMark> marks;
    for (auto p : pts) marks.push_back({p, std::nullopt});
    s.apply_breaker(marks);
}

void directed(GameState& s, GridPoint p, Direction d) {
    const BreakerMark m[] = {{p, d}};
    s.apply_breaker(m);
}

const LineKey kRow0 = line_key({0, 0}, {1, 0});

} // namespace

TEST_CASE("new_game validates the mode") {
    CHECK(new_game(mode_of("standard", 5, Rational(1, 4))).maker_points().empty());
    CHECK(new_game(mode_of("directed", 3, Rational(2, 3))).mode().directed);
    CHECK_NOTHROW(new_game(mode_of("standard", 2, Rational::parse("0.9"))));
    CHECK_THROWS_AS(new_game(mode_of("standard", 2, Rational::parse("0.4"))), ConfigError);
    CHECK_THROWS_AS(new_game(mode_of("standard", 1, Rational(1, 2))), ConfigError);
    CHECK_THROWS_AS(new_game(mode_of("standard", 8, Rational(1, 1))), ConfigError);
    CHECK_THROWS_AS(parse_variant("diagonal", 5, Rational(1, 2)), ConfigError);
}

TEST_CASE("apply_move examples") {
    GameState s(mode_of("standard", 5));
    maker(s, {{0, 0}});
    CHECK(s.is_maker({0, 0}));
    CHECK(s.maker_points().size() == 1);
    try {
        breaker(s, {{0, 0}});
        FAIL("expected an illegal move");
    } catch (const IllegalMoveError& e) {
        CHECK(e.x() == 0);
        CHECK(e.y() == 0);
    }
    CHECK(s.breaker_marks().empty());

    GameState d(mode_of("directed", 3, Rational(2, 3)));
    directed(d, {3, 3}, {1, 1});
    directed(d, {3, 3}, {1, 0});
    CHECK(d.breaker_marks().size() == 2);
    CHECK_THROWS_AS(directed(d, {3, 3}, {1, 0}), IllegalMoveError);
    CHECK_THROWS_AS(directed(d, {4, 4}, {2, 0}), IllegalMoveError);
    CHECK_THROWS_AS(breaker(d, {{5, 5}}), IllegalMoveError);
    CHECK_THROWS_AS(maker(d, {{3, 3}}), IllegalMoveError);

    auto free_mode = mode_of("directed", 3, Rational(2, 3));
    free_mode.directed_marks_occupy = false;
    GameState f(free_mode);
    directed(f, {3, 3}, {1, 1});
    CHECK_NOTHROW(maker(f, {{3, 3}}));
    CHECK(f.segments_on_line(line_key({0, 0}, {1, 1})).size() == 2);
}

TEST_CASE("moves are validated before they are committed") {
    GameState s(mode_of("standard", 5));
    CHECK_THROWS_AS(maker(s, {{1, 1}, {2, 2}, {1, 1}}), IllegalMoveError);
    CHECK(s.maker_points().empty());
    breaker(s, {{5, 5}});
    CHECK_THROWS_AS(maker(s, {{1, 1}, {5, 5}}), IllegalMoveError);
    CHECK(s.maker_points().empty());
    CHECK_THROWS_AS(breaker(s, {{5, 5}}), IllegalMoveError);
    CHECK_THROWS_AS(maker(s, {{kCoordLimit, 0}}), IllegalMoveError);
    CHECK_NOTHROW(s.audit());
}

TEST_CASE("functional apply_move leaves the input untouched") {
    const GameState s0(mode_of("standard", 4));
    const BreakerMark claims[] = {{{1, 2}, std::nullopt}};
    const GameState s1 = apply_move(s0, Player::maker, claims);
    CHECK(s0.maker_points().empty());
    CHECK(s1.is_maker({1, 2}));
    const GameState s2 = apply_move(s1, Player::breaker, std::vector<BreakerMark>{{{2, 2}, std::nullopt}});
    CHECK(s2.has_breaker_mark({2, 2}));
    CHECK_THROWS_AS(apply_move(s2, Player::breaker, claims), IllegalMoveError);
}

TEST_CASE("blocks examples") {
    const LineKey diag = line_key({0, 0}, {1, 1});
    CHECK(blocks({{3, 3}, std::nullopt}, diag));
    CHECK_FALSE(blocks({{3, 3}, Direction{1, 0}}, diag));
    CHECK(blocks({{3, 3}, Direction{1, 1}}, diag));
    CHECK_THROWS_AS(blocks({{3, 4}, std::nullopt}, diag), std::invalid_argument);
}

TEST_CASE("segments_on_line examples") {
    GameState s(mode_of("standard", 5));
    breaker(s, {{3, 0}, {10, 0}});
    maker(s, {{4, 0}, {5, 0}, {6, 0}});
    const auto segs = s.segments_on_line(kRow0);
    REQUIRE(segs.size() == 3);
    CHECK(!segs[0].lo);
    CHECK(*segs[0].hi == 3);
    CHECK(!segs[0].capacity);
    CHECK(*segs[1].lo == 3);
    CHECK(*segs[1].hi == 10);
    CHECK(*segs[1].capacity == 6);
    CHECK(segs[1].maker_count == 3);
    CHECK(!segs[2].hi);

    GameState empty(mode_of("standard", 5));
    const auto whole = empty.segments_on_line(kRow0);
    REQUIRE(whole.size() == 1);
    CHECK((!whole[0].lo && !whole[0].hi && !whole[0].capacity));

    GameState d(mode_of("directed", 4));
    maker(d, {{0, 0}, {1, 0}});
    directed(d, {2, 0}, {0, 1});
    CHECK(d.segments_on_line(kRow0).size() == 1);
    directed(d, {2, 0}, {1, 0});
    CHECK(d.segments_on_line(kRow0).size() == 2);
}

TEST_CASE("active_segments examples") {
    GameState s7(mode_of("standard", 7));
    breaker(s7, {{3, 0}, {10, 0}});
    maker(s7, {{4, 0}, {5, 0}, {6, 0}});
    CHECK(s7.active_segments().empty());
    GameState s6(mode_of("standard", 6));
    breaker(s6, {{3, 0}, {10, 0}});
    maker(s6, {{4, 0}, {5, 0}, {6, 0}});
    const auto act = s6.active_segments();
    REQUIRE(act.size() == 1);
    CHECK(*act[0].capacity == 6);
    CHECK(GameState(mode_of("standard", 6)).active_segments().empty());
}

TEST_CASE("winning_segments examples") {
    GameState a(mode_of("standard", 3, Rational(2, 3)));
    maker(a, {{0, 0}, {1, 1}, {2, 2}});
    const auto wa = a.winning_segments();
    REQUIRE(wa.size() == 1);
    CHECK(wa[0].line.dir == Direction{1, 1});
    CHECK(a.maker_has_won());

    GameState b(mode_of("standard", 3, Rational(2, 3)));
    maker(b, {{0, 0}, {2, 2}, {5, 5}});
    breaker(b, {{3, 3}});
    CHECK(b.winning_segments().empty());

    GameState c(mode_of("standard", 3, Rational(2, 3)));
    maker(c, {{0, 0}, {2, 2}, {5, 5}});
    breaker(c, {{6, 6}});
    CHECK(c.winning_segments().size() == 1);
}

TEST_CASE("batched overlap removes the Maker point from every count") {
    GameState s(mode_of("batched", 3, Rational(2, 3)));
    maker(s, {{0, 0}, {1, 0}, {2, 0}, {3, 0}});
    CHECK(s.maker_has_won());
    breaker(s, {{1, 0}});
    CHECK(s.is_maker({1, 0}));
    CHECK(s.winning_segments().empty());
    const auto segs = s.segments_on_line(kRow0);
    REQUIRE(segs.size() == 2);
    CHECK(segs[0].maker_count == 1);
    CHECK(segs[1].maker_count == 2);
}

TEST_CASE("winning_segments matches the brute-force oracle on random boards") {
    std::mt19937_64 gen(2024);
    const char* variants[] = {"standard", "directed", "batched"};
    int wins = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 3 + trial % 3;
        const GameMode mode = mode_of(variants[(trial / 3) % 3], n, Rational(2, 3));
        const GameState s = oracle::random_board(gen, mode);
        std::vector<GridPoint> pts(s.maker_points().begin(), s.maker_points().end());
        std::vector<BreakerMark> marks(s.breaker_marks().begin(), s.breaker_marks().end());
        const auto expect = oracle::brute_wins(pts, marks, n);
        CHECK(oracle::engine_wins(s) == expect);
        wins += !expect.lines.empty();
    }
    CHECK(wins > 100);
}

TEST_CASE("per-line index survives a from-scratch rebuild after every move") {
    std::mt19937_64 gen(99);
    for (const char* variant : {"standard", "directed", "batched"}) {
        const GameMode mode = mode_of(variant, 4);
        GameState s(mode);
        for (int step = 0; step < 60; ++step) {
            GameState next = oracle::random_board(gen, mode, 3, 2, 6);
            std::vector<GridPoint> pts;
            for (auto p : next.maker_points())
                if (s.maker_may_claim(p)) pts.push_back(p);
            s.apply_maker(pts);
            std::vector<BreakerMark> marks;
            for (auto m : next.breaker_marks())
                if (s.breaker_may_mark(m) && std::find(marks.begin(), marks.end(), m) == marks.end())
                    marks.push_back(m);
            s.apply_breaker(marks);
            REQUIRE_NOTHROW(s.audit());
            CHECK(s.line_index() == rebuild_line_index_reference(s));
        }
        if (!mode.batched) {
            for (auto m : s.breaker_marks()) CHECK_FALSE(s.is_maker(m.point));
        }
    }
}

TEST_CASE("rich_segments stays exact as the board grows") {
    std::mt19937_64 gen(31);
    for (const char* variant : {"standard", "batched"}) {
        const GameMode mode = mode_of(variant, 4);
        GameState s(mode);
        for (int step = 0; step < 40; ++step) {
            GameState next = oracle::random_board(gen, mode, 4, 2, 7);
            std::vector<GridPoint> pts;
            for (auto p : next.maker_points())
                if (s.maker_may_claim(p)) pts.push_back(p);
            s.apply_maker(pts);
            const std::int64_t k = 3 + (step * 7) % 4;
            std::vector<std::tuple<LineKey, std::optional<Coord>, std::int64_t>> expect, got;
            for (const auto& g : kernels::rich_line_groups_serial(s.maker_points(), static_cast<int>(k))) {
                for (const auto& seg : s.segments_on_line(g.line))
                    if (seg.maker_count >= k) expect.emplace_back(seg.line, seg.lo, seg.maker_count);
            }
            for (const auto& seg : s.rich_segments(k)) got.emplace_back(seg.line, seg.lo, seg.maker_count);
            std::sort(expect.begin(), expect.end());
            std::sort(got.begin(), got.end());
            CHECK(got == expect);
        }
    }
}

TEST_CASE("segments tile each line") {
    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 300; ++trial) {
        const GameMode mode = mode_of(trial % 2 ? "directed" : "standard", 4);
        const GameState s = oracle::random_board(gen, mode, 25, 15, 5);
        for (const auto& [line, entry] : s.line_index()) {
            const auto segs = s.segments_on_line(line);
            REQUIRE(segs.size() == entry.blocking.size() + 1);
            CHECK(!segs.front().lo);
            CHECK(!segs.back().hi);
            std::int64_t makers = 0;
            for (std::size_t i = 0; i < segs.size(); ++i) {
                makers += segs[i].maker_count;
                CHECK(segs[i].maker_count <= segs[i].capacity.value_or(INT64_MAX));
                if (i > 0) CHECK(segs[i].lo == segs[i - 1].hi);
                if (segs[i].lo && segs[i].hi) {
                    CHECK(*segs[i].lo < *segs[i].hi);
                    CHECK(*segs[i].capacity == *segs[i].hi - *segs[i].lo - 1);
                }
            }
            CHECK(makers == static_cast<std::int64_t>(entry.maker.size()));
        }
    }
}
