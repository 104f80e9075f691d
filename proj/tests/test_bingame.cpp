#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nrow/bingame.hpp"
#include "nrow/errors.hpp"

using namespace nrow;

namespace {

constexpr double kTol = 1e-9;

BinSchedule random_schedule(Rng& rng) {
    const std::int64_t T = rng.between(1, 12);
    std::vector<std::int64_t> b(T);
    std::vector<double> dM(T);
    for (auto& v : b) v = rng.between(0, 3);
    for (auto& v : dM) v = 5 * rng.unit();
    return BinSchedule::make(b, dM);
}

// b(t) >= b(T)/2 for every t, which implies the solo-bin hypothesis.
BinSchedule solo_schedule(Rng& rng) {
    const std::int64_t T = rng.between(1, 12);
    std::vector<std::int64_t> b(T);
    std::vector<double> dM(T);
    const std::int64_t bT = rng.between(1, 4);
    for (auto& v : b) v = rng.between((bT + 1) / 2, 5);
    b.back() = bT;
    for (auto& v : dM) v = 5 * rng.unit();
    return BinSchedule::make(b, dM);
}

} // namespace

TEST_CASE("bin_step examples") {
    const auto sched = BinSchedule::make({1}, {10.0});
    const BinState st = BinState::start(sched);
    CHECK(st.ids.size() == 2);

    SUBCASE("the heavy bin dies") {
        const BinState next = bin_step(st, sched, {{0, 10.0}});
        REQUIRE(next.ids == std::vector<std::int64_t>{1});
        CHECK(next.weights[0] == 0.0);
    }
    SUBCASE("equal spread keeps half") {
        const BinState next = bin_step(st, sched, {{0, 5.0}, {1, 5.0}});
        REQUIRE(next.ids == std::vector<std::int64_t>{1});
        CHECK(next.weights[0] == doctest::Approx(5.0));
    }
    SUBCASE("overspending M(1) on the last turn") {
        try {
            bin_step(st, sched, {{0, 11.0}});
            FAIL("expected a suffix violation");
        } catch (const SuffixBudgetError& e) {
            CHECK(e.failing_s() == 1);
        }
    }
    SUBCASE("bad moves") {
        CHECK_THROWS_AS(bin_step(st, sched, {{7, 1.0}}), std::invalid_argument);
        CHECK_THROWS_AS(bin_step(st, sched, {{0, -1.0}}), std::invalid_argument);
        const BinState done = bin_step(st, sched, {});
        CHECK_THROWS_AS(bin_step(done, sched, {}), std::invalid_argument);
    }
}

TEST_CASE("bin_step checks suffixes ending at T") {
    // M(1) = 1, M(2) = 3: the first turn may spend up to 3 only if the last spends nothing.
    const auto sched = BinSchedule::make({1, 1}, {1.0, 2.0});
    BinState st = BinState::start(sched);
    st = bin_step(st, sched, {{0, 1.5}, {1, 1.5}});
    CHECK_THROWS_AS(bin_step(st, sched, {{st.ids[0], 0.5}}), SuffixBudgetError);
    CHECK_NOTHROW(bin_step(st, sched, {}));
    CHECK_THROWS_AS(bin_step(BinState::start(sched), sched, {{0, 3.5}}), SuffixBudgetError);
}

TEST_CASE("schedule validation") {
    CHECK_THROWS_AS(BinSchedule::make({}, {}), ConfigError);
    CHECK_THROWS_AS(BinSchedule::make({1, 2}, {1.0}), ConfigError);
    CHECK_THROWS_AS(BinSchedule::make({-1}, {1.0}), ConfigError);
    CHECK_THROWS_AS(BinSchedule::make({1}, {-1.0}), ConfigError);
    const auto s = BinSchedule::make({2, 1, 3}, {1.0, 2.0, 4.0});
    CHECK(s.bin_count() == 7);
    CHECK(s.live_after(1) == 5);
    CHECK(s.live_after(3) == 1);
    CHECK(s.M(0) == 0.0);
    CHECK(s.M(2) == 3.0);
    CHECK(s.M(9) == 7.0);
}

TEST_CASE("average_bound examples") {
    CHECK(average_bound({3, 2}, {1, 1}) == doctest::Approx(2.0));
    CHECK(average_bound({10}, {1}) == doctest::Approx(5.0));
    CHECK(average_bound({0, 0, 0}, {2, 1, 1}) == 0.0);
}

TEST_CASE("solo_bound examples") {
    CHECK(solo_bound({4, 4, 4, 4}, {2, 2, 2, 2}) == doctest::Approx(25.0 / 3.0));
    CHECK(solo_bound({6}, {4}) == doctest::Approx(3.0));
    try {
        solo_bound({1, 1, 1}, {0, 0, 4});
        FAIL("expected the hypothesis to fail");
    } catch (const InvalidScheduleError& e) {
        CHECK(e.failing_s() == 1);
    }
    CHECK_THROWS_AS(solo_bound({1}, {0}), InvalidScheduleError);
}

TEST_CASE("solo_bound hypothesis holds for constant b with a factor of two") {
    for (std::int64_t c = 1; c <= 5; ++c) {
        for (std::size_t T = 1; T <= 20; ++T) {
            CHECK_NOTHROW(solo_bound(std::vector<double>(T, 1.0), std::vector<std::int64_t>(T, c)));
        }
    }
}

TEST_CASE("equal_spread_play examples") {
    const auto two = equal_spread_play(BinSchedule::make({1, 1}, {2.0, 3.0}));
    CHECK(two.w == std::vector<double>{3.0, 2.0});
    CHECK(two.final_weight == doctest::Approx(2.0));
    const auto three = equal_spread_play(BinSchedule::make({1, 1, 1}, {1.0, 1.0, 1.0}));
    CHECK(three.final_weight == doctest::Approx(13.0 / 12.0));
    const auto one = equal_spread_play(BinSchedule::make({3}, {8.0}));
    CHECK(one.final_weight == doctest::Approx(2.0));
}

TEST_CASE("validate_play examples") {
    const auto sched = BinSchedule::make({1, 2, 1}, {2.0, 1.0, 3.0});
    CHECK_FALSE(validate_play({0, 0, 0}, sched));
    CHECK(validate_play({0, 0, sched.M(1) + 1}, sched) == 1);
    CHECK(validate_play({7, 0, 0}, sched) == 3);
    CHECK_FALSE(validate_play({6, 0, 0}, sched));
    CHECK_FALSE(validate_play(equal_spread_play(sched).w, sched));
    CHECK(validate_play({7}, sched) == 3);
}

TEST_CASE("random plays stay under average_bound") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto sched = random_schedule(rng);
        const auto play = random_play(sched, rng);
        CHECK_FALSE(validate_play(play.w, sched));
        CHECK(play.final_weight <= average_bound(play.w, sched.b) + kTol);
    }
}

TEST_CASE("plays stay under solo_bound when its hypothesis holds") {
    Rng rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const auto sched = solo_schedule(rng);
        const double bound = solo_bound(sched.dM, sched.b);
        CHECK(random_play(sched, rng).final_weight <= bound + kTol);
        CHECK(equal_spread_play(sched).final_weight <= bound + kTol);
    }
}

TEST_CASE("equal spreading attains average_bound") {
    Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const auto sched = random_schedule(rng);
        const auto play = equal_spread_play(sched);
        CHECK(std::abs(play.final_weight - average_bound(play.w, sched.b)) <= kTol);
    }
}

TEST_CASE("killing the heaviest bins never raises the average") {
    Rng rng(14);
    for (int trial = 0; trial < 200; ++trial) {
        const auto sched = random_schedule(rng);
        for (const auto& turn : random_play(sched, rng).trace) {
            CHECK(turn.average_after_kill <= turn.average_before_kill + kTol);
            CHECK(static_cast<std::int64_t>(turn.killed.size()) == sched.b[turn.turn - 1]);
        }
    }
}

TEST_CASE("ties are killed lowest id first") {
    const auto sched = BinSchedule::make({2, 1}, {0.0, 4.0});
    const BinState next = bin_step(BinState::start(sched), sched, {{0, 1.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}});
    CHECK(next.ids == std::vector<std::int64_t>{2, 3});
}
