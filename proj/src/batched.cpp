#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "nrow/errors.hpp"
#include "nrow/strategies.hpp"

namespace nrow {

namespace {

GameState batched_state(std::span<const GridPoint> maker, bool directed, int n, Rational eps) {
    GameMode mode;
    mode.n = n;
    mode.epsilon = eps;
    mode.batched = true;
    mode.directed = directed;
    GameState state(mode);
    state.apply_maker(maker);
    return state;
}

bool richer(const Segment& a, const Segment& b) {
    if (a.maker_count != b.maker_count) return a.maker_count > b.maker_count;
    if (a.line != b.line) return a.line < b.line;
    if (a.lo.has_value() != b.lo.has_value()) return !a.lo.has_value();
    return a.lo.value_or(0) < b.lo.value_or(0);
}

} // namespace

std::vector<Segment> surviving_runs(std::span<const GridPoint> maker, std::span<const BreakerMark> marks,
                                    bool directed, std::int64_t min_count) {
    if (min_count < 2) throw ConfigError("run threshold must be at least 2");
    GameState state = batched_state(maker, directed, static_cast<int>(std::max<std::int64_t>(4, min_count)),
                                    Rational(1, 2));
    state.apply_breaker(marks);
    return state.rich_segments(min_count);
}

std::vector<GridPoint> breaker_batched_split(std::span<const GridPoint> maker, Rational eps, int n,
                                             std::int64_t budget) {
    const GameState state = batched_state(maker, false, n, eps);
    std::vector<GridPoint> out;
    std::unordered_set<GridPoint, GridPointHash> used;
    for (const auto& run : state.rich_segments(eps.ceil_times(n))) {
        for (auto p : eps_split(state, run, eps, n))
            if (used.insert(p).second) out.push_back(p);
    }
    if (static_cast<std::int64_t>(out.size()) > budget)
        throw BudgetExceededError(static_cast<std::int64_t>(out.size()), budget);
    return out;
}

RandomSplitOutcome breaker_batched_random(std::span<const GridPoint> maker, Rational eps, double alpha,
                                          std::int64_t T, Rng& rng, int max_retries) {
    if (!(alpha > 0 && alpha < 1)) throw ConfigError("batched-random Breaker needs 0 < alpha < 1");
    if (T < 2) throw ConfigError("batched-random Breaker needs T >= 2");
    if (max_retries < 1) throw ConfigError("max_retries must be >= 1");
    RandomSplitOutcome res;
    const double e = eps.value();
    const double t_alpha = std::pow(static_cast<double>(T), alpha);
    const double lnT = std::log(static_cast<double>(T));
    res.probability = std::min(1.0, 2.0 * lnT / (e * t_alpha));
    res.threshold = std::max<std::int64_t>(2, snapped_ceil(e * t_alpha));
    res.size_bound = 2.0 / e * static_cast<double>(T) * lnT;

    int failed_cover = 0, failed_size = 0;
    for (int attempt = 1; attempt <= max_retries; ++attempt) {
        std::vector<GridPoint> pick;
        for (auto p : maker)
            if (res.probability >= 1.0 || rng.bernoulli(res.probability)) pick.push_back(p);
        std::sort(pick.begin(), pick.end());
        pick.erase(std::unique(pick.begin(), pick.end()), pick.end());
        if (static_cast<double>(pick.size()) > res.size_bound) {
            ++failed_size;
            continue;
        }
        std::vector<BreakerMark> marks;
        marks.reserve(pick.size());
        for (auto p : pick) marks.push_back({p, std::nullopt});
        if (!surviving_runs(maker, marks, false, res.threshold).empty()) {
            ++failed_cover;
            continue;
        }
        res.points = std::move(pick);
        res.attempts = attempt;
        return res;
    }
    throw SamplingFailureError(failed_cover, failed_size);
}

std::vector<BreakerMark> breaker_batched_greedy_directed(std::span<const GridPoint> maker, Rational eps, int n,
                                                         std::int64_t budget) {
    const GameState state = batched_state(maker, true, n, eps);
    std::vector<Segment> runs = state.rich_segments(eps.ceil_times(n));
    std::sort(runs.begin(), runs.end(), richer);
    std::vector<BreakerMark> out;
    for (const auto& run : runs) {
        const auto pts = eps_split(state, run, eps, n);
        if (static_cast<std::int64_t>(out.size() + pts.size()) > budget) continue;
        for (auto p : pts) out.push_back({p, run.line.dir});
    }
    return out;
}

} // namespace nrow
