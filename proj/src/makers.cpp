#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "nrow/errors.hpp"
#include "nrow/strategies.hpp"

namespace nrow {

namespace {

using PointSet = std::unordered_set<GridPoint, GridPointHash>;

// Richest first, then shortest step.
bool richer(const Segment& a, const Segment& b) {
    if (a.maker_count != b.maker_count) return a.maker_count > b.maker_count;
    const Coord na = a.line.dir.dx * a.line.dir.dx + a.line.dir.dy * a.line.dir.dy;
    const Coord nb = b.line.dir.dx * b.line.dir.dx + b.line.dir.dy * b.line.dir.dy;
    if (na != nb) return na < nb;
    if (a.line != b.line) return a.line < b.line;
    if (a.lo.has_value() != b.lo.has_value()) return !a.lo.has_value();
    return a.lo.value_or(0) < b.lo.value_or(0);
}

bool take(const GameState& state, GridPoint p, PointSet& chosen, std::vector<GridPoint>& out) {
    if (!state.maker_may_claim(p) || chosen.contains(p)) return false;
    chosen.insert(p);
    out.push_back(p);
    return true;
}

// Upward past the top Maker point, then downward, then interior gaps.
void extend_segment(const GameState& state, const Segment& seg, std::int64_t budget, PointSet& chosen,
                    std::vector<GridPoint>& out) {
    const auto& P = seg.maker_params;
    if (P.empty()) return;
    const std::size_t goal = out.size() + static_cast<std::size_t>(budget);
    for (Coord v = P.back() + 1; out.size() < goal && (!seg.hi || v < *seg.hi); ++v)
        take(state, point_at(seg.line, v), chosen, out);
    for (Coord v = P.front() - 1; out.size() < goal && (!seg.lo || v > *seg.lo); --v)
        take(state, point_at(seg.line, v), chosen, out);
    for (std::size_t i = 0; i + 1 < P.size() && out.size() < goal; ++i) {
        for (Coord v = P[i] + 1; v < P[i + 1] && out.size() < goal; ++v)
            take(state, point_at(seg.line, v), chosen, out);
    }
}

} // namespace

std::vector<GridPoint> GreedyMaker::move(const TurnContext& ctx) {
    const GameState& state = ctx.state;
    const int n = state.mode().n;
    std::vector<GridPoint> out;
    if (ctx.budget <= 0) return out;
    PointSet chosen;

    // The horizontal line through the newest point is always a candidate,
    // so a fresh row keeps growing even before it becomes rich.
    std::vector<Segment> extra;
    if (!state.maker_points().empty()) {
        const GridPoint last = state.maker_points().back();
        const LineKey row = line_through(last, {1, 0});
        const Coord at = line_param(row, last);
        for (auto& seg : state.segments_on_line(row)) {
            if ((!seg.lo || *seg.lo < at) && (!seg.hi || at < *seg.hi) && seg.is_active(n))
                extra.push_back(std::move(seg));
        }
    }

    const std::int64_t floor_k = std::max<std::int64_t>(2, (n + 15) / 16);
    std::vector<Segment> tried;
    auto seen = [&](const Segment& s) {
        return std::any_of(tried.begin(), tried.end(), [&](const Segment& t) { return t.same_span(s); });
    };
    for (std::int64_t k = std::max<std::int64_t>(floor_k, n - 1);; k = std::max(floor_k, k / 2)) {
        std::vector<Segment> level;
        if (static_cast<std::int64_t>(state.maker_points().size()) >= k) level = state.rich_segments(k);
        std::erase_if(level, [&](const Segment& s) { return !s.is_active(n); });
        for (auto it = extra.begin(); it != extra.end();) {
            if (it->maker_count >= k) {
                level.push_back(std::move(*it));
                it = extra.erase(it);
            } else {
                ++it;
            }
        }
        std::sort(level.begin(), level.end(), richer);
        for (const auto& seg : level) {
            if (static_cast<std::int64_t>(out.size()) >= ctx.budget) break;
            if (seen(seg)) continue;
            tried.push_back(seg);
            extend_segment(state, seg, ctx.budget - static_cast<std::int64_t>(out.size()), chosen, out);
        }
        if (static_cast<std::int64_t>(out.size()) >= ctx.budget || k == floor_k) break;
    }
    for (const auto& seg : extra) {
        if (static_cast<std::int64_t>(out.size()) >= ctx.budget) break;
        extend_segment(state, seg, ctx.budget - static_cast<std::int64_t>(out.size()), chosen, out);
    }

    // Fresh points continue the x-axis to the right of every Maker point.
    if (static_cast<std::int64_t>(out.size()) < ctx.budget) {
        Coord x = 0;
        if (!state.empty() || !out.empty()) {
            Coord right = INT64_MIN;
            for (auto p : state.maker_points()) right = std::max(right, p.x);
            for (auto p : out) right = std::max(right, p.x);
            x = right + 1;
        }
        for (; static_cast<std::int64_t>(out.size()) < ctx.budget; ++x) take(state, {x, 0}, chosen, out);
    }
    return out;
}

std::int64_t ParallelLinesPlan::live_count() const {
    return std::count(live.begin(), live.end(), char{1});
}

ParallelLinesMaker::ParallelLinesMaker(int n, Rational eps, std::int64_t b_plan, Schedule m)
    : n_(n), eps_(eps), m_(std::move(m)) {
    if (n < 2) throw ConfigError("parallel-lines needs n >= 2");
    if (eps.num() <= 0 || eps.num() >= eps.den()) throw ConfigError("parallel-lines epsilon must lie in (0,1)");
    if (b_plan < 0) throw ConfigError("parallel-lines Breaker allowance must be >= 0");
    // t1: first t with m(t) > (1 - eps) n, exactly.
    const std::int64_t limit = 100000000;
    auto beats = [&](std::int64_t t) {
        return static_cast<__int128>(m_(t)) * eps.den() > static_cast<__int128>(eps.den() - eps.num()) * n;
    };
    std::int64_t hi = 1;
    while (!beats(hi)) {
        if (hi > limit) throw ConfigError("Maker's schedule never exceeds (1-epsilon)n");
        hi *= 2;
    }
    std::int64_t lo = hi / 2 + 1;
    if (hi == 1) lo = 1;
    while (lo < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (beats(mid)) hi = mid;
        else lo = mid + 1;
    }
    plan_.t1 = lo;
    std::int64_t r = 1;
    while (plan_.t1 - 2 * r >= 1 && 2 * m_(plan_.t1 - 2 * r) > n) r *= 2;
    if (plan_.t1 - r < 1 || 2 * m_(plan_.t1 - r) <= n || r < 2)
        throw ConfigError("parallel-lines plan infeasible: window length r < 2");
    plan_.r = r;
    plan_.t0 = plan_.t1 - r;
    plan_.b = b_plan;
    while ((std::int64_t{1} << plan_.halvings) < r) ++plan_.halvings;
}

std::int64_t ParallelLinesMaker::plan_budget(double C, int n) {
    if (!(C >= 0)) throw ConfigError("parallel-lines C must be >= 0");
    return snapped_ceil(C * std::log(static_cast<double>(n) + 1.0));
}

std::string ParallelLinesMaker::name() const {
    return "parallel-lines:b=" + std::to_string(plan_.b) + ",epsilon=" + eps_.to_string();
}

std::int64_t ParallelLinesMaker::guaranteed_points() const {
    const std::int64_t m = (n_ + 1) / 2;
    return m / (4 * std::max<std::int64_t>(1, plan_.b)) * plan_.halvings;
}

std::vector<std::int64_t> ParallelLinesMaker::round_lengths() const {
    std::vector<std::int64_t> out;
    for (std::int64_t len = plan_.r / 2; len >= 1; len /= 2) out.push_back(len);
    out.push_back(1);
    return out;
}

std::int64_t ParallelLinesMaker::round_target(int round) const {
    if (round > plan_.halvings) return 1;
    return plan_.r * plan_.b / (std::int64_t{1} << round) + 1;
}

void ParallelLinesMaker::initialize(const GameState& state) {
    const std::int64_t count = plan_.r * plan_.b + 1;
    plan_.x0 = state.max_abs_coordinate() + 1;
    std::int64_t window_points = 0;
    for (std::int64_t t = plan_.t0; t < plan_.t1; ++t) window_points += m_(t);
    plan_.stack_height = std::max<std::int64_t>(n_, 4 * window_points);
    for (std::int64_t i = 0; i < count; ++i) {
        plan_.lines.push_back(line_through({plan_.x0 + i, 0}, {0, 1}));
        plan_.base_y.push_back(static_cast<Coord>(splitmix64(static_cast<std::uint64_t>(i)) %
                                                  static_cast<std::uint64_t>(plan_.stack_height)));
        plan_.placed.push_back(0);
        plan_.live.push_back(1);
    }
    next_y_ = plan_.base_y;
    mark_cursor_ = 0;
    plan_.initialized = true;
}

void ParallelLinesMaker::update_liveness(const GameState& state) {
    const auto marks = state.breaker_marks();
    const auto count = static_cast<Coord>(plan_.lines.size());
    for (; mark_cursor_ < marks.size(); ++mark_cursor_) {
        const auto& m = marks[mark_cursor_];
        const Coord i = m.point.x - plan_.x0;
        if (i < 0 || i >= count) continue;
        if (!m.dir || *m.dir == Direction{0, 1}) plan_.live[static_cast<std::size_t>(i)] = 0;
    }
}

void ParallelLinesMaker::apply_artificial_kills(std::int64_t target) {
    for (std::size_t i = plan_.live.size(); i-- > 0 && plan_.live_count() > target;) plan_.live[i] = 0;
}

void ParallelLinesMaker::extend(const GameState& state, std::size_t line, std::int64_t count,
                                std::vector<GridPoint>& out) {
    const Coord x = plan_.x0 + static_cast<Coord>(line);
    while (count > 0) {
        const GridPoint p{x, next_y_[line]++};
        if (!state.maker_may_claim(p)) continue;
        out.push_back(p);
        ++plan_.placed[line];
        --count;
    }
}

std::vector<GridPoint> ParallelLinesMaker::move(const TurnContext& ctx) {
    if (ctx.t < plan_.t0) return {};
    const GameState& state = ctx.state;
    if (!plan_.initialized) initialize(state);
    update_liveness(state);

    int completed = 0;
    std::int64_t end = plan_.t0;
    for (auto len : round_lengths()) {
        end += len;
        if (end <= ctx.t) ++completed;
    }
    while (plan_.phase < completed) apply_artificial_kills(round_target(++plan_.phase));

    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < plan_.live.size(); ++i)
        if (plan_.live[i]) live.push_back(i);

    std::vector<GridPoint> out;
    if (ctx.t < plan_.t1) {
        if (live.empty()) return fallback_.move(ctx);
        std::vector<std::int64_t> share(plan_.live.size(), 0);
        for (std::int64_t j = 0; j < ctx.budget; ++j) ++share[live[(rotor_ + static_cast<std::size_t>(j)) % live.size()]];
        rotor_ = (rotor_ + static_cast<std::size_t>(ctx.budget)) % live.size();
        for (auto i : live) extend(state, i, share[i], out);
        return out;
    }

    if (live.empty()) return fallback_.move(ctx);
    std::size_t best = live.front();
    for (auto i : live)
        if (plan_.placed[i] > plan_.placed[best]) best = i;
    if (!window_result_) window_result_ = plan_.placed[best];
    const std::int64_t need = n_ - plan_.placed[best];
    extend(state, best, std::min(need, ctx.budget), out);
    return out;
}

// ------------------------------------------------------------ batched Maker

RectanglePlan rectangle_plan(int n, double alpha) {
    if (!(alpha > 0 && alpha < 1)) throw ConfigError("rectangle Maker needs 0 < alpha < 1");
    if (n < 2) throw ConfigError("rectangle Maker needs n >= 2");
    RectanglePlan plan;
    plan.T = snapped_ceil(std::pow(n / 2.0, 1.0 / alpha));
    for (std::int64_t t = 1; t <= plan.T; ++t) plan.budget += snapped_ceil(std::pow(static_cast<double>(t), alpha));
    plan.height = plan.budget / n;
    if (plan.height < 1) throw ConfigError("rectangle Maker budget is below n");
    return plan;
}

std::vector<GridPoint> maker_rectangle_batched(int n, double alpha) {
    const RectanglePlan plan = rectangle_plan(n, alpha);
    std::vector<GridPoint> out;
    out.reserve(static_cast<std::size_t>(n * plan.height));
    for (Coord y = 0; y < plan.height; ++y)
        for (Coord x = 0; x < n; ++x) out.push_back({x, y});
    return out;
}

std::vector<GridPoint> maker_grid_batched(std::int64_t budget) {
    if (budget < 0) throw ConfigError("grid Maker budget must be >= 0");
    auto width = static_cast<Coord>(std::ceil(std::sqrt(static_cast<double>(budget))));
    while (width * width < budget) ++width;
    std::vector<GridPoint> out;
    out.reserve(static_cast<std::size_t>(budget));
    for (std::int64_t i = 0; i < budget; ++i) out.push_back({i % width, i / width});
    return out;
}

} // namespace nrow
