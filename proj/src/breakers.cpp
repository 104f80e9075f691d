#include <algorithm>
#include <map>
#include <unordered_set>

#include "nrow/errors.hpp"
#include "nrow/strategies.hpp"

namespace nrow {

namespace {

bool richer(const Segment& a, const Segment& b) {
    if (a.maker_count != b.maker_count) return a.maker_count > b.maker_count;
    if (a.line != b.line) return a.line < b.line;
    if (a.lo.has_value() != b.lo.has_value()) return !a.lo.has_value();
    return a.lo.value_or(0) < b.lo.value_or(0);
}

std::optional<Direction> mark_dir(const GameState& state, const LineKey& line) {
    if (state.mode().directed) return line.dir;
    return std::nullopt;
}

} // namespace

SplitTopBreaker::SplitTopBreaker(Rational eps) : eps_(eps) {
    if (eps.num() <= 0 || eps.num() >= eps.den()) throw ConfigError("split-top epsilon must lie in (0,1)");
}

std::string SplitTopBreaker::name() const { return "split-top:epsilon=" + eps_.to_string(); }

std::int64_t SplitTopBreaker::targets_for(std::int64_t budget) const {
    return std::max<std::int64_t>(1, Rational(eps_.num(), eps_.den() * 4).floor_times(budget));
}

std::vector<SplitTopBreaker::Target> SplitTopBreaker::plan(const GameState& state, std::int64_t budget) const {
    std::vector<Target> out;
    if (budget <= 0) return out;
    const int n = state.mode().n;
    const Rational half = eps_.halved();
    const std::int64_t q = half.ceil_times(n);
    if (q < 2) throw ConfigError("split-top needs ceil(epsilon*n/2) >= 2");

    std::vector<Segment> segs = state.rich_segments(q);
    std::erase_if(segs, [&](const Segment& s) { return !s.is_active(n); });
    std::sort(segs.begin(), segs.end(), richer);

    const std::int64_t wanted = targets_for(budget);
    std::int64_t remaining = budget;
    std::unordered_set<GridPoint, GridPointHash> used;
    for (const auto& seg : segs) {
        if (static_cast<std::int64_t>(out.size()) >= wanted) break;
        auto pts = eps_split(state, seg, half, n);
        if (!state.mode().directed) std::erase_if(pts, [&](GridPoint p) { return used.contains(p); });
        if (pts.empty() || static_cast<std::int64_t>(pts.size()) > remaining) continue;
        remaining -= static_cast<std::int64_t>(pts.size());
        if (!state.mode().directed) used.insert(pts.begin(), pts.end());
        out.push_back({seg, std::move(pts)});
    }
    return out;
}

std::vector<BreakerMark> SplitTopBreaker::move(const TurnContext& ctx) {
    std::vector<BreakerMark> out;
    for (const auto& target : plan(ctx.state, ctx.budget)) {
        for (auto p : target.points) out.push_back({p, mark_dir(ctx.state, target.segment.line)});
    }
    return out;
}

std::string LineTargetBreaker::name() const {
    return "line-target:dx=" + std::to_string(dir_.dx) + ",dy=" + std::to_string(dir_.dy);
}

std::vector<BreakerMark> LineTargetBreaker::move(const TurnContext& ctx) {
    const GameState& state = ctx.state;
    std::unordered_set<Coord> blocked;
    for (const auto& m : state.breaker_marks()) {
        if (!m.dir || *m.dir == dir_) blocked.insert(line_offset(dir_, m.point));
    }
    struct Heap {
        std::int64_t count = 0;
        Coord top = 0;
    };
    std::map<Coord, Heap> lines;
    for (auto p : state.maker_points()) {
        const Coord c = line_offset(dir_, p);
        if (blocked.contains(c)) continue;
        const Coord param = line_param(LineKey{dir_, c}, p);
        auto [it, fresh] = lines.try_emplace(c, Heap{0, param});
        ++it->second.count;
        it->second.top = std::max(it->second.top, param);
    }
    std::vector<std::pair<Coord, Heap>> order(lines.begin(), lines.end());
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.second.count > b.second.count; });

    std::vector<BreakerMark> out;
    for (const auto& [c, heap] : order) {
        if (static_cast<std::int64_t>(out.size()) >= ctx.budget) break;
        const LineKey line{dir_, c};
        for (Coord v = heap.top + 1;; ++v) {
            BreakerMark m{point_at(line, v), state.mode().directed ? std::optional<Direction>(dir_) : std::nullopt};
            if (state.breaker_may_mark(m)) {
                out.push_back(m);
                break;
            }
        }
    }
    return out;
}

std::vector<BreakerMark> RandomBreaker::move(const TurnContext& ctx) {
    static const Direction kDirs[] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
    const GameState& state = ctx.state;
    const Coord pad = state.mode().n;
    Coord x0 = -pad, x1 = pad, y0 = -pad, y1 = pad;
    if (auto b = state.maker_bounds()) {
        x0 = b->min_x - pad;
        x1 = b->max_x + pad;
        y0 = b->min_y - pad;
        y1 = b->max_y + pad;
    }
    std::vector<BreakerMark> out;
    std::unordered_set<GridPoint, GridPointHash> chosen;
    const std::int64_t attempts = 64 * ctx.budget + 1024;
    for (std::int64_t a = 0; a < attempts && static_cast<std::int64_t>(out.size()) < ctx.budget; ++a) {
        const GridPoint p{ctx.rng.between(x0, x1), ctx.rng.between(y0, y1)};
        BreakerMark m{p, std::nullopt};
        if (state.mode().directed) m.dir = kDirs[ctx.rng.below(4)];
        if (state.is_maker(p) || state.has_breaker_mark(p) || chosen.contains(p)) continue;
        if (!state.breaker_may_mark(m)) continue;
        chosen.insert(p);
        out.push_back(m);
    }
    return out;
}

} // namespace nrow
