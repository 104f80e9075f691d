#include "nrow/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include <omp.h>

namespace nrow::kernels {

namespace {

constexpr Coord kSmallGcd = 1024;

// gcd(a, b) for 0 < a <= kSmallGcd and 0 <= b < a.
const std::vector<std::uint16_t>& small_gcd_table() {
    static const std::vector<std::uint16_t> table = [] {
        std::vector<std::uint16_t> t(static_cast<std::size_t>((kSmallGcd + 1) * kSmallGcd));
        for (Coord a = 1; a <= kSmallGcd; ++a)
            for (Coord b = 0; b < a; ++b) t[static_cast<std::size_t>(a * kSmallGcd + b)] = static_cast<std::uint16_t>(std::gcd(a, b));
        return t;
    }();
    return table;
}

// gcd of two non-negative values, not both zero.
Coord fast_gcd(Coord a, Coord b, const std::vector<std::uint16_t>& table) {
    if (a > b) std::swap(a, b);
    if (a == 0) return b;
    if (a <= kSmallGcd) {
        const Coord r = b <= UINT32_MAX ? static_cast<std::uint32_t>(b) % static_cast<std::uint32_t>(a) : b % a;
        return table[static_cast<std::size_t>(a * kSmallGcd + r)];
    }
    return std::gcd(a, b);
}

Coord floor_div(Coord a, Coord b) {
    Coord q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

Coord param_of(Direction d, GridPoint p) { return d.dx == 0 ? p.y : floor_div(p.x, d.dx); }

std::vector<GridPoint> distinct_sorted(std::span<const GridPoint> points) {
    std::vector<GridPoint> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

struct Box {
    Coord min_x = 0, min_y = 0, width = 0, height = 0;
};

Box bounding_box(std::span<const GridPoint> pts) {
    Box b{pts[0].x, pts[0].y, 0, 0};
    Coord max_x = pts[0].x, max_y = pts[0].y;
    for (const auto& p : pts) {
        b.min_x = std::min(b.min_x, p.x);
        b.min_y = std::min(b.min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    b.width = max_x - b.min_x;
    b.height = max_y - b.min_y;
    return b;
}

// Captures the first exception thrown inside a parallel region.
class ExceptionSlot {
public:
    template <class F>
    void run(F&& f) noexcept {
        try {
            f();
        } catch (...) {
#pragma omp critical(nrow_exception_slot)
            if (!eptr_) eptr_ = std::current_exception();
        }
    }
    void rethrow() const {
        if (eptr_) std::rethrow_exception(eptr_);
    }

private:
    std::exception_ptr eptr_;
};

LineGroup make_group(Direction d, std::span<const GridPoint> pts, std::span<const std::uint32_t> members) {
    LineGroup g;
    g.line = line_through(pts[members.front()], d);
    g.params.reserve(members.size());
    for (auto idx : members) g.params.push_back(param_of(d, pts[idx]));
    std::sort(g.params.begin(), g.params.end());
    return g;
}

std::vector<Direction> sweep_directions(const Box& box, int k) {
    const Coord max_dx = box.width / (k - 1);
    const Coord max_dy = box.height / (k - 1);
    std::vector<Direction> dirs;
    if (max_dy >= 1) dirs.push_back({0, 1});
    for (Coord dx = 1; dx <= max_dx; ++dx) {
        for (Coord dy = -max_dy; dy <= max_dy; ++dy) {
            if (std::gcd(dx, dy) == 1) dirs.push_back({dx, dy});
        }
    }
    return dirs;
}

// Bucket every point by its offset for each candidate direction. A line with
// k points inside the bounding box cannot step further than the box allows,
// so the candidate set is complete.
std::vector<LineGroup> direction_sweep(std::span<const GridPoint> pts, int k) {
    const Box box = bounding_box(pts);
    const std::vector<Direction> dirs = sweep_directions(box, k);
    const std::size_t m = pts.size();
    const std::int64_t dense_limit = std::max<std::int64_t>(4 * static_cast<std::int64_t>(m) + 4096, 1 << 22);

    std::vector<std::pair<Coord, Coord>> rel(m);
    for (std::size_t i = 0; i < m; ++i) rel[i] = {pts[i].x - box.min_x, pts[i].y - box.min_y};

    std::vector<LineGroup> out;
    ExceptionSlot slot;

#pragma omp parallel
    {
        std::vector<LineGroup> local;
        std::vector<std::uint32_t> counts;
        std::vector<Coord> offs(m);
        std::vector<std::pair<Coord, std::uint32_t>> keyed;
        std::vector<std::uint32_t> members;

#pragma omp for schedule(dynamic, 4)
        for (std::size_t di = 0; di < dirs.size(); ++di) {
            slot.run([&] {
                const Direction d = dirs[di];
                const Coord c_min = (d.dy < 0 ? d.dy * box.width : 0) - d.dx * box.height;
                const Coord c_max = d.dy > 0 ? d.dy * box.width : 0;
                const Coord range = c_max - c_min + 1;
                for (std::size_t i = 0; i < m; ++i) offs[i] = d.dy * rel[i].first - d.dx * rel[i].second;

                keyed.clear();
                if (range <= dense_limit) {
                    // The counts stay all zero between directions.
                    if (counts.size() < static_cast<std::size_t>(range)) counts.resize(static_cast<std::size_t>(range), 0);
                    for (std::size_t i = 0; i < m; ++i) ++counts[static_cast<std::size_t>(offs[i] - c_min)];
                    for (std::size_t i = 0; i < m; ++i) {
                        if (counts[static_cast<std::size_t>(offs[i] - c_min)] >= static_cast<std::uint32_t>(k)) {
                            keyed.emplace_back(offs[i], static_cast<std::uint32_t>(i));
                        }
                    }
                    for (std::size_t i = 0; i < m; ++i) counts[static_cast<std::size_t>(offs[i] - c_min)] = 0;
                } else {
                    for (std::size_t i = 0; i < m; ++i) keyed.emplace_back(offs[i], static_cast<std::uint32_t>(i));
                }
                std::sort(keyed.begin(), keyed.end());
                for (std::size_t a = 0; a < keyed.size();) {
                    std::size_t b = a;
                    while (b < keyed.size() && keyed[b].first == keyed[a].first) ++b;
                    if (b - a >= static_cast<std::size_t>(k)) {
                        members.clear();
                        for (std::size_t j = a; j < b; ++j) members.push_back(keyed[j].second);
                        local.push_back(make_group(d, pts, members));
                    }
                    a = b;
                }
            });
        }

#pragma omp critical(nrow_direction_merge)
        for (auto& g : local) out.push_back(std::move(g));
    }
    slot.rethrow();
    return out;
}

// For each anchor i, group the later points by direction; a group is emitted
// only when no earlier point lies on the same line, so every line is
// reported once, from its lexicographically smallest point.
std::vector<LineGroup> anchor_sweep(std::span<const GridPoint> pts, int k) {
    const std::size_t m = pts.size();
    std::vector<LineGroup> out;
    ExceptionSlot slot;

#pragma omp parallel
    {
        std::vector<LineGroup> local;
        std::vector<std::pair<Direction, std::uint32_t>> ahead;
        std::vector<std::pair<Direction, std::vector<std::uint32_t>>> candidates;
        std::vector<char> dropped;
        std::vector<std::uint32_t> members;

#pragma omp for schedule(dynamic, 16)
        for (std::size_t i = 0; i < m; ++i) {
            slot.run([&] {
                ahead.clear();
                candidates.clear();
                const GridPoint p = pts[i];
                for (std::size_t j = i + 1; j < m; ++j) {
                    const Coord dx = pts[j].x - p.x;
                    const Coord dy = pts[j].y - p.y;
                    const Coord g = std::gcd(dx, dy);
                    ahead.push_back({{dx / g, dy / g}, static_cast<std::uint32_t>(j)});
                }
                std::sort(ahead.begin(), ahead.end());
                for (std::size_t a = 0; a < ahead.size();) {
                    std::size_t b = a;
                    while (b < ahead.size() && ahead[b].first == ahead[a].first) ++b;
                    if (b - a + 1 >= static_cast<std::size_t>(k)) {
                        std::vector<std::uint32_t> js;
                        for (std::size_t t = a; t < b; ++t) js.push_back(ahead[t].second);
                        candidates.emplace_back(ahead[a].first, std::move(js));
                    }
                    a = b;
                }
                if (candidates.empty()) return;
                dropped.assign(candidates.size(), 0);
                for (std::size_t j = 0; j < i; ++j) {
                    const Coord dx = p.x - pts[j].x;
                    const Coord dy = p.y - pts[j].y;
                    const Coord g = std::gcd(dx, dy);
                    const Direction d{dx / g, dy / g};
                    auto it = std::lower_bound(candidates.begin(), candidates.end(), d,
                                               [](const auto& c, const Direction& v) { return c.first < v; });
                    if (it != candidates.end() && it->first == d) dropped[it - candidates.begin()] = 1;
                }
                for (std::size_t c = 0; c < candidates.size(); ++c) {
                    if (dropped[c]) continue;
                    members.assign(1, static_cast<std::uint32_t>(i));
                    members.insert(members.end(), candidates[c].second.begin(), candidates[c].second.end());
                    local.push_back(make_group(candidates[c].first, pts, members));
                }
            });
        }

#pragma omp critical(nrow_anchor_merge)
        for (auto& g : local) out.push_back(std::move(g));
    }
    slot.rethrow();
    return out;
}

bool sweep_fits_in_64_bits(const Box& box, int k) {
    const __int128 max_dx = box.width / (k - 1);
    const __int128 max_dy = box.height / (k - 1);
    return max_dy * box.width + max_dx * box.height < (static_cast<__int128>(1) << 62);
}

} // namespace

int max_threads() { return omp_get_max_threads(); }

std::int64_t direction_sweep_size(std::span<const GridPoint> points, int k) {
    if (points.empty() || k < 2) return 0;
    const Box box = bounding_box(points);
    const std::int64_t max_dx = box.width / (k - 1);
    const std::int64_t max_dy = box.height / (k - 1);
    const __int128 n = static_cast<__int128>(max_dx) * (2 * max_dy + 1) + (max_dy >= 1 ? 1 : 0);
    return n > INT64_MAX / 4 ? INT64_MAX / 4 : static_cast<std::int64_t>(n);
}

double rich_line_cost(std::span<const GridPoint> points, int k) {
    if (points.size() < static_cast<std::size_t>(std::max(k, 2))) return 0.0;
    const auto m = static_cast<double>(points.size());
    const auto size = static_cast<double>(direction_sweep_size(points, k));
    if (size <= 4 * m && sweep_fits_in_64_bits(bounding_box(points), k)) return size * m;
    return m * m * std::log2(m + 1);
}

std::vector<LineGroup> rich_line_groups(std::span<const GridPoint> points, int k, RichStrategy strategy) {
    if (k < 2) throw std::invalid_argument("rich-line threshold must be at least 2");
    const std::vector<GridPoint> pts = distinct_sorted(points);
    if (pts.size() < static_cast<std::size_t>(k)) return {};

    if (strategy == RichStrategy::automatic) {
        const auto m = static_cast<std::int64_t>(pts.size());
        const bool cheap = direction_sweep_size(pts, k) <= 4 * m;
        strategy = cheap && sweep_fits_in_64_bits(bounding_box(pts), k) ? RichStrategy::direction_sweep
                                                                         : RichStrategy::anchor_sweep;
    }
    if (strategy == RichStrategy::direction_sweep && !sweep_fits_in_64_bits(bounding_box(pts), k)) {
        throw std::overflow_error("direction sweep offsets exceed 64 bits");
    }

    std::vector<LineGroup> out =
        strategy == RichStrategy::direction_sweep ? direction_sweep(pts, k) : anchor_sweep(pts, k);
    std::sort(out.begin(), out.end(), [](const LineGroup& a, const LineGroup& b) { return a.line < b.line; });
    return out;
}

std::vector<LineGroup> rich_lines_through(std::span<const GridPoint> points, std::span<const GridPoint> fresh,
                                          int k) {
    if (k < 2) throw std::invalid_argument("rich-line threshold must be at least 2");
    const std::vector<GridPoint> pts = distinct_sorted(points);
    const std::vector<GridPoint> news = distinct_sorted(fresh);
    if (pts.size() < static_cast<std::size_t>(k)) return {};

    // A line with k points spans k - 1 primitive steps inside the bounding box.
    Coord min_x = pts.front().x, max_x = min_x, min_y = pts.front().y, max_y = min_y;
    for (const auto& q : pts) {
        min_x = std::min(min_x, q.x);
        max_x = std::max(max_x, q.x);
        min_y = std::min(min_y, q.y);
        max_y = std::max(max_y, q.y);
    }
    const Coord reach_x = (max_x - min_x) / (k - 1), reach_y = (max_y - min_y) / (k - 1);
    const auto& table = small_gcd_table();

    std::vector<LineGroup> out;
    ExceptionSlot slot;

#pragma omp parallel
    {
        std::vector<LineGroup> local;
        std::vector<std::pair<Direction, std::uint32_t>> around;
        std::vector<std::uint32_t> members;

#pragma omp for schedule(dynamic, 4)
        for (std::size_t a = 0; a < news.size(); ++a) {
            slot.run([&] {
                const GridPoint p = news[a];
                const auto self = std::lower_bound(pts.begin(), pts.end(), p);
                if (self == pts.end() || *self != p) throw std::invalid_argument("fresh point missing from points");
                around.clear();
                for (std::size_t j = 0; j < pts.size(); ++j) {
                    if (pts[j] == p) continue;
                    Coord dx = pts[j].x - p.x, dy = pts[j].y - p.y;
                    if (dx < 0 || (dx == 0 && dy < 0)) {
                        dx = -dx;
                        dy = -dy;
                    }
                    const Coord g = fast_gcd(dx, dy < 0 ? -dy : dy, table);
                    dx /= g;
                    dy /= g;
                    if (dx > reach_x || dy > reach_y || -dy > reach_y) continue;
                    around.push_back({Direction{dx, dy}, static_cast<std::uint32_t>(j)});
                }
                std::sort(around.begin(), around.end());
                for (std::size_t lo = 0; lo < around.size();) {
                    std::size_t hi = lo;
                    while (hi < around.size() && around[hi].first == around[lo].first) ++hi;
                    if (hi - lo + 1 >= static_cast<std::size_t>(k)) {
                        members.assign(1, static_cast<std::uint32_t>(self - pts.begin()));
                        for (std::size_t t = lo; t < hi; ++t) members.push_back(around[t].second);
                        local.push_back(make_group(around[lo].first, pts, members));
                    }
                    lo = hi;
                }
            });
        }

#pragma omp critical(nrow_through_merge)
        for (auto& g : local) out.push_back(std::move(g));
    }
    slot.rethrow();
    std::sort(out.begin(), out.end(), [](const LineGroup& a, const LineGroup& b) { return a.line < b.line; });
    out.erase(std::unique(out.begin(), out.end(), [](const LineGroup& a, const LineGroup& b) { return a.line == b.line; }),
              out.end());
    return out;
}

std::vector<std::int64_t> interval_counts(std::span<const GridPoint> points,
                                          std::span<const LineInterval> intervals) {
    // Overlap check: sorted by (line, lo), each interval only needs comparing
    // with the earlier interval reaching furthest along the same line.
    std::vector<std::size_t> order(intervals.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto lo_of = [&](std::size_t i) { return intervals[i].lo; };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (intervals[a].line != intervals[b].line) return intervals[a].line < intervals[b].line;
        const auto la = lo_of(a), lb = lo_of(b);
        if (!la || !lb) return !la && lb.has_value();
        return *la < *lb;
    });
    for (std::size_t r = 1, reach = 0; r < order.size(); ++r) {
        const auto& cur = intervals[order[r]];
        const auto& far = intervals[order[reach]];
        if (cur.line == far.line) {
            // Intersection of the open intervals, as lattice points.
            if (!far.hi && !cur.hi) throw std::invalid_argument("overlapping intervals on one line");
            const Coord upper = std::min(far.hi.value_or(INT64_MAX), cur.hi.value_or(INT64_MAX)) - 1;
            const Coord lower = cur.lo ? *cur.lo + 1 : INT64_MIN;
            if (lower == INT64_MIN || upper - lower + 1 > 1) {
                throw std::invalid_argument("intervals on one line share more than one point");
            }
            if (!cur.hi || (far.hi && *cur.hi > *far.hi)) reach = r;
        } else {
            reach = r;
        }
    }

    std::vector<Direction> dirs;
    for (const auto& iv : intervals) dirs.push_back(iv.line.dir);
    std::sort(dirs.begin(), dirs.end());
    dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());

    std::vector<std::int64_t> counts(intervals.size(), 0);
    ExceptionSlot slot;

#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t di = 0; di < dirs.size(); ++di) {
        slot.run([&] {
            const Direction d = dirs[di];
            std::unordered_map<Coord, std::vector<Coord>> on;
            for (const auto& iv : intervals) {
                if (iv.line.dir == d) on.try_emplace(iv.line.c);
            }
            for (const auto& p : points) {
                auto it = on.find(line_offset(d, p));
                if (it != on.end()) it->second.push_back(param_of(d, p));
            }
            for (auto& [c, params] : on) {
                std::sort(params.begin(), params.end());
                params.erase(std::unique(params.begin(), params.end()), params.end());
            }
            for (std::size_t i = 0; i < intervals.size(); ++i) {
                const auto& iv = intervals[i];
                if (iv.line.dir != d) continue;
                const auto& params = on.at(iv.line.c);
                auto first = iv.lo ? std::upper_bound(params.begin(), params.end(), *iv.lo) : params.begin();
                auto last = iv.hi ? std::lower_bound(params.begin(), params.end(), *iv.hi) : params.end();
                counts[i] = last > first ? last - first : 0;
            }
        });
    }
    slot.rethrow();
    return counts;
}

} // namespace nrow::kernels
