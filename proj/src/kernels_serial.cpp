// Serial reference implementations. Kept simple and independent of the
// OpenMP kernels so that tests can cross-check them.

#include <algorithm>
#include <unordered_map>

#include "nrow/kernels.hpp"

namespace nrow::kernels {

std::vector<LineGroup> rich_line_groups_serial(std::span<const GridPoint> points, int k) {
    std::vector<GridPoint> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::unordered_map<LineKey, std::vector<std::size_t>, LineKeyHash> by_line;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            auto& members = by_line[line_key(pts[i], pts[j])];
            members.push_back(i);
            members.push_back(j);
        }
    }

    std::vector<LineGroup> out;
    for (auto& [line, members] : by_line) {
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        if (members.size() < static_cast<std::size_t>(k)) continue;
        LineGroup g{line, {}};
        for (auto idx : members) g.params.push_back(line_param(line, pts[idx]));
        std::sort(g.params.begin(), g.params.end());
        out.push_back(std::move(g));
    }
    std::sort(out.begin(), out.end(), [](const LineGroup& a, const LineGroup& b) { return a.line < b.line; });
    return out;
}

std::vector<LineGroup> rich_lines_through_serial(std::span<const GridPoint> points,
                                                 std::span<const GridPoint> fresh, int k) {
    std::vector<LineGroup> out;
    for (auto& g : rich_line_groups_serial(points, k)) {
        const bool hit = std::any_of(fresh.begin(), fresh.end(), [&](const GridPoint& p) { return on_line(g.line, p); });
        if (hit) out.push_back(std::move(g));
    }
    return out;
}

std::vector<std::int64_t> interval_counts_serial(std::span<const GridPoint> points,
                                                 std::span<const LineInterval> intervals) {
    std::vector<GridPoint> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::vector<std::int64_t> counts;
    counts.reserve(intervals.size());
    for (const auto& iv : intervals) {
        std::int64_t n = 0;
        for (const auto& p : pts) {
            if (!on_line(iv.line, p)) continue;
            const Coord k = line_param(iv.line, p);
            if ((!iv.lo || k > *iv.lo) && (!iv.hi || k < *iv.hi)) ++n;
        }
        counts.push_back(n);
    }
    return counts;
}

} // namespace nrow::kernels
