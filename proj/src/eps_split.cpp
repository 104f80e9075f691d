#include <algorithm>
#include <stdexcept>

#include "nrow/strategies.hpp"

namespace nrow {

std::int64_t eps_split_bound(std::int64_t maker_count, Rational eps, int n) {
    const std::int64_t q = eps.ceil_times(n);
    if (q < 2) throw std::invalid_argument("eps_split needs ceil(eps*n) >= 2");
    return 2 * ((maker_count + q - 2) / (q - 1));
}

std::vector<GridPoint> eps_split(const GameState& state, const Segment& seg, Rational eps, int n) {
    const std::int64_t q = eps.ceil_times(n);
    if (q < 2) throw std::invalid_argument("eps_split needs ceil(eps*n) >= 2");
    const bool batched = state.mode().batched;
    if (!batched && seg.maker_count >= n)
        throw std::invalid_argument("segment already holds n Maker points");

    const auto& P = seg.maker_params;
    auto is_maker = [&](Coord v) { return std::binary_search(P.begin(), P.end(), v); };
    auto after = [&](Coord v) {
        return static_cast<std::size_t>(std::upper_bound(P.begin(), P.end(), v) - P.begin());
    };

    std::vector<Coord> params;
    std::optional<Coord> lo = seg.lo;
    std::size_t idx = 0;
    while (P.size() - idx >= static_cast<std::size_t>(q)) {
        const Coord x = P[idx + static_cast<std::size_t>(q) - 2] + 1;
        if (batched || !is_maker(x)) {
            params.push_back(x);
            lo = x;
            idx = after(x);
            continue;
        }
        Coord a = x - 1;
        while (is_maker(a)) --a;
        if (!lo || a > *lo) params.push_back(a);
        Coord c = x + 1;
        while (is_maker(c)) ++c;
        if (seg.hi && c >= *seg.hi) break;
        params.push_back(c);
        lo = c;
        idx = after(c);
    }

    std::vector<GridPoint> out;
    out.reserve(params.size());
    for (Coord v : params) out.push_back(point_at(seg.line, v));
    return out;
}

} // namespace nrow
