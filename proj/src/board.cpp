#include "nrow/board.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "nrow/errors.hpp"
#include "nrow/kernels.hpp"

namespace nrow {

std::string GameMode::variant_name() const {
    if (batched) return directed ? "batched-directed" : "batched";
    return directed ? "directed" : "standard";
}

void GameMode::validate() const {
    if (n < 2) throw ConfigError("n must be at least 2");
    if (epsilon.num() <= 0 || epsilon.num() >= epsilon.den())
        throw ConfigError("epsilon must lie in (0,1), got " + epsilon.to_string());
    if (split_threshold() < 2)
        throw ConfigError("ceil(epsilon*n) must be at least 2, got " +
                          std::to_string(split_threshold()));
}

GameMode parse_variant(const std::string& name, int n, Rational epsilon) {
    GameMode mode;
    mode.n = n;
    mode.epsilon = epsilon;
    if (name == "standard") {
    } else if (name == "directed") {
        mode.directed = true;
    } else if (name == "batched") {
        mode.batched = true;
    } else if (name == "batched-directed") {
        mode.batched = true;
        mode.directed = true;
    } else {
        throw ConfigError("unknown game variant '" + name + "'");
    }
    return mode;
}

const char* to_string(Player p) { return p == Player::maker ? "maker" : "breaker"; }

bool blocks(const BreakerMark& mark, const LineKey& line) {
    if (!on_line(line, mark.point)) throw std::invalid_argument("mark is not on the line");
    return !mark.dir || *mark.dir == line.dir;
}

GameState::GameState(GameMode mode) : mode_(mode) { mode_.validate(); }

bool GameState::has_mark(const BreakerMark& mark) const {
    auto it = marks_at_.find(mark.point);
    if (it == marks_at_.end()) return false;
    if (!mark.dir) return it->second.undirected;
    const auto& dirs = it->second.dirs;
    return std::find(dirs.begin(), dirs.end(), *mark.dir) != dirs.end();
}

bool GameState::maker_may_claim(GridPoint p) const {
    if (!in_coordinate_range(p) || is_maker(p)) return false;
    if (!has_breaker_mark(p)) return true;
    return mode_.directed && !mode_.directed_marks_occupy;
}

bool GameState::breaker_may_mark(const BreakerMark& mark) const {
    if (!in_coordinate_range(mark.point)) return false;
    if (mode_.directed != mark.dir.has_value()) return false;
    if (mark.dir && (*mark.dir == Direction{0, 0} ||
                      canonical_direction(mark.dir->dx, mark.dir->dy) != *mark.dir))
        return false;
    if (!mode_.batched && is_maker(mark.point)) return false;
    return !has_mark(mark);
}

bool GameState::point_blocks_line(GridPoint p, const LineKey& line) const {
    auto it = marks_at_.find(p);
    if (it == marks_at_.end() || !on_line(line, p)) return false;
    if (it->second.undirected) return true;
    const auto& dirs = it->second.dirs;
    return std::find(dirs.begin(), dirs.end(), line.dir) != dirs.end();
}

void GameState::apply_maker(std::span<const GridPoint> points) {
    std::unordered_set<GridPoint, GridPointHash> seen;
    for (const auto& p : points) {
        if (!in_coordinate_range(p)) throw IllegalMoveError("Maker point out of range", p.x, p.y);
        if (!seen.insert(p).second) throw IllegalMoveError("duplicate point in Maker move", p.x, p.y);
        if (is_maker(p)) throw IllegalMoveError("point already claimed by Maker", p.x, p.y);
        if (!maker_may_claim(p)) throw IllegalMoveError("point already claimed by Breaker", p.x, p.y);
    }
    for (const auto& p : points) {
        maker_points_.push_back(p);
        maker_set_.insert(p);
        if (!maker_bounds_) {
            maker_bounds_ = Bounds{p.x, p.y, p.x, p.y};
        } else {
            maker_bounds_->min_x = std::min(maker_bounds_->min_x, p.x);
            maker_bounds_->min_y = std::min(maker_bounds_->min_y, p.y);
            maker_bounds_->max_x = std::max(maker_bounds_->max_x, p.x);
            maker_bounds_->max_y = std::max(maker_bounds_->max_y, p.y);
        }
        max_abs_ = std::max({max_abs_, std::abs(p.x), std::abs(p.y)});
    }
}

void GameState::apply_breaker(std::span<const BreakerMark> marks) {
    std::set<BreakerMark> seen;
    for (const auto& m : marks) {
        const auto& p = m.point;
        if (!in_coordinate_range(p)) throw IllegalMoveError("Breaker point out of range", p.x, p.y);
        if (mode_.directed && !m.dir)
            throw IllegalMoveError("directed game requires a direction", p.x, p.y);
        if (!mode_.directed && m.dir)
            throw IllegalMoveError("direction given in an undirected game", p.x, p.y);
        if (m.dir && (*m.dir == Direction{0, 0} ||
                      canonical_direction(m.dir->dx, m.dir->dy) != *m.dir))
            throw IllegalMoveError("direction is not canonical", p.x, p.y);
        if (!seen.insert(m).second) throw IllegalMoveError("duplicate mark in Breaker move", p.x, p.y);
        if (!mode_.batched && is_maker(p))
            throw IllegalMoveError("point already claimed by Maker", p.x, p.y);
        if (has_mark(m)) throw IllegalMoveError("point already claimed by Breaker", p.x, p.y);
    }
    for (const auto& m : marks) {
        breaker_marks_.push_back(m);
        auto& entry = marks_at_[m.point];
        if (m.dir) {
            entry.dirs.push_back(*m.dir);
            directed_lines_[line_through(m.point, *m.dir)].push_back(
                line_param(line_through(m.point, *m.dir), m.point));
        } else {
            entry.undirected = true;
            undirected_points_.push_back(m.point);
        }
        max_abs_ = std::max({max_abs_, std::abs(m.point.x), std::abs(m.point.y)});
    }
}

std::vector<Coord> GameState::maker_params_on(const LineKey& line) const {
    std::vector<Coord> out;
    for (const auto& p : maker_points_)
        if (on_line(line, p)) out.push_back(line_param(line, p));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Coord> GameState::blocking_params_on(const LineKey& line) const {
    std::vector<Coord> out;
    for (const auto& p : undirected_points_)
        if (on_line(line, p)) out.push_back(line_param(line, p));
    if (auto it = directed_lines_.find(line); it != directed_lines_.end())
        out.insert(out.end(), it->second.begin(), it->second.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Segment> GameState::split_line(const LineKey& line, std::span<const Coord> maker,
                                            std::vector<Coord> blocking,
                                            std::int64_t min_count) const {
    std::sort(blocking.begin(), blocking.end());
    blocking.erase(std::unique(blocking.begin(), blocking.end()), blocking.end());
    std::vector<Segment> out;
    std::size_t mi = 0;
    for (std::size_t j = 0; j <= blocking.size(); ++j) {
        Segment seg;
        seg.line = line;
        if (j > 0) seg.lo = blocking[j - 1];
        if (j < blocking.size()) seg.hi = blocking[j];
        while (mi < maker.size() && seg.lo && maker[mi] <= *seg.lo) ++mi;
        while (mi < maker.size() && (!seg.hi || maker[mi] < *seg.hi)) seg.maker_params.push_back(maker[mi++]);
        seg.maker_count = static_cast<std::int64_t>(seg.maker_params.size());
        if (seg.lo && seg.hi) seg.capacity = *seg.hi - *seg.lo - 1;
        if (seg.maker_count >= min_count) out.push_back(std::move(seg));
    }
    return out;
}

std::vector<Segment> GameState::segments_on_line(const LineKey& line) const {
    const auto maker = maker_params_on(line);
    return split_line(line, maker, blocking_params_on(line), 0);
}

// Any current cache at a threshold <= k answers by filtering. Otherwise the
// cache for k is either extended through the new Maker points or rebuilt,
// whichever the cost estimate favours.
std::vector<kernels::LineGroup> GameState::rich_groups(std::int64_t k) const {
    const std::size_t m = maker_points_.size();
    if (k == 2) return kernels::rich_line_groups(maker_points_, 2);

    auto hit = rich_cache_.end();
    for (auto it = rich_cache_.begin(); it != rich_cache_.end() && it->first <= k; ++it) {
        if (it->second.upto == m) hit = it;
    }
    if (hit == rich_cache_.end()) {
        // Refresh the lowest threshold at or below k so one pass serves every query.
        hit = rich_cache_.begin();
        if (hit == rich_cache_.end() || hit->first > k) {
            constexpr std::size_t max_caches = 6;
            if (rich_cache_.size() >= max_caches) rich_cache_.erase(std::prev(rich_cache_.end()));
            hit = rich_cache_.try_emplace(k).first;
        }
        const int base = static_cast<int>(std::min<std::int64_t>(hit->first, INT32_MAX));
        RichCache& cache = hit->second;
        const double fresh = static_cast<double>(m - cache.upto);
        const double extend_cost = fresh * static_cast<double>(m) * std::log2(static_cast<double>(m) + 1);
        if (cache.upto == 0 || kernels::rich_line_cost(maker_points_, base) <= extend_cost) {
            cache.lines.clear();
            for (auto& g : kernels::rich_line_groups(maker_points_, base)) cache.lines.emplace(g.line, std::move(g.params));
        } else {
            const std::span<const GridPoint> added(maker_points_.begin() + static_cast<std::ptrdiff_t>(cache.upto),
                                                   maker_points_.end());
            for (auto& g : kernels::rich_lines_through(maker_points_, added, base)) cache.lines[g.line] = std::move(g.params);
        }
        cache.upto = m;
    }
    std::vector<kernels::LineGroup> out;
    for (const auto& [line, params] : hit->second.lines) {
        if (static_cast<std::int64_t>(params.size()) >= k) out.push_back({line, params});
    }
    return out;
}

std::vector<Segment> GameState::rich_segments(std::int64_t min_count) const {
    if (min_count < 2) throw std::invalid_argument("rich_segments needs min_count >= 2");
    if (static_cast<std::int64_t>(maker_points_.size()) < min_count) return {};
    auto groups = rich_groups(min_count);
    if (groups.empty()) return {};

    std::unordered_map<LineKey, std::size_t, LineKeyHash> index;
    std::vector<Direction> dirs;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        index.emplace(groups[i].line, i);
        dirs.push_back(groups[i].line.dir);
    }
    std::sort(dirs.begin(), dirs.end());
    dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());

    std::vector<std::vector<Coord>> blocking(groups.size());
    for (const auto& p : undirected_points_) {
        for (const auto& d : dirs) {
            const LineKey line = line_through(p, d);
            if (auto it = index.find(line); it != index.end())
                blocking[it->second].push_back(line_param(line, p));
        }
    }
    std::vector<Segment> out;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (auto it = directed_lines_.find(groups[i].line); it != directed_lines_.end())
            blocking[i].insert(blocking[i].end(), it->second.begin(), it->second.end());
        auto segs = split_line(groups[i].line, groups[i].params, std::move(blocking[i]), min_count);
        for (auto& s : segs) out.push_back(std::move(s));
    }
    return out;
}

std::vector<Segment> GameState::active_segments() const {
    auto segs = rich_segments(2);
    std::erase_if(segs, [&](const Segment& s) { return !s.is_active(mode_.n); });
    return segs;
}

std::vector<Segment> GameState::winning_segments() const { return rich_segments(mode_.n); }

LineIndex GameState::line_index() const {
    LineIndex out;
    auto groups = kernels::rich_line_groups(maker_points_, 2);
    for (auto& g : groups) out.emplace(g.line, LineEntry{std::move(g.params), blocking_params_on(g.line)});
    return out;
}

void GameState::audit() const {
    if (maker_set_.size() != maker_points_.size())
        throw InvariantViolation("Maker point set and log disagree");
    for (const auto& p : maker_points_)
        if (!maker_set_.contains(p)) throw InvariantViolation("Maker point missing from set");

    std::unordered_map<GridPoint, Marks, GridPointHash> marks;
    std::unordered_map<LineKey, std::vector<Coord>, LineKeyHash> directed;
    std::size_t undirected = 0;
    for (const auto& m : breaker_marks_) {
        if (m.dir.has_value() != mode_.directed) throw InvariantViolation("mark kind does not match mode");
        if (!mode_.batched && maker_set_.contains(m.point))
            throw InvariantViolation("point owned by both players");
        auto& e = marks[m.point];
        if (m.dir) {
            e.dirs.push_back(*m.dir);
            const LineKey line = line_through(m.point, *m.dir);
            directed[line].push_back(line_param(line, m.point));
        } else {
            if (e.undirected) throw InvariantViolation("point marked twice");
            e.undirected = true;
            ++undirected;
        }
    }
    if (undirected != undirected_points_.size()) throw InvariantViolation("undirected mark list disagrees");
    if (marks.size() != marks_at_.size()) throw InvariantViolation("mark lookup disagrees with log");
    for (const auto& [p, e] : marks) {
        auto it = marks_at_.find(p);
        if (it == marks_at_.end() || it->second.undirected != e.undirected || it->second.dirs != e.dirs)
            throw InvariantViolation("mark lookup disagrees with log");
    }
    if (directed != directed_lines_) throw InvariantViolation("directed line lookup disagrees with log");
    if (line_index() != rebuild_line_index_reference(*this))
        throw InvariantViolation("per-line index disagrees with a from-scratch rebuild");
}

GameState new_game(const GameMode& mode) { return GameState(mode); }

GameState apply_move(GameState state, Player player, std::span<const BreakerMark> claims) {
    if (player == Player::maker) {
        std::vector<GridPoint> pts;
        pts.reserve(claims.size());
        for (const auto& c : claims) {
            if (c.dir) throw IllegalMoveError("Maker points carry no direction", c.point.x, c.point.y);
            pts.push_back(c.point);
        }
        state.apply_maker(pts);
    } else {
        state.apply_breaker(claims);
    }
    return state;
}

LineIndex rebuild_line_index_reference(const GameState& state) {
    LineIndex out;
    for (auto& g : kernels::rich_line_groups_serial(state.maker_points(), 2)) {
        LineEntry entry;
        entry.maker = std::move(g.params);
        for (const auto& m : state.breaker_marks())
            if (on_line(g.line, m.point) && blocks(m, g.line))
                entry.blocking.push_back(line_param(g.line, m.point));
        std::sort(entry.blocking.begin(), entry.blocking.end());
        entry.blocking.erase(std::unique(entry.blocking.begin(), entry.blocking.end()), entry.blocking.end());
        out.emplace(g.line, std::move(entry));
    }
    return out;
}

} // namespace nrow
