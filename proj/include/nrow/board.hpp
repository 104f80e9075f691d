#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "nrow/geometry.hpp"
#include "nrow/kernels.hpp"
#include "nrow/rational.hpp"

namespace nrow {

struct GameMode {
    int n = 5;
    Rational epsilon{1, 4};
    bool directed = false; // Breaker marks carry a direction and block only that direction
    bool batched = false;  // Breaker may claim points Maker already holds
    // Whether a directed mark stops Maker from claiming its lattice point.
    bool directed_marks_occupy = true;

    // ceil(epsilon * n): the Maker count an epsilon-split must push segments under.
    std::int64_t split_threshold() const { return epsilon.ceil_times(n); }
    std::string variant_name() const;
    void validate() const;
};

GameMode parse_variant(const std::string& name, int n, Rational epsilon);

enum class Player { maker, breaker };

const char* to_string(Player p);

struct BreakerMark {
    GridPoint point;
    std::optional<Direction> dir; // present iff the game is directed

    friend auto operator<=>(const BreakerMark&, const BreakerMark&) = default;
};

// Standard and batched marks block every line through their point; directed
// marks only lines parallel to their direction. Throws std::invalid_argument
// if the mark is not on the line.
bool blocks(const BreakerMark& mark, const LineKey& line);

// A maximal run of a line free of blocking Breaker points. lo/hi are the
// exclusive bounding params, nullopt meaning infinity.
struct Segment {
    LineKey line;
    std::optional<Coord> lo;
    std::optional<Coord> hi;
    std::optional<std::int64_t> capacity; // integer points strictly inside; nullopt = infinite
    std::int64_t maker_count = 0;
    std::vector<Coord> maker_params; // Maker params strictly inside, ascending

    bool is_active(int n) const { return !capacity || *capacity >= n; }
    bool same_span(const Segment& o) const { return line == o.line && lo == o.lo && hi == o.hi; }
};

struct LineEntry {
    std::vector<Coord> maker;    // every Maker point on the line, ascending
    std::vector<Coord> blocking; // every blocking Breaker param, ascending

    friend bool operator==(const LineEntry&, const LineEntry&) = default;
};

using LineIndex = std::map<LineKey, LineEntry>;

class GameState {
public:
    explicit GameState(GameMode mode);

    const GameMode& mode() const { return mode_; }
    std::int64_t timestep() const { return timestep_; }
    void set_timestep(std::int64_t t) { timestep_ = t; }

    // Validate-then-commit: on IllegalMoveError the state is unchanged.
    void apply_maker(std::span<const GridPoint> points);
    void apply_breaker(std::span<const BreakerMark> marks);

    bool is_maker(GridPoint p) const { return maker_set_.contains(p); }
    bool has_breaker_mark(GridPoint p) const { return marks_at_.contains(p); }
    bool has_mark(const BreakerMark& mark) const;
    bool maker_may_claim(GridPoint p) const;
    bool breaker_may_mark(const BreakerMark& mark) const;
    bool point_blocks_line(GridPoint p, const LineKey& line) const;

    std::span<const GridPoint> maker_points() const { return maker_points_; }
    std::span<const BreakerMark> breaker_marks() const { return breaker_marks_; }
    bool empty() const { return maker_points_.empty() && breaker_marks_.empty(); }

    struct Bounds {
        Coord min_x, min_y, max_x, max_y;
    };
    std::optional<Bounds> maker_bounds() const { return maker_bounds_; }
    Coord max_abs_coordinate() const { return max_abs_; }

    std::vector<Coord> maker_params_on(const LineKey& line) const;
    std::vector<Coord> blocking_params_on(const LineKey& line) const;

    // All segments of one line in order, including empty ones between
    // adjacent blocking points.
    std::vector<Segment> segments_on_line(const LineKey& line) const;

    // Segments holding at least min_count (>= 2) Maker points, on any line,
    // ordered by (line, lo).
    std::vector<Segment> rich_segments(std::int64_t min_count) const;

    // Active segments (capacity >= n) on lines holding >= 2 Maker points.
    std::vector<Segment> active_segments() const;
    std::vector<Segment> winning_segments() const;
    bool maker_has_won() const { return !winning_segments().empty(); }

    // Lines holding >= 2 Maker points with their Maker and blocking params.
    LineIndex line_index() const;

    // Cross-checks the incremental lookups against the move logs; throws
    // InvariantViolation on mismatch.
    void audit() const;

private:
    struct Marks {
        bool undirected = false;
        std::vector<Direction> dirs;
    };

    // Lines with >= k Maker points among the first `upto` Maker points.
    struct RichCache {
        std::size_t upto = 0;
        std::map<LineKey, std::vector<Coord>> lines;
    };

    std::vector<kernels::LineGroup> rich_groups(std::int64_t k) const;
    std::vector<Segment> split_line(const LineKey& line, std::span<const Coord> maker,
                                     std::vector<Coord> blocking, std::int64_t min_count) const;

    GameMode mode_;
    std::int64_t timestep_ = 0;
    std::vector<GridPoint> maker_points_;
    std::unordered_set<GridPoint, GridPointHash> maker_set_;
    std::vector<BreakerMark> breaker_marks_;
    std::unordered_map<GridPoint, Marks, GridPointHash> marks_at_;
    std::vector<GridPoint> undirected_points_;
    std::unordered_map<LineKey, std::vector<Coord>, LineKeyHash> directed_lines_;
    std::optional<Bounds> maker_bounds_;
    Coord max_abs_ = 0;
    mutable std::map<std::int64_t, RichCache> rich_cache_;
};

GameState new_game(const GameMode& mode);

// Functional form of GameState::apply_*.
GameState apply_move(GameState state, Player player, std::span<const BreakerMark> claims);

// From-scratch rebuild of line_index() using the serial pair-hash kernel and
// a linear scan of every Breaker mark.
LineIndex rebuild_line_index_reference(const GameState& state);

} // namespace nrow
