#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <span>
#include <vector>

namespace nrow {

using Coord = std::int64_t;

// Coordinates are bounded by +-2^31 by contract; everything else is checked
// arithmetic on 64/128-bit integers.
inline constexpr Coord kCoordLimit = Coord{1} << 31;

struct GridPoint {
    Coord x = 0;
    Coord y = 0;

    friend constexpr auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

// Primitive vector with canonical sign: dx > 0, or dx == 0 and dy == 1.
struct Direction {
    Coord dx = 1;
    Coord dy = 0;

    friend constexpr auto operator<=>(const Direction&, const Direction&) = default;
};

// The lattice line {p : dir.dy * p.x - dir.dx * p.y == c}.
struct LineKey {
    Direction dir;
    Coord c = 0;

    friend constexpr auto operator<=>(const LineKey&, const LineKey&) = default;
};

std::ostream& operator<<(std::ostream& os, const GridPoint& p);
std::ostream& operator<<(std::ostream& os, const Direction& d);
std::ostream& operator<<(std::ostream& os, const LineKey& l);

inline bool in_coordinate_range(GridPoint p) {
    return p.x > -kCoordLimit && p.x < kCoordLimit && p.y > -kCoordLimit && p.y < kCoordLimit;
}

Direction canonical_direction(Coord dx, Coord dy);

// c for the line through p with direction d. Throws std::overflow_error if
// the value does not fit in 64 bits.
Coord line_offset(Direction d, GridPoint p);

LineKey line_through(GridPoint p, Direction d);
LineKey line_key(GridPoint p, GridPoint q);
bool on_line(const LineKey& line, GridPoint p);

// Base point of the line: the lattice point with 0 <= x < dx for dx > 0,
// and (c, 0) for vertical lines.
GridPoint anchor(const LineKey& line);

// k with p == anchor(line) + k * dir. Throws std::invalid_argument if p is
// not on the line.
Coord line_param(const LineKey& line, GridPoint p);
GridPoint point_at(const LineKey& line, Coord param);

// Maximal collinear subsets with at least min_size points, keyed by line,
// params ascending. Duplicate input points are ignored.
std::map<LineKey, std::vector<Coord>> collinear_groups(std::span<const GridPoint> points,
                                                       int min_size);

struct RichLine {
    LineKey line;
    std::size_t count = 0;

    friend bool operator==(const RichLine&, const RichLine&) = default;
};

// Lines holding at least k of the points, ordered by LineKey.
std::vector<RichLine> rich_lines(std::span<const GridPoint> points, int k);

struct GridPointHash {
    std::size_t operator()(const GridPoint& p) const noexcept;
};

struct DirectionHash {
    std::size_t operator()(const Direction& d) const noexcept;
};

struct LineKeyHash {
    std::size_t operator()(const LineKey& l) const noexcept;
};

} // namespace nrow
