#include "nrow/geometry.hpp"

#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include "nrow/kernels.hpp"

namespace nrow {

namespace {

Coord checked(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("lattice arithmetic overflow");
    return static_cast<Coord>(v);
}

Coord floor_div(Coord a, Coord b) {
    Coord q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

Coord floor_mod(Coord a, Coord b) { return a - floor_div(a, b) * b; }

// Inverse of a modulo m (gcd(a, m) == 1, m >= 1).
Coord mod_inverse(Coord a, Coord m) {
    if (m == 1) return 0;
    __int128 old_r = floor_mod(a, m), r = m;
    __int128 old_s = 1, s = 0;
    while (r != 0) {
        const __int128 q = old_r / r;
        __int128 tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    __int128 inv = old_s % m;
    if (inv < 0) inv += m;
    return static_cast<Coord>(inv);
}

std::size_t mix(std::size_t h, std::uint64_t v) {
    v *= 0x9e3779b97f4a7c15ULL;
    v ^= v >> 32;
    return h ^ (v + 0x7f4a7c159e3779b9ULL + (h << 6) + (h >> 2));
}

} // namespace

std::ostream& operator<<(std::ostream& os, const GridPoint& p) {
    return os << "(" << p.x << "," << p.y << ")";
}

std::ostream& operator<<(std::ostream& os, const Direction& d) {
    return os << "<" << d.dx << "," << d.dy << ">";
}

std::ostream& operator<<(std::ostream& os, const LineKey& l) {
    return os << "line" << l.dir << "c=" << l.c;
}

Direction canonical_direction(Coord dx, Coord dy) {
    if (dx == 0 && dy == 0) throw std::invalid_argument("zero vector has no direction");
    const Coord g = std::gcd(dx, dy);
    dx /= g;
    dy /= g;
    if (dx < 0 || (dx == 0 && dy < 0)) {
        dx = -dx;
        dy = -dy;
    }
    return {dx, dy};
}

Coord line_offset(Direction d, GridPoint p) {
    return checked(static_cast<__int128>(d.dy) * p.x - static_cast<__int128>(d.dx) * p.y);
}

LineKey line_through(GridPoint p, Direction d) { return {d, line_offset(d, p)}; }

LineKey line_key(GridPoint p, GridPoint q) {
    if (p == q) throw std::invalid_argument("line_key needs two distinct points");
    return line_through(p, canonical_direction(checked(static_cast<__int128>(q.x) - p.x),
                                               checked(static_cast<__int128>(q.y) - p.y)));
}

bool on_line(const LineKey& line, GridPoint p) { return line_offset(line.dir, p) == line.c; }

GridPoint anchor(const LineKey& line) {
    const Direction d = line.dir;
    if (d.dx == 0) return {line.c, 0};
    // dy * x == c (mod dx) has a unique solution in [0, dx) since gcd(dx, dy) == 1.
    const Coord inv = mod_inverse(d.dy, d.dx);
    const Coord x = checked(static_cast<__int128>(floor_mod(line.c, d.dx)) * inv % d.dx);
    const __int128 num = static_cast<__int128>(d.dy) * x - line.c;
    return {x, checked(num / d.dx)};
}

Coord line_param(const LineKey& line, GridPoint p) {
    if (!on_line(line, p)) throw std::invalid_argument("point is not on the line");
    if (line.dir.dx == 0) return p.y;
    return floor_div(p.x, line.dir.dx);
}

GridPoint point_at(const LineKey& line, Coord param) {
    const GridPoint a = anchor(line);
    return {checked(a.x + static_cast<__int128>(param) * line.dir.dx),
            checked(a.y + static_cast<__int128>(param) * line.dir.dy)};
}

std::map<LineKey, std::vector<Coord>> collinear_groups(std::span<const GridPoint> points,
                                                       int min_size) {
    if (min_size < 2) throw std::invalid_argument("collinear_groups needs min_size >= 2");
    std::map<LineKey, std::vector<Coord>> out;
    for (auto& g : kernels::rich_line_groups(points, min_size)) {
        out.emplace(g.line, std::move(g.params));
    }
    return out;
}

std::vector<RichLine> rich_lines(std::span<const GridPoint> points, int k) {
    if (k < 2) throw std::invalid_argument("rich_lines needs k >= 2");
    std::vector<RichLine> out;
    for (const auto& g : kernels::rich_line_groups(points, k)) {
        out.push_back({g.line, g.params.size()});
    }
    return out;
}

std::size_t GridPointHash::operator()(const GridPoint& p) const noexcept {
    return mix(mix(0, static_cast<std::uint64_t>(p.x)), static_cast<std::uint64_t>(p.y));
}

std::size_t DirectionHash::operator()(const Direction& d) const noexcept {
    return mix(mix(1, static_cast<std::uint64_t>(d.dx)), static_cast<std::uint64_t>(d.dy));
}

std::size_t LineKeyHash::operator()(const LineKey& l) const noexcept {
    return mix(DirectionHash{}(l.dir), static_cast<std::uint64_t>(l.c));
}

} // namespace nrow
