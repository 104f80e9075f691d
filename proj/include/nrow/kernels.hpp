#pragma once

// Data-parallel kernels behind rich-line detection and incidence counting.
// Every kernel has an OpenMP implementation and a serial reference with a
// deliberately different algorithm; tests cross-check the two and
// bench_kernels times them against each other.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nrow/geometry.hpp"

namespace nrow::kernels {

struct LineGroup {
    LineKey line;
    std::vector<Coord> params; // ascending

    friend bool operator==(const LineGroup&, const LineGroup&) = default;
};

// An open interval (lo, hi) on a line; nullopt bounds are infinite.
struct LineInterval {
    LineKey line;
    std::optional<Coord> lo;
    std::optional<Coord> hi;
};

enum class RichStrategy { automatic, direction_sweep, anchor_sweep };

// Lines holding >= k distinct points (k >= 2), sorted by LineKey.
std::vector<LineGroup> rich_line_groups(std::span<const GridPoint> points, int k,
                                        RichStrategy strategy = RichStrategy::automatic);

// Reference: hash every unordered pair by its LineKey. O(n^2) memory.
std::vector<LineGroup> rich_line_groups_serial(std::span<const GridPoint> points, int k);

// Lines through at least one point of `fresh` holding >= k distinct points
// of `points` (k >= 2), sorted by LineKey. `fresh` must be a subset of
// `points`. Costs O(|fresh| * |points|).
std::vector<LineGroup> rich_lines_through(std::span<const GridPoint> points, std::span<const GridPoint> fresh,
                                          int k);

// Reference: the pair-hash kernel filtered to lines through a fresh point.
std::vector<LineGroup> rich_lines_through_serial(std::span<const GridPoint> points,
                                                 std::span<const GridPoint> fresh, int k);

// Number of primitive canonical directions the direction sweep would scan.
std::int64_t direction_sweep_size(std::span<const GridPoint> points, int k);

// Rough operation count of rich_line_groups(points, k) with the automatic
// strategy. `points` must be distinct.
double rich_line_cost(std::span<const GridPoint> points, int k);

// Points strictly inside each interval. Intervals on a common line must
// overlap in at most one lattice point (checked; std::invalid_argument).
std::vector<std::int64_t> interval_counts(std::span<const GridPoint> points,
                                          std::span<const LineInterval> intervals);

// Reference: test every (interval, point) pair.
std::vector<std::int64_t> interval_counts_serial(std::span<const GridPoint> points,
                                                 std::span<const LineInterval> intervals);

int max_threads();

} // namespace nrow::kernels
