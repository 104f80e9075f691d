#pragma once

// Szemeredi-Trotter incidence bounds and the replay of a split-top match as
// a weighted bin game.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nrow/board.hpp"
#include "nrow/rational.hpp"
#include "nrow/rng.hpp"
#include "nrow/transcript.hpp"

namespace nrow {

// Constants of the incidence bound; empirical, not proven values.
struct STConfig {
    double C = 2.5;      // szt_bound and szt_rich_count_bound
    double Cprime = 2.5; // szt_M

    void validate() const; // ConfigError unless both are > 0
};

// Number of (point, segment) pairs with the point strictly inside the
// segment. Throws std::invalid_argument if two segments on one line share
// more than one lattice point.
std::int64_t count_incidences(std::span<const GridPoint> points, std::span<const Segment> segments);

// C p^(2/3) l^(2/3) + p + l.
double szt_bound(std::int64_t p, std::int64_t l, const STConfig& cfg = {});

// C (p^2 / k^3 + p / k), k >= 2.
double szt_rich_count_bound(std::int64_t p, std::int64_t k, const STConfig& cfg = {});

// C' ((T^a s)^(2/3) (b' s + 1)^(2/3) + T^a s + b' s + 1), and 0 at s = 0.
double szt_M(std::int64_t s, std::int64_t T, double alpha, double bprime_T, const STConfig& cfg = {});

// (T^((2a+1)/3) b^(2/3) + T^a ln T + b ln T) / b for T >= 2, b >= 1.
double c_upper_value(std::int64_t T, double alpha, double b_T);

// Smallest K with szt_M(s) - szt_M(s-1) <= K ((T^a b')^(2/3) s^(1/3) + T^a + b')
// for every s in 1..T, and the s attaining it.
struct DeltaMShape {
    double K = 0;
    std::int64_t worst_s = 0;
};
DeltaMShape delta_m_shape(std::int64_t T, double alpha, double bprime_T, const STConfig& cfg = {});

// ------------------------------------------------------------- monitors

struct STMonitorRow {
    std::string corpus;
    std::int64_t points = 0;
    int k = 0;
    std::int64_t lines = 0;      // lines holding >= k points
    std::int64_t incidences = 0; // points on those lines
    double incidence_bound = 0;  // szt_bound(points, lines)
    double rich_bound = 0;       // szt_rich_count_bound(points, k)

    bool ok() const { return incidences <= incidence_bound && lines <= rich_bound; }
};

// One row per k, comparing the k-rich lines of `points` with both bounds.
std::vector<STMonitorRow> st_monitor(const std::string& corpus, std::span<const GridPoint> points,
                                     std::span<const int> ks, const STConfig& cfg = {});

std::vector<GridPoint> grid_corpus(std::int64_t side);
// `count` distinct uniform points of [0, box)^2.
std::vector<GridPoint> random_corpus(std::int64_t count, std::int64_t box, Rng& rng);

// ------------------------------------------------------------ reduction

// A bin is an active segment that held more than ceil(eps n / 2) Maker
// points at some point, identified by its span.
struct ReductionBin {
    std::int64_t id = 0;
    LineKey line;
    std::optional<Coord> lo;
    std::optional<Coord> hi;
    std::int64_t born = 0; // timestep its weight first became positive
    std::optional<std::int64_t> killed_at;
    std::int64_t count = 0;  // Maker points inside
    std::int64_t weight = 0; // max(count - offset, 0)
    bool tracked = false;    // killed by Breaker or the final bin
};

struct ReductionStep {
    std::int64_t t = 0;
    std::int64_t weight_added = 0;   // over every bin
    std::int64_t tracked_added = 0;  // over tracked bins only
    std::int64_t live_bins = 0;      // after Maker's move
    std::int64_t max_weight = 0;     // after Maker's move
    std::vector<std::int64_t> killed; // bin ids cut by Breaker's move
};

struct SuffixRow {
    std::int64_t s = 0;
    std::int64_t weight_added = 0; // tracked weight added in the last s timesteps
    double szt_M = 0;
    double slack = 0; // szt_M - weight_added
};

struct ReductionTrace {
    int n = 0;
    Rational epsilon{1, 2};
    std::int64_t offset = 0; // ceil(eps n / 2)
    std::int64_t T = 0;      // timesteps replayed
    double alpha = 1;
    std::int64_t bprime = 1; // most bins killed in one timestep, at least 1
    bool maker_won = false;
    std::optional<std::int64_t> final_bin;
    std::int64_t final_weight = 0;
    std::vector<ReductionBin> bins;
    std::vector<ReductionStep> steps;
    std::vector<SuffixRow> suffix;

    bool accounting_exact = true; // incremental bin counts match the board
    bool zero_entry = true;       // no segment appears with positive weight after a Breaker move
    bool suffix_ok = true;        // every suffix within szt_M
    bool final_ok = true;         // a winning bin carries >= offset weight
    std::vector<std::string> violations;

    bool ok() const { return accounting_exact && zero_entry && suffix_ok && final_ok; }
    // Columns s, weight_added, szt_M, slack.
    std::string to_csv() const;
};

// Replays a split-top match and maps its segments to bins. Throws
// UnsupportedTranscriptError for another Breaker, a batched game or a Maker
// schedule other than power:alpha=a (c = 1).
ReductionTrace reduce_to_bingame(const Transcript& transcript, Rational epsilon, int n, const STConfig& cfg = {});

} // namespace nrow
