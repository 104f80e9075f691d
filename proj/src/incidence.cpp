#include "nrow/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <unordered_set>

#include "nrow/errors.hpp"
#include "nrow/kernels.hpp"
#include "nrow/schedule.hpp"

namespace nrow {

void STConfig::validate() const {
    if (!(C > 0) || !(Cprime > 0)) throw ConfigError("incidence constants C and C' must be > 0");
}

std::int64_t count_incidences(std::span<const GridPoint> points, std::span<const Segment> segments) {
    std::vector<kernels::LineInterval> intervals;
    intervals.reserve(segments.size());
    for (const auto& s : segments) intervals.push_back({s.line, s.lo, s.hi});
    std::int64_t total = 0;
    for (std::int64_t c : kernels::interval_counts(points, intervals)) total += c;
    return total;
}

double szt_bound(std::int64_t p, std::int64_t l, const STConfig& cfg) {
    const double pd = static_cast<double>(p), ld = static_cast<double>(l);
    return cfg.C * std::cbrt(pd * pd) * std::cbrt(ld * ld) + pd + ld;
}

double szt_rich_count_bound(std::int64_t p, std::int64_t k, const STConfig& cfg) {
    if (k < 2) throw std::invalid_argument("szt_rich_count_bound needs k >= 2");
    const double pd = static_cast<double>(p), kd = static_cast<double>(k);
    return cfg.C * (pd * pd / (kd * kd * kd) + pd / kd);
}

double szt_M(std::int64_t s, std::int64_t T, double alpha, double bprime_T, const STConfig& cfg) {
    if (s <= 0) return 0.0;
    const double sd = static_cast<double>(s);
    const double pts = std::pow(static_cast<double>(T), alpha) * sd;
    const double segs = bprime_T * sd + 1;
    return cfg.Cprime * (std::cbrt(pts * pts) * std::cbrt(segs * segs) + pts + segs);
}

double c_upper_value(std::int64_t T, double alpha, double b_T) {
    if (T < 2 || b_T < 1) throw std::invalid_argument("c_upper_value needs T >= 2 and b(T) >= 1");
    const double Td = static_cast<double>(T), lnT = std::log(Td);
    return (std::pow(Td, (2 * alpha + 1) / 3) * std::cbrt(b_T * b_T) + std::pow(Td, alpha) * lnT + b_T * lnT) / b_T;
}

DeltaMShape delta_m_shape(std::int64_t T, double alpha, double bprime_T, const STConfig& cfg) {
    DeltaMShape out;
    const double Ta = std::pow(static_cast<double>(T), alpha);
    const double lead = std::cbrt(Ta * bprime_T * Ta * bprime_T);
    double prev = 0;
    for (std::int64_t s = 1; s <= T; ++s) {
        const double cur = szt_M(s, T, alpha, bprime_T, cfg);
        const double ratio = (cur - prev) / (lead * std::cbrt(static_cast<double>(s)) + Ta + bprime_T);
        if (ratio > out.K) {
            out.K = ratio;
            out.worst_s = s;
        }
        prev = cur;
    }
    return out;
}

std::vector<STMonitorRow> st_monitor(const std::string& corpus, std::span<const GridPoint> points,
                                     std::span<const int> ks, const STConfig& cfg) {
    std::vector<STMonitorRow> rows;
    for (int k : ks) {
        const auto groups = kernels::rich_line_groups(points, k);
        std::vector<Segment> lines(groups.size());
        for (std::size_t i = 0; i < groups.size(); ++i) lines[i].line = groups[i].line;
        STMonitorRow row;
        row.corpus = corpus;
        row.points = static_cast<std::int64_t>(points.size());
        row.k = k;
        row.lines = static_cast<std::int64_t>(lines.size());
        row.incidences = count_incidences(points, lines);
        row.incidence_bound = szt_bound(row.points, row.lines, cfg);
        row.rich_bound = szt_rich_count_bound(row.points, k, cfg);
        rows.push_back(row);
    }
    return rows;
}

std::vector<GridPoint> grid_corpus(std::int64_t side) {
    std::vector<GridPoint> out;
    out.reserve(static_cast<std::size_t>(side * side));
    for (std::int64_t y = 0; y < side; ++y)
        for (std::int64_t x = 0; x < side; ++x) out.push_back({x, y});
    return out;
}

std::vector<GridPoint> random_corpus(std::int64_t count, std::int64_t box, Rng& rng) {
    if (count > box * box) throw std::invalid_argument("random_corpus: box too small");
    std::unordered_set<GridPoint, GridPointHash> seen;
    std::vector<GridPoint> out;
    while (static_cast<std::int64_t>(out.size()) < count) {
        const GridPoint p{static_cast<Coord>(rng.below(box)), static_cast<Coord>(rng.below(box))};
        if (seen.insert(p).second) out.push_back(p);
    }
    return out;
}

// ------------------------------------------------------------ reduction

namespace {

using Span = std::tuple<LineKey, std::optional<Coord>, std::optional<Coord>>;

Span span_of(const Segment& s) { return {s.line, s.lo, s.hi}; }

std::string describe(const LineKey& line) {
    std::ostringstream os;
    os << line;
    return os.str();
}

// Active segments with positive bin weight, keyed by span.
std::map<Span, Segment> weighted(const GameState& state, std::int64_t offset) {
    std::map<Span, Segment> out;
    for (auto& s : state.rich_segments(offset + 1)) {
        if (s.is_active(state.mode().n)) out.emplace(span_of(s), std::move(s));
    }
    return out;
}

} // namespace

std::string ReductionTrace::to_csv() const {
    std::ostringstream os;
    os.precision(10);
    os << "s,weight_added,szt_M,slack\n";
    for (const auto& r : suffix) os << r.s << ',' << r.weight_added << ',' << r.szt_M << ',' << r.slack << '\n';
    return os.str();
}

ReductionTrace reduce_to_bingame(const Transcript& transcript, Rational epsilon, int n, const STConfig& cfg) {
    cfg.validate();
    const auto& h = transcript.header;
    if (h.breaker.rfind("split-top", 0) != 0)
        throw UnsupportedTranscriptError("reduction needs a split-top Breaker, got '" + h.breaker + "'");
    const GameMode mode = h.mode();
    if (mode.batched) throw UnsupportedTranscriptError("reduction does not cover batched games");
    const Schedule m = Schedule::parse(h.m);
    if (m.family() != Schedule::Family::power || m.c() != 1.0)
        throw UnsupportedTranscriptError("reduction needs a Maker schedule power:alpha=a with c=1, got '" + h.m + "'");
    if (n < 2) throw ConfigError("reduction needs n >= 2");

    ReductionTrace tr;
    tr.n = n;
    tr.epsilon = epsilon;
    tr.offset = epsilon.halved().ceil_times(n);
    tr.alpha = m.alpha();
    const std::int64_t offset = tr.offset;
    auto weight_of = [&](std::int64_t count) { return std::max<std::int64_t>(count - offset, 0); };
    auto flag = [&](bool& which, std::string what) {
        which = false;
        tr.violations.push_back(std::move(what));
    };

    GameState state(mode);
    std::map<Span, std::int64_t> alive; // span -> bin id
    // Per bin: (timestep, weight gained).
    std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> gains;

    auto new_bin = [&](const Segment& s, std::int64_t t) {
        ReductionBin bin;
        bin.id = static_cast<std::int64_t>(tr.bins.size());
        bin.line = s.line;
        bin.lo = s.lo;
        bin.hi = s.hi;
        bin.born = t;
        bin.count = s.maker_count;
        bin.weight = weight_of(s.maker_count);
        tr.bins.push_back(bin);
        gains.emplace_back();
        alive.emplace(span_of(s), bin.id);
        return bin.id;
    };

    for (const auto& mv : transcript.moves) {
        state.set_timestep(mv.t);
        if (mv.player == Player::maker) {
            std::vector<GridPoint> fresh;
            for (const auto& p : mv.points) fresh.push_back(p.point);
            state.apply_maker(fresh);

            ReductionStep step;
            step.t = mv.t;
            const auto now = weighted(state, offset);
            std::vector<kernels::LineInterval> intervals;
            for (const auto& [key, s] : now) intervals.push_back({s.line, s.lo, s.hi});
            const auto inside = kernels::interval_counts(fresh, intervals);
            std::size_t i = 0;
            std::map<Span, std::int64_t> seen;
            for (const auto& [key, s] : now) {
                const std::int64_t before = s.maker_count - inside[i++];
                const auto it = alive.find(key);
                std::int64_t id;
                if (it == alive.end()) {
                    if (before > offset)
                        flag(tr.accounting_exact, "t=" + std::to_string(mv.t) + ": untracked segment already held " +
                                                      std::to_string(before) + " points");
                    id = new_bin(s, mv.t);
                    tr.bins[id].count = before;
                    tr.bins[id].weight = weight_of(before);
                } else {
                    id = it->second;
                    if (tr.bins[id].count != before)
                        flag(tr.accounting_exact, "t=" + std::to_string(mv.t) + ": bin " + std::to_string(id) +
                                                      " count drifted");
                }
                auto& bin = tr.bins[id];
                const std::int64_t gained = weight_of(s.maker_count) - bin.weight;
                bin.count = s.maker_count;
                bin.weight = weight_of(s.maker_count);
                if (gained > 0) gains[id].push_back({mv.t, gained});
                step.weight_added += gained;
                step.max_weight = std::max(step.max_weight, bin.weight);
                seen.emplace(key, id);
            }
            if (seen.size() != alive.size())
                flag(tr.accounting_exact, "t=" + std::to_string(mv.t) + ": a live bin lost its segment");
            step.live_bins = static_cast<std::int64_t>(alive.size());
            tr.steps.push_back(step);

            if (state.maker_has_won()) {
                tr.maker_won = true;
                const Segment win = state.winning_segments().front();
                tr.final_bin = alive.at(span_of(win));
            }
        } else {
            state.apply_breaker(mv.points);
            const auto now = weighted(state, offset);
            auto& step = tr.steps.back();
            for (auto it = alive.begin(); it != alive.end();) {
                if (now.contains(it->first)) {
                    ++it;
                    continue;
                }
                tr.bins[it->second].killed_at = mv.t;
                step.killed.push_back(it->second);
                it = alive.erase(it);
            }
            for (const auto& [key, s] : now) {
                if (alive.contains(key)) continue;
                flag(tr.zero_entry, "t=" + std::to_string(mv.t) + ": a split left " + std::to_string(s.maker_count) +
                                        " points on one segment of line " + describe(s.line));
                new_bin(s, mv.t);
            }
            tr.bprime = std::max<std::int64_t>(tr.bprime, static_cast<std::int64_t>(step.killed.size()));
        }
    }

    tr.T = static_cast<std::int64_t>(tr.steps.size());
    if (!tr.final_bin && !alive.empty()) {
        // Heaviest surviving bin, lowest id on ties.
        std::int64_t best = -1;
        for (const auto& [key, id] : alive) {
            if (best < 0 || tr.bins[id].weight > tr.bins[best].weight ||
                (tr.bins[id].weight == tr.bins[best].weight && id < best))
                best = id;
        }
        tr.final_bin = best;
    }
    if (tr.final_bin) tr.final_weight = tr.bins[*tr.final_bin].weight;
    if (tr.maker_won && tr.final_weight < offset)
        flag(tr.final_ok, "winning bin holds weight " + std::to_string(tr.final_weight));

    std::map<std::int64_t, std::size_t> step_at;
    for (std::size_t i = 0; i < tr.steps.size(); ++i) step_at[tr.steps[i].t] = i;
    for (auto& bin : tr.bins) {
        bin.tracked = bin.killed_at.has_value() || (tr.final_bin && *tr.final_bin == bin.id);
        if (!bin.tracked) continue;
        for (const auto& [t, g] : gains[bin.id]) tr.steps[step_at.at(t)].tracked_added += g;
    }

    std::int64_t sum = 0;
    for (std::int64_t s = 1; s <= tr.T; ++s) {
        sum += tr.steps[tr.T - s].tracked_added;
        SuffixRow row;
        row.s = s;
        row.weight_added = sum;
        row.szt_M = szt_M(s, tr.T, tr.alpha, static_cast<double>(tr.bprime), cfg);
        row.slack = row.szt_M - static_cast<double>(sum);
        if (row.slack < 0) flag(tr.suffix_ok, "suffix s=" + std::to_string(s) + " exceeds szt_M");
        tr.suffix.push_back(row);
    }
    return tr;
}

} // namespace nrow
