#include "nrow/bingame.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <stdexcept>
#include <string>

#include "nrow/errors.hpp"

namespace nrow {

namespace {

bool exceeds(double added, double allowed) { return added > allowed + 1e-9 * std::max(1.0, allowed); }

} // namespace

BinSchedule BinSchedule::make(std::vector<std::int64_t> b, std::vector<double> dM) {
    BinSchedule s;
    s.T = static_cast<std::int64_t>(b.size());
    s.b = std::move(b);
    s.dM = std::move(dM);
    s.validate();
    return s;
}

void BinSchedule::validate() const {
    if (T < 1) throw ConfigError("bin game needs T >= 1");
    if (static_cast<std::int64_t>(b.size()) != T || static_cast<std::int64_t>(dM.size()) != T) {
        throw ConfigError("bin game b and dM need T = " + std::to_string(T) + " entries each");
    }
    for (std::int64_t v : b) {
        if (v < 0) throw ConfigError("bin game b(t) must be >= 0");
    }
    for (double v : dM) {
        if (!(v >= 0)) throw ConfigError("bin game dM(s) must be >= 0");
    }
}

std::int64_t BinSchedule::bin_count() const { return live_after(0); }

std::int64_t BinSchedule::live_after(std::int64_t turn) const {
    std::int64_t live = 1;
    for (std::int64_t t = std::max<std::int64_t>(turn, 0); t < T; ++t) live += b[t];
    return live;
}

double BinSchedule::M(std::int64_t s) const {
    const std::int64_t upto = std::clamp<std::int64_t>(s, 0, T);
    return std::accumulate(dM.begin(), dM.begin() + upto, 0.0);
}

BinState BinState::start(const BinSchedule& sched) {
    BinState st;
    const std::int64_t bins = sched.bin_count();
    st.ids.resize(bins);
    std::iota(st.ids.begin(), st.ids.end(), 0);
    st.weights.assign(bins, 0.0);
    return st;
}

double BinState::total() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

double BinState::average() const { return weights.empty() ? 0.0 : total() / static_cast<double>(weights.size()); }

BinState bin_step(const BinState& state, const BinSchedule& sched, const std::map<std::int64_t, double>& additions) {
    if (state.turn >= sched.T) throw std::invalid_argument("bin game is over");
    BinState next = state;
    const std::int64_t u = ++next.turn;
    double added = 0;
    for (const auto& [id, weight] : additions) {
        const auto it = std::lower_bound(next.ids.begin(), next.ids.end(), id);
        if (it == next.ids.end() || *it != id) throw std::invalid_argument("bin " + std::to_string(id) + " is not live");
        if (!(weight >= 0)) throw std::invalid_argument("bin weights must be >= 0");
        next.weights[it - next.ids.begin()] += weight;
        added += weight;
    }
    next.weight_spent.push_back(added);

    // Suffixes ending at T that contain this turn, smallest first.
    double sum = 0;
    for (std::int64_t local = 1; local <= u; ++local) {
        sum += next.weight_spent[u - local];
        const std::int64_t s = local + sched.T - u;
        if (exceeds(sum, sched.M(s))) throw SuffixBudgetError(s, sum, sched.M(s));
    }

    const std::int64_t kills = sched.b[u - 1];
    std::vector<std::size_t> order(next.ids.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t c) { return next.weights[a] > next.weights[c]; });
    std::vector<char> dead(order.size(), 0);
    for (std::int64_t i = 0; i < kills && i < static_cast<std::int64_t>(order.size()); ++i) dead[order[i]] = 1;
    std::vector<std::int64_t> ids;
    std::vector<double> weights;
    for (std::size_t i = 0; i < dead.size(); ++i) {
        if (dead[i]) continue;
        ids.push_back(next.ids[i]);
        weights.push_back(next.weights[i]);
    }
    next.ids = std::move(ids);
    next.weights = std::move(weights);
    return next;
}

double average_bound(const std::vector<double>& w, const std::vector<std::int64_t>& b) {
    if (w.size() > b.size()) throw std::invalid_argument("average_bound: w longer than b");
    double bound = 0;
    std::int64_t tail = 0;
    for (std::size_t s = b.size(); s-- > 0;) {
        tail += b[s];
        if (s < w.size()) bound += w[s] / static_cast<double>(tail + 1);
    }
    return bound;
}

double solo_bound(const std::vector<double>& dM, const std::vector<std::int64_t>& b) {
    if (b.empty() || dM.size() != b.size()) throw std::invalid_argument("solo_bound: b and dM need T >= 1 entries each");
    const std::int64_t T = static_cast<std::int64_t>(b.size());
    const std::int64_t bT = b.back();
    if (bT < 1) throw InvalidScheduleError("solo_bound needs b(T) >= 1", T);
    std::int64_t tail = 0;
    std::optional<std::int64_t> failing;
    for (std::int64_t s = T; s >= 1; --s) {
        tail += b[s - 1];
        if (2 * tail < bT * (T - s + 1)) failing = s;
    }
    if (failing) throw InvalidScheduleError("solo_bound hypothesis fails", *failing);
    double sum = 0;
    for (std::int64_t t = 1; t <= T; ++t) sum += dM[t - 1] / static_cast<double>(t);
    return 2.0 * sum / static_cast<double>(bT);
}

std::optional<std::int64_t> validate_play(const std::vector<double>& w, const BinSchedule& sched) {
    if (static_cast<std::int64_t>(w.size()) > sched.T) throw std::invalid_argument("validate_play: w longer than T");
    const std::int64_t played = static_cast<std::int64_t>(w.size());
    double sum = 0;
    for (std::int64_t s = 1; s <= sched.T; ++s) {
        const std::int64_t t = sched.T - s + 1;
        if (t <= played) sum += w[t - 1];
        if (exceeds(sum, sched.M(s))) return s;
    }
    return std::nullopt;
}

namespace {

BinPlay play(const BinSchedule& sched, auto&& choose) {
    BinPlay out;
    BinState st = BinState::start(sched);
    for (std::int64_t u = 1; u <= sched.T; ++u) {
        const std::map<std::int64_t, double> additions = choose(st, u);
        BinTurn turn;
        turn.turn = u;
        turn.live_before = static_cast<std::int64_t>(st.ids.size());
        BinState added = st;
        for (const auto& [id, weight] : additions) {
            added.weights[std::lower_bound(added.ids.begin(), added.ids.end(), id) - added.ids.begin()] += weight;
        }
        turn.average_before_kill = added.average();
        BinState next = bin_step(st, sched, additions);
        turn.added = next.weight_spent.back();
        std::set_difference(st.ids.begin(), st.ids.end(), next.ids.begin(), next.ids.end(),
                            std::back_inserter(turn.killed));
        turn.average_after_kill = next.average();
        out.w.push_back(turn.added);
        out.trace.push_back(std::move(turn));
        st = std::move(next);
    }
    out.final_weight = st.weights.empty() ? 0.0 : st.weights.front();
    return out;
}

std::map<std::int64_t, double> spread(const BinState& st, double total) {
    std::map<std::int64_t, double> additions;
    const double each = total / static_cast<double>(st.ids.size());
    for (std::int64_t id : st.ids) additions[id] = each;
    return additions;
}

} // namespace

BinPlay spread_play(const BinSchedule& sched, const std::vector<double>& w) {
    if (static_cast<std::int64_t>(w.size()) != sched.T) throw ConfigError("play needs T per-turn totals");
    return play(sched, [&](const BinState& st, std::int64_t u) { return spread(st, w[u - 1]); });
}

BinPlay equal_spread_play(const BinSchedule& sched) {
    std::vector<double> w(sched.T);
    for (std::int64_t s = 1; s <= sched.T; ++s) w[s - 1] = sched.dM[sched.T - s];
    return spread_play(sched, w);
}

BinPlay random_play(const BinSchedule& sched, Rng& rng) {
    return play(sched, [&](const BinState& st, std::int64_t u) {
        // Largest total the suffix budgets still allow this turn.
        double room = sched.M(sched.T - u + 1);
        double sum = 0;
        for (std::int64_t local = 2; local <= u; ++local) {
            sum += st.weight_spent[u - local];
            room = std::min(room, sched.M(local + sched.T - u) - sum);
        }
        room = std::max(0.0, room) * (1 - 1e-12);
        const double total = rng.bernoulli(0.3) ? room : room * rng.unit();
        std::map<std::int64_t, double> additions;
        const std::size_t live = st.ids.size();
        const std::size_t picks = 1 + rng.below(live);
        std::vector<double> shares;
        double share_sum = 0;
        for (std::size_t i = 0; i < picks; ++i) {
            shares.push_back(rng.unit() + 1e-3);
            share_sum += shares.back();
        }
        for (std::size_t i = 0; i < picks; ++i) {
            additions[st.ids[rng.below(live)]] += total * shares[i] / share_sum;
        }
        return additions;
    });
}

} // namespace nrow
