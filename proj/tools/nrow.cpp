// Command-line front end: simulate, batched, bingame, analyze, sweep, replay.
// Exit codes: 0 success, 1 invalid config, 2 illegal move, 3 invariant violation.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nrow/bingame.hpp"
#include "nrow/errors.hpp"
#include "nrow/incidence.hpp"
#include "nrow/match.hpp"
#include "nrow/sweep.hpp"

using namespace nrow;
using nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kConfig = 1;
constexpr int kIllegal = 2;
constexpr int kInvariant = 3;

void emit(const ordered_json& doc) { std::cout << doc.dump(2) << "\n"; }

// "1,2,3" or a schedule descriptor evaluated at t = 1..T.
std::vector<double> values_for(const std::string& text, std::int64_t T) {
    std::vector<double> out;
    if (text.find_first_not_of("0123456789.,eE+- ") == std::string::npos) {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                out.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw ConfigError("bad number '" + item + "' in list '" + text + "'");
            }
        }
        if (T > 0 && static_cast<std::int64_t>(out.size()) != T)
            throw ConfigError("list '" + text + "' has " + std::to_string(out.size()) + " entries, expected T");
        return out;
    }
    if (T < 1) throw ConfigError("--T is required with a schedule family");
    const Schedule s = Schedule::parse(text);
    for (std::int64_t t = 1; t <= T; ++t) out.push_back(static_cast<double>(s(t)));
    return out;
}

ordered_json outcome_json(const Outcome& o) {
    return {{"maker_won", o.maker_won}, {"tau", o.tau}, {"m_tau", o.m_tau}, {"steps", o.steps}};
}

struct SimulateArgs {
    int n = 0;
    double alpha = 1.0;
    std::string m_family;
    std::string b_family = "clog:c=1";
    std::string variant = "standard";
    std::string maker = "greedy";
    std::string breaker = "split-top";
    std::string epsilon = "1/4";
    std::int64_t max_steps = 0;
    std::uint64_t seed = 1;
    std::string out;
};

int simulate(const SimulateArgs& a) {
    MatchConfig cfg;
    cfg.mode = parse_variant(a.variant, a.n, Rational::parse(a.epsilon));
    cfg.m = a.m_family.empty() ? Schedule::power(a.alpha) : Schedule::parse(a.m_family);
    cfg.b = Schedule::parse(a.b_family);
    cfg.maker = a.maker;
    cfg.breaker = a.breaker;
    cfg.max_steps = a.max_steps;
    cfg.seed = a.seed;
    const auto run = run_match(cfg);
    if (!a.out.empty()) run.transcript.save(a.out);
    ordered_json doc = outcome_json(run.result.outcome);
    if (run.result.outcome.maker_won) doc["m_tau_over_n"] = static_cast<double>(run.result.outcome.m_tau) / a.n;
    emit(doc);
    return kOk;
}

struct BatchedArgs {
    int n = 64;
    double alpha = 0.5;
    std::string epsilon = "1/2";
    std::string mode = "standard";
    std::string maker = "rectangle";
    std::string breaker = "batched-split";
    std::string m_family;
    std::string b_family = "zero";
    std::int64_t T = 0;
    std::uint64_t seed = 1;
    int max_retries = 100;
};

int batched(const BatchedArgs& a) {
    BatchedConfig cfg;
    cfg.n = a.n;
    cfg.alpha = a.alpha;
    cfg.epsilon = Rational::parse(a.epsilon);
    if (a.mode != "standard" && a.mode != "directed") throw ConfigError("--mode must be standard or directed");
    cfg.directed = a.mode == "directed";
    cfg.maker = a.maker;
    cfg.breaker = a.breaker;
    if (!a.m_family.empty()) cfg.m = Schedule::parse(a.m_family);
    cfg.b = Schedule::parse(a.b_family);
    cfg.T = a.T;
    cfg.seed = a.seed;
    cfg.max_retries = a.max_retries;
    const auto r = run_batched(cfg);
    emit({{"breaker_won", r.breaker_won},
          {"T", r.T},
          {"maker_budget", r.maker_budget},
          {"breaker_budget", r.breaker_budget},
          {"maker_points", r.maker_points},
          {"breaker_points", r.breaker_points},
          {"threshold", r.threshold},
          {"surviving_runs", r.surviving_runs},
          {"longest_run", r.longest_run}});
    return kOk;
}

struct BingameArgs {
    std::int64_t T = 0;
    std::string b;
    std::string dM;
    std::string play = "equal-spread";
    std::string w;
    std::uint64_t seed = 1;
};

int bingame(const BingameArgs& a) {
    std::vector<std::int64_t> b;
    for (double v : values_for(a.b, a.T)) {
        if (v != static_cast<double>(static_cast<std::int64_t>(v))) throw ConfigError("--b values must be integers");
        b.push_back(static_cast<std::int64_t>(v));
    }
    const auto sched = BinSchedule::make(b, values_for(a.dM, static_cast<std::int64_t>(b.size())));

    BinPlay play;
    if (a.play == "equal-spread") {
        play = equal_spread_play(sched);
    } else if (a.play == "random") {
        Rng rng(a.seed);
        play = random_play(sched, rng);
    } else if (a.play == "explicit") {
        if (a.w.empty()) throw ConfigError("--play explicit needs --w");
        const auto w = values_for(a.w, sched.T);
        if (const auto s = validate_play(w, sched))
            throw IllegalMoveError("play exceeds M(" + std::to_string(*s) + ") over its last " + std::to_string(*s) +
                                   " turns");
        play = spread_play(sched, w);
    } else {
        throw ConfigError("--play must be equal-spread, random or explicit");
    }

    ordered_json doc{{"T", sched.T},
                     {"bins", sched.bin_count()},
                     {"M_T", sched.M(sched.T)},
                     {"final_weight", play.final_weight},
                     {"average_bound", average_bound(play.w, sched.b)},
                     {"w", play.w}};
    try {
        doc["solo_bound"] = solo_bound(sched.dM, sched.b);
    } catch (const InvalidScheduleError& e) {
        doc["solo_bound"] = nullptr;
        doc["solo_hypothesis"] = e.what();
    }
    emit(doc);
    return kOk;
}

struct AnalyzeArgs {
    std::string transcript;
    std::string epsilon;
    int n = 0;
    double C = 2.5;
    double Cprime = 2.5;
    std::vector<int> ks{3, 4, 8};
    std::string csv;
};

int analyze(const AnalyzeArgs& a) {
    const Transcript tr = Transcript::load(a.transcript);
    const int n = a.n > 0 ? a.n : tr.header.n;
    const Rational eps = a.epsilon.empty() ? tr.header.epsilon : Rational::parse(a.epsilon);
    STConfig st{a.C, a.Cprime};
    st.validate();

    const ReductionTrace trace = reduce_to_bingame(tr, eps, n, st);
    if (!a.csv.empty()) {
        std::ofstream out(a.csv);
        if (!out) throw ConfigError("cannot write " + a.csv);
        out << trace.to_csv();
    }
    double min_slack = 0;
    bool first = true;
    for (const auto& row : trace.suffix) {
        if (first || row.slack < min_slack) min_slack = row.slack;
        first = false;
    }

    std::vector<GridPoint> maker_points;
    for (const auto& move : tr.moves) {
        if (move.player != Player::maker) continue;
        for (const auto& p : move.points) maker_points.push_back(p.point);
    }
    ordered_json monitors = ordered_json::array();
    bool monitors_ok = true;
    for (const auto& row : st_monitor("maker", maker_points, a.ks, st)) {
        monitors_ok = monitors_ok && row.ok();
        monitors.push_back({{"k", row.k},
                            {"points", row.points},
                            {"lines", row.lines},
                            {"incidences", row.incidences},
                            {"incidence_bound", row.incidence_bound},
                            {"rich_bound", row.rich_bound},
                            {"ok", row.ok()}});
    }

    emit({{"n", n},
          {"epsilon", eps.to_string()},
          {"offset", trace.offset},
          {"T", trace.T},
          {"alpha", trace.alpha},
          {"bprime", trace.bprime},
          {"maker_won", trace.maker_won},
          {"bins", trace.bins.size()},
          {"final_weight", trace.final_weight},
          {"min_slack", min_slack},
          {"accounting_exact", trace.accounting_exact},
          {"zero_entry", trace.zero_entry},
          {"suffix_ok", trace.suffix_ok},
          {"final_ok", trace.final_ok},
          {"violations", trace.violations},
          {"monitors", monitors}});
    return trace.ok() && monitors_ok ? kOk : kInvariant;
}

int sweep(const std::string& config, const std::string& out, int jobs) {
    const auto rows = run_sweep(SweepConfig::load(config), jobs);
    const std::string csv = sweep_csv(rows);
    if (out.empty() || out == "-") {
        std::cout << csv;
    } else {
        std::ofstream f(out);
        if (!f) throw ConfigError("cannot write " + out);
        f << csv;
    }
    return kOk;
}

int replay_cmd(const std::string& path) {
    const auto report = replay_verify(Transcript::load(path));
    if (report.ok) {
        emit({{"ok", true}});
        return kOk;
    }
    emit({{"ok", false}, {"t", report.t}, {"reason", report.reason}});
    return kIllegal;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"n-in-a-row Maker-Breaker simulator"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "play one turn-based match");
    s->add_option("--n", sim.n, "line length to win")->required()->check(CLI::PositiveNumber);
    s->add_option("--alpha", sim.alpha, "m(t) = ceil(t^alpha) unless --m-family is given");
    s->add_option("--m-family", sim.m_family, "Maker schedule, e.g. power:alpha=1");
    s->add_option("--b-family", sim.b_family, "Breaker schedule, e.g. clog:c=5")->capture_default_str();
    s->add_option("--variant", sim.variant, "standard | directed")->capture_default_str();
    s->add_option("--maker", sim.maker)->capture_default_str();
    s->add_option("--breaker", sim.breaker)->capture_default_str();
    s->add_option("--epsilon", sim.epsilon)->capture_default_str();
    s->add_option("--max-steps", sim.max_steps, "0: first t with m(t) >= n, plus 1");
    s->add_option("--seed", sim.seed)->capture_default_str();
    s->add_option("--out", sim.out, "transcript path");

    BatchedArgs bat;
    auto* bt = app.add_subcommand("batched", "play the batched game");
    bt->add_option("--n", bat.n)->capture_default_str();
    bt->add_option("--alpha", bat.alpha)->capture_default_str();
    bt->add_option("--epsilon", bat.epsilon)->capture_default_str();
    bt->add_option("--mode", bat.mode, "standard | directed")->capture_default_str();
    bt->add_option("--maker", bat.maker, "rectangle | grid")->capture_default_str();
    bt->add_option("--breaker", bat.breaker, "batched-split | batched-random | batched-greedy | idle")
        ->capture_default_str();
    bt->add_option("--m-family", bat.m_family, "default power:alpha=<alpha>");
    bt->add_option("--b-family", bat.b_family)->capture_default_str();
    bt->add_option("--T", bat.T, "0: the rectangle Maker's own T");
    bt->add_option("--seed", bat.seed)->capture_default_str();
    bt->add_option("--max-retries", bat.max_retries)->capture_default_str();

    BingameArgs bin;
    auto* bg = app.add_subcommand("bingame", "play the weighted bin game");
    bg->add_option("--T", bin.T, "turns; required with schedule families");
    bg->add_option("--b", bin.b, "family or comma list")->required();
    bg->add_option("--dM", bin.dM, "family or comma list")->required();
    bg->add_option("--play", bin.play, "equal-spread | random | explicit")->capture_default_str();
    bg->add_option("--w", bin.w, "per-turn totals for --play explicit");
    bg->add_option("--seed", bin.seed)->capture_default_str();

    AnalyzeArgs an;
    auto* az = app.add_subcommand("analyze", "reduce a split-top transcript to the bin game");
    az->add_option("--transcript", an.transcript)->required();
    az->add_option("--epsilon", an.epsilon, "default: the transcript's epsilon");
    az->add_option("--n", an.n, "default: the transcript's n");
    az->add_option("--C", an.C)->capture_default_str();
    az->add_option("--Cprime", an.Cprime)->capture_default_str();
    az->add_option("--k", an.ks, "rich-line thresholds for the monitors")->capture_default_str();
    az->add_option("--csv", an.csv, "write the suffix table");

    std::string sweep_config, sweep_out;
    int jobs = 1;
    auto* sw = app.add_subcommand("sweep", "run a parameter grid");
    sw->add_option("--config", sweep_config)->required();
    sw->add_option("--out", sweep_out, "CSV path, - for stdout");
    sw->add_option("--jobs", jobs, "parallel matches, 0 for all cores")->capture_default_str();

    std::string replay_path;
    auto* rp = app.add_subcommand("replay", "re-execute a transcript and check its outcome");
    rp->add_option("--transcript", replay_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*s) return simulate(sim);
        if (*bt) return batched(bat);
        if (*bg) return bingame(bin);
        if (*az) return analyze(an);
        if (*sw) return sweep(sweep_config, sweep_out, jobs);
        if (*rp) return replay_cmd(replay_path);
    } catch (const IllegalMoveError& e) {
        std::cerr << "illegal move: " << e.what() << "\n";
        return kIllegal;
    } catch (const BudgetExceededError& e) {
        std::cerr << "illegal move: " << e.what() << "\n";
        return kIllegal;
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kInvariant;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return kConfig;
    } catch (const UnsupportedTranscriptError& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvariant;
    }
    return kOk;
}
