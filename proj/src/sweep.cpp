#include "nrow/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>

#include <json.hpp>
#include <omp.h>

#include "nrow/errors.hpp"
#include "nrow/match.hpp"
#include "nrow/rng.hpp"
#include "nrow/schedule.hpp"

namespace nrow {

namespace {

using nlohmann::json;

template <class T>
std::vector<T> list_of(const json& doc, const char* key, std::vector<T> fallback) {
    if (!doc.contains(key)) return fallback;
    const json& v = doc.at(key);
    if (!v.is_array()) throw ConfigError(std::string("sweep: '") + key + "' must be a list");
    std::vector<T> out;
    for (const auto& item : v) out.push_back(item.get<T>());
    return out;
}

std::string scalar_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return v.dump();
    throw ConfigError("sweep: expected a string or number, got " + v.dump());
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

auto group_key(const SweepRow& r) { return std::tie(r.n, r.epsilon, r.m, r.b, r.maker, r.breaker); }

auto row_key(const SweepRow& r) {
    return std::tuple_cat(group_key(r), std::tie(r.seed, r.replication));
}

} // namespace

SweepConfig SweepConfig::from_json(const std::string& text) {
    static const char* const known[] = {"variant", "n",     "epsilon", "m",           "alpha",
                                        "b",       "pairs", "seeds",   "replications", "max_steps"};
    SweepConfig cfg;
    try {
        const json doc = json::parse(text);
        if (!doc.is_object()) throw ConfigError("sweep: config must be a JSON object");
        for (const auto& [key, _] : doc.items()) {
            if (std::find(std::begin(known), std::end(known), key) == std::end(known))
                throw ConfigError("sweep: unknown key '" + key + "'");
        }
        cfg.variant = doc.value("variant", cfg.variant);
        cfg.n = list_of<int>(doc, "n", {});
        cfg.epsilon.clear();
        for (const auto& e : list_of<json>(doc, "epsilon", {json("1/4")})) {
            cfg.epsilon.push_back(Rational::parse(scalar_text(e)).to_string());
        }
        cfg.m.clear();
        const bool has_alpha = doc.contains("alpha");
        for (const auto& s : list_of<std::string>(doc, "m", has_alpha ? std::vector<std::string>{}
                                                                          : std::vector<std::string>{"power:alpha=1"})) {
            cfg.m.push_back(Schedule::parse(s).to_string());
        }
        for (double a : list_of<double>(doc, "alpha", {})) cfg.m.push_back(Schedule::power(a).to_string());
        for (const auto& s : list_of<std::string>(doc, "b", {})) cfg.b.push_back(Schedule::parse(s).to_string());
        for (const auto& p : list_of<json>(doc, "pairs", {})) {
            if (p.is_array() && p.size() == 2) {
                cfg.pairs.push_back({p[0].get<std::string>(), p[1].get<std::string>()});
            } else if (p.is_object()) {
                cfg.pairs.push_back({p.at("maker").get<std::string>(), p.at("breaker").get<std::string>()});
            } else {
                throw ConfigError("sweep: a pair is [maker, breaker] or {\"maker\": .., \"breaker\": ..}");
            }
        }
        cfg.seeds = list_of<std::uint64_t>(doc, "seeds", {1});
        cfg.replications = doc.value("replications", 1);
        cfg.max_steps = doc.value("max_steps", std::int64_t{0});
    } catch (const json::exception& e) {
        throw ConfigError(std::string("sweep: ") + e.what());
    }
    if (cfg.variant != "standard" && cfg.variant != "directed")
        throw ConfigError("sweep: variant must be standard or directed");
    if (cfg.replications < 1) throw ConfigError("sweep: replications must be >= 1");
    if (cfg.max_steps < 0) throw ConfigError("sweep: max_steps must be >= 0");
    return cfg;
}

SweepConfig SweepConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read sweep config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

std::uint64_t replication_seed(std::uint64_t seed, int replication) {
    return replication == 0 ? seed : splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(replication)));
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg, int jobs) {
    std::vector<SweepRow> rows;
    for (int n : cfg.n)
        for (const auto& eps : cfg.epsilon)
            for (const auto& m : cfg.m)
                for (const auto& b : cfg.b)
                    for (const auto& pair : cfg.pairs)
                        for (auto seed : cfg.seeds)
                            for (int r = 0; r < cfg.replications; ++r) {
                                SweepRow row;
                                row.n = n;
                                row.epsilon = eps;
                                row.m = m;
                                row.b = b;
                                row.maker = pair.maker;
                                row.breaker = pair.breaker;
                                row.seed = seed;
                                row.replication = r;
                                row.match_seed = replication_seed(seed, r);
                                rows.push_back(std::move(row));
                            }

    const int threads = jobs > 0 ? jobs : omp_get_max_threads();
    const auto count = static_cast<std::int64_t>(rows.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::int64_t i = 0; i < count; ++i) {
        SweepRow& row = rows[i];
        const auto start = std::chrono::steady_clock::now();
        try {
            MatchConfig mc;
            mc.mode = parse_variant(cfg.variant, row.n, Rational::parse(row.epsilon));
            mc.m = Schedule::parse(row.m);
            mc.b = Schedule::parse(row.b);
            mc.maker = row.maker;
            mc.breaker = row.breaker;
            mc.max_steps = cfg.max_steps;
            mc.seed = row.match_seed;
            const auto out = run_match(mc).result.outcome;
            row.maker_won = out.maker_won;
            row.tau = out.tau;
            row.m_tau = out.m_tau;
            row.steps = out.steps;
        } catch (const std::exception& e) {
            row.kind = SweepRow::Kind::error;
            row.error = e.what();
        }
        row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }

    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) { return row_key(a) < row_key(b); });

    std::vector<SweepRow> aggregates;
    for (const auto& row : rows) {
        if (row.kind == SweepRow::Kind::error) continue;
        if (aggregates.empty() || group_key(aggregates.back()) != group_key(row)) {
            SweepRow agg;
            agg.kind = SweepRow::Kind::aggregate;
            agg.n = row.n;
            agg.epsilon = row.epsilon;
            agg.m = row.m;
            agg.b = row.b;
            agg.maker = row.maker;
            agg.breaker = row.breaker;
            aggregates.push_back(std::move(agg));
        }
        SweepRow& agg = aggregates.back();
        ++agg.matches;
        agg.wins += row.maker_won ? 1 : 0;
        agg.wall_ms += row.wall_ms;
    }
    rows.insert(rows.end(), aggregates.begin(), aggregates.end());
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "kind,n,epsilon,m,b,maker,breaker,seed,replication,match_seed,maker_won,tau,m_tau,m_tau_over_n,"
           "steps,matches,wins,win_fraction,error,wall_ms\n";
    for (const auto& r : rows) {
        const std::string params = std::to_string(r.n) + "," + csv_field(r.epsilon) + "," + csv_field(r.m) + "," +
                                   csv_field(r.b) + "," + csv_field(r.maker) + "," + csv_field(r.breaker) + ",";
        switch (r.kind) {
        case SweepRow::Kind::match:
            out << "match," << params << r.seed << "," << r.replication << "," << r.match_seed << ","
                << (r.maker_won ? 1 : 0) << "," << r.tau << "," << r.m_tau << ","
                << (r.maker_won ? fixed(static_cast<double>(r.m_tau) / r.n, 6) : "") << "," << r.steps << ",,,,,";
            break;
        case SweepRow::Kind::error:
            out << "error," << params << r.seed << "," << r.replication << "," << r.match_seed << ",,,,,,,,,"
                << csv_field(r.error) << ",";
            break;
        case SweepRow::Kind::aggregate:
            out << "aggregate," << params << std::string(8, ',') << r.matches << "," << r.wins << ","
                << fixed(static_cast<double>(r.wins) / static_cast<double>(r.matches), 6) << ",,";
            break;
        }
        out << fixed(r.wall_ms, 3) << "\n";
    }
    return out.str();
}

} // namespace nrow
