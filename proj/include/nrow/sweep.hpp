#pragma once

// Parameter sweeps over the turn-based game.

#include <cstdint>
#include <string>
#include <vector>

#include "nrow/rational.hpp"

namespace nrow {

struct StrategyPair {
    std::string maker;
    std::string breaker;
};

// JSON object; every list key is optional and an empty list yields no matches.
//   variant       "standard" | "directed" (default "standard")
//   n             [int]
//   epsilon       ["p/q" | number]               (default ["1/4"])
//   m             [schedule]                     (default ["power:alpha=1"])
//   alpha         [number]  appended to m as power:alpha=a
//   b             [schedule]
//   pairs         [{"maker": .., "breaker": ..}] or [[maker, breaker]]
//   seeds         [int]                          (default [1])
//   replications  int >= 1                       (default 1)
//   max_steps     int >= 0                       (default 0)
struct SweepConfig {
    std::string variant = "standard";
    std::vector<int> n;
    std::vector<std::string> epsilon{"1/4"};
    std::vector<std::string> m{"power:alpha=1"};
    std::vector<std::string> b;
    std::vector<StrategyPair> pairs;
    std::vector<std::uint64_t> seeds{1};
    int replications = 1;
    std::int64_t max_steps = 0;

    // Throws ConfigError on malformed input or unknown keys.
    static SweepConfig from_json(const std::string& text);
    static SweepConfig load(const std::string& path);
};

struct SweepRow {
    enum class Kind { match, aggregate, error };
    Kind kind = Kind::match;
    int n = 0;
    std::string epsilon;
    std::string m;
    std::string b;
    std::string maker;
    std::string breaker;
    std::uint64_t seed = 0;
    int replication = 0;
    std::uint64_t match_seed = 0;
    bool maker_won = false;
    std::int64_t tau = 0;
    std::int64_t m_tau = 0;
    std::int64_t steps = 0;
    std::int64_t matches = 0; // aggregate rows: finished matches in the group
    std::int64_t wins = 0;    // aggregate rows
    std::string error;
    double wall_ms = 0;
};

// Seed handed to run_match for a replication; replication 0 keeps `seed`.
std::uint64_t replication_seed(std::uint64_t seed, int replication);

// Match and error rows sorted by parameter key, then one aggregate row per
// parameter group with at least one match. jobs <= 0 uses the OpenMP default.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg, int jobs = 1);

// Columns: kind, n, epsilon, m, b, maker, breaker, seed, replication,
// match_seed, maker_won, tau, m_tau, m_tau_over_n, steps, matches, wins,
// win_fraction, error, wall_ms.
std::string sweep_csv(const std::vector<SweepRow>& rows);

} // namespace nrow
