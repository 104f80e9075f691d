#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nrow/board.hpp"

namespace nrow {

inline constexpr const char* kEngineVersion = "nrow-engine/1";

struct TranscriptHeader {
    std::string variant = "standard";
    int n = 0;
    Rational epsilon{1, 2};
    bool directed_marks_occupy = true;
    std::string m;       // schedule spec
    std::string b;       // schedule spec
    std::string maker;   // strategy spec
    std::string breaker; // strategy spec
    std::uint64_t seed = 0;
    std::int64_t max_steps = 0;
    std::string engine = kEngineVersion;

    GameMode mode() const;
    friend bool operator==(const TranscriptHeader&, const TranscriptHeader&) = default;
};

struct MoveRecord {
    std::int64_t t = 0;
    Player player = Player::maker;
    std::vector<BreakerMark> points; // Maker points carry no direction

    friend bool operator==(const MoveRecord&, const MoveRecord&) = default;
};

struct Outcome {
    bool maker_won = false;
    std::int64_t tau = 0;   // timestep of the winning Maker turn, 0 if none
    std::int64_t m_tau = 0; // m(tau), 0 if none
    std::int64_t steps = 0; // timesteps played

    friend bool operator==(const Outcome&, const Outcome&) = default;
};

// One JSON object per line: a header record, move records in play order and
// a closing outcome record. Field order is fixed so files diff cleanly.
struct Transcript {
    TranscriptHeader header;
    std::vector<MoveRecord> moves;
    std::optional<Outcome> outcome;

    std::string to_jsonl() const;
    static Transcript from_jsonl(std::string_view text);
    void save(const std::string& path) const;
    static Transcript load(const std::string& path);

    friend bool operator==(const Transcript&, const Transcript&) = default;
};

} // namespace nrow
