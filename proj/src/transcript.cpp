#include "nrow/transcript.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nrow/errors.hpp"

namespace nrow {

using Json = nlohmann::ordered_json;

GameMode TranscriptHeader::mode() const {
    GameMode m = parse_variant(variant, n, epsilon);
    m.directed_marks_occupy = directed_marks_occupy;
    m.validate();
    return m;
}

std::string Transcript::to_jsonl() const {
    std::string out;
    Json h;
    h["record"] = "header";
    h["engine"] = header.engine;
    h["variant"] = header.variant;
    h["n"] = header.n;
    h["epsilon"] = header.epsilon.to_string();
    h["directed_marks_occupy"] = header.directed_marks_occupy;
    h["m"] = header.m;
    h["b"] = header.b;
    h["maker"] = header.maker;
    h["breaker"] = header.breaker;
    h["seed"] = header.seed;
    h["max_steps"] = header.max_steps;
    out += h.dump() + "\n";
    for (const auto& mv : moves) {
        Json r;
        r["record"] = "move";
        r["t"] = mv.t;
        r["player"] = to_string(mv.player);
        Json pts = Json::array();
        for (const auto& p : mv.points) {
            if (p.dir) pts.push_back({p.point.x, p.point.y, p.dir->dx, p.dir->dy});
            else pts.push_back({p.point.x, p.point.y});
        }
        r["points"] = std::move(pts);
        out += r.dump() + "\n";
    }
    if (outcome) {
        Json o;
        o["record"] = "outcome";
        o["result"] = outcome->maker_won ? "maker-win" : "survival";
        o["tau"] = outcome->tau;
        o["m_tau"] = outcome->m_tau;
        o["steps"] = outcome->steps;
        out += o.dump() + "\n";
    }
    return out;
}

Transcript Transcript::from_jsonl(std::string_view text) {
    Transcript tr;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    try {
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            const Json r = Json::parse(line);
            const std::string kind = r.at("record").get<std::string>();
            if (!have_header) {
                if (kind != "header") throw ConfigError("transcript must start with a header record");
                auto& h = tr.header;
                h.engine = r.at("engine").get<std::string>();
                h.variant = r.at("variant").get<std::string>();
                h.n = r.at("n").get<int>();
                h.epsilon = Rational::parse(r.at("epsilon").get<std::string>());
                h.directed_marks_occupy = r.value("directed_marks_occupy", true);
                h.m = r.at("m").get<std::string>();
                h.b = r.at("b").get<std::string>();
                h.maker = r.at("maker").get<std::string>();
                h.breaker = r.at("breaker").get<std::string>();
                h.seed = r.at("seed").get<std::uint64_t>();
                h.max_steps = r.at("max_steps").get<std::int64_t>();
                have_header = true;
            } else if (kind == "move") {
                if (tr.outcome) throw ConfigError("move record after the outcome");
                MoveRecord mv;
                mv.t = r.at("t").get<std::int64_t>();
                const std::string who = r.at("player").get<std::string>();
                if (who == "maker") mv.player = Player::maker;
                else if (who == "breaker") mv.player = Player::breaker;
                else throw ConfigError("unknown player '" + who + "'");
                for (const auto& p : r.at("points")) {
                    BreakerMark m{{p.at(0).get<Coord>(), p.at(1).get<Coord>()}, std::nullopt};
                    if (p.size() == 4) m.dir = Direction{p.at(2).get<Coord>(), p.at(3).get<Coord>()};
                    else if (p.size() != 2) throw ConfigError("point entries need 2 or 4 integers");
                    mv.points.push_back(m);
                }
                tr.moves.push_back(std::move(mv));
            } else if (kind == "outcome") {
                if (tr.outcome) throw ConfigError("repeated outcome record");
                Outcome o;
                const std::string res = r.at("result").get<std::string>();
                if (res != "maker-win" && res != "survival") throw ConfigError("unknown result '" + res + "'");
                o.maker_won = res == "maker-win";
                o.tau = r.at("tau").get<std::int64_t>();
                o.m_tau = r.at("m_tau").get<std::int64_t>();
                o.steps = r.at("steps").get<std::int64_t>();
                tr.outcome = o;
            } else {
                throw ConfigError("unknown record kind '" + kind + "'");
            }
        }
    } catch (const Json::exception& e) {
        throw ConfigError("malformed transcript line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!have_header) throw ConfigError("transcript has no header record");
    return tr;
}

void Transcript::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << to_jsonl();
    if (!out) throw ConfigError("failed writing '" + path + "'");
}

Transcript Transcript::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_jsonl(buf.str());
}

} // namespace nrow
