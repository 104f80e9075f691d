#include "nrow/spec_string.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "nrow/errors.hpp"

namespace nrow {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace

double parse_double(std::string_view text) {
    text = trim(text);
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
        throw ConfigError("not a number: '" + std::string(text) + "'");
    return v;
}

long long parse_integer(std::string_view text) {
    text = trim(text);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ConfigError("not an integer: '" + std::string(text) + "'");
    return v;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

SpecString SpecString::parse(std::string_view text) {
    SpecString out;
    text = trim(text);
    const auto colon = text.find(':');
    out.name = std::string(trim(text.substr(0, colon)));
    if (out.name.empty()) throw ConfigError("empty specification");
    if (colon == std::string_view::npos) return out;
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = trim(rest.substr(0, comma));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        if (item.empty()) throw ConfigError("empty item in '" + std::string(text) + "'");
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) {
            out.positional.emplace_back(item);
        } else {
            const std::string key(trim(item.substr(0, eq)));
            if (!out.args.emplace(key, std::string(trim(item.substr(eq + 1)))).second)
                throw ConfigError("repeated key '" + key + "'");
        }
    }
    return out;
}

double SpecString::number(const std::string& key, double fallback) const {
    auto it = args.find(key);
    return it == args.end() ? fallback : parse_double(it->second);
}

double SpecString::number(const std::string& key) const {
    auto it = args.find(key);
    if (it == args.end()) throw ConfigError("'" + name + "' needs " + key + "=...");
    return parse_double(it->second);
}

long long SpecString::integer(const std::string& key, long long fallback) const {
    auto it = args.find(key);
    return it == args.end() ? fallback : parse_integer(it->second);
}

std::string SpecString::text(const std::string& key, const std::string& fallback) const {
    auto it = args.find(key);
    return it == args.end() ? fallback : it->second;
}

void SpecString::expect_keys(std::initializer_list<std::string_view> allowed) const {
    for (const auto& [k, v] : args) {
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            throw ConfigError("'" + name + "' does not take '" + k + "'");
    }
}

} // namespace nrow
