#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace nrow {

// "name:key=value,key=value" or "name:v1,v2,...". Used for schedules and
// strategy selections on the command line and in sweep configs.
struct SpecString {
    std::string name;
    std::map<std::string, std::string> args;
    std::vector<std::string> positional;

    static SpecString parse(std::string_view text);

    bool has(const std::string& key) const { return args.contains(key); }
    double number(const std::string& key, double fallback) const;
    double number(const std::string& key) const;
    long long integer(const std::string& key, long long fallback) const;
    std::string text(const std::string& key, const std::string& fallback) const;
    // Throws ConfigError naming any key outside the allowed set.
    void expect_keys(std::initializer_list<std::string_view> allowed) const;
};

double parse_double(std::string_view text);
long long parse_integer(std::string_view text);
// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

} // namespace nrow
