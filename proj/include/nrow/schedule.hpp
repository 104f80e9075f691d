#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace nrow {

// Per-turn point budget m(t) or b(t), t >= 1.
//   power:alpha=a,c=k  ceil(k * t^a)
//   clog:c=k           ceil(k * ln(t + 1))
//   const:c=k          ceil(k)
//   zero               0
//   list:v1,v2,...     v_t, repeating the last entry past the end
// Products within 1e-9 of an integer are snapped to it before the ceiling.
class Schedule {
public:
    enum class Family { power, clog, constant, zero, list };

    static Schedule power(double alpha, double c = 1.0);
    static Schedule clog(double c);
    static Schedule constant(double c);
    static Schedule zero();
    static Schedule list(std::vector<std::int64_t> values);
    static Schedule parse(std::string_view text);

    std::int64_t operator()(std::int64_t t) const;
    // Sum of the first T values.
    std::int64_t cumulative(std::int64_t T) const;
    // Smallest t >= 1 with value(t) >= target, or -1 if none up to limit.
    std::int64_t first_reaching(std::int64_t target, std::int64_t limit = 100000000) const;

    Family family() const { return family_; }
    double alpha() const { return alpha_; }
    double c() const { return c_; }
    const std::vector<std::int64_t>& values() const { return values_; }
    std::string to_string() const;

    friend bool operator==(const Schedule&, const Schedule&) = default;

private:
    Family family_ = Family::zero;
    double alpha_ = 0.0;
    double c_ = 0.0;
    std::vector<std::int64_t> values_;
};

// ceil(v) after snapping values within 1e-9 (relative) of an integer.
std::int64_t snapped_ceil(double v);

} // namespace nrow
