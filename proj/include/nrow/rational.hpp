#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace nrow {

// Positive-or-zero rational used for epsilon so that ceil(eps * n) is exact.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den);

    // Accepts "p/q", an integer, or a decimal literal such as "0.25".
    static Rational parse(std::string_view text);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    // ceil(this * n), exact.
    std::int64_t ceil_times(std::int64_t n) const;
    // floor(this * n), exact.
    std::int64_t floor_times(std::int64_t n) const;

    Rational halved() const { return Rational(num_, den_ * 2); }

    std::string to_string() const;

    friend bool operator==(const Rational&, const Rational&) = default;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

} // namespace nrow
