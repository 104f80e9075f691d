#include "nrow/rational.hpp"

#include <charconv>
#include <numeric>

#include "nrow/errors.hpp"

namespace nrow {

namespace {

std::int64_t parse_int(std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError("not an integer: '" + std::string(s) + "'");
    }
    return v;
}

__int128 floor_div(__int128 a, __int128 b) {
    __int128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

} // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw ConfigError("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = num / (g == 0 ? 1 : g);
    den_ = den / (g == 0 ? 1 : g);
}

Rational Rational::parse(std::string_view text) {
    if (text.empty()) throw ConfigError("empty rational");
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        if (frac.size() > 15) throw ConfigError("too many decimals: '" + std::string(text) + "'");
        const bool negative = !whole.empty() && whole.front() == '-';
        if (negative) whole.remove_prefix(1);
        std::int64_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        const std::int64_t w = whole.empty() ? 0 : parse_int(whole);
        const std::int64_t f = frac.empty() ? 0 : parse_int(frac);
        const std::int64_t num = w * den + f;
        return Rational(negative ? -num : num, den);
    }
    return Rational(parse_int(text), 1);
}

std::int64_t Rational::ceil_times(std::int64_t n) const {
    return static_cast<std::int64_t>(-floor_div(-static_cast<__int128>(num_) * n, den_));
}

std::int64_t Rational::floor_times(std::int64_t n) const {
    return static_cast<std::int64_t>(floor_div(static_cast<__int128>(num_) * n, den_));
}

std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

} // namespace nrow
