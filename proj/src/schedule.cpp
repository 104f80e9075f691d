#include "nrow/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "nrow/errors.hpp"
#include "nrow/spec_string.hpp"

namespace nrow {

std::int64_t snapped_ceil(double v) {
    const double r = std::round(v);
    if (std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v))) return static_cast<std::int64_t>(r);
    return static_cast<std::int64_t>(std::ceil(v));
}

namespace {

void require_finite_nonneg(double v, const char* what) {
    if (!std::isfinite(v) || v < 0) throw ConfigError(std::string("schedule ") + what + " must be finite and >= 0");
}

} // namespace

Schedule Schedule::power(double alpha, double c) {
    require_finite_nonneg(alpha, "alpha");
    require_finite_nonneg(c, "c");
    Schedule s;
    s.family_ = Family::power;
    s.alpha_ = alpha;
    s.c_ = c;
    return s;
}

Schedule Schedule::clog(double c) {
    require_finite_nonneg(c, "c");
    Schedule s;
    s.family_ = Family::clog;
    s.c_ = c;
    return s;
}

Schedule Schedule::constant(double c) {
    require_finite_nonneg(c, "c");
    Schedule s;
    s.family_ = Family::constant;
    s.c_ = c;
    return s;
}

Schedule Schedule::zero() { return Schedule{}; }

Schedule Schedule::list(std::vector<std::int64_t> values) {
    if (values.empty()) throw ConfigError("explicit schedule is empty");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0) throw InvalidScheduleError("negative schedule entry", static_cast<std::int64_t>(i + 1));
        if (i > 0 && values[i] < values[i - 1])
            throw InvalidScheduleError("explicit schedule is not monotone", static_cast<std::int64_t>(i + 1));
    }
    Schedule s;
    s.family_ = Family::list;
    s.values_ = std::move(values);
    return s;
}

Schedule Schedule::parse(std::string_view text) {
    const SpecString spec = SpecString::parse(text);
    if (spec.name == "power") {
        spec.expect_keys({"alpha", "c"});
        return power(spec.number("alpha", 1.0), spec.number("c", 1.0));
    }
    if (spec.name == "clog") {
        spec.expect_keys({"c"});
        return clog(spec.number("c"));
    }
    if (spec.name == "const") {
        spec.expect_keys({"c"});
        return constant(spec.number("c"));
    }
    if (spec.name == "zero") {
        spec.expect_keys({});
        return zero();
    }
    if (spec.name == "list") {
        spec.expect_keys({});
        std::vector<std::int64_t> v;
        for (const auto& p : spec.positional) v.push_back(parse_integer(p));
        return list(std::move(v));
    }
    throw ConfigError("unknown schedule family '" + spec.name + "'");
}

std::int64_t Schedule::operator()(std::int64_t t) const {
    if (t < 1) throw std::invalid_argument("schedules are defined for t >= 1");
    switch (family_) {
    case Family::power: return snapped_ceil(c_ * std::pow(static_cast<double>(t), alpha_));
    case Family::clog: return snapped_ceil(c_ * std::log(static_cast<double>(t) + 1.0));
    case Family::constant: return snapped_ceil(c_);
    case Family::zero: return 0;
    case Family::list:
        return values_[static_cast<std::size_t>(std::min<std::int64_t>(t, static_cast<std::int64_t>(values_.size())) - 1)];
    }
    return 0;
}

std::int64_t Schedule::cumulative(std::int64_t T) const {
    std::int64_t sum = 0;
    for (std::int64_t t = 1; t <= T; ++t) sum += (*this)(t);
    return sum;
}

std::int64_t Schedule::first_reaching(std::int64_t target, std::int64_t limit) const {
    if (family_ == Family::zero || family_ == Family::constant || family_ == Family::list) {
        const std::int64_t cap = family_ == Family::list ? static_cast<std::int64_t>(values_.size()) : 1;
        for (std::int64_t t = 1; t <= cap; ++t)
            if ((*this)(t) >= target) return t;
        return -1;
    }
    if (c_ == 0 || (family_ == Family::power && alpha_ == 0)) return (*this)(1) >= target ? 1 : -1;
    std::int64_t lo = 1, hi = 1;
    while ((*this)(hi) < target) {
        if (hi > limit / 2) return -1;
        lo = hi;
        hi *= 2;
    }
    while (lo < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if ((*this)(mid) >= target) hi = mid;
        else lo = mid + 1;
    }
    return lo;
}

std::string Schedule::to_string() const {
    switch (family_) {
    case Family::power: return "power:alpha=" + format_double(alpha_) + ",c=" + format_double(c_);
    case Family::clog: return "clog:c=" + format_double(c_);
    case Family::constant: return "const:c=" + format_double(c_);
    case Family::zero: return "zero";
    case Family::list: {
        std::string s = "list:";
        for (std::size_t i = 0; i < values_.size(); ++i) s += (i ? "," : "") + std::to_string(values_[i]);
        return s;
    }
    }
    return "zero";
}

} // namespace nrow
