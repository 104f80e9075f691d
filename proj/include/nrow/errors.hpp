#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nrow {

// Bad parameters, schedules or strategy specs. CLI exit code 1.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A move that the rules engine refuses. CLI exit code 2.
class IllegalMoveError : public std::runtime_error {
public:
    IllegalMoveError(const std::string& what, std::int64_t x, std::int64_t y)
        : std::runtime_error(what + " at (" + std::to_string(x) + "," + std::to_string(y) + ")"),
          x_(x), y_(y) {}
    explicit IllegalMoveError(const std::string& what) : std::runtime_error(what) {}

    std::int64_t x() const { return x_; }
    std::int64_t y() const { return y_; }

    // Same error with context, such as the strategy name, in front.
    IllegalMoveError prefixed(const std::string& prefix) const {
        IllegalMoveError e(prefix + ": " + what());
        e.x_ = x_;
        e.y_ = y_;
        return e;
    }

private:
    std::int64_t x_ = 0;
    std::int64_t y_ = 0;
};

// An internal consistency check failed. CLI exit code 3.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class BudgetExceededError : public std::runtime_error {
public:
    BudgetExceededError(std::int64_t required, std::int64_t available)
        : std::runtime_error("budget exceeded: required " + std::to_string(required) +
                             ", available " + std::to_string(available)),
          required_(required), available_(available) {}

    std::int64_t required() const { return required_; }
    std::int64_t available() const { return available_; }

private:
    std::int64_t required_;
    std::int64_t available_;
};

class SamplingFailureError : public std::runtime_error {
public:
    SamplingFailureError(int failed_cover, int failed_size)
        : std::runtime_error("sampling failed: " + std::to_string(failed_cover) +
                             " candidate sets left a rich run uncovered, " +
                             std::to_string(failed_size) + " were too large"),
          failed_cover_(failed_cover), failed_size_(failed_size) {}

    int failed_cover() const { return failed_cover_; }
    int failed_size() const { return failed_size_; }

private:
    int failed_cover_;
    int failed_size_;
};

class InvalidScheduleError : public std::invalid_argument {
public:
    InvalidScheduleError(const std::string& what, std::int64_t s)
        : std::invalid_argument(what + " (s=" + std::to_string(s) + ")"), s_(s) {}

    std::int64_t failing_s() const { return s_; }

private:
    std::int64_t s_;
};

// A bin-game move that adds more than M(s) over the last s turns.
class SuffixBudgetError : public std::invalid_argument {
public:
    SuffixBudgetError(std::int64_t s, double added, double allowed)
        : std::invalid_argument("suffix budget exceeded at s=" + std::to_string(s) + ": added " +
                                std::to_string(added) + ", allowed " + std::to_string(allowed)),
          s_(s) {}

    std::int64_t failing_s() const { return s_; }

private:
    std::int64_t s_;
};

class UnsupportedTranscriptError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nrow
