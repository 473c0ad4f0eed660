#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace admfreq {

/// Malformed input: bad config, scenario, CSV or precondition violation.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
    InputError(const std::string& source, std::size_t line, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_ = 0;
};

/// Thrown when stepping an estimator that has already diverged.
class DivergedError : public std::runtime_error {
public:
    explicit DivergedError(std::size_t index)
        : std::runtime_error("estimator diverged at sample " + std::to_string(index)), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

}  // namespace admfreq
