#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace diversity {

/// Malformed or unreadable user input (files, labels, subset specs).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : InputError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A recursive measure or search was asked to go beyond its configured size bound.
class DepthLimitExceeded : public std::invalid_argument {
public:
    DepthLimitExceeded(const std::string& what, std::size_t n, std::size_t bound)
        : std::invalid_argument(what + ": n=" + std::to_string(n) + " exceeds bound " +
                                std::to_string(bound)),
          n_(n), bound_(bound) {}

    std::size_t n() const noexcept { return n_; }
    std::size_t bound() const noexcept { return bound_; }

private:
    std::size_t n_;
    std::size_t bound_;
};

}  // namespace diversity
