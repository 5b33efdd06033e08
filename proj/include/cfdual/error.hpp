#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfdual {

/// Malformed expression text. `offset()` is the byte offset of the
/// offending token in the source string.
class ParseError : public std::runtime_error {
public:
    enum class Kind { Syntax, UnknownIdentifier, VariableOutOfRange };

    ParseError(Kind kind, std::size_t offset, const std::string& what);

    Kind kind() const noexcept { return kind_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    Kind kind_;
    std::size_t offset_;
};

/// A function was evaluated outside its domain (log, sqrt, division, ...).
class DomainError : public std::runtime_error {
public:
    DomainError(std::string function, std::vector<double> point);

    const std::string& function() const noexcept { return function_; }
    const std::vector<double>& point() const noexcept { return point_; }

private:
    std::string function_;
    std::vector<double> point_;
};

/// A metric (or first fundamental form) failed the positive-definiteness
/// floor at a point.
class DegenerateMetricError : public std::runtime_error {
public:
    explicit DegenerateMetricError(std::vector<double> point, const std::string& detail = {});

    const std::vector<double>& point() const noexcept { return point_; }

private:
    std::vector<double> point_;
};

/// An operation's documented precondition does not hold.
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string format_point(const std::vector<double>& p);

} // namespace cfdual
