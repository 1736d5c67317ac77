#pragma once
// error.hpp - exception types shared by every pifix module.

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pifix {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed decimal numeral. position() is the 0-based index of the
/// offending character (text length when the numeral ends too early).
class ParseError : public Error {
public:
    ParseError(const std::string& text, std::size_t position, const std::string& why)
        : Error("cannot parse \"" + text + "\" at position " + std::to_string(position) + ": " + why),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

struct ArithmeticError : Error {
    using Error::Error;
};

/// Argument outside the domain an evaluator accepts.
struct DomainError : Error {
    using Error::Error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

/// Not enough steps or precision for an estimator to produce a value.
struct InsufficientData : Error {
    using Error::Error;
};

} // namespace pifix
