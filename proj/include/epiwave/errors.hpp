#pragma once

#include <stdexcept>
#include <string>

namespace epiwave {

/// Malformed or unreadable input (files, dates, numbers).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A domain invariant or operation precondition does not hold.
class InvariantError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace epiwave
