#ifndef KMN_ERRORS_HPP
#define KMN_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kmn
{

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivisionByZeroError : Error {
    using Error::Error;
};

struct UnboundSymbolError : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

// Raised when an operation meets an input outside the class it handles
// (non-polynomial infinitesimals, outside-catalog cases, and so on).
struct UnsupportedError : Error {
    using Error::Error;
};

struct CyclicBindingError : Error {
    using Error::Error;
};

// Coefficient extraction failed; the message names the offending term.
struct BasisError : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string &msg, std::size_t column)
        : Error(msg + " at column " + std::to_string(column)), column(column)
    {
    }
    std::size_t column;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace kmn

#endif
