#ifndef RELBOUND_ERRORS_HPP
#define RELBOUND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace relbound
{

enum class ErrorKind {
    DivisionByZero,      // exact rational division by 0
    DivisionByZeroRange, // divisor interval/affine range straddles 0
    DivisionByZeroPoint, // divisor evaluates to exactly 0 at a point
    NegativeSqrt,
    InvalidFloatOp, // NaN or infinity in a concrete float evaluation
    Overflow,
    ZeroRangeFailure, // function range may contain 0, relative error undefined
    Parse,
    Backend,
    Usage,
};

const char *to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept
    {
        return kind_;
    }

private:
    ErrorKind kind_;
};

class ParseError : public Error
{
public:
    ParseError(const std::string &msg, int line, int column)
        : Error(ErrorKind::Parse, std::to_string(line) + ":" + std::to_string(column) + ": " + msg), line_(line),
          column_(column)
    {
    }

    int line() const noexcept
    {
        return line_;
    }
    int column() const noexcept
    {
        return column_;
    }

private:
    int line_;
    int column_;
};

} // namespace relbound

#endif
