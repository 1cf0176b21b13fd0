#ifndef LUTGRID_ERRORS_HPP
#define LUTGRID_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lutgrid {

/// Argument violates a documented precondition (dimensions, ranges, shapes).
class InvalidInput : public std::invalid_argument
{
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed text input (.cube files). Messages carry the offending line number.
class ParseError : public std::runtime_error
{
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed binary input (BGW1 grids, PNG). Messages name the offending field.
class FormatError : public std::runtime_error
{
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error
{
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace lutgrid

#endif // LUTGRID_ERRORS_HPP
