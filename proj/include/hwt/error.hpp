#ifndef HWT_ERROR_HPP
#define HWT_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hwt
{

/// Bad arguments or data that violate an operation's preconditions.
class invalid_input : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// A node, row or column reference that does not exist.
class not_found : public std::out_of_range
{
public:
    using std::out_of_range::out_of_range;
};

/// Malformed text input. Carries the 1-based line and the offending field.
class parse_error : public std::runtime_error
{
public:
    parse_error(std::size_t line, std::string field, const std::string& what)
        : std::runtime_error(
              "line " + std::to_string(line) + ", field '" + field + "': " + what)
        , line_(line)
        , field_(std::move(field))
    {
    }

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

} // namespace hwt
#endif // HWT_ERROR_HPP
