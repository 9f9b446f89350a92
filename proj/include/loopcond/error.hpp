#ifndef LOOPCOND_ERROR_HPP
#define LOOPCOND_ERROR_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace loopcond
{
    /// Base class for every recoverable error raised by the library.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Malformed textual input. `position()` is a byte offset into the parsed text.
    class ParseError : public Error
    {
    public:
        ParseError(const std::string & message, std::size_t position) :
            Error(message + " (at offset " + std::to_string(position) + ")"),
            _position(position)
        {
        }

        auto position() const -> std::size_t { return _position; }

    private:
        std::size_t _position;
    };

    /// Well-formed input that violates an operation's precondition.
    class InputError : public Error
    {
    public:
        using Error::Error;
    };

    /// An exponential construction would exceed its configured limit.
    class BudgetError : public Error
    {
    public:
        BudgetError(const std::string & what, std::uint64_t required, std::uint64_t limit) :
            Error(what + ": requires " + std::to_string(required) + ", limit " + std::to_string(limit)),
            _required(required),
            _limit(limit)
        {
        }

        auto required() const -> std::uint64_t { return _required; }
        auto limit() const -> std::uint64_t { return _limit; }

    private:
        std::uint64_t _required, _limit;
    };
}

#endif
