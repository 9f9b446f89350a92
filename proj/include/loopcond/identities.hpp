#ifndef LOOPCOND_IDENTITIES_HPP
#define LOOPCOND_IDENTITIES_HPP

#include "loopcond/term.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace loopcond
{
    struct Identity
    {
        Term lhs;
        Term rhs;
    };

    /// A finite set of identities over a consistent signature.
    class IdentitySystem
    {
    public:
        explicit IdentitySystem(std::vector<Identity> identities);

        auto identities() const -> const std::vector<Identity> & { return _identities; }
        auto signature() const -> const std::map<std::string, std::size_t> & { return _signature; }
        auto size() const -> std::size_t { return _identities.size(); }

        /// Every side is a single symbol applied to variables.
        auto is_height1() const -> bool;

        /// True iff some assignment of a projection to every symbol turns all
        /// identities into syntactic equalities. Requires height 1.
        auto is_trivial(std::uint64_t limit = std::uint64_t(1) << 24) const -> bool;

        auto to_string() const -> std::string;

    private:
        std::vector<Identity> _identities;
        std::map<std::string, std::size_t> _signature;
    };

    /// One identity `s = t` per line or `;`-separated item; `#` starts a comment.
    auto parse_identities(std::string_view text) -> IdentitySystem;
}

#endif
