#include "loopcond/identities.hpp"
#include "loopcond/error.hpp"

namespace loopcond
{
    IdentitySystem::IdentitySystem(std::vector<Identity> identities) :
        _identities(std::move(identities))
    {
        if (_identities.empty())
            throw InputError("an identity system needs at least one identity");
        for (auto & id : _identities)
            for (auto * side : {&id.lhs, &id.rhs})
                for (auto & [symbol, arity] : side->signature()) {
                    auto [it, inserted] = _signature.emplace(symbol, arity);
                    if (! inserted && it->second != arity)
                        throw InputError("symbol '" + symbol + "' used with arities " + std::to_string(it->second)
                                + " and " + std::to_string(arity));
                }
    }

    auto IdentitySystem::is_height1() const -> bool
    {
        auto flat = [] (const Term & t) {
            if (t.is_var())
                return false;
            for (auto & a : t.args())
                if (! a.is_var())
                    return false;
            return true;
        };
        for (auto & id : _identities)
            if (! flat(id.lhs) || ! flat(id.rhs))
                return false;
        return true;
    }

    auto IdentitySystem::is_trivial(std::uint64_t limit) const -> bool
    {
        if (! is_height1())
            throw InputError("triviality by projections is only decided for height-1 systems");

        std::vector<std::string> symbols;
        std::vector<std::size_t> arities;
        std::uint64_t count = 1;
        for (auto & [s, a] : _signature) {
            symbols.push_back(s);
            arities.push_back(a);
            if (count > limit / a)
                throw BudgetError("projection assignments", count * a, limit);
            count *= a;
        }

        auto symbol_index = [&] (const std::string & s) {
            for (std::size_t i = 0; i < symbols.size(); ++i)
                if (symbols[i] == s)
                    return i;
            throw std::logic_error("symbol missing from signature");
        };
        struct Flat
        {
            std::size_t lhs, rhs;
            const Term * l;
            const Term * r;
        };
        std::vector<Flat> flats;
        for (auto & id : _identities)
            flats.push_back(Flat{symbol_index(id.lhs.name()), symbol_index(id.rhs.name()), &id.lhs, &id.rhs});

        std::vector<std::size_t> choice(symbols.size(), 0);
        while (true) {
            bool ok = true;
            for (auto & f : flats) {
                if (f.l->args()[choice[f.lhs]].name() != f.r->args()[choice[f.rhs]].name()) {
                    ok = false;
                    break;
                }
            }
            if (ok)
                return true;
            std::size_t i = 0;
            for (; i < choice.size(); ++i) {
                if (++choice[i] < arities[i])
                    break;
                choice[i] = 0;
            }
            if (i == choice.size())
                return false;
        }
    }

    auto IdentitySystem::to_string() const -> std::string
    {
        std::string out;
        for (auto & id : _identities)
            out += id.lhs.to_string() + " = " + id.rhs.to_string() + "\n";
        return out;
    }

    auto parse_identities(std::string_view text) -> IdentitySystem
    {
        std::vector<Identity> identities;
        std::size_t start = 0;
        while (start <= text.size()) {
            auto end = text.find_first_of("\n;", start);
            if (end == std::string_view::npos)
                end = text.size();
            auto item = text.substr(start, end - start);
            if (auto hash = item.find('#'); hash != std::string_view::npos)
                item = item.substr(0, hash);
            if (item.find_first_not_of(" \t\r") != std::string_view::npos) {
                auto eq = item.find('=');
                if (eq == std::string_view::npos)
                    throw ParseError("expected '=' in identity", start);
                if (item.find('=', eq + 1) != std::string_view::npos)
                    throw ParseError("more than one '=' in identity", start + item.find('=', eq + 1));
                try {
                    identities.push_back(Identity{parse_term(item.substr(0, eq)), parse_term(item.substr(eq + 1))});
                }
                catch (const ParseError & e) {
                    throw ParseError(std::string("in identity '") + std::string(item) + "': " + e.what(), start);
                }
            }
            start = end + 1;
        }
        return IdentitySystem(std::move(identities));
    }
}
