#include "loopcond/relation.hpp"
#include "loopcond/error.hpp"

#include <algorithm>
#include <functional>

namespace loopcond
{
    Relation::Relation(std::size_t domain, std::size_t arity, std::vector<Tuple> tuples) :
        _domain(domain),
        _arity(arity),
        _tuples(std::move(tuples))
    {
        if (arity == 0)
            throw InputError("relation arity must be positive");
        for (auto & t : _tuples) {
            if (t.size() != arity)
                throw InputError("tuple of length " + std::to_string(t.size()) + " in relation of arity "
                        + std::to_string(arity));
            for (auto e : t)
                if (e >= domain)
                    throw InputError("tuple entry " + std::to_string(e) + " outside domain of size "
                            + std::to_string(domain));
        }
        std::sort(_tuples.begin(), _tuples.end());
        _tuples.erase(std::unique(_tuples.begin(), _tuples.end()), _tuples.end());
    }

    auto Relation::contains(std::span<const Element> tuple) const -> bool
    {
        auto it = std::lower_bound(_tuples.begin(), _tuples.end(), tuple, [] (const Tuple & a, std::span<const Element> b) {
            return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
        });
        return it != _tuples.end() && std::equal(it->begin(), it->end(), tuple.begin(), tuple.end());
    }

    auto is_constant(std::span<const Element> tuple) -> bool
    {
        return std::adjacent_find(tuple.begin(), tuple.end(), std::not_equal_to<>{}) == tuple.end();
    }
}
