#ifndef LOOPCOND_RELATION_HPP
#define LOOPCOND_RELATION_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace loopcond
{
    using Element = std::uint32_t;
    using Tuple = std::vector<Element>;

    /// A single m-ary relation over the domain {0, ..., d-1}. Tuples are kept
    /// duplicate-free in lexicographic order.
    class Relation
    {
    public:
        Relation(std::size_t domain, std::size_t arity, std::vector<Tuple> tuples = {});

        auto domain() const -> std::size_t { return _domain; }
        auto arity() const -> std::size_t { return _arity; }
        auto tuples() const -> const std::vector<Tuple> & { return _tuples; }
        auto size() const -> std::size_t { return _tuples.size(); }
        auto empty() const -> bool { return _tuples.empty(); }

        auto contains(std::span<const Element> tuple) const -> bool;

        friend auto operator==(const Relation &, const Relation &) -> bool = default;

    private:
        std::size_t _domain;
        std::size_t _arity;
        std::vector<Tuple> _tuples;
    };

    /// True iff every entry of `tuple` is equal (vacuously true for arity <= 1).
    auto is_constant(std::span<const Element> tuple) -> bool;
}

#endif
