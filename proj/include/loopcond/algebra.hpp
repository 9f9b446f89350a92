#ifndef LOOPCOND_ALGEBRA_HPP
#define LOOPCOND_ALGEBRA_HPP

#include "loopcond/condition.hpp"
#include "loopcond/relation.hpp"
#include "loopcond/term.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace loopcond
{
    /// A basic operation given by its full table. The first argument is the
    /// most significant digit of the table index.
    struct Operation
    {
        std::string name;
        std::size_t arity;
        std::vector<Element> table;

        auto operator()(std::span<const Element> args, std::size_t size) const -> Element;
    };

    /// A finite algebra on {0, ..., size-1}.
    class FiniteAlgebra
    {
    public:
        FiniteAlgebra(std::size_t size, std::vector<Operation> operations);

        auto size() const -> std::size_t { return _size; }
        auto operations() const -> const std::vector<Operation> & { return _operations; }

        /// Index of the operation named `name`, if any.
        auto find(const std::string & name) const -> std::optional<std::size_t>;

        auto apply(std::size_t op, std::span<const Element> args) const -> Element
        {
            return _operations[op](args, _size);
        }

        /// A new algebra with `op` appended.
        auto with_operation(Operation op) const -> FiniteAlgebra;

    private:
        std::size_t _size;
        std::vector<Operation> _operations;
    };

    /// Builds a table by evaluating `fn` on every argument tuple in index order.
    template <typename Fn>
    auto make_operation(std::string name, std::size_t arity, std::size_t size, Fn && fn) -> Operation
    {
        std::size_t count = 1;
        for (std::size_t i = 0; i < arity; ++i)
            count *= size;
        std::vector<Element> table(count);
        std::vector<Element> args(arity);
        for (std::size_t index = 0; index < count; ++index) {
            std::size_t rest = index;
            for (std::size_t i = arity; i-- > 0;) {
                args[i] = Element(rest % size);
                rest /= size;
            }
            table[index] = Element(fn(std::span<const Element>(args)));
        }
        return Operation{std::move(name), arity, std::move(table)};
    }

    using Assignment = std::map<std::string, Element>;

    auto eval_term(const FiniteAlgebra & algebra, const Term & term, const Assignment & assignment) -> Element;

    /// Checks `witness` against `condition` on every assignment of the
    /// condition's variables. For pseudo conditions `unary` supplies one
    /// unary term per row, applied outside the witness; empty means identity.
    auto verify_witness(const FiniteAlgebra & algebra, const LoopCondition & condition,
            const TermFunction & witness, std::span<const TermFunction> unary = {}) -> bool;

    /// Calls `fn(values)` for each assignment of `count` variables over
    /// {0..size-1}, in lexicographic order with the first variable most
    /// significant. Stops early when `fn` returns false; returns whether it ran
    /// to completion.
    template <typename Fn>
    auto for_each_assignment(std::size_t count, std::size_t size, Fn && fn) -> bool
    {
        std::vector<Element> values(count, 0);
        while (true) {
            if (! fn(std::span<const Element>(values)))
                return false;
            std::size_t i = count;
            while (i > 0) {
                --i;
                if (++values[i] < size)
                    break;
                values[i] = 0;
                if (i == 0)
                    return true;
            }
            if (count == 0)
                return true;
        }
    }
}

#endif
