#ifndef LOOPCOND_SRC_COMPILED_TERM_HPP
#define LOOPCOND_SRC_COMPILED_TERM_HPP

#include "loopcond/algebra.hpp"
#include "loopcond/error.hpp"

#include <span>
#include <string>
#include <vector>

namespace loopcond::detail
{
    /// A term with symbols resolved to operation indices and variables to
    /// slots of a value array, stored in postorder.
    class CompiledTerm
    {
    public:
        CompiledTerm(const FiniteAlgebra & algebra, const Term & term, std::span<const std::string> slots) :
            _algebra(&algebra)
        {
            compile(term, slots);
        }

        auto operator()(std::span<const Element> values) const -> Element
        {
            _stack.clear();
            for (auto & node : _nodes) {
                if (node.op < 0) {
                    _stack.push_back(values[node.slot]);
                    continue;
                }
                auto base = _stack.size() - node.slot;
                auto result = _algebra->apply(std::size_t(node.op), std::span<const Element>(_stack).subspan(base));
                _stack.resize(base);
                _stack.push_back(result);
            }
            return _stack.back();
        }

    private:
        struct Node
        {
            int op;
            std::size_t slot;
        };

        auto compile(const Term & term, std::span<const std::string> slots) -> void
        {
            if (term.is_var()) {
                for (std::size_t i = 0; i < slots.size(); ++i)
                    if (slots[i] == term.name()) {
                        _nodes.push_back(Node{-1, i});
                        return;
                    }
                throw InputError("unassigned variable '" + term.name() + "'");
            }
            auto op = _algebra->find(term.name());
            if (! op)
                throw InputError("unknown operation symbol '" + term.name() + "'");
            auto & operation = _algebra->operations()[*op];
            if (operation.arity != term.arity())
                throw InputError("operation '" + term.name() + "' has arity " + std::to_string(operation.arity)
                        + " but is applied to " + std::to_string(term.arity()) + " arguments");
            for (auto & a : term.args())
                compile(a, slots);
            _nodes.push_back(Node{int(*op), term.arity()});
        }

        const FiniteAlgebra * _algebra;
        std::vector<Node> _nodes;
        mutable std::vector<Element> _stack;
    };
}

#endif
