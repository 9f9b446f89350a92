#include "loopcond/algebra.hpp"
#include "loopcond/error.hpp"
#include "compiled_term.hpp"

#include <set>

namespace loopcond
{
    auto Operation::operator()(std::span<const Element> args, std::size_t size) const -> Element
    {
        std::size_t index = 0;
        for (auto a : args)
            index = index * size + a;
        return table[index];
    }

    FiniteAlgebra::FiniteAlgebra(std::size_t size, std::vector<Operation> operations) :
        _size(size),
        _operations(std::move(operations))
    {
        if (size == 0)
            throw InputError("algebra size must be positive");
        std::set<std::string> names;
        for (auto & op : _operations) {
            if (! is_identifier(op.name))
                throw InputError("invalid operation name '" + op.name + "'");
            if (! names.insert(op.name).second)
                throw InputError("duplicate operation name '" + op.name + "'");
            if (op.arity == 0)
                throw InputError("operation '" + op.name + "' must have positive arity");
            std::size_t expected = 1;
            for (std::size_t i = 0; i < op.arity; ++i) {
                if (expected > (std::size_t(1) << 32) / size)
                    throw InputError("operation '" + op.name + "' table too large");
                expected *= size;
            }
            if (op.table.size() != expected)
                throw InputError("operation '" + op.name + "' table has " + std::to_string(op.table.size())
                        + " entries, expected " + std::to_string(expected));
            for (auto e : op.table)
                if (e >= size)
                    throw InputError("operation '" + op.name + "' table entry " + std::to_string(e)
                            + " outside domain");
        }
    }

    auto FiniteAlgebra::find(const std::string & name) const -> std::optional<std::size_t>
    {
        for (std::size_t i = 0; i < _operations.size(); ++i)
            if (_operations[i].name == name)
                return i;
        return std::nullopt;
    }

    auto FiniteAlgebra::with_operation(Operation op) const -> FiniteAlgebra
    {
        auto ops = _operations;
        ops.push_back(std::move(op));
        return FiniteAlgebra(_size, std::move(ops));
    }

    auto eval_term(const FiniteAlgebra & algebra, const Term & term, const Assignment & assignment) -> Element
    {
        if (term.is_var()) {
            auto it = assignment.find(term.name());
            if (it == assignment.end())
                throw InputError("unassigned variable '" + term.name() + "'");
            if (it->second >= algebra.size())
                throw InputError("variable '" + term.name() + "' assigned a value outside the domain");
            return it->second;
        }
        auto op = algebra.find(term.name());
        if (! op)
            throw InputError("unknown operation symbol '" + term.name() + "'");
        auto & operation = algebra.operations()[*op];
        if (operation.arity != term.arity())
            throw InputError("operation '" + term.name() + "' has arity " + std::to_string(operation.arity)
                    + " but is applied to " + std::to_string(term.arity()) + " arguments");
        std::vector<Element> args;
        args.reserve(term.arity());
        for (auto & a : term.args())
            args.push_back(eval_term(algebra, a, assignment));
        return algebra.apply(*op, args);
    }

    auto verify_witness(const FiniteAlgebra & algebra, const LoopCondition & condition,
            const TermFunction & witness, std::span<const TermFunction> unary) -> bool
    {
        if (witness.arity() != condition.arity())
            throw InputError("witness of arity " + std::to_string(witness.arity()) + " for a condition of arity "
                    + std::to_string(condition.arity()));
        if (! unary.empty() && unary.size() != condition.width())
            throw InputError("expected " + std::to_string(condition.width()) + " unary terms, got "
                    + std::to_string(unary.size()));

        detail::CompiledTerm f(algebra, witness.body, witness.params);
        std::vector<detail::CompiledTerm> us;
        for (auto & u : unary) {
            if (u.arity() != 1)
                throw InputError("unary wrapper of arity " + std::to_string(u.arity()));
            us.emplace_back(algebra, u.body, u.params);
        }

        auto variables = condition.variables();
        std::map<std::string, std::size_t> slot;
        for (std::size_t i = 0; i < variables.size(); ++i)
            slot.emplace(variables[i], i);
        std::vector<std::vector<std::size_t>> rows;
        for (auto & row : condition.matrix()) {
            std::vector<std::size_t> r;
            for (auto & v : row)
                r.push_back(slot.at(v));
            rows.push_back(std::move(r));
        }

        std::vector<Element> args(condition.arity());
        return for_each_assignment(variables.size(), algebra.size(), [&] (std::span<const Element> values) {
            std::optional<Element> first;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                for (std::size_t j = 0; j < args.size(); ++j)
                    args[j] = values[rows[i][j]];
                Element v = f(args);
                if (! us.empty()) {
                    Element single[1] = {v};
                    v = us[i](single);
                }
                if (! first)
                    first = v;
                else if (*first != v)
                    return false;
            }
            return true;
        });
    }
}
