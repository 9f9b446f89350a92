#ifndef LOOPCOND_INDICATOR_HPP
#define LOOPCOND_INDICATOR_HPP

#include "loopcond/algebra.hpp"
#include "loopcond/condition.hpp"
#include "loopcond/term.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace loopcond
{
    struct IndicatorOptions
    {
        /// Maximum |A|^|V| * m, the length of one generator vector.
        std::uint64_t cell_budget = 64;
        /// Maximum number of closure elements.
        std::uint64_t closure_cap = std::uint64_t(1) << 22;
    };

    /// The n projection columns of a loop condition evaluated over every
    /// assignment V -> A. Generator j is the concatenation of m blocks; block i,
    /// coordinate d holds the value that assignment d gives to x_{i,j}.
    struct IndicatorInstance
    {
        std::size_t algebra_size;
        std::size_t width;
        std::vector<std::string> variables;
        std::size_t assignment_count;
        std::vector<std::vector<Element>> generators;
        /// Witness parameters; generator j is provenanced by Term::var(params[j]).
        std::vector<std::string> params;

        auto cells() const -> std::size_t { return width * assignment_count; }

        /// Values of `variables` under assignment number `d`.
        auto assignment(std::size_t d) const -> std::vector<Element>;
    };

    /// Throws BudgetError when |A|^|V| * m exceeds `options.cell_budget`.
    auto build_indicator(const FiniteAlgebra & algebra, const LoopCondition & condition,
            const IndicatorOptions & options = {}) -> IndicatorInstance;

    struct ClosureStats
    {
        std::uint64_t size = 0;
        std::uint64_t depth = 0;
        std::uint64_t applications = 0;
    };

    /// The subpower generated by an indicator instance, with one witnessing
    /// term per element. Elements are numbered in discovery order: by term
    /// depth, then operation order, then lexicographic argument order.
    class Closure
    {
    public:
        Closure(Closure &&) noexcept;
        Closure & operator=(Closure &&) noexcept;
        ~Closure();

        auto size() const -> std::size_t;
        auto stats() const -> const ClosureStats &;

        /// Full-length vector of element `i`.
        auto vector(std::size_t i) const -> std::vector<Element>;
        auto depth(std::size_t i) const -> std::size_t;
        /// The term over the instance parameters that produced element `i`.
        auto term(std::size_t i) const -> Term;
        auto witness(std::size_t i) const -> TermFunction;

        /// Index of `vec` in the closure, if present.
        auto find(std::span<const Element> vec) const -> std::optional<std::size_t>;

        struct Impl;
        explicit Closure(std::unique_ptr<Impl>);

    private:
        std::unique_ptr<Impl> _impl;
    };

    /// Breadth-first generation that stops at the first element (in discovery
    /// order) accepted by `stop`. Throws BudgetError past `options.closure_cap`.
    auto search_closure(const FiniteAlgebra & algebra, const IndicatorInstance & instance,
            const std::function<bool (std::span<const Element>)> & stop,
            const IndicatorOptions & options = {}) -> std::pair<Closure, std::optional<std::size_t>>;

    /// The full closure of the generators under the basic operations.
    auto generate_closure(const FiniteAlgebra & algebra, const IndicatorInstance & instance,
            const IndicatorOptions & options = {}) -> Closure;

    /// True iff the m blocks of `vec` are pairwise equal.
    auto blocks_equal(std::span<const Element> vec, std::size_t width) -> bool;

    /// A witness for `condition` in `algebra`, or nothing if the algebra does
    /// not satisfy it. Pseudo wrappers are ignored.
    auto satisfies(const FiniteAlgebra & algebra, const LoopCondition & condition,
            const IndicatorOptions & options = {}, ClosureStats * stats = nullptr) -> std::optional<TermFunction>;
}

#endif
