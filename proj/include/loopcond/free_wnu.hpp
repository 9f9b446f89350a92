#ifndef LOOPCOND_FREE_WNU_HPP
#define LOOPCOND_FREE_WNU_HPP

#include "loopcond/condition.hpp"
#include "loopcond/term.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace loopcond
{
    /// Terms of the free algebra over one (m+1)-ary symbol subject to the
    /// weak near-unanimity identities t(x,y,...,y) = t(y,x,y,...,y) = ... =
    /// t(y,...,y,x), without idempotency.
    class FreeWnu
    {
    public:
        explicit FreeWnu(std::size_t m, std::string symbol = "t");

        auto m() const -> std::size_t { return _m; }
        auto symbol() const -> const std::string & { return _symbol; }

        /// Throws InputError unless every application in `term` uses the
        /// symbol with exactly m+1 arguments.
        auto check(const Term & term) const -> void;

        /// Children first; an argument tuple in which m entries share a value
        /// w and one entry u differs becomes (u, w, ..., w). All other tuples,
        /// including the all-equal one, are kept.
        auto canonical(const Term & term) const -> Term;

        auto equal(const Term & lhs, const Term & rhs) const -> bool;

        /// Given m argument tuples whose applications are pairwise equal,
        /// returns the first coordinate (0-based) on which all tuples agree.
        /// Throws std::logic_error if the applications differ.
        auto shared_coordinate(std::span<const std::vector<Term>> rows) const -> std::size_t;

    private:
        auto canonical_args(std::vector<Term> args) const -> std::vector<Term>;

        std::size_t _m;
        std::string _symbol;
    };

    struct WnuSearchReport
    {
        std::optional<TermFunction> found;
        std::uint64_t checked_terms = 0;
        std::size_t max_depth = 0;
    };

    /// Enumerates canonical terms over the condition's witness parameters by
    /// depth, and within a depth in generation order, returning the first
    /// whose row substitutions are all equal in the free algebra. Requires
    /// width m, uses a symbol of arity m+1.
    auto search_satisfying_term(const LoopCondition & condition, int max_depth,
            std::uint64_t term_limit = std::uint64_t(1) << 22) -> WnuSearchReport;

    /// True iff the row substitutions of `f` are pairwise equal in `wnu`.
    auto wnu_satisfies(const FreeWnu & wnu, const LoopCondition & condition, const TermFunction & f) -> bool;
}

#endif
