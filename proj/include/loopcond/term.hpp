#ifndef LOOPCOND_TERM_HPP
#define LOOPCOND_TERM_HPP

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace loopcond
{
    /// True for a letter followed by letters, digits or underscores.
    auto is_identifier(std::string_view text) -> bool;

    /// A finite rooted tree: either a variable or a function symbol applied to
    /// one or more subterms.
    class Term
    {
    public:
        static auto var(std::string name) -> Term;
        static auto app(std::string symbol, std::vector<Term> args) -> Term;

        auto is_var() const -> bool { return _is_var; }

        /// Variable name for variables, symbol for applications.
        auto name() const -> const std::string & { return _name; }
        auto args() const -> std::span<const Term> { return _args; }
        auto arity() const -> std::size_t { return _args.size(); }

        auto depth() const -> std::size_t;
        auto size() const -> std::size_t;

        /// Distinct variables in left-to-right first-occurrence order.
        auto variables() const -> std::vector<std::string>;

        /// Symbol -> arity. Throws InputError if one symbol is used with two arities.
        auto signature() const -> std::map<std::string, std::size_t>;

        /// Replaces variables by terms; unmapped variables are kept.
        auto substitute(const std::map<std::string, Term> & mapping) const -> Term;

        auto to_string() const -> std::string;

        friend auto operator==(const Term &, const Term &) -> bool;
        friend auto operator<=>(const Term &, const Term &) -> std::strong_ordering;

    private:
        Term(bool is_var, std::string name, std::vector<Term> args);

        bool _is_var;
        std::string _name;
        std::vector<Term> _args;
    };

    /// Parses `x` or `f(t1, ..., tk)` with k >= 1. Whitespace is ignored.
    auto parse_term(std::string_view text) -> Term;

    /// An n-ary term operation: a body whose free variables are drawn from an
    /// ordered parameter list. Parameter i is the i-th argument.
    struct TermFunction
    {
        std::vector<std::string> params;
        Term body;

        auto arity() const -> std::size_t { return params.size(); }

        /// `symbol(x1, ..., xn)`.
        static auto symbol(const std::string & name, std::size_t arity) -> TermFunction;

        /// The k-th of n projections, parameters x1..xn.
        static auto projection(std::size_t n, std::size_t k) -> TermFunction;

        /// Substitutes `args[i]` for parameter i.
        auto apply(std::span<const Term> args) const -> Term;

        /// Substitutes the variable `args[i]` for parameter i.
        auto apply_vars(std::span<const std::string> args) const -> Term;

        /// `f(p1,...,pn) = body`.
        auto to_string(std::string_view head = "f") const -> std::string;
    };

    auto positional_params(std::size_t n, std::string_view stem = "x") -> std::vector<std::string>;
}

#endif
