#include "loopcond/free_wnu.hpp"
#include "loopcond/error.hpp"

#include <set>

namespace loopcond
{
    FreeWnu::FreeWnu(std::size_t m, std::string symbol) :
        _m(m),
        _symbol(std::move(symbol))
    {
        if (m < 2)
            throw InputError("weak near-unanimity needs m >= 2, got " + std::to_string(m));
        if (! is_identifier(_symbol))
            throw InputError("invalid symbol '" + _symbol + "'");
    }

    auto FreeWnu::check(const Term & term) const -> void
    {
        if (term.is_var())
            return;
        if (term.name() != _symbol)
            throw InputError("unexpected symbol '" + term.name() + "', expected '" + _symbol + "'");
        if (term.arity() != _m + 1)
            throw InputError("'" + _symbol + "' applied to " + std::to_string(term.arity()) + " arguments, expected "
                    + std::to_string(_m + 1));
        for (auto & a : term.args())
            check(a);
    }

    auto FreeWnu::canonical_args(std::vector<Term> args) const -> std::vector<Term>
    {
        // with m+1 >= 3 slots at most one value can fill m of them
        for (std::size_t c = 0; c < 2; ++c) {
            auto & w = args[c];
            std::size_t count = 0;
            std::size_t odd = 0;
            for (std::size_t i = 0; i < args.size(); ++i) {
                if (args[i] == w)
                    ++count;
                else
                    odd = i;
            }
            if (count == _m) {
                std::vector<Term> out;
                out.push_back(args[odd]);
                for (std::size_t i = 0; i < _m; ++i)
                    out.push_back(w);
                return out;
            }
            if (count == _m + 1)
                return args;
        }
        return args;
    }

    auto FreeWnu::canonical(const Term & term) const -> Term
    {
        check(term);
        if (term.is_var())
            return term;
        std::vector<Term> args;
        for (auto & a : term.args())
            args.push_back(canonical(a));
        return Term::app(_symbol, canonical_args(std::move(args)));
    }

    auto FreeWnu::equal(const Term & lhs, const Term & rhs) const -> bool
    {
        return canonical(lhs) == canonical(rhs);
    }

    auto FreeWnu::shared_coordinate(std::span<const std::vector<Term>> rows) const -> std::size_t
    {
        if (rows.empty())
            throw std::logic_error("shared coordinate of no rows");
        std::vector<std::vector<Term>> canon;
        for (auto & row : rows) {
            if (row.size() != _m + 1)
                throw std::logic_error("row of length " + std::to_string(row.size()) + ", expected "
                        + std::to_string(_m + 1));
            std::vector<Term> c;
            for (auto & a : row)
                c.push_back(canonical(a));
            canon.push_back(std::move(c));
        }
        auto first = canonical(Term::app(_symbol, canon.front()));
        for (auto & c : canon)
            if (canonical(Term::app(_symbol, c)) != first)
                throw std::logic_error("rows do not give equal applications");
        for (std::size_t i = 0; i <= _m; ++i) {
            bool shared = true;
            for (auto & c : canon)
                if (c[i] != canon.front()[i])
                    shared = false;
            if (shared)
                return i;
        }
        throw std::logic_error("equal applications without a shared coordinate");
    }

    auto wnu_satisfies(const FreeWnu & wnu, const LoopCondition & condition, const TermFunction & f) -> bool
    {
        auto first = wnu.canonical(f.apply_vars(condition.row(0)));
        for (std::size_t i = 1; i < condition.width(); ++i)
            if (wnu.canonical(f.apply_vars(condition.row(i))) != first)
                return false;
        return true;
    }

    auto search_satisfying_term(const LoopCondition & condition, int max_depth, std::uint64_t term_limit)
        -> WnuSearchReport
    {
        if (max_depth < 0)
            throw InputError("search depth must be non-negative");
        FreeWnu wnu(condition.width());
        auto params = witness_params(condition);
        auto plain = condition.plain();

        WnuSearchReport report;
        std::vector<Term> terms;
        std::set<Term> seen;
        auto consider = [&] (Term term) {
            if (! seen.insert(term).second)
                return false;
            if (terms.size() + 1 > term_limit)
                throw BudgetError("enumerated terms", terms.size() + 1, term_limit);
            terms.push_back(term);
            ++report.checked_terms;
            TermFunction f{params, std::move(term)};
            if (wnu_satisfies(wnu, plain, f)) {
                report.found = std::move(f);
                return true;
            }
            return false;
        };

        for (auto & p : params)
            if (consider(Term::var(p)))
                return report;

        auto arity = wnu.m() + 1;
        std::size_t previous_begin = 0;
        for (int depth = 1; depth <= max_depth; ++depth) {
            report.max_depth = std::size_t(depth);
            auto end = terms.size();
            std::vector<std::size_t> pick(arity, 0);
            while (true) {
                bool fresh = false;
                for (auto i : pick)
                    fresh = fresh || i >= previous_begin;
                if (fresh) {
                    std::vector<Term> args;
                    for (auto i : pick)
                        args.push_back(terms[i]);
                    if (consider(wnu.canonical(Term::app(wnu.symbol(), std::move(args)))))
                        return report;
                }
                std::size_t p = arity;
                while (p > 0 && ++pick[p - 1] == end)
                    pick[--p] = 0;
                if (p == 0)
                    break;
            }
            previous_begin = end;
        }
        return report;
    }
}
