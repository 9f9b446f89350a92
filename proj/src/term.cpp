#include "loopcond/term.hpp"
#include "loopcond/error.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace loopcond
{
    auto is_identifier(std::string_view text) -> bool
    {
        if (text.empty() || ! std::isalpha(static_cast<unsigned char>(text.front())))
            return false;
        return std::all_of(text.begin(), text.end(), [] (char c) {
            return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
        });
    }

    Term::Term(bool is_var, std::string name, std::vector<Term> args) :
        _is_var(is_var),
        _name(std::move(name)),
        _args(std::move(args))
    {
    }

    auto Term::var(std::string name) -> Term
    {
        if (! is_identifier(name))
            throw InputError("invalid variable name '" + name + "'");
        return Term(true, std::move(name), {});
    }

    auto Term::app(std::string symbol, std::vector<Term> args) -> Term
    {
        if (! is_identifier(symbol))
            throw InputError("invalid symbol '" + symbol + "'");
        if (args.empty())
            throw InputError("symbol '" + symbol + "' applied to no arguments");
        return Term(false, std::move(symbol), std::move(args));
    }

    auto Term::depth() const -> std::size_t
    {
        std::size_t result = 0;
        for (auto & a : _args)
            result = std::max(result, a.depth() + 1);
        return result;
    }

    auto Term::size() const -> std::size_t
    {
        std::size_t result = 1;
        for (auto & a : _args)
            result += a.size();
        return result;
    }

    namespace
    {
        auto collect_variables(const Term & t, std::vector<std::string> & out, std::set<std::string> & seen) -> void
        {
            if (t.is_var()) {
                if (seen.insert(t.name()).second)
                    out.push_back(t.name());
                return;
            }
            for (auto & a : t.args())
                collect_variables(a, out, seen);
        }

        auto collect_signature(const Term & t, std::map<std::string, std::size_t> & sig) -> void
        {
            if (t.is_var())
                return;
            auto [it, inserted] = sig.emplace(t.name(), t.arity());
            if (! inserted && it->second != t.arity())
                throw InputError("symbol '" + t.name() + "' used with arities " + std::to_string(it->second)
                        + " and " + std::to_string(t.arity()));
            for (auto & a : t.args())
                collect_signature(a, sig);
        }
    }

    auto Term::variables() const -> std::vector<std::string>
    {
        std::vector<std::string> out;
        std::set<std::string> seen;
        collect_variables(*this, out, seen);
        return out;
    }

    auto Term::signature() const -> std::map<std::string, std::size_t>
    {
        std::map<std::string, std::size_t> sig;
        collect_signature(*this, sig);
        return sig;
    }

    auto Term::substitute(const std::map<std::string, Term> & mapping) const -> Term
    {
        if (_is_var) {
            auto it = mapping.find(_name);
            return it == mapping.end() ? *this : it->second;
        }
        std::vector<Term> args;
        args.reserve(_args.size());
        for (auto & a : _args)
            args.push_back(a.substitute(mapping));
        return Term(false, _name, std::move(args));
    }

    auto Term::to_string() const -> std::string
    {
        if (_is_var)
            return _name;
        std::string out = _name + "(";
        for (std::size_t i = 0; i < _args.size(); ++i) {
            if (i > 0)
                out += ",";
            out += _args[i].to_string();
        }
        return out + ")";
    }

    auto operator==(const Term & a, const Term & b) -> bool
    {
        return a._is_var == b._is_var && a._name == b._name && a._args == b._args;
    }

    auto operator<=>(const Term & a, const Term & b) -> std::strong_ordering
    {
        // variables sort before applications
        if (a._is_var != b._is_var)
            return a._is_var ? std::strong_ordering::less : std::strong_ordering::greater;
        if (auto c = a._name.compare(b._name); c != 0)
            return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
        if (a._args.size() != b._args.size())
            return a._args.size() <=> b._args.size();
        for (std::size_t i = 0; i < a._args.size(); ++i)
            if (auto c = a._args[i] <=> b._args[i]; c != 0)
                return c;
        return std::strong_ordering::equal;
    }

    namespace
    {
        struct TermParser
        {
            std::string_view text;
            std::size_t pos = 0;

            auto skip() -> void
            {
                while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
                    ++pos;
            }

            auto identifier() -> std::string
            {
                skip();
                auto start = pos;
                if (pos >= text.size() || ! std::isalpha(static_cast<unsigned char>(text[pos])))
                    throw ParseError("expected identifier", pos);
                while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
                    ++pos;
                return std::string(text.substr(start, pos - start));
            }

            auto expect(char c) -> void
            {
                skip();
                if (pos >= text.size() || text[pos] != c)
                    throw ParseError(std::string("expected '") + c + "'", pos);
                ++pos;
            }

            auto peek(char c) -> bool
            {
                skip();
                return pos < text.size() && text[pos] == c;
            }

            auto term() -> Term
            {
                auto name = identifier();
                if (! peek('('))
                    return Term::var(name);
                expect('(');
                std::vector<Term> args;
                args.push_back(term());
                while (peek(',')) {
                    ++pos;
                    args.push_back(term());
                }
                expect(')');
                return Term::app(name, std::move(args));
            }
        };
    }

    auto parse_term(std::string_view text) -> Term
    {
        TermParser parser{text};
        auto result = parser.term();
        parser.skip();
        if (parser.pos != text.size())
            throw ParseError("trailing input after term", parser.pos);
        (void) result.signature();
        return result;
    }

    auto positional_params(std::size_t n, std::string_view stem) -> std::vector<std::string>
    {
        std::vector<std::string> out;
        out.reserve(n);
        for (std::size_t i = 1; i <= n; ++i)
            out.push_back(std::string(stem) + std::to_string(i));
        return out;
    }

    auto TermFunction::symbol(const std::string & name, std::size_t arity) -> TermFunction
    {
        auto params = positional_params(arity);
        std::vector<Term> args;
        for (auto & p : params)
            args.push_back(Term::var(p));
        return TermFunction{params, Term::app(name, std::move(args))};
    }

    auto TermFunction::projection(std::size_t n, std::size_t k) -> TermFunction
    {
        auto params = positional_params(n);
        auto body = Term::var(params.at(k));
        return TermFunction{std::move(params), std::move(body)};
    }

    auto TermFunction::apply(std::span<const Term> args) const -> Term
    {
        if (args.size() != params.size())
            throw InputError("term function of arity " + std::to_string(params.size()) + " applied to "
                    + std::to_string(args.size()) + " arguments");
        std::map<std::string, Term> mapping;
        for (std::size_t i = 0; i < params.size(); ++i)
            mapping.insert_or_assign(params[i], args[i]);
        return body.substitute(mapping);
    }

    auto TermFunction::apply_vars(std::span<const std::string> args) const -> Term
    {
        std::vector<Term> terms;
        terms.reserve(args.size());
        for (auto & a : args)
            terms.push_back(Term::var(a));
        return apply(terms);
    }

    auto TermFunction::to_string(std::string_view head) const -> std::string
    {
        std::string out(head);
        out += "(";
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (i > 0)
                out += ",";
            out += params[i];
        }
        return out + ") = " + body.to_string();
    }
}
