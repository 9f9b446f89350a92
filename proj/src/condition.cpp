#include "loopcond/condition.hpp"
#include "loopcond/error.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace loopcond
{
    LoopCondition::LoopCondition(std::vector<std::vector<std::string>> matrix, std::string head,
            std::optional<std::vector<std::string>> pseudo) :
        _matrix(std::move(matrix)),
        _head(std::move(head)),
        _pseudo(std::move(pseudo))
    {
        if (_matrix.size() < 2)
            throw InputError("a loop condition needs at least two rows");
        if (_matrix.front().empty())
            throw InputError("a loop condition needs arity at least 1");
        for (auto & row : _matrix) {
            if (row.size() != _matrix.front().size())
                throw InputError("rows of a loop condition must have equal length");
            for (auto & v : row)
                if (! is_identifier(v))
                    throw InputError("invalid variable name '" + v + "'");
        }
        if (! is_identifier(_head))
            throw InputError("invalid head symbol '" + _head + "'");
        if (_pseudo) {
            if (_pseudo->size() != _matrix.size())
                throw InputError("a pseudo-loop condition needs one unary symbol per row");
            for (auto & u : *_pseudo)
                if (! is_identifier(u))
                    throw InputError("invalid unary symbol '" + u + "'");
        }
    }

    auto LoopCondition::column(std::size_t j) const -> std::vector<std::string>
    {
        std::vector<std::string> out;
        out.reserve(width());
        for (auto & row : _matrix)
            out.push_back(row[j]);
        return out;
    }

    auto LoopCondition::variables() const -> std::vector<std::string>
    {
        std::vector<std::string> out;
        std::set<std::string> seen;
        for (auto & row : _matrix)
            for (auto & v : row)
                if (seen.insert(v).second)
                    out.push_back(v);
        return out;
    }

    auto LoopCondition::plain() const -> LoopCondition
    {
        return LoopCondition(_matrix, _head);
    }

    auto LoopCondition::with_last_row_repeated() const -> LoopCondition
    {
        auto matrix = _matrix;
        matrix.push_back(matrix.back());
        std::optional<std::vector<std::string>> pseudo = _pseudo;
        if (pseudo)
            pseudo->push_back(pseudo->back());
        return LoopCondition(std::move(matrix), _head, std::move(pseudo));
    }

    auto LoopCondition::to_string() const -> std::string
    {
        std::string out;
        for (std::size_t i = 0; i < _matrix.size(); ++i) {
            if (i > 0)
                out += " = ";
            if (_pseudo)
                out += (*_pseudo)[i] + "∘";
            out += _head + "(";
            for (std::size_t j = 0; j < _matrix[i].size(); ++j) {
                if (j > 0)
                    out += ",";
                out += _matrix[i][j];
            }
            out += ")";
        }
        return out;
    }

    namespace
    {
        constexpr std::string_view compose_sign = "\xE2\x88\x98";

        struct ConditionParser
        {
            std::string_view text;
            std::size_t pos = 0;

            auto skip() -> void
            {
                while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
                    ++pos;
            }

            auto at_end() -> bool
            {
                skip();
                return pos >= text.size();
            }

            auto identifier(const char * what) -> std::string
            {
                skip();
                auto start = pos;
                if (pos >= text.size() || ! std::isalpha(static_cast<unsigned char>(text[pos])))
                    throw ParseError(std::string("expected ") + what, pos);
                while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
                    ++pos;
                return std::string(text.substr(start, pos - start));
            }

            auto accept(std::string_view token) -> bool
            {
                skip();
                if (text.substr(pos, token.size()) == token) {
                    pos += token.size();
                    return true;
                }
                return false;
            }

            auto expect(std::string_view token) -> void
            {
                if (! accept(token))
                    throw ParseError("expected '" + std::string(token) + "'", pos);
            }

            struct Occurrence
            {
                std::size_t position;
                std::optional<std::string> unary;
                std::string head;
                std::vector<std::string> args;
            };

            auto occurrence() -> Occurrence
            {
                skip();
                Occurrence occ{pos, std::nullopt, {}, {}};
                auto first = identifier("symbol");
                if (accept(compose_sign) || accept(".")) {
                    occ.unary = first;
                    occ.head = identifier("symbol after composition");
                }
                else
                    occ.head = first;
                expect("(");
                occ.args.push_back(identifier("variable"));
                while (accept(","))
                    occ.args.push_back(identifier("variable"));
                expect(")");
                return occ;
            }
        };
    }

    auto parse_condition(std::string_view text) -> LoopCondition
    {
        ConditionParser parser{text};
        std::vector<ConditionParser::Occurrence> occurrences;
        occurrences.push_back(parser.occurrence());
        while (parser.accept("="))
            occurrences.push_back(parser.occurrence());
        if (! parser.at_end())
            throw ParseError("unexpected input", parser.pos);
        if (occurrences.size() < 2)
            throw ParseError("a loop condition needs at least two occurrences", occurrences.front().position);

        auto & first = occurrences.front();
        std::vector<std::vector<std::string>> matrix;
        std::vector<std::string> unary;
        for (auto & occ : occurrences) {
            if (occ.head != first.head)
                throw ParseError("mixed head symbols '" + first.head + "' and '" + occ.head + "'", occ.position);
            if (occ.args.size() != first.args.size())
                throw ParseError("mismatched arities " + std::to_string(first.args.size()) + " and "
                        + std::to_string(occ.args.size()), occ.position);
            if (occ.unary.has_value() != first.unary.has_value())
                throw ParseError("mixed pseudo and plain occurrences", occ.position);
            if (occ.unary && *occ.unary == occ.head)
                throw ParseError("unary symbol coincides with head symbol", occ.position);
            matrix.push_back(occ.args);
            if (occ.unary)
                unary.push_back(*occ.unary);
        }
        if (first.unary)
            return LoopCondition(std::move(matrix), first.head, std::move(unary));
        return LoopCondition(std::move(matrix), first.head);
    }

    auto relation_of(const LoopCondition & condition) -> ConditionRelation
    {
        std::map<std::string, Element> index;
        for (auto & v : condition.variables())
            index.emplace(v, Element(index.size()));
        std::vector<Tuple> tuples;
        for (std::size_t j = 0; j < condition.arity(); ++j) {
            Tuple t;
            for (std::size_t i = 0; i < condition.width(); ++i)
                t.push_back(index.at(condition.at(i, j)));
            tuples.push_back(std::move(t));
        }
        return ConditionRelation{Relation(index.size(), condition.width(), std::move(tuples)), std::move(index)};
    }

    auto element_variable(Element e) -> std::string
    {
        return "x" + std::to_string(e);
    }

    auto condition_of(const Relation & relation, const std::string & head) -> LoopCondition
    {
        if (relation.arity() < 2)
            throw InputError("a loop condition needs a relation of arity at least 2");
        if (relation.empty())
            throw InputError("a loop condition needs a non-empty relation");
        std::vector<std::vector<std::string>> matrix(relation.arity());
        for (auto & t : relation.tuples())
            for (std::size_t i = 0; i < relation.arity(); ++i)
                matrix[i].push_back(element_variable(t[i]));
        return LoopCondition(std::move(matrix), head);
    }

    auto is_trivial(const LoopCondition & condition) -> bool
    {
        for (std::size_t j = 0; j < condition.arity(); ++j) {
            bool constant = true;
            for (std::size_t i = 1; i < condition.width() && constant; ++i)
                constant = condition.at(i, j) == condition.at(0, j);
            if (constant)
                return true;
        }
        return false;
    }

    auto witness_params(const LoopCondition & condition) -> std::vector<std::string>
    {
        auto & first = condition.row(0);
        std::set<std::string> distinct(first.begin(), first.end());
        if (distinct.size() == first.size())
            return first;
        return positional_params(condition.arity());
    }
}
