#ifndef LOOPCOND_CONDITION_HPP
#define LOOPCOND_CONDITION_HPP

#include "loopcond/relation.hpp"
#include "loopcond/term.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace loopcond
{
    /// The identities f(row_1) = f(row_2) = ... = f(row_m), one row per
    /// occurrence of the n-ary head symbol. The pseudo variant wraps occurrence
    /// i in a unary symbol u_i.
    class LoopCondition
    {
    public:
        LoopCondition(std::vector<std::vector<std::string>> matrix,
                std::string head = "f",
                std::optional<std::vector<std::string>> pseudo = std::nullopt);

        auto width() const -> std::size_t { return _matrix.size(); }
        auto arity() const -> std::size_t { return _matrix.front().size(); }
        auto head() const -> const std::string & { return _head; }
        auto matrix() const -> const std::vector<std::vector<std::string>> & { return _matrix; }
        auto row(std::size_t i) const -> const std::vector<std::string> & { return _matrix[i]; }
        auto at(std::size_t i, std::size_t j) const -> const std::string & { return _matrix[i][j]; }
        auto pseudo() const -> const std::optional<std::vector<std::string>> & { return _pseudo; }
        auto is_pseudo() const -> bool { return _pseudo.has_value(); }

        /// Column j as the tuple (x_{1,j}, ..., x_{m,j}).
        auto column(std::size_t j) const -> std::vector<std::string>;

        /// Distinct variables, first occurrence reading the matrix row-major.
        auto variables() const -> std::vector<std::string>;

        /// The same condition with the pseudo wrappers dropped.
        auto plain() const -> LoopCondition;

        /// The same condition with the last row repeated.
        auto with_last_row_repeated() const -> LoopCondition;

        /// Renders in the condition grammar, `u1∘f(x,y) = u2∘f(y,x)` for pseudo.
        auto to_string() const -> std::string;

        friend auto operator==(const LoopCondition &, const LoopCondition &) -> bool = default;

    private:
        std::vector<std::vector<std::string>> _matrix;
        std::string _head;
        std::optional<std::vector<std::string>> _pseudo;
    };

    /// Parses `head(vars) = head(vars) = ...`; each occurrence may be prefixed
    /// by `u ∘` or `u .` to form a pseudo-loop condition.
    auto parse_condition(std::string_view text) -> LoopCondition;

    struct ConditionRelation
    {
        Relation relation;
        std::map<std::string, Element> index;
    };

    /// The relation whose tuples are the columns of the matrix, over the
    /// variables numbered by first occurrence.
    auto relation_of(const LoopCondition & condition) -> ConditionRelation;

    /// Name used for domain element `e` when turning a relation into a condition.
    auto element_variable(Element e) -> std::string;

    /// One column per tuple of `relation`, in tuple order. Element e becomes
    /// the variable `element_variable(e)`.
    auto condition_of(const Relation & relation, const std::string & head = "f") -> LoopCondition;

    /// True iff some column of the matrix is constant.
    auto is_trivial(const LoopCondition & condition) -> bool;

    /// Parameter names for a witness of `condition`: the first row when its
    /// entries are distinct, otherwise x1..xn.
    auto witness_params(const LoopCondition & condition) -> std::vector<std::string>;
}

#endif
