#ifndef LOOPCOND_COMPOSE_HPP
#define LOOPCOND_COMPOSE_HPP

#include "loopcond/algebra.hpp"
#include "loopcond/condition.hpp"
#include "loopcond/identities.hpp"
#include "loopcond/relation.hpp"
#include "loopcond/term.hpp"

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace loopcond
{
    // Syntactic compositions

    /// f ⋆ g: f applied to n copies of g over fresh parameters x{i}_{j},
    /// listed row-major (i over f's arguments, j over g's).
    auto star(const TermFunction & f, const TermFunction & g) -> TermFunction;

    /// f_1 ⋆ f_2 ⋆ ... ⋆ f_r with parameters z{i1}_{i2}_..._{ir} in
    /// lexicographic order of index tuples.
    auto star_chain(std::span<const TermFunction> factors) -> TermFunction;

    /// Innermost rewriting of s(u, ..., u) to u until no redex is left.
    auto idem_normalize(const Term & term) -> Term;

    // Taylor systems

    enum class XY : std::uint8_t { x, y };

    struct TaylorRow
    {
        std::vector<XY> lhs;
        std::vector<XY> rhs;
    };

    /// n identities t(lhs_i) = t(rhs_i) over {x, y} with lhs_i[i] = x and
    /// rhs_i[i] = y. `unary`, when present, names the outer unary symbols of
    /// the pseudo-Taylor shape, one pair per row; they stand for identities
    /// in every algebra this library evaluates.
    class TaylorSystem
    {
    public:
        TaylorSystem(std::string symbol, std::vector<TaylorRow> rows,
                std::optional<std::vector<std::pair<std::string, std::string>>> unary = std::nullopt);

        auto symbol() const -> const std::string & { return _symbol; }
        auto arity() const -> std::size_t { return _rows.size(); }
        auto rows() const -> const std::vector<TaylorRow> & { return _rows; }
        auto unary() const -> const std::optional<std::vector<std::pair<std::string, std::string>>> & { return _unary; }

        auto to_identities() const -> IdentitySystem;
        auto to_string() const -> std::string;

    private:
        std::string _symbol;
        std::vector<TaylorRow> _rows;
        std::optional<std::vector<std::pair<std::string, std::string>>> _unary;
    };

    /// Reads a Taylor system from identities over one n-ary symbol and the
    /// variables x and y. Rows are matched to positions, flipping sides where
    /// needed. Throws InputError when no arrangement is Taylor-shaped.
    auto taylor_from_identities(const IdentitySystem & system) -> TaylorSystem;

    /// True iff no projection satisfies every row.
    auto rejects_all_projections(const TaylorSystem & system) -> bool;

    /// Checks `t` against every row of `system` on every assignment of x, y.
    auto verify_taylor(const FiniteAlgebra & algebra, const TaylorSystem & system, const TermFunction & t) -> bool;

    struct Width3Output
    {
        /// Width 3, arity n^3, over the 2n variables x1..xn, y1..yn.
        LoopCondition condition;
        /// h = t ⋆ t ⋆ t with parameters z{i}_{j}_{k}.
        TermFunction recipe;
        /// Row r of the condition: the variable inserted at position (i,j,k).
        std::array<std::vector<std::string>, 3> substitutions;
        std::size_t n;
    };

    /// Builds the width-3 loop condition satisfied by t ⋆ t ⋆ t in every
    /// idempotent algebra in which t satisfies `system`. Position (i,j,k)
    /// receives the column (x_{i,j}, y_{i,j}, x_{j,k}).
    auto taylor_to_width3(const TaylorSystem & system) -> Width3Output;

    /// One identity of the h1 input realised on t: substituting `lhs_vars`
    /// collapses t to the left side at factor `lhs_level`, `rhs_vars` to the
    /// right side at factor `rhs_level`.
    struct H1Realisation
    {
        std::size_t identity;
        std::size_t lhs_level;
        std::size_t rhs_level;
        std::vector<std::string> lhs_vars;
        std::vector<std::string> rhs_vars;
    };

    struct H1TaylorOutput
    {
        TaylorSystem system;
        /// t = f_1 ⋆ ... ⋆ f_m ⋆ g_1 ⋆ ... ⋆ g_m.
        TermFunction t;
        std::size_t ell;
        /// Every way of realising an input identity on t.
        std::vector<H1Realisation> realisations;
        /// Row j of `system` is an instance of `realisations[row_source[j]]`.
        std::vector<std::size_t> row_source;
    };

    /// From a non-trivial h1 system, derive Taylor identities of arity
    /// ell = product of the side arities, satisfied by t in every idempotent
    /// algebra satisfying the input. Throws InputError for non-h1 or trivial
    /// input and BudgetError when ell exceeds `arity_limit`.
    auto h1_to_taylor(const IdentitySystem & system, bool idempotent_mode,
            std::uint64_t arity_limit = std::uint64_t(1) << 12) -> H1TaylorOutput;

    // pp-gadgets

    /// For every index tuple in {0..l-1}^m that is not constant,
    /// (z[i_1], ..., z[i_m]) is in the relation.
    auto phi_eval(const Relation & relation, std::span<const Element> z) -> bool;

    struct GadgetOptions
    {
        /// Limit on d^(k-1) * (d^2)^m.
        std::uint64_t search_budget = std::uint64_t(1) << 36;
        std::chrono::milliseconds time_limit{10000};
    };

    /// A relation on pairs, (a, b) encoded as a * base + b, with the
    /// x-witnesses found for each member tuple.
    struct Gadget
    {
        Relation relation;
        std::size_t base_domain;
        std::size_t k;
        std::map<Tuple, std::vector<Element>> witnesses;
    };

    inline auto encode_pair(Element a, Element b, std::size_t base) -> Element { return Element(a * base + b); }
    inline auto decode_pair(Element p, std::size_t base) -> std::pair<Element, Element>
    {
        return {Element(p / base), Element(p % base)};
    }

    /// The m-ary relation Q on pairs: a tuple ((a_1,b_1),...,(a_m,b_m)) is
    /// in Q iff some x_1..x_{k-1} satisfy
    ///   phi_{k+2-m}(x_m, ..., x_{k-1}, a_m, b_m),
    ///   phi_3(x_i, a_i, b_i) for i < m, and
    ///   every reordering of (x_i, x_j, y_3, ..., y_m) lies in R for distinct
    ///   i, j and all y's drawn from the x's, a's and b's.
    /// Requires k >= max(4, m+1).
    auto build_q_gadget(const Relation & relation, std::size_t k, const GadgetOptions & options = {}) -> Gadget;

    /// The binary variant: ((a_1,b_1),(a_2,b_2)) is in Q iff some x_1..x_{k-1}
    /// satisfy phi_{k-1}(x_1..x_{k-1}), phi_k(x_2..x_{k-1}, a_2, b_2) and
    /// phi_3(x_1, a_1, b_1). Requires a binary relation and k >= 4.
    auto build_q2_gadget(const Relation & relation, std::size_t k, const GadgetOptions & options = {}) -> Gadget;

    /// The k+1 pairs (c1,c2), (c2,c3), ..., (c_{k-1},c_k), (c_k,c1), (c1,c3),
    /// encoded with `base`.
    auto clique_pair_set(std::span<const Element> c, std::size_t base) -> std::vector<Element>;
}

#endif
