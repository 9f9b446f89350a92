#ifndef LOOPCOND_GROUP_HPP
#define LOOPCOND_GROUP_HPP

#include "loopcond/algebra.hpp"
#include "loopcond/condition.hpp"
#include "loopcond/hom.hpp"
#include "loopcond/indicator.hpp"
#include "loopcond/relation.hpp"
#include "loopcond/term.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

namespace loopcond
{
    using Permutation = std::vector<Element>;

    /// A permutation group on {0..degree-1} given by generators.
    class PermGroup
    {
    public:
        PermGroup(std::size_t degree, std::vector<Permutation> generators = {});

        static auto trivial(std::size_t degree) -> PermGroup { return PermGroup(degree); }

        auto degree() const -> std::size_t { return _degree; }
        auto generators() const -> const std::vector<Permutation> & { return _generators; }

        /// Applies generator `g` to each coordinate of `tuple`.
        auto apply(std::size_t g, std::span<const Element> tuple) const -> Tuple;

        /// Orbit index of every point; equal indices mean same orbit.
        auto orbit_ids() const -> std::vector<std::size_t>;

        auto same_orbit(Element a, Element b) const -> bool;

    private:
        std::size_t _degree;
        std::vector<Permutation> _generators;
        std::vector<std::size_t> _orbit_ids;
    };

    auto identity_permutation(std::size_t degree) -> Permutation;
    auto inverse(const Permutation & p) -> Permutation;
    // compose(first, second) from hom.hpp is `second` after `first` on permutations too.

    /// The orbit of `point` under the coordinatewise action, by breadth-first
    /// search from `point`.
    auto orbit_of(const PermGroup & group, std::span<const Element> point) -> std::set<Tuple>;

    /// Orbit with, for every member, a shortest word in the generators
    /// (applied left to right) carrying `point` to it.
    auto orbit_words(const PermGroup & group, std::span<const Element> point)
        -> std::map<Tuple, std::vector<std::size_t>>;

    /// The first tuple of the relation whose entries lie in one orbit.
    auto find_pseudo_loop(const Relation & relation, const PermGroup & group) -> std::optional<Tuple>;

    /// {d | R(q, d) for some q in `from`} for a binary relation.
    auto orbit_neighbors(const Relation & relation, const std::set<Element> & from) -> std::set<Element>;

    /// A finite algebra whose unary part contains a permutation group: every
    /// generator and its inverse must be the table of some unary operation.
    class CoreAlgebra
    {
    public:
        CoreAlgebra(FiniteAlgebra algebra, PermGroup group);

        auto algebra() const -> const FiniteAlgebra & { return _algebra; }
        auto group() const -> const PermGroup & { return _group; }

        /// Name of the unary operation implementing generator `g`.
        auto generator_name(std::size_t g) const -> const std::string & { return _generator_names[g]; }

        /// The unary term applying the generators of `word` left to right.
        auto word_term(std::span<const std::size_t> word) const -> TermFunction;

    private:
        FiniteAlgebra _algebra;
        PermGroup _group;
        std::vector<std::string> _generator_names;
    };

    struct PseudoWitness
    {
        TermFunction f;
        /// u_i as a permutation of the algebra, with u_1(block_1) = ... = u_m(block_m).
        std::vector<Permutation> u;
        /// u_i as a word in the generators, applied left to right.
        std::vector<std::vector<std::size_t>> words;
        /// u_i as unary terms over the algebra.
        std::vector<TermFunction> unary;
    };

    /// Searches the indicator closure for an element whose m blocks lie in one
    /// orbit of the group acting coordinatewise.
    auto pseudo_satisfies(const CoreAlgebra & core, const LoopCondition & condition,
            const IndicatorOptions & options = {}, ClosureStats * stats = nullptr) -> std::optional<PseudoWitness>;
}

#endif
