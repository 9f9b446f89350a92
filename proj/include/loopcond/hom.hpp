#ifndef LOOPCOND_HOM_HPP
#define LOOPCOND_HOM_HPP

#include "loopcond/condition.hpp"
#include "loopcond/relation.hpp"
#include "loopcond/term.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace loopcond
{
    /// Image of each source element, indexed by source element.
    using HomMap = std::vector<Element>;

    /// K_k^m: all non-constant m-tuples over {0..k-1}.
    auto make_clique(std::size_t k, std::size_t m) -> Relation;

    /// Some e with (e, ..., e) in the relation; the smallest such e.
    auto find_loop(const Relation & relation) -> std::optional<Element>;

    struct HomSearchStats
    {
        std::uint64_t nodes = 0;
    };

    /// Complete backtracking search for a homomorphism from `source` to
    /// `target` (injective on request). Source elements are branched on in
    /// descending degree order, values ascending; the returned map is the first
    /// solution in that order. Throws InputError on an arity mismatch.
    auto find_hom(const Relation & source, const Relation & target, bool injective = false,
            HomSearchStats * stats = nullptr) -> std::optional<HomMap>;

    /// Checks that `map` is total and sends every source tuple into the target.
    auto is_hom(const Relation & source, const Relation & target, const HomMap & map) -> bool;

    auto is_injective(const HomMap & map) -> bool;

    /// `second` after `first`.
    auto compose(const HomMap & first, const HomMap & second) -> HomMap;

    /// A homomorphism from the relation of `from` to the relation of `to`,
    /// indexed by the numbering of `relation_of`. Its existence certifies that
    /// `from` implies `to`. Throws InputError on a width mismatch.
    auto implies_by_hom(const LoopCondition & from, const LoopCondition & to,
            HomSearchStats * stats = nullptr) -> std::optional<HomMap>;

    /// Turns a witness of `from` into a witness of `to` along a certificate
    /// returned by `implies_by_hom`: argument j of the new witness is the
    /// column of `to` hit by the image of column j of `from`.
    auto transport_witness(const LoopCondition & from, const LoopCondition & to, const HomMap & hom,
            const TermFunction & witness) -> TermFunction;
}

#endif
