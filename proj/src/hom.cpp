#include "loopcond/hom.hpp"
#include "loopcond/error.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <unordered_set>

namespace loopcond
{
    auto make_clique(std::size_t k, std::size_t m) -> Relation
    {
        if (k < 2 || m < 2)
            throw InputError("K_k^m needs k, m >= 2");
        std::vector<Tuple> tuples;
        Tuple t(m, 0);
        while (true) {
            if (! is_constant(t))
                tuples.push_back(t);
            std::size_t i = m;
            while (i > 0 && ++t[i - 1] == k)
                t[--i] = 0;
            if (i == 0)
                break;
        }
        return Relation(k, m, std::move(tuples));
    }

    auto find_loop(const Relation & relation) -> std::optional<Element>
    {
        for (auto & t : relation.tuples())
            if (is_constant(t))
                return t.front();
        return std::nullopt;
    }

    namespace
    {
        /// Membership test for a fixed target relation.
        class TupleIndex
        {
        public:
            explicit TupleIndex(const Relation & relation) :
                _relation(relation)
            {
                auto d = std::uint64_t(std::max<std::size_t>(relation.domain(), 1));
                std::uint64_t space = 1;
                bool fits = true;
                for (std::size_t i = 0; i < relation.arity() && fits; ++i) {
                    if (space > (std::uint64_t(1) << 62) / d)
                        fits = false;
                    else
                        space *= d;
                }
                if (fits && space <= (std::uint64_t(1) << 22)) {
                    _dense.assign(space, 0);
                    for (auto & t : relation.tuples())
                        _dense[encode(t)] = 1;
                    _mode = Mode::dense;
                }
                else if (fits) {
                    for (auto & t : relation.tuples())
                        _hashed.insert(encode(t));
                    _mode = Mode::hashed;
                }
            }

            auto contains(std::span<const Element> t) const -> bool
            {
                switch (_mode) {
                    case Mode::dense: return _dense[encode(t)];
                    case Mode::hashed: return _hashed.contains(encode(t));
                    case Mode::sorted: return _relation.contains(t);
                }
                return false;
            }

        private:
            auto encode(std::span<const Element> t) const -> std::uint64_t
            {
                std::uint64_t code = 0;
                for (auto e : t)
                    code = code * _relation.domain() + e;
                return code;
            }

            enum class Mode { dense, hashed, sorted };
            const Relation & _relation;
            Mode _mode = Mode::sorted;
            std::vector<char> _dense;
            std::unordered_set<std::uint64_t> _hashed;
        };

        class HomSearch
        {
        public:
            HomSearch(const Relation & source, const Relation & target, bool injective, HomSearchStats * stats) :
                _source(source),
                _target(target),
                _index(target),
                _injective(injective),
                _stats(stats),
                _allowed(source.domain(), std::vector<char>(target.domain(), 1)),
                _count(source.domain(), target.domain()),
                _assigned(source.domain(), false),
                _map(source.domain(), 0),
                _tuples_of(source.domain())
            {
                for (std::size_t t = 0; t < source.size(); ++t) {
                    std::set<Element> seen(source.tuples()[t].begin(), source.tuples()[t].end());
                    for (auto v : seen)
                        _tuples_of[v].push_back(t);
                }
                _order.resize(source.domain());
                std::iota(_order.begin(), _order.end(), Element(0));
                std::stable_sort(_order.begin(), _order.end(), [&] (Element a, Element b) {
                    return _tuples_of[a].size() > _tuples_of[b].size();
                });
            }

            auto run() -> std::optional<HomMap>
            {
                if (_injective && _source.domain() > _target.domain())
                    return std::nullopt;
                if (! initial_filter())
                    return std::nullopt;
                if (search(0))
                    return _map;
                return std::nullopt;
            }

        private:
            /// Restricts each element to values that occur at the right
            /// positions of target tuples with the same equality pattern.
            auto initial_filter() -> bool
            {
                auto m = _source.arity();
                for (auto & s : _source.tuples()) {
                    std::vector<std::set<Element>> supported(m);
                    for (auto & t : _target.tuples()) {
                        bool pattern = true;
                        for (std::size_t p = 0; p < m && pattern; ++p)
                            for (std::size_t q = p + 1; q < m && pattern; ++q)
                                if (s[p] == s[q] && t[p] != t[q])
                                    pattern = false;
                        if (! pattern)
                            continue;
                        for (std::size_t p = 0; p < m; ++p)
                            supported[p].insert(t[p]);
                    }
                    for (std::size_t p = 0; p < m; ++p)
                        for (Element a = 0; a < _target.domain(); ++a)
                            if (_allowed[s[p]][a] && ! supported[p].contains(a)) {
                                _allowed[s[p]][a] = 0;
                                if (--_count[s[p]] == 0)
                                    return false;
                            }
                }
                return true;
            }

            auto remove(Element v, Element a) -> bool
            {
                if (! _allowed[v][a])
                    return true;
                _allowed[v][a] = 0;
                _trail.emplace_back(v, a);
                return --_count[v] > 0;
            }

            auto undo(std::size_t mark) -> void
            {
                while (_trail.size() > mark) {
                    auto [v, a] = _trail.back();
                    _trail.pop_back();
                    _allowed[v][a] = 1;
                    ++_count[v];
                }
            }

            auto propagate(Element v) -> bool
            {
                if (_injective)
                    for (Element w = 0; w < _source.domain(); ++w)
                        if (! _assigned[w] && ! remove(w, _map[v]))
                            return false;

                Tuple image(_source.arity());
                for (auto t : _tuples_of[v]) {
                    auto & s = _source.tuples()[t];
                    std::optional<Element> open;
                    bool several = false;
                    for (auto w : s)
                        if (! _assigned[w]) {
                            if (open && *open != w)
                                several = true;
                            open = w;
                        }
                    if (several)
                        continue;
                    if (! open) {
                        for (std::size_t p = 0; p < s.size(); ++p)
                            image[p] = _map[s[p]];
                        if (! _index.contains(image))
                            return false;
                        continue;
                    }
                    auto w = *open;
                    for (Element b = 0; b < _target.domain(); ++b) {
                        if (! _allowed[w][b])
                            continue;
                        for (std::size_t p = 0; p < s.size(); ++p)
                            image[p] = s[p] == w ? b : _map[s[p]];
                        if (! _index.contains(image) && ! remove(w, b))
                            return false;
                    }
                }
                return true;
            }

            auto search(std::size_t depth) -> bool
            {
                if (depth == _order.size())
                    return true;
                auto v = _order[depth];
                for (Element a = 0; a < _target.domain(); ++a) {
                    if (! _allowed[v][a])
                        continue;
                    if (_stats)
                        ++_stats->nodes;
                    auto mark = _trail.size();
                    _assigned[v] = true;
                    _map[v] = a;
                    if (propagate(v) && search(depth + 1))
                        return true;
                    _assigned[v] = false;
                    undo(mark);
                }
                return false;
            }

            const Relation & _source;
            const Relation & _target;
            TupleIndex _index;
            bool _injective;
            HomSearchStats * _stats;
            std::vector<std::vector<char>> _allowed;
            std::vector<std::size_t> _count;
            std::vector<bool> _assigned;
            HomMap _map;
            std::vector<std::vector<std::size_t>> _tuples_of;
            std::vector<Element> _order;
            std::vector<std::pair<Element, Element>> _trail;
        };
    }

    auto find_hom(const Relation & source, const Relation & target, bool injective, HomSearchStats * stats)
        -> std::optional<HomMap>
    {
        if (source.arity() != target.arity())
            throw InputError("homomorphism between relations of arity " + std::to_string(source.arity()) + " and "
                    + std::to_string(target.arity()));
        if (source.domain() == 0)
            return HomMap{};
        if (target.domain() == 0)
            return std::nullopt;
        return HomSearch(source, target, injective, stats).run();
    }

    auto is_hom(const Relation & source, const Relation & target, const HomMap & map) -> bool
    {
        if (source.arity() != target.arity() || map.size() != source.domain())
            return false;
        for (auto e : map)
            if (e >= target.domain())
                return false;
        Tuple image(source.arity());
        for (auto & t : source.tuples()) {
            for (std::size_t p = 0; p < t.size(); ++p)
                image[p] = map[t[p]];
            if (! target.contains(image))
                return false;
        }
        return true;
    }

    auto is_injective(const HomMap & map) -> bool
    {
        std::set<Element> seen(map.begin(), map.end());
        return seen.size() == map.size();
    }

    auto compose(const HomMap & first, const HomMap & second) -> HomMap
    {
        HomMap out;
        out.reserve(first.size());
        for (auto e : first)
            out.push_back(second.at(e));
        return out;
    }

    auto implies_by_hom(const LoopCondition & from, const LoopCondition & to, HomSearchStats * stats)
        -> std::optional<HomMap>
    {
        if (from.width() != to.width())
            throw InputError("implication by homomorphism needs equal widths, got " + std::to_string(from.width())
                    + " and " + std::to_string(to.width()));
        return find_hom(relation_of(from).relation, relation_of(to).relation, false, stats);
    }

    auto transport_witness(const LoopCondition & from, const LoopCondition & to, const HomMap & hom,
            const TermFunction & witness) -> TermFunction
    {
        if (witness.arity() != from.arity())
            throw InputError("witness arity does not match the source condition");
        auto from_rel = relation_of(from);
        auto to_rel = relation_of(to);
        if (! is_hom(from_rel.relation, to_rel.relation, hom))
            throw InputError("map is not a homomorphism between the condition relations");

        auto params = witness_params(to);
        std::vector<Term> args;
        for (std::size_t j = 0; j < from.arity(); ++j) {
            Tuple image;
            for (std::size_t i = 0; i < from.width(); ++i)
                image.push_back(hom[from_rel.index.at(from.at(i, j))]);
            std::optional<std::size_t> column;
            for (std::size_t k = 0; k < to.arity() && ! column; ++k) {
                bool match = true;
                for (std::size_t i = 0; i < to.width() && match; ++i)
                    match = to_rel.index.at(to.at(i, k)) == image[i];
                if (match)
                    column = k;
            }
            if (! column)
                throw std::logic_error("homomorphic image of a column is not a column");
            args.push_back(Term::var(params[*column]));
        }
        return TermFunction{params, witness.apply(args)};
    }
}
