#include "loopcond/group.hpp"
#include "loopcond/error.hpp"

#include <deque>

namespace loopcond
{
    PermGroup::PermGroup(std::size_t degree, std::vector<Permutation> generators) :
        _degree(degree),
        _generators(std::move(generators)),
        _orbit_ids(degree)
    {
        for (std::size_t g = 0; g < _generators.size(); ++g) {
            auto & p = _generators[g];
            if (p.size() != degree)
                throw InputError("generator " + std::to_string(g) + " has " + std::to_string(p.size())
                        + " images, expected " + std::to_string(degree));
            std::vector<bool> hit(degree, false);
            for (auto e : p) {
                if (e >= degree || hit[e])
                    throw InputError("generator " + std::to_string(g) + " is not a permutation");
                hit[e] = true;
            }
        }

        std::vector<bool> done(degree, false);
        std::size_t next = 0;
        for (Element start = 0; start < degree; ++start) {
            if (done[start])
                continue;
            std::deque<Element> queue{start};
            done[start] = true;
            while (! queue.empty()) {
                auto a = queue.front();
                queue.pop_front();
                _orbit_ids[a] = next;
                for (auto & p : _generators)
                    if (! done[p[a]]) {
                        done[p[a]] = true;
                        queue.push_back(p[a]);
                    }
            }
            ++next;
        }
    }

    auto PermGroup::apply(std::size_t g, std::span<const Element> tuple) const -> Tuple
    {
        auto & p = _generators.at(g);
        Tuple out;
        out.reserve(tuple.size());
        for (auto e : tuple)
            out.push_back(p.at(e));
        return out;
    }

    auto PermGroup::orbit_ids() const -> std::vector<std::size_t>
    {
        return _orbit_ids;
    }

    auto PermGroup::same_orbit(Element a, Element b) const -> bool
    {
        return _orbit_ids.at(a) == _orbit_ids.at(b);
    }

    auto identity_permutation(std::size_t degree) -> Permutation
    {
        Permutation p(degree);
        for (std::size_t i = 0; i < degree; ++i)
            p[i] = Element(i);
        return p;
    }

    auto inverse(const Permutation & p) -> Permutation
    {
        Permutation out(p.size());
        for (std::size_t i = 0; i < p.size(); ++i)
            out.at(p[i]) = Element(i);
        return out;
    }

    auto orbit_words(const PermGroup & group, std::span<const Element> point)
        -> std::map<Tuple, std::vector<std::size_t>>
    {
        for (auto e : point)
            if (e >= group.degree())
                throw InputError("point entry " + std::to_string(e) + " outside the group's domain");
        std::map<Tuple, std::vector<std::size_t>> words;
        Tuple start(point.begin(), point.end());
        words.emplace(start, std::vector<std::size_t>{});
        std::deque<Tuple> queue{start};
        while (! queue.empty()) {
            auto current = std::move(queue.front());
            queue.pop_front();
            auto word = words.at(current);
            for (std::size_t g = 0; g < group.generators().size(); ++g) {
                auto image = group.apply(g, current);
                if (words.contains(image))
                    continue;
                auto extended = word;
                extended.push_back(g);
                words.emplace(image, std::move(extended));
                queue.push_back(std::move(image));
            }
        }
        return words;
    }

    auto orbit_of(const PermGroup & group, std::span<const Element> point) -> std::set<Tuple>
    {
        std::set<Tuple> orbit;
        for (auto & [tuple, _] : orbit_words(group, point))
            orbit.insert(tuple);
        return orbit;
    }

    auto find_pseudo_loop(const Relation & relation, const PermGroup & group) -> std::optional<Tuple>
    {
        if (relation.domain() != group.degree())
            throw InputError("group of degree " + std::to_string(group.degree()) + " on a relation over "
                    + std::to_string(relation.domain()) + " elements");
        for (auto & t : relation.tuples()) {
            bool shared = true;
            for (auto e : t)
                shared = shared && group.same_orbit(e, t.front());
            if (shared)
                return t;
        }
        return std::nullopt;
    }

    auto orbit_neighbors(const Relation & relation, const std::set<Element> & from) -> std::set<Element>
    {
        if (relation.arity() != 2)
            throw InputError("neighbour sets need a binary relation");
        for (auto e : from)
            if (e >= relation.domain())
                throw InputError("element " + std::to_string(e) + " outside the relation's domain");
        std::set<Element> out;
        for (auto & t : relation.tuples())
            if (from.contains(t[0]))
                out.insert(t[1]);
        return out;
    }

    CoreAlgebra::CoreAlgebra(FiniteAlgebra algebra, PermGroup group) :
        _algebra(std::move(algebra)),
        _group(std::move(group))
    {
        if (_group.degree() != _algebra.size())
            throw InputError("group degree " + std::to_string(_group.degree()) + " differs from algebra size "
                    + std::to_string(_algebra.size()));
        auto unary_named = [&] (const Permutation & p) -> const std::string * {
            for (auto & op : _algebra.operations())
                if (op.arity == 1 && op.table == p)
                    return &op.name;
            return nullptr;
        };
        for (std::size_t g = 0; g < _group.generators().size(); ++g) {
            auto & p = _group.generators()[g];
            auto * name = unary_named(p);
            if (! name)
                throw InputError("group generator " + std::to_string(g) + " is not a unary operation of the algebra");
            if (! unary_named(inverse(p)))
                throw InputError("inverse of group generator " + std::to_string(g)
                        + " is not a unary operation of the algebra");
            _generator_names.push_back(*name);
        }
    }

    auto CoreAlgebra::word_term(std::span<const std::size_t> word) const -> TermFunction
    {
        auto body = Term::var("x");
        for (auto g : word)
            body = Term::app(_generator_names.at(g), {body});
        return TermFunction{{"x"}, std::move(body)};
    }

    auto pseudo_satisfies(const CoreAlgebra & core, const LoopCondition & condition,
            const IndicatorOptions & options, ClosureStats * stats) -> std::optional<PseudoWitness>
    {
        auto & algebra = core.algebra();
        auto & group = core.group();
        auto plain = condition.plain();
        auto width = plain.width();
        auto instance = build_indicator(algebra, plain, options);
        auto block = instance.assignment_count;

        auto ids = group.orbit_ids();
        auto in_one_orbit = [&] (std::span<const Element> vec) {
            // pointwise orbits first, then the orbit of the first block
            for (std::size_t i = 1; i < width; ++i)
                for (std::size_t c = 0; c < block; ++c)
                    if (ids[vec[c]] != ids[vec[i * block + c]])
                        return false;
            auto orbit = orbit_of(group, vec.subspan(0, block));
            for (std::size_t i = 1; i < width; ++i) {
                Tuple b(vec.begin() + std::ptrdiff_t(i * block), vec.begin() + std::ptrdiff_t((i + 1) * block));
                if (! orbit.contains(b))
                    return false;
            }
            return true;
        };

        auto [closure, hit] = search_closure(algebra, instance, in_one_orbit, options);
        if (stats)
            *stats = closure.stats();
        if (! hit)
            return std::nullopt;

        auto vec = closure.vector(*hit);
        Tuple target(vec.begin(), vec.begin() + std::ptrdiff_t(block));
        PseudoWitness witness{closure.witness(*hit), {}, {}, {}};
        for (std::size_t i = 0; i < width; ++i) {
            auto words = orbit_words(group, std::span<const Element>(vec).subspan(i * block, block));
            auto & word = words.at(target);
            auto u = identity_permutation(group.degree());
            for (auto g : word)
                u = compose(u, group.generators()[g]);
            witness.u.push_back(std::move(u));
            witness.words.push_back(word);
            witness.unary.push_back(core.word_term(word));
        }
        if (! verify_witness(algebra, plain, witness.f, witness.unary))
            throw std::logic_error("pseudo witness fails verification");
        return witness;
    }
}
