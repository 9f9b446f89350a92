#include "loopcond/indicator.hpp"
#include "loopcond/error.hpp"

#include <algorithm>
#include <map>

namespace loopcond
{
    auto IndicatorInstance::assignment(std::size_t d) const -> std::vector<Element>
    {
        std::vector<Element> values(variables.size());
        for (std::size_t v = variables.size(); v-- > 0;) {
            values[v] = Element(d % algebra_size);
            d /= algebra_size;
        }
        return values;
    }

    auto build_indicator(const FiniteAlgebra & algebra, const LoopCondition & condition,
            const IndicatorOptions & options) -> IndicatorInstance
    {
        auto variables = condition.variables();
        std::uint64_t count = 1;
        bool overflow = false;
        for (std::size_t i = 0; i < variables.size(); ++i) {
            if (count > (std::uint64_t(1) << 40) / algebra.size())
                overflow = true;
            else
                count *= algebra.size();
        }
        std::uint64_t cells = overflow ? UINT64_MAX : count * condition.width();
        if (overflow || cells > options.cell_budget)
            throw BudgetError("indicator vector length |A|^|V|*m", cells, options.cell_budget);

        std::map<std::string, std::size_t> slot;
        for (std::size_t i = 0; i < variables.size(); ++i)
            slot.emplace(variables[i], i);

        IndicatorInstance instance{algebra.size(), condition.width(), variables, std::size_t(count), {},
            witness_params(condition)};
        for (std::size_t j = 0; j < condition.arity(); ++j) {
            std::vector<Element> gen;
            gen.reserve(cells);
            for (std::size_t i = 0; i < condition.width(); ++i) {
                auto v = slot.at(condition.at(i, j));
                for (std::size_t d = 0; d < count; ++d)
                    gen.push_back(instance.assignment(d)[v]);
            }
            instance.generators.push_back(std::move(gen));
        }
        return instance;
    }

    auto blocks_equal(std::span<const Element> vec, std::size_t width) -> bool
    {
        auto block = vec.size() / width;
        for (std::size_t i = 1; i < width; ++i)
            if (! std::equal(vec.begin(), vec.begin() + block, vec.begin() + i * block))
                return false;
        return true;
    }

    /// Elements live in a flat arena of packed words, one bit per cell for
    /// algebras of size <= 2 and one byte (or word) per cell otherwise. Cells
    /// whose generator columns coincide always carry equal values, so only
    /// one representative per distinct column is stored.
    struct Closure::Impl
    {
        const FiniteAlgebra * algebra;
        std::vector<std::string> params;
        std::size_t full_cells;
        std::vector<std::size_t> cell_to_reduced;
        std::size_t reduced;
        unsigned bits;
        std::size_t words;
        std::vector<std::uint64_t> arena;
        std::vector<std::uint32_t> table;
        std::vector<std::uint32_t> depths;
        struct Provenance
        {
            std::int32_t op;
            std::uint32_t first;
        };
        std::vector<Provenance> provenance;
        std::vector<std::uint32_t> arg_pool;
        ClosureStats stats;

        auto count() const -> std::size_t { return depths.size(); }

        auto cell(std::size_t i, std::size_t c) const -> Element
        {
            auto bit = c * bits;
            auto w = arena[i * words + bit / 64];
            if (bits == 64)
                return Element(w);
            return Element((w >> (bit % 64)) & ((std::uint64_t(1) << bits) - 1));
        }

        static auto pack(std::span<const Element> cells, unsigned bits, std::size_t words, std::uint64_t * out) -> void
        {
            std::fill(out, out + words, 0);
            for (std::size_t c = 0; c < cells.size(); ++c) {
                auto bit = c * bits;
                out[bit / 64] |= std::uint64_t(cells[c]) << (bit % 64);
            }
        }

        auto hash(const std::uint64_t * w) const -> std::uint64_t
        {
            std::uint64_t h = 0x9e3779b97f4a7c15ULL;
            for (std::size_t i = 0; i < words; ++i) {
                auto x = w[i] + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
                x ^= x >> 30;
                x *= 0xbf58476d1ce4e5b9ULL;
                x ^= x >> 27;
                x *= 0x94d049bb133111ebULL;
                x ^= x >> 31;
                h ^= x;
            }
            return h;
        }

        auto lookup(const std::uint64_t * w) const -> std::optional<std::size_t>
        {
            auto mask = table.size() - 1;
            for (auto pos = hash(w) & mask;; pos = (pos + 1) & mask) {
                auto slot = table[pos];
                if (slot == 0)
                    return std::nullopt;
                if (std::equal(w, w + words, arena.begin() + std::ptrdiff_t((slot - 1) * words)))
                    return slot - 1;
            }
        }

        auto rehash(std::size_t capacity) -> void
        {
            table.assign(capacity, 0);
            auto mask = capacity - 1;
            for (std::size_t i = 0; i < count(); ++i) {
                auto pos = hash(&arena[i * words]) & mask;
                while (table[pos] != 0)
                    pos = (pos + 1) & mask;
                table[pos] = std::uint32_t(i + 1);
            }
        }

        /// Appends the packed vector `w` unless present; returns its index and
        /// whether it was new.
        auto insert(const std::uint64_t * w, std::uint32_t depth, Provenance prov, std::uint64_t cap)
            -> std::pair<std::size_t, bool>
        {
            if (auto found = lookup(w))
                return {*found, false};
            if (count() + 1 > cap)
                throw BudgetError("closure size", count() + 1, cap);
            arena.insert(arena.end(), w, w + words);
            depths.push_back(depth);
            provenance.push_back(prov);
            if (2 * count() > table.size())
                rehash(table.size() * 2);
            else {
                auto mask = table.size() - 1;
                auto pos = hash(w) & mask;
                while (table[pos] != 0)
                    pos = (pos + 1) & mask;
                table[pos] = std::uint32_t(count());
            }
            return {count() - 1, true};
        }

        auto expand(std::size_t i) const -> std::vector<Element>
        {
            std::vector<Element> out(full_cells);
            for (std::size_t c = 0; c < full_cells; ++c)
                out[c] = cell(i, cell_to_reduced[c]);
            return out;
        }

        auto term(std::size_t i) const -> Term
        {
            auto & p = provenance[i];
            if (p.op < 0)
                return Term::var(params[p.first]);
            auto & op = algebra->operations()[std::size_t(p.op)];
            std::vector<Term> args;
            for (std::size_t a = 0; a < op.arity; ++a)
                args.push_back(term(arg_pool[p.first + a]));
            return Term::app(op.name, std::move(args));
        }
    };

    Closure::Closure(std::unique_ptr<Impl> impl) : _impl(std::move(impl)) {}
    Closure::Closure(Closure &&) noexcept = default;
    Closure & Closure::operator=(Closure &&) noexcept = default;
    Closure::~Closure() = default;

    auto Closure::size() const -> std::size_t { return _impl->count(); }
    auto Closure::stats() const -> const ClosureStats & { return _impl->stats; }
    auto Closure::vector(std::size_t i) const -> std::vector<Element> { return _impl->expand(i); }
    auto Closure::depth(std::size_t i) const -> std::size_t { return _impl->depths.at(i); }
    auto Closure::term(std::size_t i) const -> Term { return _impl->term(i); }

    auto Closure::witness(std::size_t i) const -> TermFunction
    {
        return TermFunction{_impl->params, _impl->term(i)};
    }

    auto Closure::find(std::span<const Element> vec) const -> std::optional<std::size_t>
    {
        auto & impl = *_impl;
        if (vec.size() != impl.full_cells)
            return std::nullopt;
        std::vector<Element> reduced(impl.reduced);
        std::vector<bool> seen(impl.reduced, false);
        for (std::size_t c = 0; c < vec.size(); ++c) {
            auto r = impl.cell_to_reduced[c];
            if (seen[r] && reduced[r] != vec[c])
                return std::nullopt;
            if (vec[c] >= impl.algebra->size())
                return std::nullopt;
            reduced[r] = vec[c];
            seen[r] = true;
        }
        std::vector<std::uint64_t> packed(impl.words);
        Impl::pack(reduced, impl.bits, impl.words, packed.data());
        return impl.lookup(packed.data());
    }

    auto search_closure(const FiniteAlgebra & algebra, const IndicatorInstance & instance,
            const std::function<bool (std::span<const Element>)> & stop, const IndicatorOptions & options)
        -> std::pair<Closure, std::optional<std::size_t>>
    {
        if (algebra.size() != instance.algebra_size)
            throw InputError("indicator instance was built for a different algebra size");

        auto impl = std::make_unique<Closure::Impl>();
        impl->algebra = &algebra;
        impl->params = instance.params;
        impl->full_cells = instance.cells();

        // one reduced cell per distinct generator column
        std::map<std::vector<Element>, std::size_t> columns;
        impl->cell_to_reduced.resize(impl->full_cells);
        std::vector<std::vector<Element>> reduced_gens(instance.generators.size());
        for (std::size_t c = 0; c < impl->full_cells; ++c) {
            std::vector<Element> column;
            for (auto & g : instance.generators)
                column.push_back(g[c]);
            auto [it, inserted] = columns.emplace(column, columns.size());
            impl->cell_to_reduced[c] = it->second;
            if (inserted)
                for (std::size_t j = 0; j < column.size(); ++j)
                    reduced_gens[j].push_back(column[j]);
        }
        impl->reduced = columns.size();
        impl->bits = algebra.size() <= 2 ? 1 : algebra.size() <= 256 ? 8 : 64;
        impl->words = std::max<std::size_t>(1, (impl->reduced * impl->bits + 63) / 64);
        impl->table.assign(64, 0);

        auto & closure = *impl;
        auto const s = algebra.size();
        std::optional<std::size_t> hit;
        std::vector<std::uint64_t> packed(closure.words);

        auto accept = [&] (std::size_t index) {
            if (stop(closure.expand(index))) {
                hit = index;
                return true;
            }
            return false;
        };

        for (std::size_t j = 0; j < reduced_gens.size(); ++j) {
            Closure::Impl::pack(reduced_gens[j], closure.bits, closure.words, packed.data());
            auto [index, fresh] = closure.insert(packed.data(), 0, {-1, std::uint32_t(j)}, options.closure_cap);
            if (fresh && accept(index))
                break;
        }

        std::size_t level_begin = 0;
        std::uint32_t level = 0;
        std::vector<std::uint32_t> args;
        std::vector<Element> result(closure.reduced);
        while (! hit) {
            auto level_end = closure.count();
            if (level_begin == level_end)
                break;
            closure.stats.depth = level;
            ++level;

            for (std::size_t op_index = 0; op_index < algebra.operations().size() && ! hit; ++op_index) {
                auto & op = algebra.operations()[op_index];
                auto k = op.arity;
                args.assign(k, 0);
                // partial[p] holds the table index accumulated over the first p arguments
                std::vector<std::vector<std::uint32_t>> partial(k + 1, std::vector<std::uint32_t>(closure.reduced, 0));

                auto recurse = [&] (auto & self, std::size_t p, bool has_frontier) -> bool {
                    if (p == k) {
                        ++closure.stats.applications;
                        for (std::size_t c = 0; c < closure.reduced; ++c)
                            result[c] = op.table[partial[k][c]];
                        Closure::Impl::pack(result, closure.bits, closure.words, packed.data());
                        auto first = std::uint32_t(closure.arg_pool.size());
                        auto [index, fresh] = closure.insert(packed.data(), level,
                                {std::int32_t(op_index), first}, options.closure_cap);
                        if (fresh) {
                            closure.arg_pool.insert(closure.arg_pool.end(), args.begin(), args.end());
                            if (accept(index))
                                return true;
                        }
                        return false;
                    }
                    auto from = (p + 1 == k && ! has_frontier) ? level_begin : 0;
                    for (auto a = from; a < level_end; ++a) {
                        args[p] = std::uint32_t(a);
                        for (std::size_t c = 0; c < closure.reduced; ++c)
                            partial[p + 1][c] = partial[p][c] * std::uint32_t(s) + closure.cell(a, c);
                        if (self(self, p + 1, has_frontier || a >= level_begin))
                            return true;
                    }
                    return false;
                };
                recurse(recurse, 0, false);
            }
            level_begin = level_end;
        }

        closure.stats.size = closure.count();
        if (closure.count() > 0)
            closure.stats.depth = closure.depths.back();
        return {Closure(std::move(impl)), hit};
    }

    auto generate_closure(const FiniteAlgebra & algebra, const IndicatorInstance & instance,
            const IndicatorOptions & options) -> Closure
    {
        return search_closure(algebra, instance, [] (std::span<const Element>) { return false; }, options).first;
    }

    auto satisfies(const FiniteAlgebra & algebra, const LoopCondition & condition,
            const IndicatorOptions & options, ClosureStats * stats) -> std::optional<TermFunction>
    {
        auto instance = build_indicator(algebra, condition, options);
        auto width = condition.width();
        auto [closure, hit] = search_closure(algebra, instance, [width] (std::span<const Element> vec) {
            return blocks_equal(vec, width);
        }, options);
        if (stats)
            *stats = closure.stats();
        if (! hit)
            return std::nullopt;
        auto witness = closure.witness(*hit);
        if (! verify_witness(algebra, condition.plain(), witness))
            throw std::logic_error("closure produced a witness that fails verification");
        return witness;
    }
}
