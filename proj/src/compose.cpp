#include "loopcond/compose.hpp"
#include "loopcond/error.hpp"
#include "compiled_term.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace loopcond
{
    auto star(const TermFunction & f, const TermFunction & g) -> TermFunction
    {
        std::vector<std::string> params;
        std::vector<Term> inner;
        for (std::size_t i = 1; i <= f.arity(); ++i) {
            std::vector<std::string> row;
            for (std::size_t j = 1; j <= g.arity(); ++j)
                row.push_back("x" + std::to_string(i) + "_" + std::to_string(j));
            inner.push_back(g.apply_vars(row));
            params.insert(params.end(), row.begin(), row.end());
        }
        return TermFunction{std::move(params), f.apply(inner)};
    }

    namespace
    {
        auto chain_term(std::span<const TermFunction> factors, std::size_t level, const std::string & prefix,
                std::vector<std::string> & params) -> Term
        {
            if (level == factors.size()) {
                params.push_back(prefix);
                return Term::var(prefix);
            }
            std::vector<Term> args;
            for (std::size_t i = 1; i <= factors[level].arity(); ++i)
                args.push_back(chain_term(factors, level + 1, prefix + (level ? "_" : "") + std::to_string(i), params));
            return factors[level].apply(args);
        }
    }

    auto star_chain(std::span<const TermFunction> factors) -> TermFunction
    {
        if (factors.empty())
            throw InputError("star chain of no factors");
        std::vector<std::string> params;
        auto body = chain_term(factors, 0, "z", params);
        return TermFunction{std::move(params), std::move(body)};
    }

    auto idem_normalize(const Term & term) -> Term
    {
        if (term.is_var())
            return term;
        std::vector<Term> args;
        for (auto & a : term.args())
            args.push_back(idem_normalize(a));
        if (std::all_of(args.begin(), args.end(), [&] (const Term & a) { return a == args.front(); }))
            return args.front();
        return Term::app(term.name(), std::move(args));
    }

    TaylorSystem::TaylorSystem(std::string symbol, std::vector<TaylorRow> rows,
            std::optional<std::vector<std::pair<std::string, std::string>>> unary) :
        _symbol(std::move(symbol)),
        _rows(std::move(rows)),
        _unary(std::move(unary))
    {
        if (! is_identifier(_symbol))
            throw InputError("invalid Taylor symbol '" + _symbol + "'");
        if (_rows.empty())
            throw InputError("a Taylor system needs at least one row");
        auto n = _rows.size();
        for (std::size_t i = 0; i < n; ++i) {
            auto & r = _rows[i];
            if (r.lhs.size() != n || r.rhs.size() != n)
                throw InputError("Taylor row " + std::to_string(i + 1) + " does not have " + std::to_string(n)
                        + " entries per side");
            if (r.lhs[i] != XY::x || r.rhs[i] != XY::y)
                throw InputError("Taylor row " + std::to_string(i + 1) + " must have x on the left and y on the "
                        "right at position " + std::to_string(i + 1));
        }
        if (_unary && _unary->size() != n)
            throw InputError("Taylor system needs one unary pair per row");
    }

    namespace
    {
        auto xy_args(const std::vector<XY> & side) -> std::vector<Term>
        {
            std::vector<Term> args;
            for (auto v : side)
                args.push_back(Term::var(v == XY::x ? "x" : "y"));
            return args;
        }
    }

    auto TaylorSystem::to_identities() const -> IdentitySystem
    {
        std::vector<Identity> ids;
        for (std::size_t i = 0; i < _rows.size(); ++i) {
            auto lhs = Term::app(_symbol, xy_args(_rows[i].lhs));
            auto rhs = Term::app(_symbol, xy_args(_rows[i].rhs));
            if (_unary) {
                lhs = Term::app((*_unary)[i].first, {lhs});
                rhs = Term::app((*_unary)[i].second, {rhs});
            }
            ids.push_back(Identity{std::move(lhs), std::move(rhs)});
        }
        return IdentitySystem(std::move(ids));
    }

    auto TaylorSystem::to_string() const -> std::string
    {
        return to_identities().to_string();
    }

    auto taylor_from_identities(const IdentitySystem & system) -> TaylorSystem
    {
        if (system.signature().size() != 1)
            throw InputError("Taylor identities must use exactly one symbol");
        auto [symbol, n] = *system.signature().begin();
        for (auto & id : system.identities())
            if (id.lhs.is_var() || id.rhs.is_var() || ! system.is_height1())
                throw InputError("Taylor identities must have the form t(...) = t(...) over variables");

        std::vector<TaylorRow> rows;
        for (std::size_t p = 0; p < n; ++p) {
            std::optional<TaylorRow> row;
            for (auto & id : system.identities()) {
                auto l = id.lhs.args();
                auto r = id.rhs.args();
                if (l[p].name() == r[p].name())
                    continue;
                std::set<std::string> vars;
                for (std::size_t q = 0; q < n; ++q) {
                    vars.insert(l[q].name());
                    vars.insert(r[q].name());
                }
                if (vars.size() != 2)
                    throw InputError("Taylor identity '" + id.lhs.to_string() + " = " + id.rhs.to_string()
                            + "' must use exactly two variables");
                auto x = l[p].name();
                TaylorRow candidate;
                for (std::size_t q = 0; q < n; ++q) {
                    candidate.lhs.push_back(l[q].name() == x ? XY::x : XY::y);
                    candidate.rhs.push_back(r[q].name() == x ? XY::x : XY::y);
                }
                row = std::move(candidate);
                break;
            }
            if (! row)
                throw InputError("no identity separates position " + std::to_string(p + 1)
                        + "; the projection onto it satisfies the system");
            rows.push_back(std::move(*row));
        }
        return TaylorSystem(symbol, std::move(rows));
    }

    auto rejects_all_projections(const TaylorSystem & system) -> bool
    {
        for (std::size_t p = 0; p < system.arity(); ++p) {
            bool satisfied = true;
            for (auto & row : system.rows())
                if (row.lhs[p] != row.rhs[p])
                    satisfied = false;
            if (satisfied)
                return false;
        }
        return true;
    }

    auto verify_taylor(const FiniteAlgebra & algebra, const TaylorSystem & system, const TermFunction & t) -> bool
    {
        if (t.arity() != system.arity())
            throw InputError("term of arity " + std::to_string(t.arity()) + " for a Taylor system of arity "
                    + std::to_string(system.arity()));
        detail::CompiledTerm f(algebra, t.body, t.params);
        std::vector<Element> args(system.arity());
        for (Element x = 0; x < algebra.size(); ++x)
            for (Element y = 0; y < algebra.size(); ++y)
                for (auto & row : system.rows()) {
                    for (std::size_t p = 0; p < args.size(); ++p)
                        args[p] = row.lhs[p] == XY::x ? x : y;
                    auto left = f(args);
                    for (std::size_t p = 0; p < args.size(); ++p)
                        args[p] = row.rhs[p] == XY::x ? x : y;
                    if (left != f(args))
                        return false;
                }
        return true;
    }

    auto taylor_to_width3(const TaylorSystem & system) -> Width3Output
    {
        auto n = system.arity();
        // each row gets its own pair of variables
        auto name = [] (XY v, std::size_t row) {
            return (v == XY::x ? "x" : "y") + std::to_string(row + 1);
        };
        auto x_at = [&] (std::size_t i, std::size_t j) { return name(system.rows()[i].lhs[j], i); };
        auto y_at = [&] (std::size_t i, std::size_t j) { return name(system.rows()[i].rhs[j], i); };

        std::array<std::vector<std::string>, 3> subs;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    subs[0].push_back(x_at(i, j));
                    subs[1].push_back(y_at(i, j));
                    subs[2].push_back(x_at(j, k));
                    auto c = subs[0].size() - 1;
                    bool separated = i == j ? subs[0][c] != subs[1][c] : subs[0][c] != subs[2][c];
                    if (! separated)
                        throw std::logic_error("width-3 column " + std::to_string(c) + " is not separated");
                }

        auto t = TermFunction::symbol(system.symbol(), n);
        std::vector<TermFunction> factors{t, t, t};
        auto recipe = star_chain(factors);
        LoopCondition condition({subs[0], subs[1], subs[2]}, "h");
        if (is_trivial(condition))
            throw std::logic_error("width-3 condition has a constant column");
        return Width3Output{std::move(condition), std::move(recipe), std::move(subs), n};
    }

    auto h1_to_taylor(const IdentitySystem & system, bool idempotent_mode, std::uint64_t arity_limit)
        -> H1TaylorOutput
    {
        if (! system.is_height1())
            throw InputError("input is not a height-1 system");
        if (system.is_trivial())
            throw InputError("input system is trivial: projections satisfy it");

        auto & ids = system.identities();
        std::vector<const Term *> levels;
        for (auto & id : ids)
            levels.push_back(&id.lhs);
        for (auto & id : ids)
            levels.push_back(&id.rhs);

        std::uint64_t ell = 1;
        for (auto * l : levels) {
            if (ell > arity_limit / l->arity())
                throw BudgetError("Taylor arity (product of side arities)", ell * l->arity(), arity_limit);
            ell *= l->arity();
        }

        std::vector<TermFunction> factors;
        for (auto * l : levels)
            factors.push_back(TermFunction::symbol(l->name(), l->arity()));
        auto t = star_chain(factors);

        // digit r of position J, with the first level most significant
        std::vector<std::uint64_t> stride(levels.size());
        {
            std::uint64_t s = 1;
            for (std::size_t r = levels.size(); r-- > 0;) {
                stride[r] = s;
                s *= levels[r]->arity();
            }
        }
        auto collapse = [&] (const Term & side, std::size_t level) {
            std::vector<std::string> vars(ell);
            for (std::uint64_t J = 0; J < ell; ++J)
                vars[J] = side.args()[(J / stride[level]) % side.arity()].name();
            return vars;
        };

        std::vector<H1Realisation> realisations;
        for (std::size_t i = 0; i < ids.size(); ++i)
            for (std::size_t r = 0; r < levels.size(); ++r) {
                if (levels[r]->name() != ids[i].lhs.name())
                    continue;
                for (std::size_t q = 0; q < levels.size(); ++q) {
                    if (levels[q]->name() != ids[i].rhs.name())
                        continue;
                    realisations.push_back(H1Realisation{i, r, q, collapse(ids[i].lhs, r), collapse(ids[i].rhs, q)});
                }
            }

        for (auto & real : realisations) {
            auto lhs = idem_normalize(t.apply_vars(real.lhs_vars));
            auto rhs = idem_normalize(t.apply_vars(real.rhs_vars));
            if (lhs != idem_normalize(ids[real.identity].lhs) || rhs != idem_normalize(ids[real.identity].rhs))
                throw std::logic_error("realisation does not collapse to its identity");
        }

        std::vector<TaylorRow> rows;
        std::vector<std::size_t> source;
        for (std::uint64_t j = 0; j < ell; ++j) {
            auto it = std::find_if(realisations.begin(), realisations.end(), [&] (const H1Realisation & real) {
                return real.lhs_vars[j] != real.rhs_vars[j];
            });
            if (it == realisations.end())
                throw std::logic_error("position " + std::to_string(j + 1) + " is not separated although the "
                        "input is non-trivial");
            auto & pivot = it->lhs_vars[j];
            TaylorRow row;
            for (std::uint64_t p = 0; p < ell; ++p) {
                row.lhs.push_back(it->lhs_vars[p] == pivot ? XY::x : XY::y);
                row.rhs.push_back(it->rhs_vars[p] == pivot ? XY::x : XY::y);
            }
            rows.push_back(std::move(row));
            source.push_back(std::size_t(it - realisations.begin()));
        }

        std::optional<std::vector<std::pair<std::string, std::string>>> unary;
        if (! idempotent_mode) {
            unary.emplace();
            for (std::uint64_t j = 1; j <= ell; ++j)
                unary->emplace_back("u" + std::to_string(j), "v" + std::to_string(j));
        }
        TaylorSystem taylor("t", std::move(rows), std::move(unary));
        if (! rejects_all_projections(taylor))
            throw std::logic_error("derived Taylor system is satisfied by a projection");
        return H1TaylorOutput{std::move(taylor), std::move(t), std::size_t(ell), std::move(realisations),
            std::move(source)};
    }

    auto phi_eval(const Relation & relation, std::span<const Element> z) -> bool
    {
        auto m = relation.arity();
        auto l = z.size();
        if (l == 0)
            return true;
        std::vector<std::size_t> index(m, 0);
        Tuple tuple(m);
        while (true) {
            bool constant = std::all_of(index.begin(), index.end(), [&] (std::size_t i) { return i == index[0]; });
            if (! constant) {
                for (std::size_t p = 0; p < m; ++p)
                    tuple[p] = z[index[p]];
                if (! relation.contains(tuple))
                    return false;
            }
            std::size_t p = m;
            while (p > 0 && ++index[p - 1] == l)
                index[--p] = 0;
            if (p == 0)
                return true;
        }
    }

    namespace
    {
        auto saturating_power(std::uint64_t base, std::uint64_t exp, std::uint64_t cap) -> std::uint64_t
        {
            std::uint64_t out = 1;
            for (std::uint64_t i = 0; i < exp; ++i) {
                if (base != 0 && out > cap / base)
                    return cap + 1;
                out *= base;
            }
            return out;
        }

        /// Every reordering of (x_i, x_j, y_3, ..., y_m) is in R for distinct
        /// i, j and all y's drawn from `pool`.
        auto spread_condition(const Relation & relation, std::span<const Element> x, std::span<const Element> pool)
            -> bool
        {
            auto m = relation.arity();
            std::vector<std::size_t> ys(m - 2, 0);
            Tuple base(m);
            Tuple tuple(m);
            std::vector<std::size_t> order(m);
            for (std::size_t i = 0; i < x.size(); ++i)
                for (std::size_t j = 0; j < x.size(); ++j) {
                    if (i == j)
                        continue;
                    std::fill(ys.begin(), ys.end(), 0);
                    while (true) {
                        base[0] = x[i];
                        base[1] = x[j];
                        for (std::size_t p = 2; p < m; ++p)
                            base[p] = pool[ys[p - 2]];
                        std::iota(order.begin(), order.end(), std::size_t(0));
                        do {
                            for (std::size_t p = 0; p < m; ++p)
                                tuple[p] = base[order[p]];
                            if (! relation.contains(tuple))
                                return false;
                        } while (std::next_permutation(order.begin(), order.end()));
                        std::size_t p = ys.size();
                        while (p > 0 && ++ys[p - 1] == pool.size())
                            ys[--p] = 0;
                        if (p == 0)
                            break;
                    }
                }
            return true;
        }

        enum class GadgetKind { q, q2 };

        auto search_gadget(const Relation & relation, std::size_t k, GadgetKind kind, const GadgetOptions & options)
            -> Gadget
        {
            auto d = relation.domain();
            auto m = relation.arity();
            auto space = saturating_power(d, k - 1, options.search_budget);
            auto pairs = saturating_power(std::uint64_t(d) * d, m, options.search_budget);
            std::uint64_t total = space > options.search_budget || pairs > options.search_budget
                    || (pairs != 0 && space > options.search_budget / pairs)
                ? options.search_budget + 1 : space * pairs;
            if (total > options.search_budget)
                throw BudgetError("gadget search space d^(k-1)*d^(2m)", total, options.search_budget);

            auto start = std::chrono::steady_clock::now();
            auto check_time = [&] {
                auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start);
                if (elapsed > options.time_limit)
                    throw BudgetError("gadget search time (ms)", std::uint64_t(elapsed.count()),
                            std::uint64_t(options.time_limit.count()));
            };

            Gadget gadget{Relation(d * d, m, {}), d, k, {}};
            std::vector<Element> x(k - 1, 0);
            std::vector<Element> buffer;
            std::vector<std::vector<Element>> choices(m);
            std::vector<std::size_t> pick(m);
            std::uint64_t steps = 0;

            while (d > 0) {
                if ((++steps & 0xff) == 0)
                    check_time();

                bool base_ok = true;
                if (kind == GadgetKind::q)
                    base_ok = spread_condition(relation, x, x);
                else
                    base_ok = phi_eval(relation, x);

                if (base_ok) {
                    // last pair: phi over (x_m, ..., x_{k-1}, a, b), or (x_2, ..., x_{k-1}, a, b) for q2
                    auto first_free = kind == GadgetKind::q ? m - 1 : 1;
                    for (std::size_t slot = 0; slot < m; ++slot)
                        choices[slot].clear();
                    for (Element a = 0; a < d; ++a)
                        for (Element b = 0; b < d; ++b) {
                            buffer.assign(x.begin() + std::ptrdiff_t(first_free), x.end());
                            buffer.push_back(a);
                            buffer.push_back(b);
                            if (phi_eval(relation, buffer))
                                choices[m - 1].push_back(encode_pair(a, b, d));
                            for (std::size_t slot = 0; slot + 1 < m; ++slot) {
                                Element triple[3] = {x[slot], a, b};
                                if (phi_eval(relation, triple))
                                    choices[slot].push_back(encode_pair(a, b, d));
                            }
                        }

                    bool nonempty = std::all_of(choices.begin(), choices.end(), [] (auto & c) { return ! c.empty(); });
                    if (nonempty) {
                        std::fill(pick.begin(), pick.end(), 0);
                        Tuple tuple(m);
                        std::vector<Element> pool;
                        while (true) {
                            for (std::size_t slot = 0; slot < m; ++slot)
                                tuple[slot] = choices[slot][pick[slot]];
                            if (! gadget.witnesses.contains(tuple)) {
                                bool ok = true;
                                if (kind == GadgetKind::q && m > 2) {
                                    pool.assign(x.begin(), x.end());
                                    for (auto p : tuple) {
                                        auto [a, b] = decode_pair(p, d);
                                        pool.push_back(a);
                                        pool.push_back(b);
                                    }
                                    ok = spread_condition(relation, x, pool);
                                }
                                if (ok)
                                    gadget.witnesses.emplace(tuple, x);
                            }
                            std::size_t slot = m;
                            while (slot > 0 && ++pick[slot - 1] == choices[slot - 1].size())
                                pick[--slot] = 0;
                            if (slot == 0)
                                break;
                        }
                    }
                }

                std::size_t p = x.size();
                while (p > 0 && ++x[p - 1] == d)
                    x[--p] = 0;
                if (p == 0)
                    break;
            }

            std::vector<Tuple> tuples;
            for (auto & [tuple, _] : gadget.witnesses)
                tuples.push_back(tuple);
            gadget.relation = Relation(d * d, m, std::move(tuples));
            return gadget;
        }
    }

    auto build_q_gadget(const Relation & relation, std::size_t k, const GadgetOptions & options) -> Gadget
    {
        auto m = relation.arity();
        if (m < 2)
            throw InputError("gadget needs a relation of arity at least 2");
        if (k < std::max<std::size_t>(4, m + 1))
            throw InputError("gadget needs k >= max(4, m+1), got k = " + std::to_string(k));
        return search_gadget(relation, k, GadgetKind::q, options);
    }

    auto build_q2_gadget(const Relation & relation, std::size_t k, const GadgetOptions & options) -> Gadget
    {
        if (relation.arity() != 2)
            throw InputError("the binary gadget needs a binary relation");
        if (k < 4)
            throw InputError("gadget needs k >= 4, got k = " + std::to_string(k));
        return search_gadget(relation, k, GadgetKind::q2, options);
    }

    auto clique_pair_set(std::span<const Element> c, std::size_t base) -> std::vector<Element>
    {
        if (c.size() < 3)
            throw InputError("pair set needs at least three elements");
        std::vector<Element> out;
        for (std::size_t i = 0; i + 1 < c.size(); ++i)
            out.push_back(encode_pair(c[i], c[i + 1], base));
        out.push_back(encode_pair(c.back(), c[0], base));
        out.push_back(encode_pair(c[0], c[2], base));
        return out;
    }
}
