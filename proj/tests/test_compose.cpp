#include "loopcond/algebra.hpp"
#include "loopcond/compose.hpp"
#include "loopcond/error.hpp"
#include "loopcond/hom.hpp"
#include "loopcond/identities.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace loopcond;

namespace
{
    auto min_algebra(const std::string & symbol, std::size_t arity) -> FiniteAlgebra
    {
        return FiniteAlgebra(2, {make_operation(symbol, arity, 2, [] (std::span<const Element> a) {
            return *std::min_element(a.begin(), a.end());
        })});
    }

    auto random_idempotent(std::mt19937 & rng, std::size_t size) -> FiniteAlgebra
    {
        auto a = oracle::random_algebra(rng, size, {2, 3});
        std::vector<Operation> ops;
        for (auto op : a.operations()) {
            for (std::size_t e = 0; e < size; ++e) {
                std::size_t idx = 0;
                for (std::size_t k = 0; k < op.arity; ++k)
                    idx = idx * size + e;
                op.table[idx] = Element(e);
            }
            ops.push_back(op);
        }
        return FiniteAlgebra(size, ops);
    }

    auto random_term(std::mt19937 & rng, const std::vector<std::string> & vars, std::size_t depth) -> Term
    {
        if (depth == 0 || rng() % 4 == 0)
            return Term::var(vars[rng() % vars.size()]);
        std::size_t arity = rng() % 2 ? 2 : 3;
        // bias towards repeated arguments so that collapses happen
        auto first = random_term(rng, vars, depth - 1);
        std::vector<Term> args;
        for (std::size_t i = 0; i < arity; ++i)
            args.push_back(rng() % 3 ? first : random_term(rng, vars, depth - 1));
        return Term::app(arity == 2 ? "o1" : "o2", args);
    }

    /// phi by its definition, counting index tuples directly.
    auto phi(const Relation & r, const std::vector<Element> & z) -> bool
    {
        std::size_t m = r.arity();
        std::size_t total = 1;
        for (std::size_t i = 0; i < m; ++i)
            total *= z.size();
        for (std::size_t code = 0; code < total; ++code) {
            Tuple t(m);
            std::set<std::size_t> idx;
            std::size_t c = code;
            for (std::size_t i = m; i-- > 0; c /= z.size()) {
                idx.insert(c % z.size());
                t[i] = z[c % z.size()];
            }
            if (idx.size() > 1 && ! r.contains(t))
                return false;
        }
        return true;
    }

    auto symmetric(std::size_t d, const std::vector<std::pair<Element, Element>> & edges) -> Relation
    {
        std::vector<Tuple> tuples;
        for (auto [a, b] : edges) {
            tuples.push_back({a, b});
            tuples.push_back({b, a});
        }
        return Relation(d, 2, tuples);
    }

    auto clique_edges(std::size_t k) -> std::vector<std::pair<Element, Element>>
    {
        std::vector<std::pair<Element, Element>> e;
        for (Element a = 0; a < k; ++a)
            for (Element b = a + 1; b < k; ++b)
                e.emplace_back(a, b);
        return e;
    }

    /// The binary gadget straight from its defining formula.
    auto q2_oracle(const Relation & r, std::size_t k) -> std::set<Tuple>
    {
        std::size_t d = r.domain();
        std::set<Tuple> out;
        std::vector<Element> x(k - 1, 0);
        while (true) {
            if (phi(r, x))
                for (Element a1 = 0; a1 < d; ++a1)
                    for (Element b1 = 0; b1 < d; ++b1) {
                        if (! phi(r, {x[0], a1, b1}))
                            continue;
                        for (Element a2 = 0; a2 < d; ++a2)
                            for (Element b2 = 0; b2 < d; ++b2) {
                                std::vector<Element> z(x.begin() + 1, x.end());
                                z.push_back(a2);
                                z.push_back(b2);
                                if (phi(r, z))
                                    out.insert({encode_pair(a1, b1, d), encode_pair(a2, b2, d)});
                            }
                    }
            std::size_t p = x.size();
            while (p > 0 && ++x[p - 1] == d)
                x[--p] = 0;
            if (p == 0)
                return out;
        }
    }

    void check_loop_pullback(const Relation & r, const Gadget & q)
    {
        for (auto & tuple : q.relation.tuples()) {
            if (! is_constant(tuple))
                continue;
            auto [a, b] = decode_pair(tuple.front(), q.base_domain);
            auto z = q.witnesses.at(tuple);
            CHECK(z.size() == q.k - 1);
            z.push_back(a);
            z.push_back(b);
            CHECK(phi_eval(r, z));
        }
    }
}

TEST_CASE("star nests the second function in every argument")
{
    auto p = TermFunction::symbol("p", 2);
    auto pp = star(p, p);
    CHECK(pp.arity() == 4);
    CHECK(pp.body.to_string() == "p(p(x1_1,x1_2),p(x2_1,x2_2))");
    CHECK(star(p, TermFunction::symbol("g", 3)).arity() == 6);
    auto f = TermFunction::symbol("f", 1);
    auto fg = star(f, TermFunction::symbol("g", 3));
    CHECK(fg.arity() == 3);
    CHECK(fg.body.to_string() == "f(g(x1_1,x1_2,x1_3))");
    for (std::size_t n = 1; n <= 3; ++n)
        for (std::size_t m = 1; m <= 3; ++m)
            CHECK(star(TermFunction::symbol("f", n), TermFunction::symbol("g", m)).arity() == n * m);

    std::vector<TermFunction> three{p, p, p};
    auto h = star_chain(three);
    CHECK(h.arity() == 8);
    CHECK(h.params.front() == "z1_1_1");
    CHECK(h.params.back() == "z2_2_2");
    CHECK(h.params[2] == "z1_2_1");
}

TEST_CASE("idempotent normal forms")
{
    CHECK(idem_normalize(parse_term("t(t(x,x),y)")).to_string() == "t(x,y)");
    CHECK(idem_normalize(parse_term("t(x,y)")).to_string() == "t(x,y)");
    auto p = TermFunction::symbol("t", 2);
    auto pp = star(p, p);
    std::map<std::string, Term> all_x;
    for (auto & v : pp.params)
        all_x.emplace(v, Term::var("x"));
    CHECK(idem_normalize(pp.body.substitute(all_x)).to_string() == "x");
    CHECK(idem_normalize(parse_term("g(f(x,x),f(x,x),x)")).to_string() == "x");
}

TEST_CASE("normalisation is idempotent and preserves idempotent evaluation")
{
    std::mt19937 rng(31);
    std::vector<std::string> vars{"x", "y"};
    for (int round = 0; round < 200; ++round) {
        auto t = random_term(rng, vars, 3);
        auto n = idem_normalize(t);
        CHECK(idem_normalize(n) == n);
        CHECK(n.size() <= t.size());
        auto algebra = random_idempotent(rng, 2 + rng() % 2);
        for (Element x = 0; x < algebra.size(); ++x)
            for (Element y = 0; y < algebra.size(); ++y) {
                Assignment env{{"x", x}, {"y", y}};
                CHECK(eval_term(algebra, t, env) == eval_term(algebra, n, env));
            }
    }
}

TEST_CASE("Taylor systems read from identities")
{
    auto sys = taylor_from_identities(parse_identities("f(x,y) = f(y,x)"));
    CHECK(sys.arity() == 2);
    CHECK(sys.symbol() == "f");
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(sys.rows()[i].lhs[i] == XY::x);
        CHECK(sys.rows()[i].rhs[i] == XY::y);
    }
    CHECK(rejects_all_projections(sys));
    CHECK(verify_taylor(min_algebra("f", 2), sys, TermFunction::symbol("f", 2)));
    CHECK_FALSE(verify_taylor(min_algebra("f", 2), sys, TermFunction::projection(2, 0)));

    CHECK_THROWS_AS(taylor_from_identities(parse_identities("s(x,y,x,z,y,z) = s(y,x,z,x,z,y)")), InputError);

    CHECK_THROWS_AS(taylor_from_identities(parse_identities("f(x,y,z) = f(y,x,z)")), InputError);
    CHECK_THROWS_AS(TaylorSystem("t", {TaylorRow{{XY::y, XY::x}, {XY::x, XY::y}}, TaylorRow{{XY::y, XY::x}, {XY::x, XY::y}}}),
            InputError);
    auto rt = taylor_from_identities(sys.to_identities());
    CHECK(rt.to_string() == sys.to_string());
}

TEST_CASE("width-3 condition from the commutativity Taylor system")
{
    auto sys = taylor_from_identities(parse_identities("f(x,y) = f(y,x)"));
    auto out = taylor_to_width3(sys);
    CHECK(out.n == 2);
    CHECK(out.condition.width() == 3);
    CHECK(out.condition.arity() == 8);
    CHECK(out.condition.variables().size() == 4);
    CHECK_FALSE(is_trivial(out.condition));
    for (auto & row : out.substitutions)
        CHECK(row.size() == 8);
    // position (1,1,1): x_{1,1}, y_{1,1}, x_{1,1}
    CHECK(out.substitutions[0][0] == "x1");
    CHECK(out.substitutions[1][0] == "y1");
    CHECK(out.substitutions[2][0] == "x1");
    // position (1,2,1): x_{1,2}, y_{1,2}, x_{2,1}
    CHECK(out.substitutions[0][2] == "y1");
    CHECK(out.substitutions[2][2] == "y2");
    CHECK(out.substitutions[0][2] != out.substitutions[2][2]);

    auto rel = relation_of(out.condition).relation;
    auto h = find_hom(rel, make_clique(4, 3));
    REQUIRE(h);
    CHECK(is_hom(rel, make_clique(4, 3), *h));

    auto algebra = min_algebra("f", 2);
    CHECK(verify_witness(algebra, out.condition, out.recipe));
    // the same by direct evaluation over all 2^4 assignments
    auto vars = out.condition.variables();
    for_each_assignment(vars.size(), 2, [&] (std::span<const Element> v) {
        std::optional<Element> first;
        for (auto & row : out.condition.matrix()) {
            Assignment env;
            for (std::size_t p = 0; p < row.size(); ++p)
                env[out.recipe.params[p]] = v[std::find(vars.begin(), vars.end(), row[p]) - vars.begin()];
            auto value = eval_term(algebra, out.recipe.body, env);
            CHECK((! first || *first == value));
            first = value;
        }
        return true;
    });
}

TEST_CASE("width-3 conditions avoid the diagonal for every Taylor system")
{
    std::mt19937 rng(3);
    for (int round = 0; round < 50; ++round) {
        std::size_t n = 2 + rng() % 3;
        std::vector<TaylorRow> rows(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                rows[i].lhs.push_back(rng() % 2 ? XY::x : XY::y);
                rows[i].rhs.push_back(rng() % 2 ? XY::x : XY::y);
            }
            rows[i].lhs[i] = XY::x;
            rows[i].rhs[i] = XY::y;
        }
        auto out = taylor_to_width3(TaylorSystem("t", rows));
        CHECK(out.condition.arity() == n * n * n);
        CHECK_FALSE(is_trivial(out.condition));
        CHECK(find_hom(relation_of(out.condition).relation, make_clique(2 * n, 3)));
    }
}

TEST_CASE("Taylor identities from height-1 systems")
{
    auto siggers = h1_to_taylor(parse_identities("s(x,y,x,z,y,z) = s(y,x,z,x,z,y)"), true);
    CHECK(siggers.ell == 36);
    CHECK(siggers.system.arity() == 36);
    CHECK(siggers.t.arity() == 36);
    CHECK(rejects_all_projections(siggers.system));
    CHECK(verify_taylor(min_algebra("s", 6), siggers.system, siggers.t));

    auto comm = h1_to_taylor(parse_identities("f(x,y) = f(y,x)"), true);
    CHECK(comm.ell == 4);
    CHECK(comm.row_source.size() == 4);
    CHECK(rejects_all_projections(comm.system));
    CHECK(verify_taylor(min_algebra("f", 2), comm.system, comm.t));
    // exhaustively: no projection satisfies every row
    for (std::size_t p = 0; p < comm.system.arity(); ++p) {
        bool all = true;
        for (auto & row : comm.system.rows())
            all = all && row.lhs[p] == row.rhs[p];
        CHECK_FALSE(all);
    }

    auto marked = h1_to_taylor(parse_identities("f(x,y) = f(y,x)"), false);
    REQUIRE(marked.system.unary());
    CHECK(marked.system.unary()->size() == 4);

    CHECK_THROWS_AS(h1_to_taylor(parse_identities("f(x,y) = f(x,y)"), true), InputError);
    CHECK_THROWS_AS(h1_to_taylor(parse_identities("f(f(x,y),y) = f(y,x)"), true), InputError);
    CHECK_THROWS_AS(h1_to_taylor(parse_identities("s(x,y,x,z,y,z) = s(y,x,z,x,z,y)"), true, 20), BudgetError);
}

TEST_CASE("Taylor output of mixed systems is satisfied where the input is")
{
    auto sys = parse_identities("m(x,y,y) = m(y,y,x); m(x,y,x) = m(y,x,y)");
    REQUIRE_FALSE(sys.is_trivial());
    auto out = h1_to_taylor(sys, true);
    CHECK(out.ell == 9 * 9);
    CHECK(rejects_all_projections(out.system));
    CHECK(verify_taylor(min_algebra("m", 3), out.system, out.t));
    for (std::size_t j = 0; j < out.system.arity(); ++j) {
        CHECK(out.system.rows()[j].lhs[j] == XY::x);
        CHECK(out.row_source[j] < out.realisations.size());
    }
}

TEST_CASE("phi examples")
{
    auto k3 = make_clique(3, 2);
    CHECK(phi_eval(k3, std::vector<Element>{0, 1, 2}));
    CHECK_FALSE(phi_eval(k3, std::vector<Element>{0, 0, 1}));
    CHECK(phi_eval(k3, std::vector<Element>{1}));
    std::mt19937 rng(8);
    for (int round = 0; round < 300; ++round) {
        std::size_t m = 2 + rng() % 2;
        std::vector<Tuple> tuples;
        for (std::size_t i = 0; i < 30; ++i) {
            Tuple t(m);
            for (auto & e : t)
                e = Element(rng() % 4);
            if (! is_constant(t))
                tuples.push_back(t);
        }
        Relation r(4, m, tuples);
        std::vector<Element> z(1 + rng() % 4);
        for (auto & e : z)
            e = Element(rng() % 4);
        bool value = phi_eval(r, z);
        CHECK(value == phi(r, z));
        if (value && z.size() > 1)
            CHECK(std::set<Element>(z.begin(), z.end()).size() == z.size());
    }
}

TEST_CASE("the clique gadget contains a larger clique")
{
    auto c = std::vector<Element>{0, 1, 2, 3};
    auto s = clique_pair_set(c, 5);
    CHECK(s.size() == 5);
    CHECK(s.back() == encode_pair(0, 2, 5));
    auto k5 = make_clique(5, 2);
    auto q = build_q_gadget(k5, 4);
    CHECK(q.relation.domain() == 25);
    CHECK(phi_eval(q.relation, s));

    // K_4 plus a pendant path: loop-free, largest clique 4
    auto r4 = symmetric(6, [] {
        auto e = clique_edges(4);
        e.emplace_back(4, 0);
        e.emplace_back(4, 1);
        e.emplace_back(5, 4);
        return e;
    }());
    auto q4 = build_q_gadget(r4, 4);
    CHECK(find_hom(make_clique(5, 2), q4.relation));
    check_loop_pullback(r4, q4);
    CHECK_FALSE(find_loop(q4.relation));

    auto r5 = symmetric(6, [] {
        auto e = clique_edges(5);
        e.emplace_back(5, 0);
        return e;
    }());
    auto q5 = build_q_gadget(r5, 5);
    CHECK(find_hom(make_clique(6, 2), q5.relation));
    check_loop_pullback(r5, q5);
}

TEST_CASE("gadget loops pull back to phi")
{
    std::mt19937 rng(17);
    for (int round = 0; round < 30; ++round) {
        std::size_t d = 3 + rng() % 2;
        std::vector<Tuple> tuples;
        for (std::size_t i = 0; i < 14; ++i)
            tuples.push_back({Element(rng() % d), Element(rng() % d)});
        Relation r(d, 2, tuples);
        check_loop_pullback(r, build_q_gadget(r, 4));
        check_loop_pullback(r, build_q2_gadget(r, 4));
    }
    Relation ternary(3, 3, [] {
        std::vector<Tuple> t;
        for (Element a = 0; a < 3; ++a)
            for (Element b = 0; b < 3; ++b)
                for (Element c = 0; c < 3; ++c)
                    if (! (a == b && b == c) || a == 0)
                        t.push_back({a, b, c});
        return t;
    }());
    auto q = build_q_gadget(ternary, 4);
    CHECK(find_loop(q.relation));
    check_loop_pullback(ternary, q);
}

TEST_CASE("binary gadget matches its definition")
{
    std::mt19937 rng(23);
    for (int round = 0; round < 30; ++round) {
        std::size_t d = 3 + rng() % 2;
        std::vector<Tuple> tuples;
        for (std::size_t i = 0; i < 12; ++i)
            tuples.push_back({Element(rng() % d), Element(rng() % d)});
        Relation r(d, 2, tuples);
        auto q2 = build_q2_gadget(r, 4);
        auto expected = q2_oracle(r, 4);
        CHECK(std::set<Tuple>(q2.relation.tuples().begin(), q2.relation.tuples().end()) == expected);
        CHECK(build_q_gadget(r, 4).relation == q2.relation);
    }
    auto q = build_q2_gadget(make_clique(5, 2), 4);
    CHECK(find_hom(make_clique(5, 2), q.relation));
    CHECK_FALSE(build_q2_gadget(make_clique(4, 2), 4).relation.empty());
}

TEST_CASE("gadget edge cases")
{
    Relation empty(4, 2, {});
    CHECK(build_q_gadget(empty, 4).relation.empty());
    CHECK(build_q2_gadget(empty, 4).relation.empty());
    CHECK_THROWS_AS(build_q_gadget(make_clique(3, 2), 3), InputError);
    CHECK_THROWS_AS(build_q_gadget(make_clique(3, 4), 4), InputError);
    CHECK_THROWS_AS(build_q2_gadget(make_clique(3, 3), 4), InputError);
    GadgetOptions tiny;
    tiny.search_budget = 1000;
    CHECK_THROWS_AS(build_q_gadget(make_clique(5, 2), 4, tiny), BudgetError);
}
