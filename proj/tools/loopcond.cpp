// Command-line front end: every subcommand prints one JSON report on stdout
// and a short summary on stderr.
//
// Exit codes: 0 clean run, 1 internal invariant failure, 2 input or usage
// error, 3 budget exceeded.

#include "loopcond/algebra.hpp"
#include "loopcond/compose.hpp"
#include "loopcond/condition.hpp"
#include "loopcond/error.hpp"
#include "loopcond/free_wnu.hpp"
#include "loopcond/group.hpp"
#include "loopcond/hom.hpp"
#include "loopcond/identities.hpp"
#include "loopcond/indicator.hpp"
#include "loopcond/io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

using namespace loopcond;

namespace
{
    struct Report
    {
        json doc;
        std::string summary;
    };

    auto condition_file(const std::string & path) -> LoopCondition
    {
        return parse_condition(read_text_file(path));
    }

    auto witness_json(const TermFunction & f) -> json
    {
        return {{"params", f.params}, {"term", f.body.to_string()}};
    }

    auto hom_json(const ConditionRelation & from, const ConditionRelation & to, const HomMap & hom) -> json
    {
        std::vector<std::string> names(to.index.size());
        for (auto & [name, e] : to.index)
            names[e] = name;
        json map = json::object();
        for (auto & [name, e] : from.index)
            map[name] = names[hom[e]];
        return map;
    }

    auto write_out(const std::string & path, const std::string & content) -> void
    {
        std::ofstream out(path, std::ios::binary);
        if (! out)
            throw InputError("cannot write '" + path + "'");
        out << content;
    }

    auto cmd_trivial(const std::string & path) -> Report
    {
        auto condition = condition_file(path);
        auto trivial = is_trivial(condition);
        json cert = nullptr;
        if (trivial)
            for (std::size_t j = 0; j < condition.arity(); ++j) {
                auto col = condition.column(j);
                if (std::all_of(col.begin(), col.end(), [&] (auto & v) { return v == col.front(); })) {
                    cert = {{"constant_column", j + 1}, {"variable", col.front()}};
                    break;
                }
            }
        auto loop = find_loop(relation_of(condition).relation);
        if (trivial != loop.has_value())
            throw std::logic_error("constant column and loop of the relation disagree");
        return {{{"result", trivial}, {"certificate", cert},
                    {"statistics", {{"width", condition.width()}, {"arity", condition.arity()},
                        {"variables", condition.variables().size()}}}},
            trivial ? "trivial" : "non-trivial"};
    }

    auto cmd_implies(const std::string & from_path, const std::string & to_path) -> Report
    {
        auto from = condition_file(from_path);
        auto to = condition_file(to_path);
        HomSearchStats stats;
        auto hom = implies_by_hom(from, to, &stats);
        json cert = nullptr;
        if (hom) {
            auto a = relation_of(from);
            auto b = relation_of(to);
            if (! is_hom(a.relation, b.relation, *hom))
                throw std::logic_error("homomorphism certificate fails verification");
            cert = {{"homomorphism", hom_json(a, b, *hom)}};
        }
        return {{{"result", hom.has_value()}, {"certificate", cert}, {"statistics", {{"nodes", stats.nodes}}}},
            hom ? "homomorphism found" : "no homomorphism between the relations"};
    }

    auto closure_json(const ClosureStats & stats) -> json
    {
        return {{"closure_size", stats.size}, {"depth", stats.depth}, {"applications", stats.applications}};
    }

    auto cmd_satisfies(const std::string & algebra_path, const std::string & condition_path,
            const std::string & group_path, const IndicatorOptions & options) -> Report
    {
        auto algebra = algebra_from_json(read_json_file(algebra_path));
        auto condition = condition_file(condition_path);
        ClosureStats stats;
        if (group_path.empty()) {
            auto witness = satisfies(algebra, condition, options, &stats);
            if (witness && ! verify_witness(algebra, condition.plain(), *witness))
                throw std::logic_error("witness fails verification");
            json cert = witness ? json{{"witness", witness_json(*witness)}} : json(nullptr);
            return {{{"result", witness.has_value()}, {"certificate", cert}, {"statistics", closure_json(stats)}},
                witness ? "satisfied by " + witness->to_string(condition.head()) : "not satisfied"};
        }

        CoreAlgebra core(algebra, group_from_json(read_json_file(group_path)));
        auto witness = pseudo_satisfies(core, condition, options, &stats);
        json cert = nullptr;
        if (witness) {
            if (! verify_witness(algebra, condition.plain(), witness->f, witness->unary))
                throw std::logic_error("pseudo witness fails verification");
            json unary = json::array();
            for (std::size_t i = 0; i < witness->u.size(); ++i)
                unary.push_back({{"permutation", witness->u[i]}, {"word", witness->words[i]},
                    {"term", witness->unary[i].body.to_string()}});
            cert = {{"witness", witness_json(witness->f)}, {"unary", unary}};
        }
        return {{{"result", witness.has_value()}, {"certificate", cert}, {"statistics", closure_json(stats)}},
            witness ? "pseudo-satisfied by " + witness->f.to_string(condition.head()) : "not pseudo-satisfied"};
    }

    auto cmd_taylor3(const std::string & path, const std::string & out) -> Report
    {
        auto system = taylor_from_identities(parse_identities(read_text_file(path)));
        auto output = taylor_to_width3(system);
        if (is_trivial(output.condition))
            throw std::logic_error("width-3 condition has a constant column");
        auto rel = relation_of(output.condition);
        auto clique = make_clique(2 * output.n, 3);
        auto hom = find_hom(rel.relation, clique);
        if (! hom || ! is_hom(rel.relation, clique, *hom))
            throw std::logic_error("width-3 relation does not map into the clique");

        json subs = json::object();
        auto n = output.n;
        for (std::size_t r = 0; r < 3; ++r) {
            json table = json::object();
            for (std::size_t c = 0; c < output.substitutions[r].size(); ++c) {
                auto key = "(" + std::to_string(c / (n * n) + 1) + "," + std::to_string(c / n % n + 1) + ","
                    + std::to_string(c % n + 1) + ")";
                table[key] = output.substitutions[r][c];
            }
            subs["z" + std::to_string(r + 1)] = table;
        }
        if (! out.empty())
            write_out(out, output.condition.to_string() + "\n");
        return {{{"result", {{"condition", output.condition.to_string()}, {"width", 3},
                      {"arity", output.condition.arity()}, {"variables", output.condition.variables().size()}}},
                    {"certificate", {{"recipe", witness_json(output.recipe)}, {"substitutions", subs},
                        {"clique_homomorphism", *hom}}},
                    {"statistics", {{"n", n}}}},
            "width-3 condition of arity " + std::to_string(output.condition.arity())};
    }

    auto cmd_h1taylor(const std::string & path, bool idempotent, std::uint64_t limit, const std::string & out) -> Report
    {
        auto output = h1_to_taylor(parse_identities(read_text_file(path)), idempotent, limit);
        if (! rejects_all_projections(output.system))
            throw std::logic_error("derived system is satisfied by a projection");
        json reals = json::array();
        for (auto & r : output.realisations)
            reals.push_back({{"identity", r.identity + 1}, {"lhs_level", r.lhs_level + 1},
                {"rhs_level", r.rhs_level + 1}});
        if (! out.empty())
            write_out(out, output.system.to_string());
        return {{{"result", {{"ell", output.ell}, {"symbol", output.system.symbol()},
                      {"rows", output.system.arity()}, {"rejects_all_projections", true}}},
                    {"certificate", {{"t", witness_json(output.t)}, {"realisations", reals},
                        {"row_source", output.row_source}}},
                    {"statistics", {{"realisations", output.realisations.size()}}}},
            "Taylor system of arity " + std::to_string(output.ell)};
    }

    auto cmd_qgadget(const std::string & path, std::size_t k, bool binary, const GadgetOptions & options,
            const std::string & out) -> Report
    {
        auto relation = relation_from_json(read_json_file(path));
        auto gadget = binary ? build_q2_gadget(relation, k, options) : build_q_gadget(relation, k, options);
        auto d = gadget.base_domain;
        json loops = json::array();
        for (auto & [tuple, xs] : gadget.witnesses) {
            if (! is_constant(tuple))
                continue;
            auto [a, b] = decode_pair(tuple.front(), d);
            auto z = xs;
            z.push_back(a);
            z.push_back(b);
            loops.push_back({{"pair", {a, b}}, {"x", xs}, {"phi_k_plus_1", phi_eval(relation, z)}});
        }
        auto doc = to_json(gadget.relation);
        doc["encoding"] = "a*d+b";
        doc["base_domain"] = d;
        if (! out.empty())
            write_out(out, doc.dump(2) + "\n");
        return {{{"result", doc}, {"certificate", {{"loops", loops}}},
                    {"statistics", {{"size", gadget.relation.size()}, {"k", k}}}},
            "gadget with " + std::to_string(gadget.relation.size()) + " tuples"};
    }

    auto cmd_clique(std::size_t k, std::size_t m, const std::string & out) -> Report
    {
        auto clique = make_clique(k, m);
        auto condition = condition_of(clique);
        if (! out.empty())
            write_out(out, to_json(clique).dump(2) + "\n");
        return {{{"result", {{"relation", to_json(clique)}, {"condition", condition.to_string()}}},
                    {"certificate", nullptr}, {"statistics", {{"size", clique.size()}}}},
            "K_" + std::to_string(k) + "^" + std::to_string(m) + " with " + std::to_string(clique.size()) + " tuples"};
    }

    auto cmd_wnu_eq(const std::string & lhs, const std::string & rhs, std::size_t m) -> Report
    {
        FreeWnu wnu(m);
        auto a = parse_term(lhs);
        auto b = parse_term(rhs);
        auto ca = wnu.canonical(a);
        auto cb = wnu.canonical(b);
        bool equal = ca == cb;
        return {{{"result", equal}, {"certificate", {{"canonical", {ca.to_string(), cb.to_string()}}}},
                    {"statistics", {{"m", m}}}},
            equal ? "equal" : "different"};
    }

    auto cmd_wnu_search(const std::string & path, std::size_t m, int depth, std::uint64_t limit) -> Report
    {
        auto condition = condition_file(path);
        if (condition.width() != m)
            throw InputError("condition has width " + std::to_string(condition.width()) + ", expected m = "
                    + std::to_string(m));
        auto report = search_satisfying_term(condition, depth, limit);
        json found = nullptr;
        if (report.found) {
            if (! wnu_satisfies(FreeWnu(m), condition.plain(), *report.found))
                throw std::logic_error("search result fails the free-algebra check");
            found = witness_json(*report.found);
        }
        return {{{"result", report.found.has_value()}, {"certificate", {{"found", found}}},
                    {"statistics", {{"checkedTerms", report.checked_terms}, {"maxDepth", report.max_depth},
                        {"found", report.found.has_value()}}}},
            (report.found ? "found a term" : "no term") + std::string(" after ")
                + std::to_string(report.checked_terms) + " terms"};
    }
}

int main(int argc, char ** argv)
{
    CLI::App app{"Loop conditions: triviality, implication, satisfaction and constructions"};
    app.require_subcommand(1);

    std::vector<std::string> argv_echo(argv + 1, argv + argc);

    std::string cond_a, cond_b, algebra_path, group_path, out;
    IndicatorOptions indicator;
    GadgetOptions gadget;
    std::uint64_t gadget_ms = 10000;

    auto trivial = app.add_subcommand("trivial", "Decide whether a loop condition is trivial");
    trivial->add_option("condition", cond_a, "Condition file")->required();

    auto implies = app.add_subcommand("implies", "Search a homomorphism between the condition relations");
    implies->add_option("from", cond_a, "Condition file")->required();
    implies->add_option("to", cond_b, "Condition file")->required();

    auto sat = app.add_subcommand("satisfies", "Decide satisfaction of a condition in a finite algebra");
    sat->add_option("algebra", algebra_path, "Algebra JSON file")->required();
    sat->add_option("condition", cond_a, "Condition file")->required();
    sat->add_option("--pseudo", group_path, "Group JSON file for pseudo-satisfaction");
    sat->add_option("--budget", indicator.cell_budget, "Maximum |A|^|V|*m")->capture_default_str();
    sat->add_option("--closure-cap", indicator.closure_cap, "Maximum closure size")->capture_default_str();

    auto construct = app.add_subcommand("construct", "Syntactic constructions");
    std::string taylor3_path, h1_path;
    std::vector<std::string> qgadget_args;
    std::vector<std::size_t> clique_args;
    bool non_idempotent = false, binary = false;
    std::uint64_t arity_limit = std::uint64_t(1) << 12;
    auto opt_taylor3 = construct->add_option("--taylor3", taylor3_path, "Taylor identities file");
    auto opt_h1 = construct->add_option("--h1taylor", h1_path, "h1 identities file");
    auto opt_q = construct->add_option("--qgadget", qgadget_args, "Relation JSON file and k")->expected(2);
    auto opt_clique = construct->add_option("--clique", clique_args, "k and m")->expected(2);
    opt_taylor3->excludes(opt_h1, opt_q, opt_clique);
    opt_h1->excludes(opt_q, opt_clique);
    opt_q->excludes(opt_clique);
    construct->add_flag("--non-idempotent", non_idempotent, "Keep unary markers in the h1 output");
    construct->add_option("--arity-limit", arity_limit, "Largest derived Taylor arity")->capture_default_str();
    construct->add_flag("--binary", binary, "Use the binary gadget variant");
    construct->add_option("--search-budget", gadget.search_budget, "Gadget search space limit")->capture_default_str();
    construct->add_option("--time-limit", gadget_ms, "Gadget time limit in ms")->capture_default_str();
    construct->add_option("--out", out, "Write the constructed object here");

    auto wnu = app.add_subcommand("wnu", "Free weak near-unanimity algebra");
    std::vector<std::string> eq_args, search_args;
    std::uint64_t term_limit = std::uint64_t(1) << 22;
    auto opt_eq = wnu->add_option("--eq", eq_args, "t1 t2 m")->expected(3);
    auto opt_search = wnu->add_option("--search", search_args, "condition-file m depth")->expected(3);
    opt_eq->excludes(opt_search);
    wnu->add_option("--term-limit", term_limit, "Maximum enumerated terms")->capture_default_str();

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError & e) {
        if (e.get_exit_code() == 0)
            return app.exit(e);
        app.exit(e);
        json doc = {{"command", {{"argv", argv_echo}}}, {"error", {{"kind", "usage"}, {"message", e.what()}}},
            {"statistics", json::object()}};
        std::cout << doc.dump(2) << "\n";
        return 2;
    }

    auto to_size = [] (const std::string & s, const char * what) -> std::size_t {
        try {
            std::size_t pos = 0;
            auto v = std::stoull(s, &pos);
            if (pos != s.size() || s.front() == '-')
                throw std::invalid_argument(s);
            return v;
        }
        catch (const std::exception &) {
            throw InputError(std::string(what) + " must be a non-negative integer, got '" + s + "'");
        }
    };

    auto start = std::chrono::steady_clock::now();
    json doc;
    int code = 0;
    try {
        Report report;
        std::string name;
        if (*trivial) {
            name = "trivial";
            report = cmd_trivial(cond_a);
        }
        else if (*implies) {
            name = "implies";
            report = cmd_implies(cond_a, cond_b);
        }
        else if (*sat) {
            name = "satisfies";
            report = cmd_satisfies(algebra_path, cond_a, group_path, indicator);
        }
        else if (*construct) {
            name = "construct";
            gadget.time_limit = std::chrono::milliseconds(gadget_ms);
            if (*opt_taylor3)
                report = cmd_taylor3(taylor3_path, out);
            else if (*opt_h1)
                report = cmd_h1taylor(h1_path, ! non_idempotent, arity_limit, out);
            else if (*opt_q)
                report = cmd_qgadget(qgadget_args[0], to_size(qgadget_args[1], "k"), binary, gadget, out);
            else if (*opt_clique)
                report = cmd_clique(clique_args[0], clique_args[1], out);
            else
                throw InputError("construct needs one of --taylor3, --h1taylor, --qgadget, --clique");
        }
        else if (*wnu) {
            name = "wnu";
            if (*opt_eq)
                report = cmd_wnu_eq(eq_args[0], eq_args[1], to_size(eq_args[2], "m"));
            else if (*opt_search) {
                auto depth = to_size(search_args[2], "depth");
                report = cmd_wnu_search(search_args[0], to_size(search_args[1], "m"), int(depth), term_limit);
            }
            else
                throw InputError("wnu needs --eq or --search");
        }
        doc = report.doc;
        doc["command"] = {{"name", name}, {"argv", argv_echo}};
        std::cerr << name << ": " << report.summary << "\n";
    }
    catch (const BudgetError & e) {
        doc = {{"command", {{"argv", argv_echo}}}, {"error", {{"kind", "budget"}, {"message", e.what()},
            {"required", e.required()}, {"limit", e.limit()}}}};
        std::cerr << "budget exceeded: " << e.what() << "\n";
        code = 3;
    }
    catch (const ParseError & e) {
        doc = {{"command", {{"argv", argv_echo}}}, {"error", {{"kind", "parse"}, {"message", e.what()},
            {"position", e.position()}}}};
        std::cerr << "parse error: " << e.what() << "\n";
        code = 2;
    }
    catch (const InputError & e) {
        doc = {{"command", {{"argv", argv_echo}}}, {"error", {{"kind", "input"}, {"message", e.what()}}}};
        std::cerr << "input error: " << e.what() << "\n";
        code = 2;
    }
    catch (const std::exception & e) {
        doc = {{"command", {{"argv", argv_echo}}}, {"error", {{"kind", "internal"}, {"message", e.what()}}}};
        std::cerr << "internal error: " << e.what() << "\n";
        code = 1;
    }
    auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (! doc.contains("statistics"))
        doc["statistics"] = json::object();
    doc["statistics"]["elapsed_ms"] = elapsed;
    std::cout << doc.dump(2) << "\n";
    return code;
}
