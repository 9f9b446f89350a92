#include "loopcond/io.hpp"

#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

using loopcond::json;

namespace
{
    struct Run
    {
        int code;
        json doc;
    };

    auto run(const std::string & args) -> Run
    {
        std::string command = std::string("'") + LOOPCOND_CLI + "' " + args + " 2>/dev/null";
        FILE * pipe = popen(command.c_str(), "r");
        REQUIRE(pipe);
        std::string out;
        std::array<char, 4096> buffer{};
        while (auto n = std::fread(buffer.data(), 1, buffer.size(), pipe))
            out.append(buffer.data(), n);
        int status = pclose(pipe);
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, json::parse(out)};
    }

    auto data(const std::string & name) -> std::string
    {
        return "'" + (std::filesystem::path(LOOPCOND_DATA_DIR) / name).string() + "'";
    }
}

TEST_CASE("trivial")
{
    auto olsak = run("trivial " + data("olsak.cond"));
    CHECK(olsak.code == 0);
    CHECK(olsak.doc["result"] == false);
    CHECK(olsak.doc["command"]["name"] == "trivial");
    CHECK(olsak.doc["statistics"]["arity"] == 6);
    CHECK(olsak.doc["statistics"].contains("elapsed_ms"));

    auto trivial = run("trivial " + data("trivial.cond"));
    CHECK(trivial.doc["result"] == true);
    CHECK(trivial.doc["certificate"].contains("constant_column"));

    auto bad = run("trivial " + data("malformed.cond"));
    CHECK(bad.code == 2);
    CHECK(bad.doc["error"]["kind"] == "parse");
    CHECK(bad.doc["error"].contains("position"));

    CHECK(run("trivial " + data("missing.cond")).code == 2);
}

TEST_CASE("implies")
{
    auto yes = run("implies " + data("k4.cond") + " " + data("k5.cond"));
    CHECK(yes.code == 0);
    CHECK(yes.doc["result"] == true);
    CHECK(yes.doc["certificate"].contains("homomorphism"));
    auto no = run("implies " + data("k4.cond") + " " + data("k3.cond"));
    CHECK(no.doc["result"] == false);
    CHECK(no.doc["certificate"].is_null());
    CHECK(run("implies " + data("k4.cond") + " " + data("olsak.cond")).code == 2);
}

TEST_CASE("satisfies")
{
    auto xor3 = run("satisfies " + data("xor3.json") + " " + data("olsak.cond"));
    CHECK(xor3.code == 0);
    CHECK(xor3.doc["result"] == true);
    CHECK(xor3.doc["certificate"].contains("witness"));
    auto proj = run("satisfies " + data("proj2.json") + " " + data("commutative.cond"));
    CHECK(proj.doc["result"] == false);
    auto min = run("satisfies " + data("min2.json") + " " + data("commutative.cond"));
    CHECK(min.doc["result"] == true);
    CHECK(min.doc["statistics"]["depth"] == 1);

    auto pseudo = run("satisfies " + data("xor3_swap.json") + " " + data("pseudo_commutative.cond") + " --pseudo "
            + data("swap_group.json"));
    CHECK(pseudo.code == 0);
    CHECK(pseudo.doc["result"].is_boolean());

    auto budget = run("satisfies " + data("xor3.json") + " " + data("olsak.cond") + " --budget 4");
    CHECK(budget.code == 3);
    CHECK(budget.doc["error"]["kind"] == "budget");
    CHECK(budget.doc["error"]["required"] == 12);
    CHECK(run("satisfies " + data("xor3.json") + " " + data("olsak.cond") + " --budget lots").code == 2);
}

TEST_CASE("construct")
{
    auto t3 = run("construct --taylor3 " + data("commutativity.ids"));
    CHECK(t3.code == 0);
    CHECK(t3.doc["result"]["arity"] == 8);
    CHECK(t3.doc["certificate"]["substitutions"]["z3"]["(1,2,1)"] == "y2");

    auto h1 = run("construct --h1taylor " + data("siggers.ids"));
    CHECK(h1.code == 0);
    CHECK(h1.doc["result"]["ell"] == 36);
    CHECK(run("construct --h1taylor " + data("trivial.ids")).code == 2);
    CHECK(run("construct --h1taylor " + data("deep.ids")).code == 2);

    auto q = run("construct --qgadget " + data("k5.json") + " 4");
    CHECK(q.code == 0);
    CHECK(q.doc["result"]["encoding"] == "a*d+b");
    CHECK(q.doc["result"]["base_domain"] == 5);
    for (auto & loop : q.doc["certificate"]["loops"])
        CHECK(loop["phi_k_plus_1"] == true);

    auto path = std::filesystem::temp_directory_path() / "loopcond_cli_k3.json";
    auto clique = run("construct --clique 3 2 --out '" + path.string() + "'");
    CHECK(clique.code == 0);
    CHECK(clique.doc["statistics"]["size"] == 6);
    std::ifstream written(path);
    CHECK(json::parse(written)["tuples"].size() == 6);

    CHECK(run("construct").code == 2);
}

TEST_CASE("wnu")
{
    auto eq = run("wnu --eq 't(x,y,y)' 't(y,y,x)' 2");
    CHECK(eq.code == 0);
    CHECK(eq.doc["result"] == true);
    CHECK(run("wnu --eq 't(x,y,z)' 't(y,x,z)' 2").doc["result"] == false);
    auto mismatch = run("wnu --eq 't(x,y,y)' 't(y,x,y)' 3");
    CHECK(mismatch.code == 2);
    CHECK(mismatch.doc["error"]["kind"] == "input");

    auto search = run("wnu --search " + data("commutative.cond") + " 2 2");
    CHECK(search.code == 0);
    CHECK(search.doc["result"] == false);
    CHECK(search.doc["statistics"]["checkedTerms"] > 0);
    CHECK(run("wnu --search " + data("commutative.cond") + " 3 1").code == 2);
}

TEST_CASE("usage errors")
{
    for (auto args : {"", "frobnicate", "trivial", "construct --clique 3"}) {
        auto r = run(args);
        CHECK(r.code == 2);
        CHECK(r.doc["error"]["kind"] == "usage");
    }
}
