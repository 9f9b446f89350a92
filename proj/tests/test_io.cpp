#include "loopcond/error.hpp"
#include "loopcond/hom.hpp"
#include "loopcond/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace loopcond;

namespace
{
    auto data(const std::string & name) -> std::filesystem::path
    {
        return std::filesystem::path(LOOPCOND_DATA_DIR) / name;
    }

    auto scratch(const std::string & name, const std::string & content) -> std::filesystem::path
    {
        auto path = std::filesystem::temp_directory_path() / ("loopcond_io_" + name);
        std::ofstream(path) << content;
        return path;
    }
}

TEST_CASE("algebras round-trip through JSON")
{
    auto a = algebra_from_json(read_json_file(data("xor3.json")));
    CHECK(a.size() == 2);
    REQUIRE(a.operations().size() == 1);
    CHECK(a.operations()[0].name == "m");
    CHECK(a.operations()[0].arity == 3);
    auto back = algebra_from_json(to_json(a));
    CHECK(back.operations()[0].table == a.operations()[0].table);
    CHECK(to_json(back) == to_json(a));
}

TEST_CASE("relations and groups round-trip through JSON")
{
    auto r = relation_from_json(read_json_file(data("k5.json")));
    CHECK(r == make_clique(5, 2));
    CHECK(relation_from_json(to_json(r)) == r);
    auto g = group_from_json(read_json_file(data("swap_group.json")));
    CHECK(g.degree() == 2);
    CHECK(g.generators() == std::vector<Permutation>{{1, 0}});
    CHECK(group_from_json(to_json(g)).generators() == g.generators());
}

TEST_CASE("malformed documents are rejected")
{
    CHECK_THROWS_AS(read_json_file(data("does_not_exist.json")), InputError);
    CHECK_THROWS_AS(read_text_file(data("does_not_exist.cond")), InputError);
    try {
        read_json_file(scratch("bad.json", "{\"size\": 2,"));
        FAIL("no parse error");
    }
    catch (const ParseError & e) {
        CHECK(e.position() > 0);
    }
    CHECK_THROWS_AS(algebra_from_json(json::parse(R"({"size": 2})")), InputError);
    CHECK_THROWS_AS(algebra_from_json(json::parse(R"({"size": -2, "operations": []})")), InputError);
    CHECK_THROWS_AS(algebra_from_json(json::parse(R"({"size": 2, "operations": [{"name": "f", "arity": 1, "table": [0, 2]}]})")),
            InputError);
    CHECK_THROWS_AS(relation_from_json(json::parse(R"({"domain": 2, "arity": 2, "tuples": [[0, 1, 1]]})")), InputError);
    CHECK_THROWS_AS(relation_from_json(json::parse(R"({"domain": "two", "arity": 2, "tuples": []})")), InputError);
    CHECK_THROWS_AS(group_from_json(json::parse(R"({"degree": 2, "generators": [[0, 0]]})")), InputError);
    CHECK_THROWS_AS(group_from_json(json::parse("[1, 2]")), InputError);
}
