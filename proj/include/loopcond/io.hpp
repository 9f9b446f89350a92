#ifndef LOOPCOND_IO_HPP
#define LOOPCOND_IO_HPP

#include "loopcond/algebra.hpp"
#include "loopcond/group.hpp"
#include "loopcond/hom.hpp"
#include "loopcond/relation.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace loopcond
{
    using json = nlohmann::json;

    auto read_text_file(const std::filesystem::path & path) -> std::string;
    auto read_json_file(const std::filesystem::path & path) -> json;

    /// {"size": d, "operations": [{"name": s, "arity": k, "table": [...]}]}
    auto algebra_from_json(const json & doc) -> FiniteAlgebra;
    auto to_json(const FiniteAlgebra & algebra) -> json;

    /// {"domain": d, "arity": m, "tuples": [[...], ...]}
    auto relation_from_json(const json & doc) -> Relation;
    auto to_json(const Relation & relation) -> json;

    /// {"degree": d, "generators": [[images], ...]}
    auto group_from_json(const json & doc) -> PermGroup;
    auto to_json(const PermGroup & group) -> json;
}

#endif
