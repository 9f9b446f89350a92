#include "loopcond/io.hpp"
#include "loopcond/error.hpp"

#include <fstream>
#include <sstream>
#include <type_traits>

namespace loopcond
{
    auto read_text_file(const std::filesystem::path & path) -> std::string
    {
        std::ifstream in(path, std::ios::binary);
        if (! in)
            throw InputError("cannot open '" + path.string() + "'");
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    }

    auto read_json_file(const std::filesystem::path & path) -> json
    {
        auto text = read_text_file(path);
        try {
            return json::parse(text);
        }
        catch (const json::parse_error & e) {
            throw ParseError("invalid JSON in '" + path.string() + "': " + e.what(), e.byte);
        }
    }

    namespace
    {
        template <typename T>
        auto field(const json & doc, const char * key, const char * what) -> T
        {
            if (! doc.is_object() || ! doc.contains(key))
                throw InputError(std::string(what) + " is missing field '" + key + "'");
            if constexpr (std::is_unsigned_v<T>)
                if (! doc.at(key).is_number_unsigned())
                    throw InputError(std::string(what) + " field '" + key + "' must be a non-negative integer");
            try {
                return doc.at(key).get<T>();
            }
            catch (const json::exception & e) {
                throw InputError(std::string(what) + " field '" + key + "' has the wrong type: " + e.what());
            }
        }
    }

    auto algebra_from_json(const json & doc) -> FiniteAlgebra
    {
        auto size = field<std::size_t>(doc, "size", "algebra");
        std::vector<Operation> ops;
        for (auto & op : field<json>(doc, "operations", "algebra"))
            ops.push_back(Operation{field<std::string>(op, "name", "operation"),
                field<std::size_t>(op, "arity", "operation"),
                field<std::vector<Element>>(op, "table", "operation")});
        return FiniteAlgebra(size, std::move(ops));
    }

    auto to_json(const FiniteAlgebra & algebra) -> json
    {
        json ops = json::array();
        for (auto & op : algebra.operations())
            ops.push_back({{"name", op.name}, {"arity", op.arity}, {"table", op.table}});
        return {{"size", algebra.size()}, {"operations", ops}};
    }

    auto relation_from_json(const json & doc) -> Relation
    {
        return Relation(field<std::size_t>(doc, "domain", "relation"), field<std::size_t>(doc, "arity", "relation"),
                field<std::vector<Tuple>>(doc, "tuples", "relation"));
    }

    auto to_json(const Relation & relation) -> json
    {
        return {{"domain", relation.domain()}, {"arity", relation.arity()}, {"tuples", relation.tuples()}};
    }

    auto group_from_json(const json & doc) -> PermGroup
    {
        return PermGroup(field<std::size_t>(doc, "degree", "group"),
                field<std::vector<Permutation>>(doc, "generators", "group"));
    }

    auto to_json(const PermGroup & group) -> json
    {
        return {{"degree", group.degree()}, {"generators", group.generators()}};
    }
}
