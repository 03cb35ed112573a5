#include "vqa/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <optional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "vqa/error.hpp"

namespace vqa {

namespace {

using ObjectSet = std::set<ObjectId>;
using ValueSet = std::set<std::string>;
using Value = std::variant<ObjectSet, std::int64_t, bool, ValueSet>;

class Executor {
public:
    Executor(const SceneGraph& scene, std::span<const ProgramNode> nodes) : scene_(scene), nodes_(nodes)
    {
        for (const auto& o : scene.objects)
            all_.insert(o.id);
    }

    Value run(std::size_t node);

private:
    const ObjectSet& objects(std::size_t node) { return expect<ObjectSet>(node, "an object set"); }
    std::int64_t integer(std::size_t node) { return expect<std::int64_t>(node, "an integer"); }
    ValueSet values_of(std::size_t node, const std::string& type);
    std::optional<std::string> attribute(ObjectId id, const std::string& type) const;

    template <class T>
    const T& expect(std::size_t node, const char* what)
    {
        const Value& v = value(node);
        if (!std::holds_alternative<T>(v))
            throw MalformedProgram("node " + std::to_string(node) + " is not " + what);
        return std::get<T>(v);
    }

    const Value& value(std::size_t node)
    {
        if (node >= nodes_.size())
            throw MalformedProgram("node " + std::to_string(node) + " does not exist");
        if (auto it = memo_.find(node); it != memo_.end())
            return it->second;
        Value v = run(node);
        return memo_.emplace(node, std::move(v)).first->second;
    }

    const SceneGraph& scene_;
    std::span<const ProgramNode> nodes_;
    ObjectSet all_;
    std::map<std::size_t, Value> memo_;
};

std::optional<std::string> Executor::attribute(ObjectId id, const std::string& type) const
{
    for (const auto& o : scene_.objects) {
        if (o.id != id)
            continue;
        auto it = o.attributes.find(type);
        if (it == o.attributes.end())
            return std::nullopt;
        return it->second;
    }
    return std::nullopt;
}

ValueSet Executor::values_of(std::size_t node, const std::string& type)
{
    const Value& v = value(node);
    if (auto* vals = std::get_if<ValueSet>(&v))
        return *vals;
    ValueSet out;
    for (ObjectId id : objects(node)) {
        if (auto a = attribute(id, type))
            out.insert(*a);
    }
    return out;
}

Value Executor::run(std::size_t node)
{
    const ProgramNode& n = nodes_[node];
    Operation op = Operation::parse(n.op);
    auto in = [&](std::size_t k) -> std::size_t {
        if (k >= n.inputs.size() || n.inputs[k] >= node)
            throw MalformedProgram("node " + std::to_string(node) + " has a bad input");
        return n.inputs[k];
    };
    auto value_input = [&]() -> const std::string& {
        if (n.value_inputs.empty())
            throw MalformedProgram("node " + std::to_string(node) + " lacks a value input");
        return n.value_inputs.front();
    };

    switch (op.kind) {
    case OpKind::scene:
        return all_;
    case OpKind::filter: {
        ObjectSet out;
        for (ObjectId id : objects(in(0))) {
            if (attribute(id, op.type) == value_input())
                out.insert(id);
        }
        return out;
    }
    case OpKind::unique: {
        const ObjectSet& s = objects(in(0));
        if (s.size() != 1)
            throw InvalidExecution("unique over " + std::to_string(s.size()) + " objects at node " +
                                   std::to_string(node));
        return s;
    }
    case OpKind::relate: {
        ObjectSet out;
        const ObjectSet& anchors = objects(in(0));
        for (const auto& e : scene_.relations) {
            if (e.name == value_input() && anchors.contains(e.object))
                out.insert(e.subject);
        }
        return out;
    }
    case OpKind::same: {
        ObjectSet out;
        for (ObjectId anchor : objects(in(0))) {
            auto mine = attribute(anchor, op.type);
            if (!mine)
                continue;
            for (ObjectId other : all_) {
                if (other != anchor && attribute(other, op.type) == mine)
                    out.insert(other);
            }
        }
        return out;
    }
    case OpKind::union_: {
        ObjectSet out = objects(in(0));
        const ObjectSet& b = objects(in(1));
        out.insert(b.begin(), b.end());
        return out;
    }
    case OpKind::intersect: {
        ObjectSet a = objects(in(0));
        const ObjectSet& b = objects(in(1));
        ObjectSet out;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
        return out;
    }
    case OpKind::count:
        return static_cast<std::int64_t>(objects(in(0)).size());
    case OpKind::exist:
        return !objects(in(0)).empty();
    case OpKind::equal_integer:
        return integer(in(0)) == integer(in(1));
    case OpKind::greater_than:
        return integer(in(0)) > integer(in(1));
    case OpKind::less_than:
        return integer(in(0)) < integer(in(1));
    case OpKind::query:
        return values_of(in(0), op.type);
    case OpKind::equal: {
        ValueSet a = values_of(in(0), op.type);
        ValueSet b = values_of(in(1), op.type);
        return std::any_of(a.begin(), a.end(), [&](const std::string& v) { return b.contains(v); });
    }
    }
    throw UnsupportedOperation("unsupported operation '" + n.op + "'");
}

} // namespace

Answer oracle_execute(const SceneGraph& scene, const FunctionalProgram& fp)
{
    Executor ex(scene, fp.nodes());
    Value v = ex.run(fp.output());
    if (auto* b = std::get_if<bool>(&v))
        return Answer::boolean(*b);
    if (auto* n = std::get_if<std::int64_t>(&v))
        return Answer::number(*n);
    if (auto* vals = std::get_if<ValueSet>(&v))
        return vals->size() == 1 ? Answer::attribute(*vals->begin()) : Answer::null();
    throw MalformedProgram("program output is an object set");
}

std::set<ObjectId> oracle_object_set(const SceneGraph& scene, std::span<const ProgramNode> nodes,
                                     std::size_t node)
{
    Executor ex(scene, nodes);
    Value v = ex.run(node);
    if (auto* s = std::get_if<ObjectSet>(&v))
        return *s;
    throw MalformedProgram("node " + std::to_string(node) + " is not an object set");
}

} // namespace vqa
