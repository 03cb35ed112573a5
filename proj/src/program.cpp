#include "vqa/program.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "vqa/error.hpp"

namespace vqa {

namespace {

bool is_clevr_type(std::string_view t)
{
    return t == "size" || t == "color" || t == "material" || t == "shape";
}

std::size_t input_count(OpKind k)
{
    switch (k) {
    case OpKind::scene:
        return 0;
    case OpKind::union_:
    case OpKind::intersect:
    case OpKind::equal_integer:
    case OpKind::greater_than:
    case OpKind::less_than:
    case OpKind::equal:
        return 2;
    default:
        return 1;
    }
}

std::size_t value_input_count(OpKind k)
{
    return k == OpKind::filter || k == OpKind::relate ? 1 : 0;
}

} // namespace

Operation Operation::parse(std::string_view name)
{
    auto typed = [&](std::string_view prefix, OpKind kind) -> std::optional<Operation> {
        if (!name.starts_with(prefix))
            return std::nullopt;
        auto type = name.substr(prefix.size());
        if (!is_clevr_type(type))
            return std::nullopt;
        return Operation{kind, std::string(type)};
    };

    if (name == "scene")
        return {OpKind::scene, {}};
    if (name == "unique")
        return {OpKind::unique, {}};
    if (name == "relate")
        return {OpKind::relate, {}};
    if (name == "union")
        return {OpKind::union_, {}};
    if (name == "intersect")
        return {OpKind::intersect, {}};
    if (name == "count")
        return {OpKind::count, {}};
    if (name == "exist")
        return {OpKind::exist, {}};
    if (name == "equal_integer")
        return {OpKind::equal_integer, {}};
    if (name == "greater_than")
        return {OpKind::greater_than, {}};
    if (name == "less_than")
        return {OpKind::less_than, {}};
    for (auto [prefix, kind] : {std::pair{"filter_", OpKind::filter}, std::pair{"same_", OpKind::same},
                                std::pair{"equal_", OpKind::equal}, std::pair{"query_", OpKind::query}}) {
        if (auto op = typed(prefix, kind))
            return *op;
    }
    throw UnsupportedOperation("unsupported operation '" + std::string(name) + "'");
}

ValueKind value_kind(OpKind kind) noexcept
{
    switch (kind) {
    case OpKind::count:
        return ValueKind::integer;
    case OpKind::exist:
    case OpKind::equal_integer:
    case OpKind::greater_than:
    case OpKind::less_than:
    case OpKind::equal:
        return ValueKind::boolean;
    case OpKind::query:
        return ValueKind::attribute;
    default:
        return ValueKind::objects;
    }
}

FunctionalProgram::FunctionalProgram(std::vector<ProgramNode> nodes) : nodes_(std::move(nodes))
{
    if (nodes_.empty())
        throw MalformedProgram("empty functional program");
    for (const auto& n : nodes_)
        ops_.push_back(Operation::parse(n.op));

    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        const auto& op = ops_[i];
        const std::string where = "node " + std::to_string(i) + " (" + n.op + ")";
        if (n.inputs.size() != input_count(op.kind))
            throw MalformedProgram(where + ": expects " + std::to_string(input_count(op.kind)) +
                                   " inputs, got " + std::to_string(n.inputs.size()));
        if (n.value_inputs.size() != value_input_count(op.kind))
            throw MalformedProgram(where + ": expects " + std::to_string(value_input_count(op.kind)) +
                                   " value inputs, got " + std::to_string(n.value_inputs.size()));
        for (const auto& v : n.value_inputs) {
            bool word = !v.empty() && std::all_of(v.begin(), v.end(), [](char c) {
                return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
            }) && v.front() >= 'a' && v.front() <= 'z';
            if (!word)
                throw MalformedProgram(where + ": value input '" + v + "' is not a lowercase word");
        }
        for (std::size_t in : n.inputs) {
            if (in >= i)
                throw MalformedProgram(where + ": input " + std::to_string(in) + " is not an earlier node");
        }

        auto input_kind = [&](std::size_t k) { return value_kind(ops_[n.inputs[k]].kind); };
        switch (op.kind) {
        case OpKind::scene:
            break;
        case OpKind::equal_integer:
        case OpKind::greater_than:
        case OpKind::less_than:
            for (std::size_t k = 0; k < 2; ++k) {
                if (ops_[n.inputs[k]].kind != OpKind::count)
                    throw MalformedProgram(where + ": operands must be count nodes");
            }
            break;
        case OpKind::equal:
            for (std::size_t k = 0; k < 2; ++k) {
                const auto& in = ops_[n.inputs[k]];
                bool ok = input_kind(k) == ValueKind::objects ||
                          (in.kind == OpKind::query && in.type == op.type);
                if (!ok)
                    throw MalformedProgram(where + ": operands must be objects or query_" + op.type);
            }
            break;
        default:
            for (std::size_t k = 0; k < n.inputs.size(); ++k) {
                if (input_kind(k) != ValueKind::objects)
                    throw MalformedProgram(where + ": input must be an object set");
            }
            break;
        }
    }

    // Inner nodes may only produce objects, or feed a comparison.
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
        auto k = value_kind(ops_[i].kind);
        if (k == ValueKind::boolean)
            throw MalformedProgram("node " + std::to_string(i) + " (" + nodes_[i].op +
                                   ") must be the output node");
    }
    if (value_kind(ops_.back().kind) == ValueKind::objects)
        throw MalformedProgram("output node '" + nodes_.back().op + "' yields an object set");
}

FunctionalProgram FunctionalProgram::from_json(const nlohmann::json& program)
{
    if (!program.is_array())
        throw MalformedProgram("program must be an array");
    std::vector<ProgramNode> nodes;
    for (std::size_t i = 0; i < program.size(); ++i) {
        const auto& j = program[i];
        const std::string where = "program[" + std::to_string(i) + "]";
        if (!j.is_object())
            throw MalformedProgram(where + " is not an object");
        ProgramNode node;
        auto fn = j.find("function");
        if (fn == j.end())
            fn = j.find("type");
        if (fn == j.end() || !fn->is_string())
            throw MalformedProgram(where + " has no 'function'");
        node.op = fn->get<std::string>();
        if (auto in = j.find("inputs"); in != j.end()) {
            if (!in->is_array())
                throw MalformedProgram(where + ".inputs is not an array");
            for (const auto& x : *in) {
                if (!x.is_number_integer() || x.get<std::int64_t>() < 0)
                    throw MalformedProgram(where + ".inputs holds a non-index");
                node.inputs.push_back(x.get<std::size_t>());
            }
        }
        if (auto vals = j.find("value_inputs"); vals != j.end()) {
            if (!vals->is_array())
                throw MalformedProgram(where + ".value_inputs is not an array");
            for (const auto& x : *vals) {
                if (!x.is_string())
                    throw MalformedProgram(where + ".value_inputs holds a non-string");
                node.value_inputs.push_back(x.get<std::string>());
            }
        }
        nodes.push_back(std::move(node));
    }
    return FunctionalProgram(std::move(nodes));
}

FunctionalProgram FunctionalProgram::from_chain(std::string_view text)
{
    std::vector<ProgramNode> nodes;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
        ProgramNode node;
        std::string_view t = tok;
        std::optional<std::vector<std::size_t>> explicit_inputs;
        if (auto at = t.find('@'); at != std::string_view::npos) {
            explicit_inputs.emplace();
            std::string_view list = t.substr(at + 1);
            t = t.substr(0, at);
            while (!list.empty()) {
                auto comma = list.find(',');
                auto item = list.substr(0, comma);
                std::size_t v = 0;
                auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
                if (ec != std::errc{} || p != item.data() + item.size())
                    throw MalformedProgram("bad input list in '" + tok + "'");
                explicit_inputs->push_back(v);
                list = comma == std::string_view::npos ? std::string_view{} : list.substr(comma + 1);
            }
        }
        if (auto lb = t.find('['); lb != std::string_view::npos) {
            if (t.back() != ']')
                throw MalformedProgram("unterminated value input in '" + tok + "'");
            node.value_inputs.emplace_back(t.substr(lb + 1, t.size() - lb - 2));
            t = t.substr(0, lb);
        }
        node.op = std::string(t);
        if (explicit_inputs) {
            node.inputs = *explicit_inputs;
        } else if (node.op != "scene" && !nodes.empty()) {
            node.inputs.push_back(nodes.size() - 1);
        }
        nodes.push_back(std::move(node));
    }
    return FunctionalProgram(std::move(nodes));
}

nlohmann::json FunctionalProgram::to_json() const
{
    auto out = nlohmann::json::array();
    for (const auto& n : nodes_) {
        out.push_back({{"function", n.op}, {"inputs", n.inputs}, {"value_inputs", n.value_inputs}});
    }
    return out;
}

QuestionFamily classify(const FunctionalProgram& fp)
{
    switch (fp.operations().back().kind) {
    case OpKind::count:
        return QuestionFamily::count;
    case OpKind::exist:
        return QuestionFamily::exist;
    case OpKind::equal_integer:
    case OpKind::greater_than:
    case OpKind::less_than:
        return QuestionFamily::compare_number;
    case OpKind::equal:
        return QuestionFamily::compare_attribute;
    case OpKind::query:
        return QuestionFamily::query_attribute;
    default:
        throw UnsupportedOperation("'" + fp.nodes().back().op + "' is not an answer operation");
    }
}

std::string_view display_name(QuestionFamily f) noexcept
{
    switch (f) {
    case QuestionFamily::count:
        return "Count";
    case QuestionFamily::exist:
        return "Exist";
    case QuestionFamily::compare_number:
        return "Compare Number";
    case QuestionFamily::compare_attribute:
        return "Compare Attribute";
    case QuestionFamily::query_attribute:
        return "Query Attribute";
    }
    return "?";
}

std::string_view key_name(QuestionFamily f) noexcept
{
    switch (f) {
    case QuestionFamily::count:
        return "count";
    case QuestionFamily::exist:
        return "exist";
    case QuestionFamily::compare_number:
        return "compare_number";
    case QuestionFamily::compare_attribute:
        return "compare_attribute";
    case QuestionFamily::query_attribute:
        return "query_attribute";
    }
    return "?";
}

QuestionFamily family_from_string(std::string_view s)
{
    std::string norm;
    for (char c : s)
        norm += c == ' ' || c == '-' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (auto f : all_families) {
        if (norm == key_name(f))
            return f;
    }
    throw std::invalid_argument("unknown question family '" + std::string(s) + "'");
}

} // namespace vqa
