#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace vqa {

/// CLEVR functional-program operations, with the attribute type (or
/// comparison flavour) split out of the operation name.
enum class OpKind : std::uint8_t {
    scene,
    filter,     // filter_<type>[value]
    unique,
    relate,     // relate[relation]
    same,       // same_<type>
    union_,
    intersect,
    count,
    exist,
    equal_integer,
    greater_than,
    less_than,
    equal,      // equal_<type>
    query,      // query_<type>
};

struct Operation {
    OpKind kind;
    std::string type;  // attribute type for filter/same/equal/query

    /// Throws UnsupportedOperation for names outside the CLEVR vocabulary.
    static Operation parse(std::string_view name);
};

/// What a node evaluates to.
enum class ValueKind : std::uint8_t { objects, integer, boolean, attribute };

ValueKind value_kind(OpKind kind) noexcept;

struct ProgramNode {
    std::string op;
    std::vector<std::size_t> inputs;
    std::vector<std::string> value_inputs;
};

/// A question's functional form: a DAG of operations, inputs pointing at
/// strictly earlier nodes, the last node being the answer.
class FunctionalProgram {
public:
    /// Validates vocabulary, DAG order, arity and value types. Throws
    /// UnsupportedOperation or MalformedProgram.
    explicit FunctionalProgram(std::vector<ProgramNode> nodes);

    /// Accepts both `function` and `type` keys for the operation name.
    static FunctionalProgram from_json(const nlohmann::json& program);

    /// Chain shorthand for tests and the CLI: "scene filter_color[red] exist".
    /// Each node takes the previous one as input; `@i,j` after an op name
    /// gives explicit inputs, e.g. "greater_than@3,9".
    static FunctionalProgram from_chain(std::string_view text);

    const std::vector<ProgramNode>& nodes() const noexcept { return nodes_; }
    const std::vector<Operation>& operations() const noexcept { return ops_; }
    std::size_t output() const noexcept { return nodes_.size() - 1; }

    nlohmann::json to_json() const;

private:
    std::vector<ProgramNode> nodes_;
    std::vector<Operation> ops_;
};

enum class QuestionFamily : std::uint8_t {
    count,
    exist,
    compare_number,
    compare_attribute,
    query_attribute,
};

inline constexpr QuestionFamily all_families[] = {
    QuestionFamily::count,          QuestionFamily::exist,
    QuestionFamily::compare_number, QuestionFamily::compare_attribute,
    QuestionFamily::query_attribute,
};

/// Determined by the output operation alone.
QuestionFamily classify(const FunctionalProgram& fp);

/// "Count", "Compare Number", ...
std::string_view display_name(QuestionFamily f) noexcept;
/// "count", "compare_number", ...
std::string_view key_name(QuestionFamily f) noexcept;
/// Accepts either spelling, case-insensitively. Throws std::invalid_argument.
QuestionFamily family_from_string(std::string_view s);

} // namespace vqa
