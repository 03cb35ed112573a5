#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vqa/answer.hpp"
#include "vqa/logic.hpp"
#include "vqa/scene.hpp"

namespace vqa {

/// Ground head values derived for one rule. For the zero-arity target only
/// `satisfiable` is meaningful.
struct SolutionSet {
    std::size_t rule_index = 0;
    std::set<Term> values;
    bool satisfiable = false;
};

/// Evaluates every clause of rule `index` against `fb`, reading rule
/// references and counts from `prior` (indexed by rule index, all < index).
///
/// Bodies are solved left to right by backtracking. Comparison builtins
/// wait until their arguments are ground; same_<type> enumerates the
/// universe once one side is bound. Throws NonGroundBuiltin, UnknownObject,
/// UnknownPredicate or EvalError.
SolutionSet eval_rule(const FactBase& fb, const RuleProgram& program, std::size_t index,
                      std::span<const SolutionSet> prior);

/// True iff x != y and both objects carry the same value of `type`.
/// Throws UnknownObject if either id is outside the universe.
bool same_attribute_builtin(const FactBase& fb, std::string_view type, ObjectId x, ObjectId y);

/// Evaluates a ground same/greater_than/lesser_than atom. Ordering
/// comparisons require integer arguments (EvalError otherwise).
bool evaluate_builtin(const Atom& ground);

struct Evaluation {
    Answer answer = Answer::null();
    /// One entry per evaluated rule, target last. Truncated on error.
    std::vector<SolutionSet> solutions;
    /// Why the answer is NULL, if it is.
    std::string error;
};

Evaluation evaluate(const FactBase& fb, const RuleProgram& program);

/// Boolean targets give yes/no, numeric targets the unique count, query
/// targets the unique attribute binding. Zero or several bindings, and any
/// evaluation error, give NULL.
Answer answer(const FactBase& fb, const RuleProgram& program);

/// Per-rule text rendering followed by the rule's solution set.
std::string render_trace(const RuleProgram& program, const Evaluation& eval);

} // namespace vqa
