#pragma once

#include <string>
#include <string_view>

#include "vqa/logic.hpp"

namespace vqa {

/// Single-line target-sentence encoding of a rule program.
///
///   sentence  = segment "\" { segment "\" }
///   segment   = body | count | operator
///   body      = clause { ";" clause }
///   clause    = atom { "," atom }
///   atom      = name "(" term { "," term } ")"
///   count     = "C" digits
///   operator  = ">" | "<" | "=#" | "=" type | "E" | "C" | "Q(" type ")"
///
/// Each body segment defines the next rule r_i; the head variable of each
/// clause is its first variable. `Cn` (n-th count, from 1) wraps the most
/// recent unconsumed rule in `r_i(C) :- count(r_j(V), C)`. The final
/// operator segment builds the target over the one or two most recent
/// unconsumed rules:
///
///   E     target :- r_i(V).
///   C     target(C) :- r_k(C).
///   Q(t)  target(A) :- r_i(X), attribute(X, t, A).
///   > < =#  target :- r_a(C1), r_b(C2), greater_than|lesser_than|same(C1, C2).
///   =t    target :- r_a(X), r_b(Y), attribute(X, t, A1), attribute(Y, t, A2), same(A1, A2).
///
/// A rule is consumed when a later body, count or operator refers to it;
/// every rule but the target must be consumed exactly once.
using TargetSentence = std::string;

/// Throws UnencodableProgram if `program` is not of the shape above.
TargetSentence serialize(const RuleProgram& program);

/// Total over arbitrary input: returns a program or throws ParseError.
RuleProgram parse(std::string_view sentence);

} // namespace vqa
