#pragma once

#include "vqa/logic.hpp"
#include "vqa/program.hpp"

namespace vqa {

/// Compiles a CLEVR functional program into a stratified rule program.
///
/// Object-set branches accumulate body atoms on one variable per branch and
/// are closed into a named rule `r_i` only where an aggregate, the answer or
/// a comparison needs one. Object variables are drawn program-wide from
/// W, X, Y, Z, W1, X1, ...; count rules use C, numeric comparisons C1/C2,
/// and attribute targets A (queries) or X, Y, A1, A2 (comparisons).
///
/// Throws UnsupportedOperation or MalformedProgram (the latter already
/// raised when the FunctionalProgram was built).
RuleProgram compile(const FunctionalProgram& fp);

} // namespace vqa
