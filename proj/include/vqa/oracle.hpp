#pragma once

#include <cstddef>
#include <set>
#include <span>

#include "vqa/answer.hpp"
#include "vqa/program.hpp"
#include "vqa/scene.hpp"

namespace vqa {

/// Executes a functional program directly over explicit object sets:
/// filters read attribute tables, relate reads relation edges, count /
/// exist / compare / query produce the final value. Uses no logic
/// machinery, so it serves as ground truth for the compiled pipeline.
///
/// Throws InvalidExecution when `unique` sees a set that is not a
/// singleton, and UnsupportedOperation for unknown operations.
Answer oracle_execute(const SceneGraph& scene, const FunctionalProgram& fp);

/// Object set produced by `node` of a (possibly unfinished) program.
/// Throws InvalidExecution, UnsupportedOperation or MalformedProgram.
std::set<ObjectId> oracle_object_set(const SceneGraph& scene, std::span<const ProgramNode> nodes,
                                     std::size_t node);

} // namespace vqa
