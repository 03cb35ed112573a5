#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include "vqa/logic.hpp"
#include "vqa/program.hpp"
#include "vqa/scene.hpp"

namespace vqa::testing {

using Rng = std::mt19937_64;

/// CLEVR-like scene with `n` objects; left/right/front/behind edges are
/// derived from random positions.
SceneGraph random_scene(Rng& rng, std::size_t n);

/// Appends one object with a fresh id and edges to every existing object.
/// Existing objects and edges are left untouched.
void add_random_object(SceneGraph& scene, Rng& rng);

/// Random bijection over 0..n-1.
std::vector<ObjectId> random_permutation(Rng& rng, std::size_t n);

/// Random program from the compiler's grammar, independent of any scene
/// (`unique` may be violated on a concrete scene).
FunctionalProgram random_program(Rng& rng, std::optional<QuestionFamily> family = std::nullopt,
                                 int max_depth = 3);

/// Random program that executes validly on `scene`: every `unique` sees a
/// singleton (extra filters are added to narrow sets down). Returns nullopt
/// if the attempt had to be abandoned.
std::optional<FunctionalProgram> random_valid_program(Rng& rng, const SceneGraph& scene,
                                                      QuestionFamily family, int max_depth = 3);

/// Random atom over a small vocabulary of predicates, variables and
/// constants, so unification succeeds often enough to be interesting.
Atom random_atom(Rng& rng);
Atom random_atom_like(Rng& rng, const Atom& shape);
/// Replaces every variable of `a` by a random constant, consistently.
Atom random_ground_instance(Rng& rng, const Atom& a);
/// Idempotent substitution over the small variable vocabulary.
Substitution random_substitution(Rng& rng);

} // namespace vqa::testing
