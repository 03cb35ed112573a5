#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "generators.hpp"

namespace vqa::testing {

struct MalformedSentence {
    std::string kind;
    std::string text;
};

/// `n` sentences that are malformed by construction: each takes a valid
/// sentence of a random compiled program and breaks it in one known way
/// (missing trailing backslash, dropped operator, arity break, unknown
/// predicate, ...), or is empty or garbage text. Kinds are cycled evenly.
std::vector<MalformedSentence> malformed_corpus(Rng& rng, std::size_t n);

} // namespace vqa::testing
