#include "fuzz.hpp"

#include <array>
#include <functional>

#include "vqa/compiler.hpp"
#include "vqa/sentence.hpp"

namespace vqa::testing {

namespace {

using Mutation = std::function<std::string(Rng&, const std::string&)>;

std::size_t last_segment_start(const std::string& s)
{
    // s ends with '\'; the operator segment starts after the one before it.
    std::size_t prev = s.rfind('\\', s.size() - 2);
    return prev == std::string::npos ? 0 : prev + 1;
}

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

const std::vector<std::pair<std::string, Mutation>>& mutations()
{
    static const std::vector<std::pair<std::string, Mutation>> table = {
        {"missing trailing backslash", [](Rng&, const std::string& s) { return s.substr(0, s.size() - 1); }},
        {"dropped operator", [](Rng&, const std::string& s) { return s.substr(0, last_segment_start(s)); }},
        {"arity break",
         [](Rng&, const std::string& s) {
             std::size_t close = s.find(')');
             return s.substr(0, close) + ", extra" + s.substr(close);
         }},
        {"unknown predicate",
         [](Rng& rng, const std::string& s) {
             static const std::array<const char*, 4> names = {"colour", "left_of", "Attribute", "r"};
             return names[uniform(rng, 0, names.size() - 1)] + s.substr(s.find('('));
         }},
        {"unbalanced parentheses",
         [](Rng&, const std::string& s) {
             std::string out = s;
             out.erase(out.find(')'), 1);
             return out;
         }},
        {"garbage",
         [](Rng& rng, const std::string&) {
             // No ')' can appear, so no atom or Q(t) operator can be formed.
             static const std::string alphabet = "abcXYZ019 ,;(\\<>=#ECQ_\t";
             std::string out;
             for (std::size_t k = uniform(rng, 1, 40); k > 0; --k)
                 out += alphabet[uniform(rng, 0, alphabet.size() - 1)];
             return out;
         }},
        {"empty", [](Rng& rng, const std::string&) { return std::string(uniform(rng, 0, 3), ' '); }},
        {"dangling segment",
         [](Rng&, const std::string& s) {
             std::size_t op = last_segment_start(s);
             return s.substr(0, op) + "object(Z)\\" + s.substr(op);
         }},
        {"count ordinal out of sequence",
         [](Rng&, const std::string& s) {
             std::size_t body_end = s.find('\\');
             return s.substr(0, body_end) + "\\C7" + s.substr(body_end);
         }},
        {"operator not last",
         [](Rng&, const std::string& s) { return s + s.substr(last_segment_start(s)); }},
        {"unknown operator",
         [](Rng& rng, const std::string& s) {
             static const std::array<const char*, 6> ops = {"?", "Z", "Q()", "Q(Color)", "=", ">="};
             return s.substr(0, last_segment_start(s)) + ops[uniform(rng, 0, ops.size() - 1)] + "\\";
         }},
        {"empty segment",
         [](Rng&, const std::string& s) {
             std::size_t body_end = s.find('\\');
             return s.substr(0, body_end) + "\\" + s.substr(body_end);
         }},
        {"truncated",
         [](Rng& rng, const std::string& s) { return s.substr(0, uniform(rng, 1, s.size() - 2)); }},
        {"missing argument",
         [](Rng&, const std::string& s) {
             std::size_t open = s.find('(');
             return s.substr(0, open + 1) + "," + s.substr(open + 1);
         }},
    };
    return table;
}

} // namespace

std::vector<MalformedSentence> malformed_corpus(Rng& rng, std::size_t n)
{
    const auto& table = mutations();
    std::vector<MalformedSentence> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& [kind, mutate] = table[i % table.size()];
        std::string valid = serialize(compile(random_program(rng)));
        out.push_back({kind, mutate(rng, valid)});
    }
    return out;
}

} // namespace vqa::testing
