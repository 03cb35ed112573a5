#include <gtest/gtest.h>

#include "support/builders.hpp"
#include "support/fuzz.hpp"
#include "support/generators.hpp"
#include "vqa/compiler.hpp"
#include "vqa/error.hpp"
#include "vqa/sentence.hpp"

using namespace vqa;
using namespace vqa::testing;

namespace {

const char* const worked_sentence =
    "attribute(W, size, large),attribute(W, color, green)\\C1\\attribute(X, size, large),"
    "attribute(X, color, purple),attribute(X, material, metal),attribute(X, shape, cube)\\C2\\>\\";

std::string sentence_of(const char* chain) { return serialize(compile(FunctionalProgram::from_chain(chain))); }

} // namespace

TEST(Serialize, WorkedExample)
{
    std::string s = sentence_of(
        "scene filter_size[large] filter_color[green] count "
        "scene filter_size[large] filter_color[purple] filter_material[metal] filter_shape[cube] count "
        "greater_than@3,9");
    EXPECT_EQ(s, worked_sentence);
}

TEST(Serialize, MappingTableExamples)
{
    EXPECT_EQ(sentence_of("scene count"), "object(W)\\C1\\C\\");
    EXPECT_EQ(sentence_of("scene filter_color[red] exist"), "attribute(W, color, red)\\E\\");
    EXPECT_EQ(sentence_of("scene filter_shape[cube] unique query_color"), "attribute(W, shape, cube)\\Q(color)\\");
    EXPECT_EQ(sentence_of("scene filter_color[cyan] scene filter_color[green] union@1,3 count"),
              "attribute(W, color, cyan);attribute(X, color, green)\\C1\\C\\");
    EXPECT_EQ(sentence_of("scene filter_color[blue] unique scene filter_color[red] unique equal_size@2,5"),
              "attribute(W, color, blue)\\attribute(X, color, red)\\=size\\");
    EXPECT_EQ(sentence_of("scene filter_color[red] count scene count less_than@2,4"),
              "attribute(W, color, red)\\C1\\object(X)\\C2\\<\\");
    EXPECT_EQ(sentence_of("scene filter_color[red] count scene count equal_integer@2,4"),
              "attribute(W, color, red)\\C1\\object(X)\\C2\\=#\\");
}

TEST(Parse, WorkedExampleRules)
{
    EXPECT_EQ(to_string(parse(worked_sentence)),
              "r0(W) :- attribute(W, size, large), attribute(W, color, green).\n"
              "r1(C) :- count(r0(W), C).\n"
              "r2(X) :- attribute(X, size, large), attribute(X, color, purple), attribute(X, material, metal), "
              "attribute(X, shape, cube).\n"
              "r3(C) :- count(r2(X), C).\n"
              "target :- r1(C1), r3(C2), greater_than(C1, C2).\n");
}

TEST(Parse, RuleReferencesInBodies)
{
    // A union operand used inside a later body.
    std::string s = sentence_of(
        "scene filter_color[cyan] scene filter_color[green] union@1,3 unique relate[left] exist");
    RuleProgram p = parse(s);
    EXPECT_EQ(p, compile(FunctionalProgram::from_chain(
                     "scene filter_color[cyan] scene filter_color[green] union@1,3 unique relate[left] exist")));
    EXPECT_EQ(p.rule_count(), 2u);
}

TEST(Parse, Errors)
{
    EXPECT_THROW(parse(""), ParseError);
    EXPECT_THROW(parse("attribute(W, size)\\E\\"), ParseError);
    EXPECT_THROW(parse("attribute(W, size, large)\\E"), ParseError);
    EXPECT_THROW(parse("attribute(W, size, large)\\"), ParseError);
    EXPECT_THROW(parse("colour(W, red)\\E\\"), ParseError);
    EXPECT_THROW(parse("attribute(1, size, large)\\E\\"), ParseError);  // no variable to head the rule
    EXPECT_THROW(parse("attribute(W, size, large)\\C2\\C\\"), ParseError);
    EXPECT_THROW(parse("attribute(W, size, large)\\C1\\>\\"), ParseError);  // needs two counts
    EXPECT_THROW(parse("attribute(W, size, large)\\C\\"), ParseError);      // C needs a count rule
    EXPECT_THROW(parse("attribute(W, size, large)\\object(X)\\E\\"), ParseError);  // dangling r0
    EXPECT_THROW(parse("attribute(W, size, large)\\C99999999999999999999999\\C\\"), ParseError);
    EXPECT_THROW(parse("r0(W)\\E\\"), ParseError);
    EXPECT_THROW(parse("attribute(W, size, large)\\\\E\\"), ParseError);
}

TEST(Parse, WhitespaceTolerance)
{
    RuleProgram canonical = parse("attribute(W, size, large),attribute(W, color, green)\\E\\");
    EXPECT_EQ(parse("attribute(W,size,large),attribute(W,color,green)\\E\\"), canonical);
    EXPECT_EQ(parse("attribute(W, size, large), attribute(W, color, green)\\E\\"), canonical);
    EXPECT_EQ(parse("  attribute(W, size, large),attribute(W, color, green)\\E\\\n"), canonical);
    EXPECT_EQ(serialize(canonical), "attribute(W, size, large),attribute(W, color, green)\\E\\");
}

TEST(Serialize, RejectsProgramsOutsideTheGrammar)
{
    auto W = Term::variable("W");
    RuleProgram extra_target_atom = RuleProgram::make({
        Rule{atom("r0", {"W"}), {atom("object", {"W"})}},
        Rule{atom("target", {}), {atom("r0", {"W"}), atom("object", {"W"})}},
    });
    EXPECT_THROW(serialize(extra_target_atom), UnencodableProgram);

    RuleProgram unused_rule = RuleProgram::make({
        Rule{atom("r0", {"W"}), {atom("object", {"W"})}},
        Rule{atom("r1", {"X"}), {atom("object", {"X"})}},
        Rule{atom("target", {}), {atom("r1", {"X"})}},
    });
    EXPECT_THROW(serialize(unused_rule), UnencodableProgram);
}

TEST(CodecProperty, RoundTrip)
{
    Rng rng(30);
    for (int i = 0; i < 2000; ++i) {
        RuleProgram p = compile(random_program(rng));
        std::string s = serialize(p);
        ASSERT_EQ(parse(s), p) << s;
        ASSERT_EQ(serialize(parse(s)), s);
    }
}

TEST(CodecProperty, MalformedCorpusOnlyRaisesParseError)
{
    Rng rng(31);
    for (const auto& bad : malformed_corpus(rng, 1400)) {
        EXPECT_THROW(parse(bad.text), ParseError) << bad.kind << ": " << bad.text;
    }
}

// Totality: random byte edits of valid sentences either parse or raise
// ParseError, never anything else.
TEST(CodecProperty, ParseIsTotal)
{
    Rng rng(32);
    constexpr char chars[] = "abcWXYZ0129(),;\\ <>=#ECQ_\0\xff";
    const std::string alphabet(chars, sizeof chars - 1);
    int parsed = 0;
    for (int i = 0; i < 5000; ++i) {
        std::string s = serialize(compile(random_program(rng)));
        for (int k = std::uniform_int_distribution<int>(1, 3)(rng); k > 0; --k) {
            std::size_t pos = std::uniform_int_distribution<std::size_t>(0, s.size())(rng);
            char c = alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
            switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
            case 0:
                s.insert(s.begin() + static_cast<std::ptrdiff_t>(pos), c);
                break;
            case 1:
                if (pos < s.size())
                    s.erase(pos, 1);
                break;
            default:
                if (pos < s.size())
                    s[pos] = c;
            }
        }
        try {
            RuleProgram p = parse(s);
            ++parsed;
            EXPECT_NO_THROW(RuleProgram::make(p.rules()));
        } catch (const ParseError&) {
        } catch (const std::exception& e) {
            ADD_FAILURE() << "unexpected " << e.what() << " on " << s;
        }
    }
    EXPECT_GT(parsed, 0);
}
