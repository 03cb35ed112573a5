// Acceptance suite: one PASS/FAIL (or SKIP) line per criterion; exits
// non-zero if any criterion fails.
//
// Real CLEVR validation files are used when VQA_CLEVR_SCENES and
// VQA_CLEVR_QUESTIONS point at them.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "support/fuzz.hpp"
#include "support/generators.hpp"
#include "vqa/compiler.hpp"
#include "vqa/error.hpp"
#include "vqa/harness.hpp"
#include "vqa/inference.hpp"
#include "vqa/oracle.hpp"
#include "vqa/sentence.hpp"

using namespace vqa;
using namespace vqa::testing;

namespace {

enum class Verdict { pass, fail, skip };

struct Outcome {
    Verdict verdict;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string strip_whitespace(std::string_view s)
{
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c)))
            out += c;
    return out;
}

std::string fixed(double v, int digits = 2)
{
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << v;
    return os.str();
}

Outcome oracle_equivalence()
{
    constexpr std::size_t wanted = 1000;
    Rng rng(2024);
    auto start = Clock::now();
    std::size_t agreed = 0;
    std::size_t total = 0;
    std::map<QuestionFamily, std::size_t> per_family;
    std::string first_failure;
    for (std::size_t attempt = 0; total < wanted && attempt < 50 * wanted; ++attempt) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
        SceneGraph scene = random_scene(rng, n);
        QuestionFamily family = all_families[attempt % std::size(all_families)];
        auto fp = random_valid_program(rng, scene, family);
        if (!fp)
            continue;
        ++total;
        ++per_family[family];
        Answer expected = oracle_execute(scene, *fp);
        FactBase fb = FactBase::from_scene(scene);
        RuleProgram rules = compile(*fp);
        Answer direct = answer(fb, rules);
        Answer coded = answer_sentence(fb, serialize(rules));
        if (direct == expected && coded == expected)
            ++agreed;
        else if (first_failure.empty())
            first_failure = "; first mismatch " + fp->to_json().dump() + " expected " + expected.to_string() +
                            " got " + direct.to_string() + "/" + coded.to_string();
    }
    double secs = seconds_since(start);
    bool all_families_seen = per_family.size() == std::size(all_families);
    bool ok = total >= 500 && agreed == total && secs < 30.0 && all_families_seen;
    return {ok ? Verdict::pass : Verdict::fail,
            std::to_string(agreed) + "/" + std::to_string(total) + " random questions agree (" +
                std::to_string(per_family.size()) + " families, 2-8 objects), " + fixed(secs) + " s" +
                first_failure};
}

Outcome clevr_validation()
{
    const char* scenes = std::getenv("VQA_CLEVR_SCENES");
    const char* questions = std::getenv("VQA_CLEVR_QUESTIONS");
    if (scenes == nullptr || questions == nullptr || *scenes == '\0' || *questions == '\0')
        return {Verdict::skip, "set VQA_CLEVR_SCENES and VQA_CLEVR_QUESTIONS to run on real CLEVR validation data"};
    RunOptions opts;
    opts.limit = 2000;
    try {
        EvalReport r = run_dataset(scenes, questions, opts);
        std::cout << emit_report(r, ReportFormat::text);
        double acc = r.accuracy().value_or(0.0);
        bool ok = r.overall().total == 2000 && acc >= 0.995 && r.seconds < 300.0;
        return {ok ? Verdict::pass : Verdict::fail,
                "accuracy " + fixed(acc * 100.0) + "% on " + std::to_string(r.overall().total) +
                    " questions (>= 99.5% on 2000), " + fixed(r.seconds) + " s (< 300 s)"};
    } catch (const Error& e) {
        return {Verdict::fail, e.what()};
    }
}

Outcome worked_example()
{
    // "Are there more big green things than large purple shiny cubes?"
    const FunctionalProgram fp = FunctionalProgram::from_chain(
        "scene filter_size[large] filter_color[green] count "
        "scene filter_size[large] filter_color[purple] filter_material[metal] filter_shape[cube] count "
        "greater_than@3,9");
    const std::string expected_rules =
        "r0(W) :- attribute(W, size, large), attribute(W, color, green).\n"
        "r1(C) :- count(r0(W), C).\n"
        "r2(X) :- attribute(X, size, large), attribute(X, color, purple), attribute(X, material, metal), "
        "attribute(X, shape, cube).\n"
        "r3(C) :- count(r2(X), C).\n"
        "target :- r1(C1), r3(C2), greater_than(C1, C2).\n";
    // As printed, line breaks and spacing included.
    const std::string printed_sentence =
        "attribute(W, size, large),attribute(W, color, green)\\C1 \\\n"
        "attribute(X, size, large), attribute(X, color, purple),\n"
        "attribute(X, material, metal), attribute(X, shape, cube)\\C2 \\>\\";

    std::vector<std::string> problems;
    RuleProgram rules = compile(fp);
    if (strip_whitespace(to_string(rules)) != strip_whitespace(expected_rules))
        problems.push_back("rules differ:\n" + to_string(rules));
    std::string sentence = serialize(rules);
    if (strip_whitespace(sentence) != strip_whitespace(printed_sentence))
        problems.push_back("sentence differs: " + sentence);
    try {
        if (parse(printed_sentence) != rules)
            problems.push_back("printed sentence parses to different rules");
    } catch (const ParseError& e) {
        problems.push_back(std::string("printed sentence rejected: ") + e.what());
    }

    SceneSet scene = load_scenes(fixture_root() / "paper_example_scene.json");
    FactBase fb = FactBase::from_scene(scene.scenes.at(0));
    Answer oracle = oracle_execute(scene.scenes.at(0), fp);
    Answer got = answer(fb, rules);
    if (oracle != Answer::no())
        problems.push_back("oracle says " + oracle.to_string());
    if (got != oracle)
        problems.push_back("pipeline says " + got.to_string());

    if (problems.empty())
        return {Verdict::pass, "five rules and target sentence reproduced; answer " + got.to_string() +
                                   " on the 1-green/1-purple scene (oracle " + oracle.to_string() + ")"};
    std::string detail;
    for (const auto& p : problems)
        detail += p + "; ";
    return {Verdict::fail, detail};
}

Outcome codec_round_trip()
{
    constexpr int cases = 10000;
    Rng rng(7);
    int failures = 0;
    std::string first;
    std::set<QuestionFamily> families;
    for (int i = 0; i < cases; ++i) {
        FunctionalProgram fp = random_program(rng);
        families.insert(classify(fp));
        RuleProgram p = compile(fp);
        std::string s;
        try {
            s = serialize(p);
            if (parse(s) == p)
                continue;
        } catch (const Error& e) {
            s += std::string(" (") + e.what() + ")";
        }
        if (++failures == 1)
            first = "; first failure " + s;
    }
    return {failures == 0 ? Verdict::pass : Verdict::fail,
            std::to_string(cases - failures) + "/" + std::to_string(cases) + " programs round-trip (" +
                std::to_string(families.size()) + " families)" + first};
}

Outcome null_behaviour()
{
    constexpr std::size_t cases = 1000;
    Rng rng(99);
    auto corpus = malformed_corpus(rng, cases);
    FactBase fb = FactBase::from_scene(random_scene(rng, 5));
    std::size_t ok = 0;
    std::set<std::string> kinds;
    std::string first;
    for (const auto& bad : corpus) {
        kinds.insert(bad.kind);
        bool parse_error = false;
        try {
            parse(bad.text);
        } catch (const ParseError&) {
            parse_error = true;
        } catch (const std::exception& e) {
            if (first.empty())
                first = "; " + bad.kind + " raised " + e.what();
        }
        bool null_answer = false;
        try {
            null_answer = answer_sentence(fb, bad.text).is_null();
        } catch (const std::exception& e) {
            if (first.empty())
                first = "; " + bad.kind + " escaped answer_sentence: " + e.what();
        }
        if (parse_error && null_answer)
            ++ok;
        else if (first.empty())
            first = "; accepted " + bad.kind + ": " + bad.text;
    }
    return {ok == cases ? Verdict::pass : Verdict::fail,
            std::to_string(ok) + "/" + std::to_string(cases) + " malformed sentences give ParseError and NULL (" +
                std::to_string(kinds.size()) + " corruption kinds)" + first};
}

// Each invariant returns the number of failing cases out of `cases`.
struct Invariant {
    const char* name;
    std::function<int(Rng&, int)> check;
};

int unifier_soundness(Rng& rng, int cases)
{
    int bad = 0;
    for (int i = 0; i < cases; ++i) {
        Atom a = random_atom(rng);
        Atom b = random_atom_like(rng, a);
        if (auto s = unify(a, b); s && (apply(*s, a) != apply(*s, b) || !s->is_idempotent()))
            ++bad;
    }
    return bad;
}

int most_generality(Rng& rng, int cases)
{
    int bad = 0;
    for (int i = 0; i < cases; ++i) {
        Atom a = random_atom(rng);
        Atom g = random_ground_instance(rng, a);
        auto s = unify(a, g);
        if (!s || s->size() != a.variables().size() || apply(*s, a) != g)
            ++bad;
    }
    return bad;
}

int substitution_idempotence(Rng& rng, int cases)
{
    int bad = 0;
    for (int i = 0; i < cases; ++i) {
        std::optional<Substitution> c;
        while (!c) {
            try {
                c = compose(random_substitution(rng), random_substitution(rng));
            } catch (const SubstitutionConflict&) {
            }
        }
        Atom a = random_atom(rng);
        if (!c->is_idempotent() || apply(*c, apply(*c, a)) != apply(*c, a))
            ++bad;
    }
    return bad;
}

std::set<std::string> facts_text(const FactBase& fb, const std::vector<ObjectId>* perm)
{
    std::set<std::string> out;
    for (Atom f : fb.all_facts()) {
        if (perm) {
            std::vector<Term> args = f.args();
            std::size_t ids = f.kind() == PredicateKind::relation ? 2 : 1;
            for (std::size_t k = 0; k < ids; ++k)
                args[k] = Term::integer((*perm)[static_cast<std::size_t>(*args[k].as_integer())]);
            f = Atom::make(f.predicate(), args);
        }
        out.insert(to_string(f));
    }
    return out;
}

int permutation_equivariance(Rng& rng, int cases)
{
    int bad = 0;
    for (int i = 0; i < cases; ++i) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
        SceneGraph scene = random_scene(rng, n);
        auto perm = random_permutation(rng, n);
        FactBase moved = FactBase::from_scene(relabel(scene, perm));
        if (facts_text(FactBase::from_scene(scene), &perm) != facts_text(moved, nullptr))
            ++bad;
    }
    return bad;
}

int monotonicity(Rng& rng, int cases)
{
    int bad = 0;
    for (int i = 0; i < cases; ++i) {
        SceneGraph scene = random_scene(rng, std::uniform_int_distribution<std::size_t>(1, 7)(rng));
        RuleProgram p = compile(random_program(rng));
        Evaluation before = evaluate(FactBase::from_scene(scene), p);
        add_random_object(scene, rng);
        Evaluation after = evaluate(FactBase::from_scene(scene), p);
        if (before.solutions.size() != p.rule_count() + 1 || after.solutions.size() != p.rule_count() + 1) {
            ++bad;
            continue;
        }
        for (std::size_t r = 0; r < p.rule_count(); ++r) {
            const auto& b = before.solutions[r].values;
            const auto& a = after.solutions[r].values;
            if (!p.is_count_rule(r) && !std::includes(a.begin(), a.end(), b.begin(), b.end())) {
                ++bad;
                break;
            }
        }
    }
    return bad;
}

int comparison_algebra(Rng& rng, int cases)
{
    int bad = 0;
    std::uniform_int_distribution<std::int64_t> n(0, 12);
    for (int i = 0; i < cases; ++i) {
        Term a = Term::integer(n(rng));
        Term b = Term::integer(n(rng));
        bool gt = evaluate_builtin(Atom::make("greater_than", {a, b}));
        bool lt_swapped = evaluate_builtin(Atom::make("lesser_than", {b, a}));
        bool same_ab = evaluate_builtin(Atom::make("same", {a, b}));
        bool same_ba = evaluate_builtin(Atom::make("same", {b, a}));
        bool same_aa = evaluate_builtin(Atom::make("same", {a, a}));
        if (gt != lt_swapped || same_ab != same_ba || !same_aa)
            ++bad;
    }
    return bad;
}

Outcome invariant_suites()
{
    constexpr int cases = 1000;
    const Invariant suites[] = {
        {"unifier soundness", unifier_soundness},
        {"most-generality", most_generality},
        {"substitution idempotence", substitution_idempotence},
        {"FactBase permutation equivariance", permutation_equivariance},
        {"monotonicity", monotonicity},
        {"comparison algebra", comparison_algebra},
    };
    Rng rng(31337);
    std::string detail;
    bool ok = true;
    for (const auto& s : suites) {
        int bad = s.check(rng, cases);
        ok = ok && bad == 0;
        if (!detail.empty())
            detail += ", ";
        detail += std::string(s.name) + " " + std::to_string(cases - bad) + "/" + std::to_string(cases);
    }
    return {ok ? Verdict::pass : Verdict::fail, detail};
}

} // namespace

int main()
{
    const std::pair<const char*, Outcome (*)()> criteria[] = {
        {"oracle-equivalence", oracle_equivalence},
        {"clevr-validation", clevr_validation},
        {"worked-example", worked_example},
        {"codec-round-trip", codec_round_trip},
        {"null-behaviour", null_behaviour},
        {"invariant-suites", invariant_suites},
    };
    bool failed = false;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {Verdict::fail, std::string("uncaught exception: ") + e.what()};
        }
        const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::skip ? "SKIP" : "FAIL";
        failed = failed || o.verdict == Verdict::fail;
        std::cout << tag << "  " << name << ": " << o.detail << std::endl;
    }
    return failed ? 1 : 0;
}
