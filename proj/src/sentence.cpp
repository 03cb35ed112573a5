#include "vqa/sentence.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <set>
#include <vector>

#include "vqa/error.hpp"

namespace vqa {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::string_view trim(std::string_view s)
{
    while (!s.empty() && is_space(s.front()))
        s.remove_prefix(1);
    while (!s.empty() && is_space(s.back()))
        s.remove_suffix(1);
    return s;
}

std::string strip_spaces(std::string_view s)
{
    std::string out;
    for (char c : s) {
        if (!is_space(c))
            out += c;
    }
    return out;
}

bool all_digits(std::string_view s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

/// Recursive-descent reader for one body segment.
class BodyReader {
public:
    explicit BodyReader(std::string_view text) : text_(text) {}

    std::vector<std::vector<Atom>> clauses()
    {
        std::vector<std::vector<Atom>> out;
        out.push_back(clause());
        while (accept(';'))
            out.push_back(clause());
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return out;
    }

private:
    std::vector<Atom> clause()
    {
        std::vector<Atom> atoms;
        atoms.push_back(atom());
        while (accept(','))
            atoms.push_back(atom());
        return atoms;
    }

    Atom atom()
    {
        std::string name = word();
        if (name.empty() || !is_constant_word(name))
            fail("expected a predicate name");
        expect('(');
        std::vector<Term> args;
        args.push_back(term());
        while (accept(','))
            args.push_back(term());
        expect(')');
        auto info = predicate_info(name);
        if (!info)
            fail("unknown predicate '" + name + "'");
        if (info->kind == PredicateKind::count || info->kind == PredicateKind::target)
            fail("'" + name + "' cannot appear in a body segment");
        try {
            return Atom::make(std::move(name), std::move(args));
        } catch (const LogicError& e) {
            fail(e.what());
        }
    }

    Term term()
    {
        std::string w = word();
        if (is_variable_name(w))
            return Term::variable(std::move(w));
        if (is_constant_word(w) || is_integer_literal(w))
            return Term::constant(std::move(w));
        fail(w.empty() ? "expected a term" : "malformed term '" + w + "'");
    }

    std::string word()
    {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
                break;
            ++pos_;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c))
            fail(std::string("expected '") + c + "'");
    }

    void skip_ws()
    {
        while (pos_ < text_.size() && is_space(text_[pos_]))
            ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw ParseError(what + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

struct Operator {
    enum class Shape { exist, numeric, query, compare_number, compare_attribute } shape;
    std::string arg;  // comparison predicate or attribute type
};

std::optional<Operator> read_operator(std::string_view segment)
{
    std::string s = strip_spaces(segment);
    if (s == "E")
        return Operator{Operator::Shape::exist, {}};
    if (s == "C")
        return Operator{Operator::Shape::numeric, {}};
    if (s == ">")
        return Operator{Operator::Shape::compare_number, "greater_than"};
    if (s == "<")
        return Operator{Operator::Shape::compare_number, "lesser_than"};
    if (s == "=#")
        return Operator{Operator::Shape::compare_number, "same"};
    if (s.size() > 1 && s.front() == '=') {
        auto type = s.substr(1);
        if (!is_constant_word(type))
            throw ParseError("bad attribute type in operator '" + s + "'");
        return Operator{Operator::Shape::compare_attribute, type};
    }
    if (s.size() > 3 && s.starts_with("Q(") && s.back() == ')') {
        auto type = s.substr(2, s.size() - 3);
        if (!is_constant_word(type))
            throw ParseError("bad attribute type in operator '" + s + "'");
        return Operator{Operator::Shape::query, type};
    }
    return std::nullopt;
}

class SentenceParser {
public:
    RuleProgram run(std::string_view sentence);

private:
    void body(std::string_view segment);
    void count(std::size_t ordinal);
    void target(const Operator& op);
    std::size_t pop(bool want_count, const char* what);
    Term head_var(std::size_t index) const;
    bool is_count(std::size_t index) const { return count_rules_.contains(index); }

    std::vector<Rule> rules_;
    std::vector<std::size_t> pending_;  // unconsumed rule indices, oldest first
    std::set<std::size_t> count_rules_;
    std::size_t next_index_ = 0;
    std::size_t counts_seen_ = 0;
};

RuleProgram SentenceParser::run(std::string_view sentence)
{
    std::string_view text = trim(sentence);
    if (text.empty())
        throw ParseError("empty sentence");
    if (text.back() != '\\')
        throw ParseError("sentence must end with '\\'");
    text.remove_suffix(1);

    std::vector<std::string_view> segments;
    while (true) {
        auto cut = text.find('\\');
        segments.push_back(trim(text.substr(0, cut)));
        if (cut == std::string_view::npos)
            break;
        text.remove_prefix(cut + 1);
    }

    for (std::size_t i = 0; i < segments.size(); ++i) {
        auto seg = segments[i];
        if (seg.empty())
            throw ParseError("empty segment " + std::to_string(i));
        if (seg.size() > 1 && seg.front() == 'C' && all_digits(seg.substr(1))) {
            auto digits = seg.substr(1);
            std::size_t ordinal = 0;
            auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), ordinal);
            if (ec != std::errc{} || end != digits.data() + digits.size())
                throw ParseError("count marker '" + std::string(seg) + "' out of range");
            count(ordinal);
            continue;
        }
        if (auto op = read_operator(seg)) {
            if (i + 1 != segments.size())
                throw ParseError("operator segment '" + std::string(seg) + "' is not last");
            target(*op);
            continue;
        }
        body(seg);
    }
    if (rules_.empty() || !rules_.back().is_target())
        throw ParseError("sentence has no terminal operator");

    try {
        return RuleProgram::make(std::move(rules_));
    } catch (const LogicError& e) {
        throw ParseError(std::string("invalid rule program: ") + e.what());
    }
}

void SentenceParser::body(std::string_view segment)
{
    auto clauses = BodyReader(segment).clauses();
    std::set<std::size_t> referenced;
    for (const auto& clause : clauses) {
        for (const auto& a : clause) {
            if (a.kind() == PredicateKind::rule_ref)
                referenced.insert(a.info().rule_index);
        }
    }
    for (std::size_t r : referenced) {
        auto it = std::find(pending_.begin(), pending_.end(), r);
        if (it == pending_.end())
            throw ParseError("reference to undefined or consumed rule " + rule_symbol(r));
        pending_.erase(it);
    }

    std::size_t index = next_index_++;
    for (auto& clause : clauses) {
        std::optional<Term> head;
        for (const auto& a : clause) {
            auto vars = a.variables();
            if (!vars.empty()) {
                head = vars.front();
                break;
            }
        }
        if (!head)
            throw ParseError("clause of " + rule_symbol(index) + " has no variable");
        rules_.push_back(Rule{Atom::rule_ref(index, *head), std::move(clause)});
    }
    pending_.push_back(index);
}

void SentenceParser::count(std::size_t ordinal)
{
    if (ordinal != counts_seen_ + 1)
        throw ParseError("count marker C" + std::to_string(ordinal) + " out of sequence");
    ++counts_seen_;
    std::size_t counted = pop(false, "count marker");
    std::size_t index = next_index_++;
    Term c = Term::variable("C");
    rules_.push_back(Rule{Atom::rule_ref(index, c), {Atom::count(counted, head_var(counted), c)}});
    count_rules_.insert(index);
    pending_.push_back(index);
}

std::size_t SentenceParser::pop(bool want_count, const char* what)
{
    if (pending_.empty())
        throw ParseError(std::string(what) + " has no rule to apply to");
    std::size_t index = pending_.back();
    if (is_count(index) != want_count) {
        throw ParseError(std::string(what) + (want_count ? " needs a count rule, got "
                                                         : " needs an object rule, got ") +
                         rule_symbol(index));
    }
    pending_.pop_back();
    return index;
}

Term SentenceParser::head_var(std::size_t index) const
{
    for (const auto& r : rules_) {
        if (r.head.kind() == PredicateKind::rule_ref && r.head.info().rule_index == index)
            return r.head.args().front();
    }
    throw ParseError("no rule " + rule_symbol(index));
}

void SentenceParser::target(const Operator& op)
{
    auto var = [](const char* name) { return Term::variable(name); };
    std::vector<Term> head;
    std::vector<Atom> body;
    switch (op.shape) {
    case Operator::Shape::exist: {
        std::size_t i = pop(false, "operator E");
        body = {Atom::rule_ref(i, head_var(i))};
        break;
    }
    case Operator::Shape::numeric: {
        std::size_t k = pop(true, "operator C");
        head = {var("C")};
        body = {Atom::rule_ref(k, var("C"))};
        break;
    }
    case Operator::Shape::query: {
        std::size_t i = pop(false, "operator Q");
        head = {var("A")};
        body = {Atom::rule_ref(i, var("X")),
                Atom::make("attribute", {var("X"), Term::constant(op.arg), var("A")})};
        break;
    }
    case Operator::Shape::compare_number: {
        std::size_t b = pop(true, "comparison");
        std::size_t a = pop(true, "comparison");
        body = {Atom::rule_ref(a, var("C1")), Atom::rule_ref(b, var("C2")),
                Atom::make(op.arg, {var("C1"), var("C2")})};
        break;
    }
    case Operator::Shape::compare_attribute: {
        std::size_t b = pop(false, "attribute comparison");
        std::size_t a = pop(false, "attribute comparison");
        Term type = Term::constant(op.arg);
        body = {Atom::rule_ref(a, var("X")), Atom::rule_ref(b, var("Y")),
                Atom::make("attribute", {var("X"), type, var("A1")}),
                Atom::make("attribute", {var("Y"), type, var("A2")}),
                Atom::make("same", {var("A1"), var("A2")})};
        break;
    }
    }
    if (!pending_.empty())
        throw ParseError("dangling rule " + rule_symbol(pending_.back()) + " is never used");
    rules_.push_back(Rule{Atom::make("target", std::move(head)), std::move(body)});
}

std::string encode_clause(const std::vector<Atom>& body)
{
    std::string out;
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (body[i].is_count())
            throw UnencodableProgram("count atom inside a body rule");
        if (i)
            out += ',';
        out += to_string(body[i]);
    }
    return out;
}

std::string encode_operator(const RuleProgram& program)
{
    const Rule& t = program.target();
    const auto& body = t.body;
    auto is_ref = [&](std::size_t i) { return body[i].kind() == PredicateKind::rule_ref; };
    auto refs_count = [&](std::size_t i) {
        return is_ref(i) && program.is_count_rule(body[i].info().rule_index);
    };

    if (t.head.args().empty()) {
        if (body.size() == 1 && is_ref(0) && !refs_count(0))
            return "E";
        if (body.size() == 3 && refs_count(0) && refs_count(1)) {
            switch (body[2].kind()) {
            case PredicateKind::greater_than:
                return ">";
            case PredicateKind::lesser_than:
                return "<";
            case PredicateKind::same:
                return "=#";
            default:
                break;
            }
        }
        if (body.size() == 5 && is_ref(0) && is_ref(1) && body[2].kind() == PredicateKind::attribute)
            return "=" + body[2].args()[1].text();
    } else {
        if (body.size() == 1 && refs_count(0))
            return "C";
        if (body.size() == 2 && is_ref(0) && body[1].kind() == PredicateKind::attribute)
            return "Q(" + body[1].args()[1].text() + ")";
    }
    throw UnencodableProgram("target rule matches no operator: " + to_string(t));
}

} // namespace

TargetSentence serialize(const RuleProgram& program)
{
    TargetSentence out;
    std::size_t ordinal = 0;
    for (std::size_t i = 0; i < program.rule_count(); ++i) {
        if (program.is_count_rule(i)) {
            out += "C" + std::to_string(++ordinal) + "\\";
            continue;
        }
        auto clauses = program.clauses_of(i);
        for (std::size_t c = 0; c < clauses.size(); ++c) {
            if (c)
                out += ';';
            out += encode_clause(program.rules()[clauses[c]].body);
        }
        out += '\\';
    }
    out += encode_operator(program) + "\\";

    // Variable naming and rule order must follow the decoding conventions.
    try {
        if (parse(out) == program)
            return out;
    } catch (const ParseError& e) {
        throw UnencodableProgram(std::string("sentence does not decode: ") + e.what());
    }
    throw UnencodableProgram("sentence decodes to a different program: " + out);
}

RuleProgram parse(std::string_view sentence) { return SentenceParser().run(sentence); }

} // namespace vqa
