#include "vqa/logic.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "vqa/error.hpp"

namespace vqa {

namespace {

bool is_lower(char c) noexcept { return c >= 'a' && c <= 'z'; }
bool is_upper(char c) noexcept { return c >= 'A' && c <= 'Z'; }
bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }

constexpr std::string_view same_prefix = "same_";

} // namespace

bool is_variable_name(std::string_view s) noexcept
{
    if (s.empty() || !is_upper(s.front()))
        return false;
    return std::all_of(s.begin() + 1, s.end(), [](char c) {
        return is_lower(c) || is_upper(c) || is_digit(c) || c == '_';
    });
}

bool is_constant_word(std::string_view s) noexcept
{
    if (s.empty() || !is_lower(s.front()))
        return false;
    return std::all_of(s.begin() + 1, s.end(),
                       [](char c) { return is_lower(c) || is_digit(c) || c == '_'; });
}

bool is_integer_literal(std::string_view s) noexcept
{
    if (s.empty() || s.size() > 18)
        return false;
    if (s.size() > 1 && s.front() == '0')
        return false;
    return std::all_of(s.begin(), s.end(), is_digit);
}

Term Term::variable(std::string name)
{
    if (!is_variable_name(name))
        throw LogicError("invalid variable name '" + name + "'");
    return Term(Kind::variable, std::move(name));
}

Term Term::constant(std::string value)
{
    if (!is_constant_word(value) && !is_integer_literal(value))
        throw LogicError("invalid constant '" + value + "'");
    return Term(Kind::constant, std::move(value));
}

Term Term::integer(std::int64_t value)
{
    if (value < 0)
        throw LogicError("integer constants are non-negative");
    return Term(Kind::constant, std::to_string(value));
}

std::optional<std::int64_t> Term::as_integer() const
{
    if (kind_ != Kind::constant || !is_integer_literal(text_))
        return std::nullopt;
    std::int64_t v = 0;
    std::from_chars(text_.data(), text_.data() + text_.size(), v);
    return v;
}

bool operator<(const Term& a, const Term& b)
{
    if (a.kind_ != b.kind_)
        return a.kind_ < b.kind_;
    auto ia = a.as_integer();
    auto ib = b.as_integer();
    if (ia && ib)
        return *ia < *ib;
    if (ia.has_value() != ib.has_value())
        return ia.has_value();
    return a.text_ < b.text_;
}

std::optional<PredicateInfo> predicate_info(std::string_view symbol)
{
    if (symbol == "attribute")
        return PredicateInfo{PredicateKind::attribute, 3, {}};
    if (symbol == "relation")
        return PredicateInfo{PredicateKind::relation, 3, {}};
    if (symbol == "greater_than")
        return PredicateInfo{PredicateKind::greater_than, 2, {}};
    if (symbol == "lesser_than")
        return PredicateInfo{PredicateKind::lesser_than, 2, {}};
    if (symbol == "same")
        return PredicateInfo{PredicateKind::same, 2, {}};
    if (symbol == "object")
        return PredicateInfo{PredicateKind::object, 1, {}};
    if (symbol == "count")
        return PredicateInfo{PredicateKind::count, 2, {}};
    if (symbol == "target")
        return PredicateInfo{PredicateKind::target, 0, {}};
    if (symbol.starts_with(same_prefix)) {
        auto type = symbol.substr(same_prefix.size());
        if (type == "size" || type == "shape" || type == "color" || type == "material")
            return PredicateInfo{PredicateKind::same_attribute, 2, std::string(type)};
        return std::nullopt;
    }
    if (symbol.size() >= 2 && symbol.front() == 'r') {
        auto digits = symbol.substr(1);
        if (!is_integer_literal(digits))
            return std::nullopt;
        std::size_t index = 0;
        std::from_chars(digits.data(), digits.data() + digits.size(), index);
        PredicateInfo info{PredicateKind::rule_ref, 1, {}};
        info.rule_index = index;
        return info;
    }
    return std::nullopt;
}

std::string rule_symbol(std::size_t index) { return "r" + std::to_string(index); }

Atom::Atom(std::string predicate, std::vector<Term> args, PredicateInfo info,
           std::optional<RuleRef> counted)
    : predicate_(std::move(predicate)), args_(std::move(args)), info_(std::move(info)),
      counted_(std::move(counted))
{
}

Atom Atom::make(std::string predicate, std::vector<Term> args)
{
    auto info = predicate_info(predicate);
    if (!info)
        throw LogicError("unknown predicate '" + predicate + "'");
    if (info->kind == PredicateKind::count)
        throw LogicError("count atoms are built with Atom::count");
    bool arity_ok = info->kind == PredicateKind::target ? args.size() <= 1
                                                        : args.size() == info->arity;
    if (!arity_ok) {
        throw LogicError(predicate + " expects " + std::to_string(info->arity) +
                         " arguments, got " + std::to_string(args.size()));
    }
    return Atom(std::move(predicate), std::move(args), std::move(*info), std::nullopt);
}

Atom Atom::count(std::size_t rule, Term var, Term result)
{
    PredicateInfo info{PredicateKind::count, 2, {}};
    return Atom("count", {std::move(result)}, std::move(info), RuleRef{rule, std::move(var)});
}

Atom Atom::rule_ref(std::size_t rule, Term arg) { return make(rule_symbol(rule), {std::move(arg)}); }

bool Atom::is_ground() const noexcept
{
    if (counted_ && counted_->var.is_variable())
        return false;
    return std::none_of(args_.begin(), args_.end(), [](const Term& t) { return t.is_variable(); });
}

std::vector<Term> Atom::variables() const
{
    std::vector<Term> out;
    auto add = [&out](const Term& t) {
        if (t.is_variable() && std::find(out.begin(), out.end(), t) == out.end())
            out.push_back(t);
    };
    if (counted_)
        add(counted_->var);
    for (const auto& t : args_)
        add(t);
    return out;
}

RuleProgram RuleProgram::make(std::vector<Rule> rules)
{
    if (rules.empty())
        throw LogicError("empty rule program");
    if (!rules.back().is_target())
        throw LogicError("the last rule must be the target rule");

    RuleProgram p;
    std::optional<std::size_t> last_index;
    for (std::size_t pos = 0; pos < rules.size(); ++pos) {
        const Rule& r = rules[pos];
        std::size_t index = 0;
        if (r.is_target()) {
            if (pos + 1 != rules.size())
                throw LogicError("only the last rule may have head 'target'");
            index = last_index ? *last_index + 1 : 0;
        } else if (r.head.kind() == PredicateKind::rule_ref) {
            index = r.head.info().rule_index;
            bool contiguous = last_index ? (index == *last_index || index == *last_index + 1)
                                         : index == 0;
            if (!contiguous)
                throw LogicError("rule indices must be contiguous from 0, got " + r.head.predicate());
            last_index = index;
        } else {
            throw LogicError("rule head must be r_i or target, got " + r.head.predicate());
        }

        if (r.body.empty())
            throw LogicError("rule " + r.head.predicate() + " has an empty body");

        std::vector<Term> body_vars;
        for (const Atom& a : r.body) {
            switch (a.kind()) {
            case PredicateKind::target:
                throw LogicError("'target' cannot appear in a rule body");
            case PredicateKind::rule_ref:
                if (a.info().rule_index >= index)
                    throw LogicError(r.head.predicate() + " references " + a.predicate() +
                                     " (equal or later index)");
                break;
            case PredicateKind::count:
                if (a.counted().index >= index)
                    throw LogicError(r.head.predicate() + " counts " +
                                     rule_symbol(a.counted().index) + " (equal or later index)");
                break;
            default:
                break;
            }
            for (auto& v : a.variables())
                body_vars.push_back(v);
        }
        for (const Term& hv : r.head.variables()) {
            if (std::find(body_vars.begin(), body_vars.end(), hv) == body_vars.end())
                throw LogicError("head variable " + hv.text() + " of " + r.head.predicate() +
                                 " does not occur in its body");
        }
    }

    p.rule_count_ = last_index ? *last_index + 1 : 0;
    p.rules_ = std::move(rules);

    const Rule& target = p.rules_.back();
    if (target.head.args().empty()) {
        p.kind_ = AnswerKind::boolean;
    } else {
        const Term& out = target.head.args().front();
        bool numeric = std::any_of(target.body.begin(), target.body.end(), [&](const Atom& a) {
            return a.kind() == PredicateKind::rule_ref && a.args().front() == out &&
                   p.is_count_rule(a.info().rule_index);
        });
        p.kind_ = numeric ? AnswerKind::numeric : AnswerKind::attribute_query;
    }
    return p;
}

std::vector<std::size_t> RuleProgram::clauses_of(std::size_t index) const
{
    std::vector<std::size_t> out;
    if (index == rule_count_) {
        out.push_back(rules_.size() - 1);
        return out;
    }
    for (std::size_t pos = 0; pos + 1 < rules_.size(); ++pos) {
        if (rules_[pos].head.info().rule_index == index)
            out.push_back(pos);
    }
    return out;
}

bool RuleProgram::is_count_rule(std::size_t index) const
{
    auto clauses = clauses_of(index);
    return clauses.size() == 1 && index < rule_count_ && rules_[clauses.front()].is_count_rule();
}

std::optional<Term> Substitution::lookup(std::string_view var) const
{
    auto it = bindings_.find(std::string(var));
    if (it == bindings_.end())
        return std::nullopt;
    return it->second;
}

Term Substitution::resolve(const Term& t) const
{
    if (!t.is_variable())
        return t;
    auto it = bindings_.find(t.text());
    return it == bindings_.end() ? t : it->second;
}

Term Substitution::apply(const Term& t) const { return resolve(t); }

Atom Substitution::apply(const Atom& a) const
{
    std::vector<Term> args;
    args.reserve(a.args_.size());
    for (const auto& t : a.args_)
        args.push_back(resolve(t));
    std::optional<RuleRef> counted;
    if (a.counted_)
        counted = RuleRef{a.counted_->index, resolve(a.counted_->var)};
    return Atom(a.predicate_, std::move(args), a.info_, std::move(counted));
}

void Substitution::bind(const std::string& var, const Term& value)
{
    // Keep the map fully resolved: earlier bindings that point at `var`
    // now point at its value.
    for (auto& [name, bound] : bindings_) {
        if (bound.is_variable() && bound.text() == var)
            bound = value;
    }
    bindings_.insert_or_assign(var, value);
}

bool Substitution::unify_terms(const Term& a, const Term& b)
{
    Term ra = resolve(a);
    Term rb = resolve(b);
    if (ra == rb)
        return true;
    if (ra.is_variable()) {
        bind(ra.text(), rb);
        return true;
    }
    if (rb.is_variable()) {
        bind(rb.text(), ra);
        return true;
    }
    return false;
}

bool Substitution::is_idempotent() const
{
    for (const auto& [name, value] : bindings_) {
        if (value.is_variable() && (value.text() == name || bindings_.contains(value.text())))
            return false;
    }
    return true;
}

std::optional<Substitution> unify(const Atom& a, const Atom& b, Substitution base)
{
    if (a.predicate() != b.predicate() || a.args().size() != b.args().size() ||
        a.is_count() != b.is_count())
        return std::nullopt;
    if (a.is_count()) {
        if (a.counted().index != b.counted().index)
            return std::nullopt;
        if (!base.unify_terms(a.counted().var, b.counted().var))
            return std::nullopt;
    }
    for (std::size_t i = 0; i < a.args().size(); ++i) {
        if (!base.unify_terms(a.args()[i], b.args()[i]))
            return std::nullopt;
    }
    return base;
}

std::optional<Substitution> unify(const Atom& a, const Atom& b) { return unify(a, b, Substitution{}); }

Atom apply(const Substitution& s, const Atom& a) { return s.apply(a); }

Substitution compose(const Substitution& s1, const Substitution& s2)
{
    Substitution out = s1;
    for (const auto& [name, value] : s2.bindings()) {
        Term var = Term::variable(name);
        if (!out.unify_terms(var, value)) {
            throw SubstitutionConflict("variable " + name + " resolves to both " +
                                       to_string(out.apply(var)) + " and " +
                                       to_string(out.apply(value)));
        }
    }
    return out;
}

std::string to_string(const Term& t) { return t.text(); }

std::string to_string(const Atom& a)
{
    std::string out = a.predicate();
    if (a.is_count()) {
        out += "(" + rule_symbol(a.counted().index) + "(" + a.counted().var.text() + "), " +
               a.count_result().text() + ")";
        return out;
    }
    if (a.args().empty())
        return out;
    out += '(';
    for (std::size_t i = 0; i < a.args().size(); ++i) {
        if (i)
            out += ", ";
        out += a.args()[i].text();
    }
    out += ')';
    return out;
}

std::string to_string(const Rule& r)
{
    std::string out = to_string(r.head) + " :- ";
    for (std::size_t i = 0; i < r.body.size(); ++i) {
        if (i)
            out += ", ";
        out += to_string(r.body[i]);
    }
    out += '.';
    return out;
}

std::string to_string(const RuleProgram& p)
{
    std::string out;
    for (const auto& r : p.rules())
        out += to_string(r) + '\n';
    return out;
}

std::string to_string(const Substitution& s)
{
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const auto& [name, value] : s.bindings()) {
        if (!first)
            os << ", ";
        first = false;
        os << name << "->" << value.text();
    }
    os << '}';
    return os.str();
}

} // namespace vqa
