#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vqa {

/// A flat first-order term: an uppercase variable or a lowercase / integer
/// constant. Integers are ordinary constants that the comparison builtins
/// know how to read.
class Term {
public:
    enum class Kind : std::uint8_t { variable, constant };

    static Term variable(std::string name);
    static Term constant(std::string value);
    static Term integer(std::int64_t value);

    Kind kind() const noexcept { return kind_; }
    bool is_variable() const noexcept { return kind_ == Kind::variable; }
    bool is_constant() const noexcept { return kind_ == Kind::constant; }
    const std::string& text() const noexcept { return text_; }
    std::optional<std::int64_t> as_integer() const;

    friend bool operator==(const Term&, const Term&) = default;
    /// Variables before constants; integers compare numerically and sort
    /// before words.
    friend bool operator<(const Term& a, const Term& b);

private:
    Term(Kind kind, std::string text) : kind_(kind), text_(std::move(text)) {}

    Kind kind_;
    std::string text_;
};

bool is_variable_name(std::string_view s) noexcept;
bool is_constant_word(std::string_view s) noexcept;
bool is_integer_literal(std::string_view s) noexcept;

enum class PredicateKind : std::uint8_t {
    attribute,
    relation,
    same_attribute,  // same_size, same_shape, same_color, same_material
    greater_than,
    lesser_than,
    same,
    object,
    rule_ref,  // r0, r1, ...
    count,
    target,
};

struct PredicateInfo {
    PredicateKind kind;
    std::size_t arity;
    std::string attribute_type;  // same_attribute only
    std::size_t rule_index = 0;  // rule_ref only
};

/// Looks a predicate symbol up in the fixed vocabulary. `target` reports
/// arity 0; callers accept 0 or 1 for it.
std::optional<PredicateInfo> predicate_info(std::string_view symbol);

std::string rule_symbol(std::size_t index);

/// Reference to a rule's unary head inside a `count` aggregate.
struct RuleRef {
    std::size_t index;
    Term var;

    friend bool operator==(const RuleRef&, const RuleRef&) = default;
};

/// A predicate applied to flat terms, or the aggregate form
/// `count(r_j(V), C)` which stores `C` as its only argument.
class Atom {
public:
    /// Validates the symbol and arity against the vocabulary.
    static Atom make(std::string predicate, std::vector<Term> args);
    static Atom count(std::size_t rule, Term var, Term result);
    static Atom rule_ref(std::size_t rule, Term arg);

    const std::string& predicate() const noexcept { return predicate_; }
    const std::vector<Term>& args() const noexcept { return args_; }
    const PredicateInfo& info() const noexcept { return info_; }
    PredicateKind kind() const noexcept { return info_.kind; }

    bool is_count() const noexcept { return counted_.has_value(); }
    /// Only meaningful for count atoms.
    const RuleRef& counted() const { return *counted_; }
    const Term& count_result() const { return args_.front(); }

    bool is_ground() const noexcept;
    /// Variables in left-to-right argument order (count's inner variable
    /// first), without duplicates.
    std::vector<Term> variables() const;

    friend bool operator==(const Atom& a, const Atom& b)
    {
        return a.predicate_ == b.predicate_ && a.args_ == b.args_ && a.counted_ == b.counted_;
    }

private:
    Atom(std::string predicate, std::vector<Term> args, PredicateInfo info,
         std::optional<RuleRef> counted);

    std::string predicate_;
    std::vector<Term> args_;
    PredicateInfo info_;
    std::optional<RuleRef> counted_;

    friend class Substitution;
};

struct Rule {
    Atom head;
    std::vector<Atom> body;

    bool is_target() const noexcept { return head.kind() == PredicateKind::target; }
    /// True for `r_i(C) :- count(r_j(V), C).`
    bool is_count_rule() const noexcept { return body.size() == 1 && body.front().is_count(); }

    friend bool operator==(const Rule&, const Rule&) = default;
};

enum class AnswerKind : std::uint8_t { boolean, numeric, attribute_query };

/// An ordered, index-stratified list of clauses ending in the target rule.
/// Clauses sharing a head index are adjacent and read as a disjunction.
class RuleProgram {
public:
    /// Checks every structural invariant; throws LogicError on violation.
    static RuleProgram make(std::vector<Rule> rules);

    const std::vector<Rule>& rules() const noexcept { return rules_; }
    AnswerKind answer_kind() const noexcept { return kind_; }
    const Rule& target() const { return rules_.back(); }

    /// Number of distinct `r_i` heads; the target is evaluated after them.
    std::size_t rule_count() const noexcept { return rule_count_; }
    /// Clauses (positions into rules()) whose head is `r_index`, or the
    /// target when index == rule_count().
    std::vector<std::size_t> clauses_of(std::size_t index) const;
    /// Whether rule `index` is a count rule.
    bool is_count_rule(std::size_t index) const;

    friend bool operator==(const RuleProgram&, const RuleProgram&) = default;

private:
    std::vector<Rule> rules_;
    AnswerKind kind_ = AnswerKind::boolean;
    std::size_t rule_count_ = 0;
};

/// A fully resolved binding map: no variable maps to itself and no binding
/// target is itself bound.
class Substitution {
public:
    Substitution() = default;

    bool empty() const noexcept { return bindings_.empty(); }
    std::size_t size() const noexcept { return bindings_.size(); }
    const std::map<std::string, Term>& bindings() const noexcept { return bindings_; }
    std::optional<Term> lookup(std::string_view var) const;

    Term apply(const Term& t) const;
    Atom apply(const Atom& a) const;

    /// Adds the equation `a = b` under the current bindings. Returns false
    /// (leaving *this untouched) if two distinct constants would clash.
    bool unify_terms(const Term& a, const Term& b);

    bool is_idempotent() const;

    friend bool operator==(const Substitution&, const Substitution&) = default;

private:
    Term resolve(const Term& t) const;
    void bind(const std::string& var, const Term& value);

    std::map<std::string, Term> bindings_;
};

/// Most general unifier of two atoms, or nullopt on predicate, arity or
/// constant clash.
std::optional<Substitution> unify(const Atom& a, const Atom& b);
/// Extends `base` so that `a` and `b` become equal.
std::optional<Substitution> unify(const Atom& a, const Atom& b, Substitution base);

Atom apply(const Substitution& s, const Atom& a);

/// Merges both binding sets into one idempotent substitution. Throws
/// SubstitutionConflict when a variable would resolve to two distinct
/// constants. When s2 neither binds nor mentions a variable bound by s1 this
/// coincides with sequential application (s1 first, then s2).
Substitution compose(const Substitution& s1, const Substitution& s2);

std::string to_string(const Term& t);
std::string to_string(const Atom& a);
/// `r0(W) :- attribute(W, size, large), attribute(W, color, green).`
std::string to_string(const Rule& r);
/// One rule per line.
std::string to_string(const RuleProgram& p);
std::string to_string(const Substitution& s);

} // namespace vqa
