#include "vqa/inference.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#include "vqa/error.hpp"

namespace vqa {

std::string Answer::to_string() const
{
    switch (kind_) {
    case Kind::yes:
        return "yes";
    case Kind::no:
        return "no";
    case Kind::number:
        return std::to_string(number_);
    case Kind::attribute:
        return word_;
    case Kind::null:
        return "NULL";
    }
    return "NULL";
}

bool Answer::matches(std::string_view ground_truth) const
{
    if (is_null())
        return false;
    std::string mine = to_string();
    auto lower = [](std::string_view s) {
        std::string out;
        for (char c : s) {
            if (c != ' ')
                out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
        return out;
    };
    return lower(mine) == lower(ground_truth);
}

namespace {

bool is_comparison(PredicateKind k)
{
    return k == PredicateKind::same || k == PredicateKind::greater_than || k == PredicateKind::lesser_than;
}

ObjectId object_id(const FactBase& fb, const Term& t)
{
    auto id = t.as_integer();
    if (!id || !fb.contains(*id))
        throw UnknownObject("'" + t.text() + "' is not an object of this scene");
    return *id;
}

class ClauseSolver {
public:
    using Emit = std::function<void(const Substitution&)>;

    ClauseSolver(const FactBase& fb, std::span<const SolutionSet> prior, const std::vector<Atom>& body,
                 Emit emit)
        : fb_(fb), prior_(prior), body_(body), emit_(std::move(emit))
    {
    }

    void run() { step(Substitution{}, std::vector<bool>(body_.size(), false)); }

private:
    void step(const Substitution& s, std::vector<bool> done);
    void expand(const Atom& atom, const Substitution& s, const std::vector<bool>& done);
    const SolutionSet& prior(std::size_t index) const;

    const FactBase& fb_;
    std::span<const SolutionSet> prior_;
    const std::vector<Atom>& body_;
    Emit emit_;
};

const SolutionSet& ClauseSolver::prior(std::size_t index) const
{
    if (index >= prior_.size())
        throw EvalError(rule_symbol(index) + " has not been evaluated");
    return prior_[index];
}

void ClauseSolver::step(const Substitution& s, std::vector<bool> done)
{
    for (std::size_t i = 0; i < body_.size(); ++i) {
        if (done[i] || !is_comparison(body_[i].kind()))
            continue;
        Atom a = s.apply(body_[i]);
        if (!a.is_ground())
            continue;
        if (!evaluate_builtin(a))
            return;
        done[i] = true;
    }

    auto open_generators = [&] {
        std::size_t n = 0;
        for (std::size_t i = 0; i < body_.size(); ++i)
            n += !done[i] && !is_comparison(body_[i].kind());
        return n;
    };

    std::optional<std::size_t> next;
    for (std::size_t i = 0; i < body_.size() && !next; ++i) {
        if (done[i] || is_comparison(body_[i].kind()))
            continue;
        if (body_[i].kind() == PredicateKind::same_attribute) {
            Atom a = s.apply(body_[i]);
            bool any_bound = a.args()[0].is_constant() || a.args()[1].is_constant();
            if (!any_bound && open_generators() > 1)
                continue;  // wait for another atom to bind one side
        }
        next = i;
    }

    if (!next) {
        for (std::size_t i = 0; i < body_.size(); ++i) {
            if (!done[i])
                throw NonGroundBuiltin("builtin " + to_string(s.apply(body_[i])) +
                                       " never became ground");
        }
        emit_(s);
        return;
    }
    done[*next] = true;
    expand(body_[*next], s, done);
}

void ClauseSolver::expand(const Atom& atom, const Substitution& s, const std::vector<bool>& done)
{
    Atom a = s.apply(atom);
    switch (a.kind()) {
    case PredicateKind::attribute:
    case PredicateKind::relation:
    case PredicateKind::object:
        for (const Atom& fact : fb_.facts_of(a)) {
            if (auto ext = unify(a, fact, s))
                step(*ext, done);
        }
        return;
    case PredicateKind::rule_ref:
        for (const Term& v : prior(a.info().rule_index).values) {
            Substitution ext = s;
            if (ext.unify_terms(a.args().front(), v))
                step(ext, done);
        }
        return;
    case PredicateKind::count: {
        auto n = static_cast<std::int64_t>(prior(a.counted().index).values.size());
        Substitution ext = s;
        if (ext.unify_terms(a.count_result(), Term::integer(n)))
            step(ext, done);
        return;
    }
    case PredicateKind::same_attribute: {
        const std::string& type = a.info().attribute_type;
        const Term& x = a.args()[0];
        const Term& y = a.args()[1];
        if (x.is_constant() && y.is_constant()) {
            if (same_attribute_builtin(fb_, type, object_id(fb_, x), object_id(fb_, y)))
                step(s, done);
            return;
        }
        auto bind_pairs = [&](const Term& var, ObjectId fixed, bool fixed_first) {
            for (ObjectId other : fb_.universe()) {
                bool ok = fixed_first ? same_attribute_builtin(fb_, type, fixed, other)
                                      : same_attribute_builtin(fb_, type, other, fixed);
                if (!ok)
                    continue;
                Substitution ext = s;
                if (ext.unify_terms(var, Term::integer(other)))
                    step(ext, done);
            }
        };
        if (x.is_constant()) {
            bind_pairs(y, object_id(fb_, x), true);
        } else if (y.is_constant()) {
            bind_pairs(x, object_id(fb_, y), false);
        } else {
            for (ObjectId first : fb_.universe()) {
                Substitution ext = s;
                ext.unify_terms(x, Term::integer(first));
                Atom bound = ext.apply(a);
                if (bound.args()[1].is_variable()) {
                    for (ObjectId other : fb_.universe()) {
                        if (!same_attribute_builtin(fb_, type, first, other))
                            continue;
                        Substitution pair = ext;
                        if (pair.unify_terms(bound.args()[1], Term::integer(other)))
                            step(pair, done);
                    }
                } else if (same_attribute_builtin(fb_, type, first, object_id(fb_, bound.args()[1]))) {
                    step(ext, done);  // same_t(V, V)
                }
            }
        }
        return;
    }
    default:
        throw UnknownPredicate("cannot evaluate '" + a.predicate() + "' in a rule body");
    }
}

} // namespace

bool same_attribute_builtin(const FactBase& fb, std::string_view type, ObjectId x, ObjectId y)
{
    if (!fb.contains(x))
        throw UnknownObject("object " + std::to_string(x) + " is not in the scene");
    if (!fb.contains(y))
        throw UnknownObject("object " + std::to_string(y) + " is not in the scene");
    if (x == y)
        return false;
    auto vx = fb.attribute_value(x, type);
    auto vy = fb.attribute_value(y, type);
    return vx && vy && *vx == *vy;
}

bool evaluate_builtin(const Atom& ground)
{
    if (!ground.is_ground())
        throw NonGroundBuiltin(to_string(ground) + " is not ground");
    const auto& args = ground.args();
    switch (ground.kind()) {
    case PredicateKind::same:
        return args[0] == args[1];
    case PredicateKind::greater_than:
    case PredicateKind::lesser_than: {
        auto a = args[0].as_integer();
        auto b = args[1].as_integer();
        if (!a || !b)
            throw EvalError(to_string(ground) + " compares non-integers");
        return ground.kind() == PredicateKind::greater_than ? *a > *b : *a < *b;
    }
    default:
        throw UnknownPredicate("'" + ground.predicate() + "' is not a comparison builtin");
    }
}

SolutionSet eval_rule(const FactBase& fb, const RuleProgram& program, std::size_t index,
                      std::span<const SolutionSet> prior)
{
    SolutionSet out;
    out.rule_index = index;
    for (std::size_t pos : program.clauses_of(index)) {
        const Rule& rule = program.rules()[pos];
        ClauseSolver solver(fb, prior, rule.body, [&](const Substitution& s) {
            out.satisfiable = true;
            if (rule.head.args().empty())
                return;
            Term v = s.apply(rule.head.args().front());
            if (v.is_variable())
                throw EvalError("head of " + rule.head.predicate() + " left unbound");
            out.values.insert(std::move(v));
        });
        solver.run();
    }
    return out;
}

Evaluation evaluate(const FactBase& fb, const RuleProgram& program)
{
    Evaluation ev;
    try {
        for (std::size_t i = 0; i <= program.rule_count(); ++i)
            ev.solutions.push_back(eval_rule(fb, program, i, ev.solutions));
    } catch (const Error& e) {
        ev.error = e.what();
        return ev;
    }

    const SolutionSet& target = ev.solutions.back();
    switch (program.answer_kind()) {
    case AnswerKind::boolean:
        ev.answer = Answer::boolean(target.satisfiable);
        break;
    case AnswerKind::numeric:
        if (target.values.size() == 1 && target.values.begin()->as_integer())
            ev.answer = Answer::number(*target.values.begin()->as_integer());
        else
            ev.error = "numeric target has " + std::to_string(target.values.size()) + " bindings";
        break;
    case AnswerKind::attribute_query:
        if (target.values.size() == 1)
            ev.answer = Answer::attribute(target.values.begin()->text());
        else
            ev.error = "query target has " + std::to_string(target.values.size()) + " bindings";
        break;
    }
    return ev;
}

Answer answer(const FactBase& fb, const RuleProgram& program) { return evaluate(fb, program).answer; }

std::string render_trace(const RuleProgram& program, const Evaluation& eval)
{
    std::ostringstream os;
    for (std::size_t i = 0; i <= program.rule_count(); ++i) {
        for (std::size_t pos : program.clauses_of(i))
            os << to_string(program.rules()[pos]) << '\n';
        if (i >= eval.solutions.size()) {
            os << "    (not evaluated)\n";
            continue;
        }
        const auto& sol = eval.solutions[i];
        if (i == program.rule_count() && program.answer_kind() == AnswerKind::boolean) {
            os << "    => " << (sol.satisfiable ? "true" : "false") << '\n';
            continue;
        }
        os << "    => {";
        bool first = true;
        for (const auto& v : sol.values) {
            os << (first ? "" : ", ") << v.text();
            first = false;
        }
        os << "}\n";
    }
    os << "answer: " << eval.answer.to_string();
    if (!eval.error.empty())
        os << " (" << eval.error << ")";
    os << '\n';
    return os.str();
}

} // namespace vqa
