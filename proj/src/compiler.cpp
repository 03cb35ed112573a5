#include "vqa/compiler.hpp"

#include <algorithm>

#include "vqa/error.hpp"

namespace vqa {

namespace {

/// An object-set expression under construction: body atoms constraining
/// `var`, the set's member.
struct Branch {
    std::vector<Atom> atoms;
    Term var;
};

class Compiler {
public:
    explicit Compiler(const FunctionalProgram& fp) : fp_(fp) {}

    RuleProgram run();

private:
    Term fresh_object_var();
    Branch objects(std::size_t node);
    std::vector<Atom> finish(Branch b) const;
    std::size_t emit(std::vector<std::pair<Term, std::vector<Atom>>> clauses);
    std::size_t close(Branch b);
    std::size_t count_rule(std::size_t node);
    std::size_t object_operand(std::size_t node);
    Term head_var(std::size_t rule) const;

    const FunctionalProgram& fp_;
    std::vector<Rule> rules_;
    std::size_t next_rule_ = 0;
    std::size_t next_var_ = 0;
};

Term Compiler::fresh_object_var()
{
    static constexpr char letters[] = {'W', 'X', 'Y', 'Z'};
    std::size_t k = next_var_++;
    std::string name(1, letters[k % 4]);
    if (k >= 4)
        name += std::to_string(k / 4);
    return Term::variable(std::move(name));
}

Branch Compiler::objects(std::size_t node)
{
    const auto& n = fp_.nodes()[node];
    const auto& op = fp_.operations()[node];
    switch (op.kind) {
    case OpKind::scene:
        return {{}, fresh_object_var()};
    case OpKind::filter: {
        Branch b = objects(n.inputs[0]);
        b.atoms.push_back(Atom::make(
            "attribute", {b.var, Term::constant(op.type), Term::constant(n.value_inputs[0])}));
        return b;
    }
    case OpKind::unique:
        return objects(n.inputs[0]);
    case OpKind::relate: {
        Branch b = objects(n.inputs[0]);
        Term out = fresh_object_var();
        b.atoms.push_back(Atom::make("relation", {out, b.var, Term::constant(n.value_inputs[0])}));
        b.var = out;
        return b;
    }
    case OpKind::same: {
        Branch b = objects(n.inputs[0]);
        // same_<t> only enumerates once one side is bound, so a bare scene
        // input needs a domain.
        bool constrained = std::any_of(b.atoms.begin(), b.atoms.end(), [&](const Atom& a) {
            auto vars = a.variables();
            return std::find(vars.begin(), vars.end(), b.var) != vars.end();
        });
        if (!constrained)
            b.atoms.push_back(Atom::make("object", {b.var}));
        Term out = fresh_object_var();
        b.atoms.push_back(Atom::make("same_" + op.type, {out, b.var}));
        b.var = out;
        return b;
    }
    case OpKind::intersect: {
        Branch a = objects(n.inputs[0]);
        Branch b = objects(n.inputs[1]);
        Substitution rename;
        rename.unify_terms(b.var, a.var);
        for (const auto& atom : b.atoms) {
            Atom renamed = rename.apply(atom);
            if (std::find(a.atoms.begin(), a.atoms.end(), renamed) == a.atoms.end())
                a.atoms.push_back(std::move(renamed));
        }
        return a;
    }
    case OpKind::union_: {
        Branch a = objects(n.inputs[0]);
        Branch b = objects(n.inputs[1]);
        Term va = a.var;
        Term vb = b.var;
        std::size_t k = emit({{va, finish(std::move(a))}, {vb, finish(std::move(b))}});
        Term out = fresh_object_var();
        return {{Atom::rule_ref(k, out)}, out};
    }
    default:
        throw MalformedProgram("node " + std::to_string(node) + " (" + n.op +
                               ") does not yield an object set");
    }
}

/// Body of a closed branch: the atom introducing the branch variable goes
/// first so that the variable leads the argument scan; an otherwise empty
/// body becomes object(V).
std::vector<Atom> Compiler::finish(Branch b) const
{
    if (b.atoms.empty())
        return {Atom::make("object", {b.var})};
    auto lead = std::find_if(b.atoms.begin(), b.atoms.end(), [&](const Atom& a) {
        auto vars = a.variables();
        return !vars.empty() && vars.front() == b.var;
    });
    if (lead == b.atoms.end()) {
        b.atoms.insert(b.atoms.begin(), Atom::make("object", {b.var}));
        return std::move(b.atoms);
    }
    std::rotate(b.atoms.begin(), lead, lead + 1);
    return std::move(b.atoms);
}

std::size_t Compiler::emit(std::vector<std::pair<Term, std::vector<Atom>>> clauses)
{
    std::size_t index = next_rule_++;
    for (auto& [var, body] : clauses)
        rules_.push_back(Rule{Atom::rule_ref(index, var), std::move(body)});
    return index;
}

std::size_t Compiler::close(Branch b)
{
    if (b.atoms.size() == 1 && b.atoms.front().kind() == PredicateKind::rule_ref &&
        b.atoms.front().args().front() == b.var)
        return b.atoms.front().info().rule_index;
    Term var = b.var;
    return emit({{var, finish(std::move(b))}});
}

Term Compiler::head_var(std::size_t rule) const
{
    auto it = std::find_if(rules_.begin(), rules_.end(), [&](const Rule& r) {
        return r.head.kind() == PredicateKind::rule_ref && r.head.info().rule_index == rule;
    });
    return it->head.args().front();
}

std::size_t Compiler::count_rule(std::size_t node)
{
    const auto& n = fp_.nodes()[node];
    if (fp_.operations()[node].kind != OpKind::count)
        throw MalformedProgram("node " + std::to_string(node) + " (" + n.op + ") is not a count");
    std::size_t counted = close(objects(n.inputs[0]));
    Term c = Term::variable("C");
    return emit({{c, {Atom::count(counted, head_var(counted), c)}}});
}

std::size_t Compiler::object_operand(std::size_t node)
{
    if (fp_.operations()[node].kind == OpKind::query)
        node = fp_.nodes()[node].inputs[0];
    return close(objects(node));
}

RuleProgram Compiler::run()
{
    const std::size_t out = fp_.output();
    const auto& n = fp_.nodes()[out];
    const auto& op = fp_.operations()[out];
    auto var = [](const char* name) { return Term::variable(name); };
    auto target = [&](std::vector<Term> args, std::vector<Atom> body) {
        rules_.push_back(Rule{Atom::make("target", std::move(args)), std::move(body)});
    };

    switch (op.kind) {
    case OpKind::count: {
        std::size_t k = count_rule(out);
        target({var("C")}, {Atom::rule_ref(k, var("C"))});
        break;
    }
    case OpKind::exist: {
        std::size_t i = close(objects(n.inputs[0]));
        target({}, {Atom::rule_ref(i, head_var(i))});
        break;
    }
    case OpKind::equal_integer:
    case OpKind::greater_than:
    case OpKind::less_than: {
        std::size_t a = count_rule(n.inputs[0]);
        std::size_t b = count_rule(n.inputs[1]);
        const char* cmp = op.kind == OpKind::equal_integer ? "same"
                          : op.kind == OpKind::greater_than ? "greater_than"
                                                            : "lesser_than";
        target({}, {Atom::rule_ref(a, var("C1")), Atom::rule_ref(b, var("C2")),
                    Atom::make(cmp, {var("C1"), var("C2")})});
        break;
    }
    case OpKind::equal: {
        std::size_t a = object_operand(n.inputs[0]);
        std::size_t b = object_operand(n.inputs[1]);
        Term type = Term::constant(op.type);
        target({}, {Atom::rule_ref(a, var("X")), Atom::rule_ref(b, var("Y")),
                    Atom::make("attribute", {var("X"), type, var("A1")}),
                    Atom::make("attribute", {var("Y"), type, var("A2")}),
                    Atom::make("same", {var("A1"), var("A2")})});
        break;
    }
    case OpKind::query: {
        std::size_t i = close(objects(n.inputs[0]));
        target({var("A")}, {Atom::rule_ref(i, var("X")),
                            Atom::make("attribute", {var("X"), Term::constant(op.type), var("A")})});
        break;
    }
    default:
        throw MalformedProgram("output node '" + n.op + "' is not an answer operation");
    }
    return RuleProgram::make(std::move(rules_));
}

} // namespace

RuleProgram compile(const FunctionalProgram& fp) { return Compiler(fp).run(); }

} // namespace vqa
