#include "esl/compiled.hpp"

#include <algorithm>

namespace esl {

AgentTagSet resolve_tags(const std::vector<AgentTag>& tags, const Environment& env) {
    AgentTagSet out;
    for (const AgentTag& t : tags) {
        if (t.kind == AgentTag::Env) {
            out.e = true;
            continue;
        }
        auto id = env.agents.find(t.agent);
        if (!id) throw InputError("unknown agent '" + t.agent + "'");
        if (t.kind == AgentTag::Base)
            out.base |= uint32_t{1} << *id;
        else
            out.strat |= uint32_t{1} << *id;
    }
    return out;
}

namespace {

struct CompileCtx {
    const Environment& env;
    AtomResolver& atoms;
    Compiled out;
    std::vector<std::pair<std::string, int32_t>> scope;  // innermost last

    int32_t add(Compiled::Node n) {
        out.nodes.push_back(std::move(n));
        return static_cast<int32_t>(out.nodes.size() - 1);
    }

    static std::vector<int32_t> merge(const std::vector<int32_t>& a,
                                      const std::vector<int32_t>& b) {
        std::vector<int32_t> m;
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(m));
        return m;
    }

    int32_t visit(const FormulaPtr& f) {
        Compiled::Node n;
        n.kind = f->kind;
        switch (f->kind) {
            case FKind::Atom:
                n.atom = atoms.resolveAtom(f->text);
                n.isState = true;
                n.shaped = true;
                return add(std::move(n));
            case FKind::True:
            case FKind::False:
                n.isState = true;
                n.shaped = true;
                return add(std::move(n));
            case FKind::LocalEq: {
                n.locTag = resolve_tags({f->tag}, env);
                n.var = lookupVar(f->text);
                n.freeVars = {n.var};
                n.isState = true;
                n.shaped = true;
                return add(std::move(n));
            }
            case FKind::Not: {
                n.a = visit(f->lhs);
                const auto& ca = out.at(n.a);
                n.isState = ca.isState;
                n.shaped = ca.shaped;
                n.freeVars = ca.freeVars;
                return add(std::move(n));
            }
            case FKind::And:
            case FKind::Or:
            case FKind::Until: {
                n.a = visit(f->lhs);
                n.b = visit(f->rhs);
                const auto& ca = out.at(n.a);
                const auto& cb = out.at(n.b);
                n.isState = f->kind != FKind::Until && ca.isState && cb.isState;
                n.shaped = f->kind != FKind::Until && ca.shaped && cb.shaped;
                n.freeVars = merge(ca.freeVars, cb.freeVars);
                return add(std::move(n));
            }
            case FKind::Next: {
                n.a = visit(f->lhs);
                n.isState = false;
                n.shaped = false;
                n.freeVars = out.at(n.a).freeVars;
                return add(std::move(n));
            }
            case FKind::PathAll: {
                n.a = visit(f->lhs);
                n.isState = true;
                n.freeVars = out.at(n.a).freeVars;
                classifyCore(n);
                return add(std::move(n));
            }
            case FKind::DistKnow:
            case FKind::CommonKnow: {
                n.tags = resolve_tags(f->tags, env);
                n.a = visit(f->lhs);
                if (!out.at(n.a).isState)
                    throw InputError("internal: knowledge body not desugared to a state formula");
                n.isState = true;
                n.shaped = out.at(n.a).shaped;
                n.freeVars = out.at(n.a).freeVars;
                return add(std::move(n));
            }
            case FKind::Exists: {
                int32_t slot = static_cast<int32_t>(out.varNames.size());
                out.varNames.push_back(f->text);
                scope.emplace_back(f->text, slot);
                n.a = visit(f->lhs);
                scope.pop_back();
                n.var = slot;
                n.isState = out.at(n.a).isState;
                n.shaped = out.at(n.a).shaped;
                n.freeVars = out.at(n.a).freeVars;
                n.freeVars.erase(std::remove(n.freeVars.begin(), n.freeVars.end(), slot),
                                 n.freeVars.end());
                return add(std::move(n));
            }
            default:
                throw InputError("compile expects a desugared formula");
        }
    }

    int32_t lookupVar(const std::string& name) {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
            if (it->first == name) return it->second;
        throw InputError("unbound free variable '" + name + "'");
    }

    // Normalize a PathAll body: strip double negations, push a remaining
    // negation through X. What remains is one of the four CTL cores or a
    // general path formula.
    void classifyCore(Compiled::Node& n) {
        int32_t body = n.a;
        bool neg = false;
        while (out.at(body).kind == FKind::Not) {
            neg = !neg;
            body = out.at(body).a;
        }
        const auto& c = out.at(body);
        if (c.kind == FKind::Next) {
            int32_t child = c.a;
            if (neg) {  // A !X p  =  A X !p
                Compiled::Node notNode;
                notNode.kind = FKind::Not;
                notNode.a = child;
                notNode.isState = out.at(child).isState;
                notNode.shaped = out.at(child).shaped;
                notNode.freeVars = out.at(child).freeVars;
                child = add(std::move(notNode));
            }
            n.core = Compiled::Node::CoreNext;
            n.coreA = child;
            n.shaped = out.at(child).isState && out.at(child).shaped;
            return;
        }
        if (c.kind == FKind::Until) {
            n.core = neg ? Compiled::Node::CoreNotUntil : Compiled::Node::CoreUntil;
            n.coreA = c.a;
            n.coreB = c.b;
            n.shaped = out.at(c.a).isState && out.at(c.a).shaped && out.at(c.b).isState &&
                       out.at(c.b).shaped;
            return;
        }
        n.core = Compiled::Node::CoreGeneral;
        n.shaped = false;
    }
};

}  // namespace

Compiled compile_formula(const FormulaPtr& desugared, const Environment& env, AtomResolver& atoms,
                         const std::vector<std::string>& contextVars) {
    FormulaPtr f = desugared;
    if (!is_state_formula(f)) f = Formula::pathAll(f);
    CompileCtx ctx{env, atoms, {}, {}};
    ctx.out.varNames = contextVars;
    ctx.out.contextVars = static_cast<int32_t>(contextVars.size());
    for (int32_t i = 0; i < ctx.out.contextVars; ++i) ctx.scope.emplace_back(contextVars[static_cast<size_t>(i)], i);
    ctx.out.root = ctx.visit(f);
    return ctx.out;
}

}  // namespace esl
