#include "esl/atel.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace esl::atel {

namespace {
AtelPtr mk(AKind k) {
    auto p = std::make_shared<AtelFormula>();
    const_cast<AtelFormula*>(p.get())->kind = k;
    return p;
}
AtelPtr mk1(AKind k, AtelPtr a) {
    auto p = mk(k);
    const_cast<AtelFormula*>(p.get())->lhs = std::move(a);
    return p;
}
AtelPtr mk2(AKind k, AtelPtr a, AtelPtr b) {
    auto p = mk1(k, std::move(a));
    const_cast<AtelFormula*>(p.get())->rhs = std::move(b);
    return p;
}
AtelPtr withGroup(AtelPtr p, std::vector<std::string> g) {
    const_cast<AtelFormula*>(p.get())->group = std::move(g);
    return p;
}
}  // namespace

AtelPtr AtelFormula::atom(std::string name) {
    auto p = mk(AKind::Atom);
    const_cast<AtelFormula*>(p.get())->text = std::move(name);
    return p;
}
AtelPtr AtelFormula::t() { return mk(AKind::True); }
AtelPtr AtelFormula::f() { return mk(AKind::False); }
AtelPtr AtelFormula::notf(AtelPtr a) { return mk1(AKind::Not, std::move(a)); }
AtelPtr AtelFormula::andf(AtelPtr a, AtelPtr b) { return mk2(AKind::And, std::move(a), std::move(b)); }
AtelPtr AtelFormula::orf(AtelPtr a, AtelPtr b) { return mk2(AKind::Or, std::move(a), std::move(b)); }
AtelPtr AtelFormula::implies(AtelPtr a, AtelPtr b) {
    return mk2(AKind::Implies, std::move(a), std::move(b));
}
AtelPtr AtelFormula::coalitionNext(std::vector<std::string> g, AtelPtr a) {
    return withGroup(mk1(AKind::CoalitionNext, std::move(a)), std::move(g));
}
AtelPtr AtelFormula::coalitionGlobally(std::vector<std::string> g, AtelPtr a) {
    return withGroup(mk1(AKind::CoalitionGlobally, std::move(a)), std::move(g));
}
AtelPtr AtelFormula::coalitionUntil(std::vector<std::string> g, AtelPtr a, AtelPtr b) {
    return withGroup(mk2(AKind::CoalitionUntil, std::move(a), std::move(b)), std::move(g));
}
AtelPtr AtelFormula::know(std::string agent, AtelPtr a) {
    return withGroup(mk1(AKind::Know, std::move(a)), {std::move(agent)});
}
AtelPtr AtelFormula::distKnow(std::vector<std::string> g, AtelPtr a) {
    return withGroup(mk1(AKind::DistKnow, std::move(a)), std::move(g));
}
AtelPtr AtelFormula::commonKnow(std::vector<std::string> g, AtelPtr a) {
    return withGroup(mk1(AKind::CommonKnow, std::move(a)), std::move(g));
}

bool AtelFormula::operator==(const AtelFormula& o) const {
    if (kind != o.kind || text != o.text || group != o.group) return false;
    if (static_cast<bool>(lhs) != static_cast<bool>(o.lhs)) return false;
    if (static_cast<bool>(rhs) != static_cast<bool>(o.rhs)) return false;
    if (lhs && !(*lhs == *o.lhs)) return false;
    if (rhs && !(*rhs == *o.rhs)) return false;
    return true;
}

// ── Parsing / rendering ─────────────────────────────────────────────────────
//
// Shares the lexical conventions of the main grammar; the coalition operator
// is spelled <<a,b>> X f, <<a,b>> G f, or <<a,b>> (f U g).

namespace {

struct ALexer {
    std::string_view s;
    size_t pos = 0;
    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(std::string_view lit) {
        skip();
        if (s.substr(pos, lit.size()) != lit) return false;
        pos += lit.size();
        return true;
    }
    bool peekIs(std::string_view lit) {
        skip();
        return s.substr(pos, lit.size()) == lit;
    }
    std::string word() {
        skip();
        size_t start = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        if (pos < s.size() && s[pos] == '=') {
            ++pos;
            while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) ||
                                      s[pos] == '_' || s[pos] == '-' || s[pos] == '/' ||
                                      s[pos] == '.'))
                ++pos;
        }
        return std::string(s.substr(start, pos - start));
    }
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, -1, static_cast<int>(pos) + 1); }
};

struct AtelParser {
    ALexer lex;
    const Environment* env;

    void checkAgent(const std::string& a) {
        if (env && !env->agents.find(a)) lex.fail("unknown agent '" + a + "'");
    }
    std::vector<std::string> groupList(char close) {
        std::vector<std::string> out;
        lex.skip();
        if (lex.peekIs(std::string(1, close)) || lex.peekIs(">>")) return out;
        while (true) {
            std::string a = lex.word();
            if (a.empty()) lex.fail("agent name expected");
            checkAgent(a);
            out.push_back(a);
            if (!lex.eat(",")) break;
        }
        return out;
    }

    AtelPtr formula() {
        AtelPtr a = orExpr();
        if (lex.eat("->")) return AtelFormula::implies(a, formula());
        return a;
    }
    AtelPtr orExpr() {
        AtelPtr a = andExpr();
        while (lex.peekIs("|") && !lex.peekIs("||")) {
            lex.eat("|");
            a = AtelFormula::orf(a, andExpr());
        }
        return a;
    }
    AtelPtr andExpr() {
        AtelPtr a = unary();
        while (lex.eat("&")) a = AtelFormula::andf(a, unary());
        return a;
    }
    AtelPtr unary() {
        if (lex.eat("!")) return AtelFormula::notf(unary());
        if (lex.eat("<<")) {
            std::vector<std::string> g = groupList('>');
            if (!lex.eat(">>")) lex.fail("expected '>>'");
            if (lex.eat("X")) return AtelFormula::coalitionNext(g, unary());
            if (lex.eat("G")) return AtelFormula::coalitionGlobally(g, unary());
            if (lex.eat("(")) {
                AtelPtr a = formula();
                if (!lex.eat("U")) lex.fail("coalition operator needs X, G, or (a U b)");
                AtelPtr b = formula();
                if (!lex.eat(")")) lex.fail("expected ')'");
                return AtelFormula::coalitionUntil(g, a, b);
            }
            lex.fail("coalition operator needs X, G, or (a U b)");
        }
        if (lex.eat("K[")) {
            std::vector<std::string> g = groupList(']');
            if (!lex.eat("]")) lex.fail("expected ']'");
            if (g.size() != 1) lex.fail("K takes exactly one agent");
            return AtelFormula::know(g[0], unary());
        }
        if (lex.eat("D[")) {
            std::vector<std::string> g = groupList(']');
            if (!lex.eat("]")) lex.fail("expected ']'");
            return AtelFormula::distKnow(g, unary());
        }
        if (lex.eat("C[")) {
            std::vector<std::string> g = groupList(']');
            if (!lex.eat("]")) lex.fail("expected ']'");
            return AtelFormula::commonKnow(g, unary());
        }
        if (lex.eat("(")) {
            AtelPtr a = formula();
            if (!lex.eat(")")) lex.fail("expected ')'");
            return a;
        }
        std::string w = lex.word();
        if (w.empty()) lex.fail("formula expected");
        if (w == "true") return AtelFormula::t();
        if (w == "false") return AtelFormula::f();
        if (env && !env->props.find(w)) lex.fail("unknown proposition '" + w + "'");
        return AtelFormula::atom(w);
    }
};

std::string groupText(const std::vector<std::string>& g) {
    std::string out;
    for (size_t i = 0; i < g.size(); ++i) {
        if (i) out += ",";
        out += g[i];
    }
    return out;
}

}  // namespace

AtelPtr parse_atel(std::string_view text, const Environment* env) {
    AtelParser p{ALexer{text, 0}, env};
    AtelPtr f = p.formula();
    p.lex.skip();
    if (p.lex.pos != text.size()) p.lex.fail("unexpected input after formula");
    return f;
}

std::string render_atel(const AtelPtr& f) {
    switch (f->kind) {
        case AKind::Atom: return f->text;
        case AKind::True: return "true";
        case AKind::False: return "false";
        case AKind::Not: return "!" + render_atel(f->lhs);
        case AKind::And: return "(" + render_atel(f->lhs) + " & " + render_atel(f->rhs) + ")";
        case AKind::Or: return "(" + render_atel(f->lhs) + " | " + render_atel(f->rhs) + ")";
        case AKind::Implies:
            return "(" + render_atel(f->lhs) + " -> " + render_atel(f->rhs) + ")";
        case AKind::CoalitionNext:
            return "<<" + groupText(f->group) + ">> X " + render_atel(f->lhs);
        case AKind::CoalitionGlobally:
            return "<<" + groupText(f->group) + ">> G " + render_atel(f->lhs);
        case AKind::CoalitionUntil:
            return "<<" + groupText(f->group) + ">> (" + render_atel(f->lhs) + " U " +
                   render_atel(f->rhs) + ")";
        case AKind::Know: return "K[" + f->group[0] + "] " + render_atel(f->lhs);
        case AKind::DistKnow: return "D[" + groupText(f->group) + "] " + render_atel(f->lhs);
        case AKind::CommonKnow: return "C[" + groupText(f->group) + "] " + render_atel(f->lhs);
    }
    return "?";
}

// ── Direct semantics ────────────────────────────────────────────────────────

std::vector<std::vector<IndividualStrategy>> group_strategy_pools(
    const Environment& env, GroupStrategyKind kind, const std::vector<AgentId>& group) {
    ClassPtr cls = kind == GroupStrategyKind::Deterministic
                       ? StrategyClass::deterministic()
                       : StrategyClass::locallyUniformDeterministic();
    std::vector<std::vector<IndividualStrategy>> out;
    for (AgentId i : group) out.push_back(enumerate_individual_strategies(env, i, *cls));
    return out;
}

namespace {

struct AtelEval {
    const Environment& env;
    GroupStrategyKind kind;
    std::map<std::pair<const AtelFormula*, StateId>, bool> memo;

    std::vector<AgentId> agentIds(const std::vector<std::string>& names) const {
        std::vector<AgentId> out;
        for (const std::string& n : names) {
            auto id = env.agents.find(n);
            if (!id) throw InputError("unknown agent '" + n + "'");
            out.push_back(*id);
        }
        return out;
    }

    // Successors of s along paths consistent with the group strategy: joint
    // actions whose group components are enabled, everyone else free.
    std::vector<StateId> consSucc(StateId s, const std::vector<AgentId>& group,
                                  const std::vector<const IndividualStrategy*>& strat) const {
        std::vector<StateId> out;
        int nj = env.jointCount();
        std::vector<ActionId> acts;
        for (int ja = 0; ja < nj; ++ja) {
            env.jointDecode(ja, acts);
            bool ok = true;
            for (size_t k = 0; k < group.size() && ok; ++k)
                ok = (strat[k]->enabled[static_cast<size_t>(s)] >>
                      acts[static_cast<size_t>(group[k])]) & 1;
            if (!ok) continue;
            for (StateId t : env.trans[static_cast<size_t>(s)][static_cast<size_t>(ja)])
                out.push_back(t);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    // All consistent paths from s satisfy "X goal".
    bool pathNext(StateId s, const std::vector<AgentId>& group,
                  const std::vector<const IndividualStrategy*>& strat, const AtelPtr& goal) {
        for (StateId t : consSucc(s, group, strat))
            if (!eval(goal, t)) return false;
        return true;
    }
    // All consistent paths from s satisfy "G goal": every state reachable in
    // the consistency-restricted graph satisfies the goal.
    bool pathGlobally(StateId s, const std::vector<AgentId>& group,
                      const std::vector<const IndividualStrategy*>& strat, const AtelPtr& goal) {
        std::vector<StateId> stack{s};
        std::vector<uint8_t> seen(static_cast<size_t>(env.stateCount()), 0);
        seen[static_cast<size_t>(s)] = 1;
        while (!stack.empty()) {
            StateId u = stack.back();
            stack.pop_back();
            if (!eval(goal, u)) return false;
            for (StateId t : consSucc(u, group, strat)) {
                if (!seen[static_cast<size_t>(t)]) {
                    seen[static_cast<size_t>(t)] = 1;
                    stack.push_back(t);
                }
            }
        }
        return true;
    }
    // All consistent paths from s satisfy (a U b): least fixpoint.
    bool pathUntil(StateId s, const std::vector<AgentId>& group,
                   const std::vector<const IndividualStrategy*>& strat, const AtelPtr& a,
                   const AtelPtr& b) {
        size_t n = static_cast<size_t>(env.stateCount());
        std::vector<char> res(n, 0), aHolds(n, 0);
        // Restrict attention to states reachable from s in the subgraph.
        std::vector<StateId> domain{s};
        std::vector<uint8_t> seen(n, 0);
        seen[static_cast<size_t>(s)] = 1;
        for (size_t i = 0; i < domain.size(); ++i)
            for (StateId t : consSucc(domain[i], group, strat))
                if (!seen[static_cast<size_t>(t)]) {
                    seen[static_cast<size_t>(t)] = 1;
                    domain.push_back(t);
                }
        for (StateId u : domain) {
            if (eval(b, u))
                res[static_cast<size_t>(u)] = 1;
            else
                aHolds[static_cast<size_t>(u)] = eval(a, u) ? 1 : 0;
        }
        bool changed = true;
        while (changed) {
            changed = false;
            for (StateId u : domain) {
                if (res[static_cast<size_t>(u)] || !aHolds[static_cast<size_t>(u)]) continue;
                bool all = true;
                for (StateId t : consSucc(u, group, strat))
                    if (!res[static_cast<size_t>(t)]) {
                        all = false;
                        break;
                    }
                if (all) {
                    res[static_cast<size_t>(u)] = 1;
                    changed = true;
                }
            }
        }
        return res[static_cast<size_t>(s)] != 0;
    }

    bool coalition(const AtelPtr& f, StateId s) {
        std::vector<AgentId> group = agentIds(f->group);
        std::vector<std::vector<IndividualStrategy>> pools =
            group_strategy_pools(env, kind, group);
        std::vector<size_t> idx(pools.size(), 0);
        std::vector<const IndividualStrategy*> strat(pools.size());
        while (true) {
            for (size_t k = 0; k < pools.size(); ++k) strat[k] = &pools[k][idx[k]];
            bool ok = false;
            switch (f->kind) {
                case AKind::CoalitionNext: ok = pathNext(s, group, strat, f->lhs); break;
                case AKind::CoalitionGlobally: ok = pathGlobally(s, group, strat, f->lhs); break;
                case AKind::CoalitionUntil: ok = pathUntil(s, group, strat, f->lhs, f->rhs); break;
                default: break;
            }
            if (ok) return true;
            if (pools.empty()) return false;
            size_t pos = 0;
            while (pos < pools.size()) {
                if (++idx[pos] < pools[pos].size()) break;
                idx[pos] = 0;
                ++pos;
            }
            if (pos == pools.size()) return false;
        }
    }

    bool knowledge(const AtelPtr& f, StateId s) {
        std::vector<AgentId> group = agentIds(f->group);
        auto related = [&](StateId t) {
            if (f->kind == AKind::DistKnow || f->kind == AKind::Know) {
                for (AgentId i : group)
                    if (env.obs[static_cast<size_t>(i)][static_cast<size_t>(t)] !=
                        env.obs[static_cast<size_t>(i)][static_cast<size_t>(s)])
                        return false;
                return true;
            }
            return false;
        };
        if (f->kind == AKind::CommonKnow) {
            // Reflexive-transitive closure of the union of the relations.
            std::vector<uint8_t> seen(static_cast<size_t>(env.stateCount()), 0);
            std::vector<StateId> stack{s};
            seen[static_cast<size_t>(s)] = 1;
            while (!stack.empty()) {
                StateId u = stack.back();
                stack.pop_back();
                if (!eval(f->lhs, u)) return false;
                for (StateId t = 0; t < env.stateCount(); ++t) {
                    if (seen[static_cast<size_t>(t)]) continue;
                    for (AgentId i : group) {
                        if (env.obs[static_cast<size_t>(i)][static_cast<size_t>(t)] ==
                            env.obs[static_cast<size_t>(i)][static_cast<size_t>(u)]) {
                            seen[static_cast<size_t>(t)] = 1;
                            stack.push_back(t);
                            break;
                        }
                    }
                }
            }
            return true;
        }
        // Distributed knowledge with the empty group: the universal relation.
        for (StateId t = 0; t < env.stateCount(); ++t)
            if (related(t) && !eval(f->lhs, t)) return false;
        return true;
    }

    bool eval(const AtelPtr& f, StateId s) {
        switch (f->kind) {
            case AKind::Atom: {
                auto p = env.props.find(f->text);
                if (!p) throw InputError("unknown proposition '" + f->text + "'");
                return env.hasLabel(s, *p);
            }
            case AKind::True: return true;
            case AKind::False: return false;
            case AKind::Not: return !eval(f->lhs, s);
            case AKind::And: return eval(f->lhs, s) && eval(f->rhs, s);
            case AKind::Or: return eval(f->lhs, s) || eval(f->rhs, s);
            case AKind::Implies: return !eval(f->lhs, s) || eval(f->rhs, s);
            default: break;
        }
        auto key = std::make_pair(f.get(), s);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        bool v;
        switch (f->kind) {
            case AKind::CoalitionNext:
            case AKind::CoalitionGlobally:
            case AKind::CoalitionUntil:
                v = coalition(f, s);
                break;
            default:
                v = knowledge(f, s);
                break;
        }
        memo.emplace(key, v);
        return v;
    }
};

}  // namespace

bool eval_atel(const Environment& env, GroupStrategyKind kind, StateId state, const AtelPtr& f) {
    if (state < 0 || state >= env.stateCount()) throw InputError("unknown state");
    AtelEval ev{env, kind, {}};
    return ev.eval(f, state);
}

// ── Translations ────────────────────────────────────────────────────────────

namespace {

std::vector<AgentTag> coalitionTags(const std::vector<std::string>& group) {
    std::vector<AgentTag> tags{AgentTag::env()};
    for (const std::string& a : group) tags.push_back(AgentTag::strategic(a));
    return tags;
}

FormulaPtr wrapSomeStrategy(FormulaPtr inner) {
    // !K[e]! inner: switch every strategy while holding the state fixed.
    return Formula::notf(Formula::know(AgentTag::env(), Formula::notf(std::move(inner))));
}

std::vector<AgentTag> baseTags(const std::vector<std::string>& group) {
    std::vector<AgentTag> tags;
    for (const std::string& a : group) tags.push_back(AgentTag::base(a));
    return tags;
}

}  // namespace

FormulaPtr translate_atel(const AtelPtr& f, const Environment& env) {
    switch (f->kind) {
        case AKind::Atom: return Formula::atom(f->text);
        case AKind::True: return Formula::t();
        case AKind::False: return Formula::f();
        case AKind::Not: return Formula::notf(translate_atel(f->lhs, env));
        case AKind::And:
            return Formula::andf(translate_atel(f->lhs, env), translate_atel(f->rhs, env));
        case AKind::Or:
            return Formula::orf(translate_atel(f->lhs, env), translate_atel(f->rhs, env));
        case AKind::Implies:
            return Formula::implies(translate_atel(f->lhs, env), translate_atel(f->rhs, env));
        case AKind::CoalitionNext:
            return wrapSomeStrategy(
                Formula::distKnow(coalitionTags(f->group), Formula::next(translate_atel(f->lhs, env))));
        case AKind::CoalitionGlobally:
            return wrapSomeStrategy(Formula::distKnow(coalitionTags(f->group),
                                                      Formula::globally(translate_atel(f->lhs, env))));
        case AKind::CoalitionUntil:
            return wrapSomeStrategy(Formula::distKnow(
                coalitionTags(f->group),
                Formula::until(translate_atel(f->lhs, env), translate_atel(f->rhs, env))));
        case AKind::Know:
            return Formula::know(AgentTag::base(f->group[0]), translate_atel(f->lhs, env));
        case AKind::DistKnow:
            return Formula::distKnow(baseTags(f->group), translate_atel(f->lhs, env));
        case AKind::CommonKnow:
            return Formula::commonKnow(baseTags(f->group), translate_atel(f->lhs, env));
    }
    throw InputError("unreachable");
}

std::pair<Environment, ClassPtr> prepare_atel_instance(const Environment& env,
                                                       GroupStrategyKind kind) {
    // Both built-in families are restrictable (they are per-agent products)
    // and extendable (any agent added to a group can pick any strategy of the
    // family); the translation theorem needs both.
    ClassPtr base = kind == GroupStrategyKind::Deterministic
                        ? StrategyClass::deterministic()
                        : StrategyClass::locallyUniformDeterministic();
    return {make_all_initial(env), StrategyClass::atelCompletion(base)};
}

FormulaPtr translate_strategic_knowledge(GroupKnowledge kind,
                                         const std::vector<std::string>& knowers,
                                         const std::vector<std::string>& strategizers,
                                         const FormulaPtr& goal, const Environment&) {
    switch (kind) {
        case GroupKnowledge::D: {
            std::vector<AgentTag> tags = baseTags(knowers);
            for (const std::string& a : strategizers) tags.push_back(AgentTag::strategic(a));
            return wrapSomeStrategy(Formula::distKnow(tags, goal));
        }
        case GroupKnowledge::E: {
            std::vector<FormulaPtr> parts;
            for (const std::string& k : knowers) {
                std::vector<AgentTag> tags{AgentTag::base(k)};
                for (const std::string& a : strategizers) tags.push_back(AgentTag::strategic(a));
                parts.push_back(Formula::distKnow(tags, goal));
            }
            return wrapSomeStrategy(Formula::conj(parts));
        }
        case GroupKnowledge::C: {
            // exists x (loc(sig(G),x) & C[H](loc(sig(G),x) -> goal))
            std::string var = "x";
            std::vector<FormulaPtr> eqs;
            for (const std::string& a : strategizers)
                eqs.push_back(Formula::localEq(AgentTag::strategic(a), var));
            FormulaPtr lid = Formula::conj(eqs);
            FormulaPtr body = Formula::andf(
                lid, Formula::commonKnow(baseTags(knowers), Formula::implies(lid, goal)));
            return wrapSomeStrategy(Formula::exists(var, body));
        }
    }
    throw InputError("unreachable");
}

FormulaPtr translate_csl_normal_form(
    const std::vector<std::pair<GroupKnowledge, std::vector<std::string>>>& chain,
    const std::vector<std::string>& strategizers, const FormulaPtr& goal, const Environment&) {
    if (chain.empty()) throw InputError("constructive-knowledge chain is empty");
    std::string var = "x";
    std::vector<FormulaPtr> eqs;
    for (const std::string& a : strategizers)
        eqs.push_back(Formula::localEq(AgentTag::strategic(a), var));
    FormulaPtr lid = Formula::conj(eqs);
    FormulaPtr body = Formula::implies(lid, goal);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        switch (it->first) {
            case GroupKnowledge::D: body = Formula::distKnow(baseTags(it->second), body); break;
            case GroupKnowledge::E: body = Formula::everyoneKnow(baseTags(it->second), body); break;
            case GroupKnowledge::C: body = Formula::commonKnow(baseTags(it->second), body); break;
        }
    }
    return Formula::exists(var, body);
}

std::string register_commitment(Environment& env, const std::string& agent,
                                const std::string& strategyName,
                                const IndividualStrategy& strategy) {
    auto id = env.agents.find(agent);
    if (!id) throw InputError("unknown agent '" + agent + "'");
    if (!strategy.wellFormed(env, *id)) throw InputError("malformed strategy");
    std::string prop = "commits_" + agent + "_" + strategyName;
    env.registerStrategyAtom(prop, *id, strategy.enabled);
    return prop;
}

namespace {

// Add sig(i) to every knowledge group of a translated formula.
FormulaPtr pinStrategy(const FormulaPtr& f, const std::string& agent) {
    auto rec = [&](const FormulaPtr& g) { return pinStrategy(g, agent); };
    AgentTag pin = AgentTag::strategic(agent);
    auto extended = [&](std::vector<AgentTag> tags) {
        if (std::find(tags.begin(), tags.end(), pin) == tags.end()) tags.push_back(pin);
        return tags;
    };
    switch (f->kind) {
        case FKind::Know:
            return Formula::distKnow(extended({f->tag}), rec(f->lhs));
        case FKind::DistKnow:
            return Formula::distKnow(extended(f->tags), rec(f->lhs));
        case FKind::CommonKnow:
            return Formula::commonKnow(extended(f->tags), rec(f->lhs));
        case FKind::EveryoneKnow: {
            std::vector<FormulaPtr> parts;
            for (const AgentTag& t : f->tags)
                parts.push_back(Formula::distKnow(extended({t}), rec(f->lhs)));
            return Formula::conj(parts);
        }
        default: {
            auto out = std::make_shared<Formula>(*f);
            if (f->lhs) out->lhs = rec(f->lhs);
            if (f->rhs) out->rhs = rec(f->rhs);
            return out;
        }
    }
}

}  // namespace

FormulaPtr translate_catl(const std::string& agent, const std::string& strategyName,
                          const AtelPtr& goal, const Environment& env) {
    std::string prop = "commits_" + agent + "_" + strategyName;
    auto p = env.props.find(prop);
    if (!p || !env.strategyAtoms.count(*p))
        throw InputError("unknown strategy name '" + strategyName + "' for agent " + agent);
    FormulaPtr pinned = pinStrategy(translate_atel(goal, env), agent);
    std::vector<AgentTag> tags{AgentTag::env()};
    for (AgentId i = 0; i < env.agentCount(); ++i)
        if (env.agents.name(i) != agent) tags.push_back(AgentTag::strategic(env.agents.name(i)));
    return Formula::distKnow(tags, Formula::implies(Formula::atom(prop), pinned));
}

}  // namespace esl::atel
