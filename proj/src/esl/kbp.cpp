#include "esl/kbp.hpp"

#include <algorithm>
#include <sstream>

namespace esl::kbp {

const std::vector<Clause>* Program::clausesFor(const std::string& agent) const {
    for (const auto& [name, clauses] : perAgent)
        if (name == agent) return &clauses;
    return nullptr;
}

// ── Parsing ─────────────────────────────────────────────────────────────────

namespace {

std::string trim(std::string_view s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

void validateGuardBody(const FormulaPtr& f, int line) {
    switch (f->kind) {
        case FKind::Exists:
        case FKind::LocalEq:
            throw ParseError("guard bodies cannot quantify over global states", line);
        case FKind::Know:
            if (f->tag.kind != AgentTag::Base)
                throw ParseError("guard bodies may mention base agents only", line);
            break;
        case FKind::DistKnow:
        case FKind::CommonKnow:
        case FKind::EveryoneKnow:
            for (const AgentTag& t : f->tags)
                if (t.kind == AgentTag::Strategic)
                    throw ParseError("guard bodies may mention base agents only", line);
            break;
        default:
            break;
    }
    if (f->lhs) validateGuardBody(f->lhs, line);
    if (f->rhs) validateGuardBody(f->rhs, line);
}

}  // namespace

Program parse_kbp(std::string_view text, const Environment& env) {
    Program out;
    std::istringstream in{std::string(text)};
    std::string rawLine;
    int lineNo = 0;
    while (std::getline(in, rawLine)) {
        ++lineNo;
        std::string line = rawLine;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.rfind("agent ", 0) != 0) throw ParseError("expected 'agent <name>: do ... od'", lineNo);
        auto colon = line.find(':');
        if (colon == std::string::npos) throw ParseError("missing ':' after agent name", lineNo);
        std::string agent = trim(line.substr(6, colon - 6));
        auto agentId = env.agents.find(agent);
        if (!agentId) throw ParseError("unknown agent '" + agent + "'", lineNo);
        std::string rest = trim(line.substr(colon + 1));
        if (rest.rfind("do", 0) != 0 || rest.size() < 4 || rest.substr(rest.size() - 2) != "od")
            throw ParseError("agent block must be 'do <clauses> od'", lineNo);
        std::string body = trim(rest.substr(2, rest.size() - 4));

        // Split on "[]", then each clause at its last "->".
        std::vector<std::string> clauseTexts;
        size_t pos = 0;
        while (true) {
            size_t sep = body.find("[]", pos);
            if (sep == std::string::npos) {
                clauseTexts.push_back(trim(body.substr(pos)));
                break;
            }
            clauseTexts.push_back(trim(body.substr(pos, sep - pos)));
            pos = sep + 2;
        }
        struct Raw {
            std::string guardText;
            std::string action;
            bool otherwise = false;
        };
        std::vector<Raw> raws;
        for (const std::string& ct : clauseTexts) {
            size_t arrow = ct.rfind("->");
            if (arrow == std::string::npos)
                throw ParseError("clause needs '<guard> -> <action>'", lineNo);
            Raw r;
            r.guardText = trim(ct.substr(0, arrow));
            r.action = trim(ct.substr(arrow + 2));
            if (r.action.empty()) throw ParseError("clause action missing", lineNo);
            if (!env.actions[static_cast<size_t>(*agentId)].find(r.action))
                throw ParseError("unknown action '" + r.action + "' for agent " + agent, lineNo);
            r.otherwise = r.guardText == "otherwise";
            raws.push_back(std::move(r));
        }
        std::vector<Clause> clauses;
        std::vector<FormulaPtr> explicitGuards;
        for (const Raw& r : raws) {
            if (r.otherwise) continue;
            FormulaPtr g = parse_formula(r.guardText, &env);
            if (g->kind != FKind::Know || g->tag.kind != AgentTag::Base || g->tag.agent != agent)
                throw ParseError("guards must have the form K[" + agent + "] <body>", lineNo);
            validateGuardBody(g->lhs, lineNo);
            explicitGuards.push_back(g);
        }
        size_t nextExplicit = 0;
        for (const Raw& r : raws) {
            Clause c;
            c.action = r.action;
            if (r.otherwise) {
                // K_i !(disjunction of the other guards).
                c.guard = Formula::know(AgentTag::base(agent),
                                        Formula::notf(Formula::disj(explicitGuards)));
            } else {
                c.guard = explicitGuards[nextExplicit++];
            }
            clauses.push_back(std::move(c));
        }
        std::vector<std::string> seen;
        for (const Clause& c : clauses) {
            if (std::find(seen.begin(), seen.end(), c.action) != seen.end())
                throw ParseError("action '" + c.action + "' appears twice", lineNo);
            seen.push_back(c.action);
        }
        for (const auto& [name, _] : out.perAgent)
            if (name == agent) throw ParseError("agent '" + agent + "' declared twice", lineNo);
        out.perAgent.emplace_back(agent, std::move(clauses));
    }
    if (out.perAgent.empty()) throw ParseError("program declares no agents");
    return out;
}

std::string render_kbp(const Program& p) {
    std::string out;
    for (const auto& [agent, clauses] : p.perAgent) {
        out += "agent " + agent + ": do ";
        for (size_t i = 0; i < clauses.size(); ++i) {
            if (i) out += " [] ";
            out += render_formula(clauses[i].guard) + " -> " + clauses[i].action;
        }
        out += " od\n";
    }
    return out;
}

// ── Action recording ────────────────────────────────────────────────────────

StateId ActionRecording::plainState(StateId orig) const {
    for (StateId s = 0; s < static_cast<StateId>(origOf.size()); ++s)
        if (origOf[static_cast<size_t>(s)] == orig && recordedJa[static_cast<size_t>(s)] < 0)
            return s;
    throw InputError("state with no recorded action not found");
}

StrategyProfile ActionRecording::lift(const Environment& source, const StrategyProfile& p) const {
    StrategyProfile out;
    out.byAgent.resize(p.byAgent.size());
    for (size_t i = 0; i < p.byAgent.size(); ++i) {
        out.byAgent[i].enabled.resize(origOf.size());
        for (size_t s = 0; s < origOf.size(); ++s)
            out.byAgent[i].enabled[s] =
                p.byAgent[i].enabled[static_cast<size_t>(origOf[s])];
    }
    (void)source;
    return out;
}

StrategyProfile ActionRecording::project(const Environment& source,
                                         const StrategyProfile& p) const {
    StrategyProfile out;
    out.byAgent.resize(p.byAgent.size());
    for (size_t i = 0; i < p.byAgent.size(); ++i) {
        out.byAgent[i].enabled.resize(static_cast<size_t>(source.stateCount()));
        for (StateId orig = 0; orig < source.stateCount(); ++orig)
            out.byAgent[i].enabled[static_cast<size_t>(orig)] =
                p.byAgent[i].enabled[static_cast<size_t>(plainState(orig))];
    }
    return out;
}

ActionRecording make_action_recording(const Environment& env) {
    ActionRecording out;
    Environment& e2 = out.env;
    for (PropId p = 0; p < env.props.size(); ++p) e2.props.intern(env.props.name(p));
    for (AgentId i = 0; i < env.agentCount(); ++i) {
        AgentId id = e2.addAgent(env.agents.name(i));
        for (ActionId a = 0; a < env.actionCount(i); ++a)
            e2.addAction(id, env.actions[static_cast<size_t>(i)].name(a));
    }
    int nj = env.jointCount();
    // A plain copy of every state, then one copy per joint action that can
    // produce the state.
    std::vector<std::vector<StateId>> recorded(static_cast<size_t>(env.stateCount()),
                                               std::vector<StateId>(static_cast<size_t>(nj), -1));
    auto newState = [&](StateId orig, int ja) {
        std::string name = env.states.name(orig) + "~" + (ja < 0 ? "i" : std::to_string(ja));
        StateId s = e2.addState(name);
        out.origOf.push_back(orig);
        out.recordedJa.push_back(ja);
        for (AgentId i = 0; i < env.agentCount(); ++i)
            e2.setObservation(
                i, s,
                env.obsNames[static_cast<size_t>(i)].name(
                    env.obs[static_cast<size_t>(i)][static_cast<size_t>(orig)]));
        for (PropId p : env.labels[static_cast<size_t>(orig)])
            e2.addLabel(s, env.props.name(p));
        if (ja >= 0) {
            std::vector<ActionId> acts;
            env.jointDecode(ja, acts);
            for (AgentId i = 0; i < env.agentCount(); ++i)
                e2.addLabel(s, "did_" + env.agents.name(i) + "=" +
                                   env.actions[static_cast<size_t>(i)].name(
                                       acts[static_cast<size_t>(i)]));
        }
        return s;
    };
    std::vector<StateId> plain;
    for (StateId s = 0; s < env.stateCount(); ++s) plain.push_back(newState(s, -1));
    for (StateId s = 0; s < env.stateCount(); ++s)
        for (int ja = 0; ja < nj; ++ja)
            for (StateId t : env.trans[static_cast<size_t>(s)][static_cast<size_t>(ja)])
                if (recorded[static_cast<size_t>(t)][static_cast<size_t>(ja)] < 0)
                    recorded[static_cast<size_t>(t)][static_cast<size_t>(ja)] = newState(t, ja);
    for (StateId s : env.initial) e2.initial.push_back(plain[static_cast<size_t>(s)]);
    e2.seal();
    for (StateId s2 = 0; s2 < e2.stateCount(); ++s2) {
        StateId orig = out.origOf[static_cast<size_t>(s2)];
        for (int ja = 0; ja < nj; ++ja)
            for (StateId t : env.trans[static_cast<size_t>(orig)][static_cast<size_t>(ja)])
                e2.addTransition(s2, ja, recorded[static_cast<size_t>(t)][static_cast<size_t>(ja)]);
    }
    e2.seal();
    return out;
}

// ── Formula machinery ───────────────────────────────────────────────────────

namespace {
FormulaPtr dollarRec(const FormulaPtr& f, const Environment& env, int& freshCounter);
}

FormulaPtr dollar_transform(const FormulaPtr& f, const Environment& env) {
    int freshCounter = 0;
    return dollarRec(f, env, freshCounter);
}

namespace {
FormulaPtr dollarRec(const FormulaPtr& f, const Environment& env, int& freshCounter) {
    switch (f->kind) {
        case FKind::Atom:
        case FKind::True:
        case FKind::False:
            return f;
        case FKind::Exists:
        case FKind::LocalEq:
            throw InputError("the transform takes plain temporal epistemic formulas");
        case FKind::Know: {
            if (f->tag.kind != AgentTag::Base)
                throw InputError("strategic tag in the transform input");
            std::vector<AgentTag> tags{f->tag};
            for (const AgentTag& t : all_strategic_tags(env)) tags.push_back(t);
            return Formula::distKnow(tags, dollarRec(f->lhs, env, freshCounter));
        }
        case FKind::DistKnow:
        case FKind::EveryoneKnow: {
            for (const AgentTag& t : f->tags)
                if (t.kind != AgentTag::Base)
                    throw InputError("strategic tag in the transform input");
            if (f->kind == FKind::EveryoneKnow) {
                std::vector<FormulaPtr> parts;
                for (const AgentTag& t : f->tags) {
                    std::vector<AgentTag> tags{t};
                    for (const AgentTag& st : all_strategic_tags(env)) tags.push_back(st);
                    parts.push_back(Formula::distKnow(tags, dollarRec(f->lhs, env, freshCounter)));
                }
                return Formula::conj(parts);
            }
            std::vector<AgentTag> tags = f->tags;
            for (const AgentTag& t : all_strategic_tags(env)) tags.push_back(t);
            return Formula::distKnow(tags, dollarRec(f->lhs, env, freshCounter));
        }
        case FKind::CommonKnow: {
            for (const AgentTag& t : f->tags)
                if (t.kind != AgentTag::Base)
                    throw InputError("strategic tag in the transform input");
            // exists x (loc(sig(Ags),x) & C[G](loc(sig(Ags),x) -> body))
            std::string var = "s" + std::to_string(freshCounter++);
            std::vector<FormulaPtr> eqs;
            for (const AgentTag& t : all_strategic_tags(env))
                eqs.push_back(Formula::localEq(t, var));
            FormulaPtr lid = Formula::conj(eqs);
            FormulaPtr body = Formula::implies(lid, dollarRec(f->lhs, env, freshCounter));
            return Formula::exists(var, Formula::andf(lid, Formula::commonKnow(f->tags, body)));
        }
        default: {
            auto out = std::make_shared<Formula>(*f);
            if (f->lhs) out->lhs = dollarRec(f->lhs, env, freshCounter);
            if (f->rhs) out->rhs = dollarRec(f->rhs, env, freshCounter);
            return out;
        }
    }
}
}  // namespace

FormulaPtr imp_formula(const Program& p, const Environment& recordingEnv) {
    std::vector<FormulaPtr> parts;
    for (const auto& [agent, clauses] : p.perAgent) {
        auto agentId = recordingEnv.agents.find(agent);
        if (!agentId) throw InputError("unknown agent '" + agent + "'");
        for (const Clause& c : clauses) {
            if (!recordingEnv.actions[static_cast<size_t>(*agentId)].find(c.action))
                throw InputError("action '" + c.action + "' not in the environment");
            FormulaPtr did = Formula::atom("did_" + agent + "=" + c.action);
            FormulaPtr canDo = Formula::pathExists(Formula::next(did));
            parts.push_back(Formula::iff(dollar_transform(c.guard, recordingEnv), canDo));
        }
    }
    std::vector<AgentTag> sig = all_strategic_tags(recordingEnv);
    return Formula::distKnow(sig, Formula::conj(parts));
}

bool is_implementation_direct(const Environment& env, const StrategyProfile& profile,
                              const Program& p) {
    SingletonEvaluator ev(env, profile);
    for (const auto& [agent, clauses] : p.perAgent) {
        auto agentId = env.agents.find(agent);
        if (!agentId) throw InputError("unknown agent '" + agent + "'");
        for (const Clause& c : clauses)
            if (!env.actions[static_cast<size_t>(*agentId)].find(c.action))
                throw InputError("action '" + c.action + "' not in the environment");
    }
    for (StateId s : ev.reachableStates()) {
        for (const auto& [agent, clauses] : p.perAgent) {
            AgentId i = *env.agents.find(agent);
            ActionSet enabledByGuards = 0;
            for (const Clause& c : clauses) {
                if (ev.eval(s, c.guard)) {
                    ActionId a = *env.actions[static_cast<size_t>(i)].find(c.action);
                    enabledByGuards |= ActionSet{1} << a;
                }
            }
            if (enabledByGuards == 0)
                throw CoverageError("no action enabled at reachable state '" +
                                    env.states.name(s) + "' for agent " + agent);
            if (profile.byAgent[static_cast<size_t>(i)].enabled[static_cast<size_t>(s)] !=
                enabledByGuards)
                return false;
        }
    }
    return true;
}

Verdict check_kbp(const Environment& env, const Program& p, const KbpQuery& query,
                  const CheckOptions& opts) {
    ActionRecording rec = make_action_recording(env);
    FormulaPtr imp = imp_formula(p, rec.env);
    Instance instance;
    instance.env = &rec.env;
    instance.cls = StrategyClass::locallyUniform();
    if (query.kind == KbpQuery::Exists) {
        instance.formula =
            Formula::notf(Formula::distKnow({}, Formula::notf(imp)));
        CheckOptions o = opts;
        o.wantWitness = true;
        Verdict v = check(instance, o);
        if (v.witness) {
            v.witness->state = rec.origOf[static_cast<size_t>(v.witness->state)];
            v.witness->profile = rec.project(env, v.witness->profile);
        }
        return v;
    }
    if (!query.formula) throw InputError("verification query needs a formula");
    instance.formula = Formula::distKnow(
        {}, Formula::implies(imp, dollar_transform(query.formula, rec.env)));
    return check(instance, opts);
}

std::vector<StrategyProfile> find_implementations(const Environment& env, const Program& p,
                                                  const StrategyClass& cls) {
    ProfileSpace space = enumerate_profiles(env, cls);
    std::vector<StrategyProfile> out;
    for (uint64_t i = 0; i < space.size(); ++i) {
        StrategyProfile candidate = space.materialize(i);
        try {
            if (is_implementation_direct(env, candidate, p)) out.push_back(std::move(candidate));
        } catch (const CoverageError&) {
            // A profile whose guards enable nothing somewhere it reaches is
            // not an implementation.
        }
    }
    return out;
}

}  // namespace esl::kbp
