#include "esl/environment.hpp"

#include <algorithm>

namespace esl {

Rational Rational::parse(std::string_view s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string_view::npos)
            return Rational(std::stoll(std::string(s)));
        return Rational(std::stoll(std::string(s.substr(0, slash))),
                        std::stoll(std::string(s.substr(slash + 1))));
    } catch (const std::exception&) {
        throw ParseError("bad rational literal '" + std::string(s) + "'");
    }
}

std::string Environment::jointName(int ja) const {
    std::vector<ActionId> acts;
    jointDecode(ja, acts);
    std::string out = "(";
    for (int i = 0; i < agentCount(); ++i) {
        if (i) out += ",";
        out += actions[static_cast<size_t>(i)].name(acts[static_cast<size_t>(i)]);
    }
    out += ")";
    return out;
}

AgentId Environment::addAgent(std::string_view name) {
    if (name == "e") throw ParseError("agent name 'e' is reserved for the environment tag");
    AgentId id = agents.intern(name);
    if (static_cast<size_t>(id) >= actions.size()) {
        actions.emplace_back();
        obsNames.emplace_back();
        obs.emplace_back();
    }
    return id;
}

StateId Environment::addState(std::string_view name) {
    StateId id = states.intern(name);
    if (static_cast<size_t>(id) >= labels.size()) {
        labels.emplace_back();
        trans.emplace_back();
        for (auto& o : obs) o.resize(static_cast<size_t>(states.size()), -1);
    }
    return id;
}

ActionId Environment::addAction(AgentId agent, std::string_view name) {
    ActionId id = actions.at(static_cast<size_t>(agent)).intern(name);
    if (id >= kMaxActionsPerAgent)
        throw ParseError("too many actions for one agent (limit " +
                         std::to_string(kMaxActionsPerAgent) + ")");
    return id;
}

void Environment::setObservation(AgentId agent, StateId s, std::string_view value) {
    auto& row = obs.at(static_cast<size_t>(agent));
    if (static_cast<size_t>(s) >= row.size()) row.resize(static_cast<size_t>(states.size()), -1);
    row[static_cast<size_t>(s)] = obsNames[static_cast<size_t>(agent)].intern(value);
}

void Environment::addLabel(StateId s, std::string_view prop) {
    PropId p = props.intern(prop);
    auto& row = labels.at(static_cast<size_t>(s));
    auto pos = std::lower_bound(row.begin(), row.end(), p);
    if (pos == row.end() || *pos != p) row.insert(pos, p);
}

void Environment::addTransition(StateId from, int jointAction, StateId to) {
    auto& byJa = trans.at(static_cast<size_t>(from));
    if (byJa.size() < static_cast<size_t>(jointCount())) byJa.resize(static_cast<size_t>(jointCount()));
    auto& succs = byJa[static_cast<size_t>(jointAction)];
    auto pos = std::lower_bound(succs.begin(), succs.end(), to);
    if (pos == succs.end() || *pos != to) succs.insert(pos, to);
}

void Environment::registerStrategyAtom(std::string_view prop, AgentId agent,
                                       std::vector<ActionSet> enabled) {
    PropId p = props.intern(prop);
    strategyAtoms[p] = StrategyAtom{agent, std::move(enabled)};
}

void Environment::seal() {
    for (auto& byJa : trans) byJa.resize(static_cast<size_t>(jointCount()));
    for (auto& o : obs) o.resize(static_cast<size_t>(states.size()), -1);
    std::sort(initial.begin(), initial.end());
    initial.erase(std::unique(initial.begin(), initial.end()), initial.end());
}

std::vector<Violation> validate_environment(const Environment& env) {
    std::vector<Violation> out;
    if (env.agentCount() == 0)
        out.push_back({Violation::NoAgents, "environment declares no agents"});
    if (env.initial.empty())
        out.push_back({Violation::EmptyInitial, "initial state set is empty"});
    for (AgentId i = 0; i < env.agentCount(); ++i) {
        if (env.actionCount(i) == 0)
            out.push_back({Violation::EmptyActions,
                           "agent " + env.agents.name(i) + " has no actions"});
        for (StateId s = 0; s < env.stateCount(); ++s) {
            if (env.obs[static_cast<size_t>(i)][static_cast<size_t>(s)] < 0)
                out.push_back({Violation::PartialObservation,
                               "agent " + env.agents.name(i) + " has no observation at state " +
                                   env.states.name(s)});
        }
    }
    if (env.agentCount() == 0) return out;
    int nj = env.jointCount();
    for (StateId s = 0; s < env.stateCount(); ++s) {
        for (int ja = 0; ja < nj; ++ja) {
            if (env.trans[static_cast<size_t>(s)][static_cast<size_t>(ja)].empty())
                out.push_back({Violation::Seriality,
                               "no successor from state " + env.states.name(s) +
                                   " under joint action " + env.jointName(ja)});
        }
    }
    return out;
}

Environment make_all_initial(const Environment& env) {
    Environment out = env;
    out.initial.clear();
    for (StateId s = 0; s < env.stateCount(); ++s) out.initial.push_back(s);
    return out;
}

}  // namespace esl
