#include "esl/textio.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace esl {

namespace {

struct Line {
    int no;
    std::string text;
};

std::vector<Line> splitLines(std::string_view text) {
    std::vector<Line> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        size_t b = line.find_last_not_of(" \t\r");
        out.push_back({no, line.substr(a, b - a + 1)});
    }
    return out;
}

std::vector<std::string> words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

// "(a,b)" with per-agent "*" wildcards -> the matching joint action indices.
std::vector<int> expandJoint(const Environment& env, const std::string& text, int lineNo) {
    if (text.size() < 2 || text.front() != '(' || text.back() != ')')
        throw ParseError("joint action must look like (a,b)", lineNo);
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text.substr(1, text.size() - 2)) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (static_cast<int>(parts.size()) != env.agentCount())
        throw ParseError("joint action lists " + std::to_string(parts.size()) +
                             " components for " + std::to_string(env.agentCount()) + " agents",
                         lineNo);
    std::vector<std::vector<ActionId>> choices;
    for (AgentId i = 0; i < env.agentCount(); ++i) {
        if (parts[static_cast<size_t>(i)] == "*") {
            std::vector<ActionId> all;
            for (ActionId a = 0; a < env.actionCount(i); ++a) all.push_back(a);
            choices.push_back(std::move(all));
        } else {
            auto a = env.actions[static_cast<size_t>(i)].find(parts[static_cast<size_t>(i)]);
            if (!a)
                throw ParseError("unknown action '" + parts[static_cast<size_t>(i)] +
                                     "' for agent " + env.agents.name(i),
                                 lineNo);
            choices.push_back({*a});
        }
    }
    std::vector<int> out;
    std::vector<size_t> idx(choices.size(), 0);
    std::vector<ActionId> acts(choices.size());
    while (true) {
        for (size_t i = 0; i < choices.size(); ++i) acts[i] = choices[i][idx[i]];
        out.push_back(env.jointEncode(acts));
        size_t pos = 0;
        while (pos < choices.size()) {
            if (++idx[pos] < choices[pos].size()) break;
            idx[pos] = 0;
            ++pos;
        }
        if (pos == choices.size()) break;
    }
    return out;
}

ActionSet parseActionSet(const Environment& env, AgentId agent, const std::string& text,
                         int lineNo) {
    std::string inner = text;
    size_t a = inner.find_first_not_of(" \t");
    size_t b = inner.find_last_not_of(" \t");
    inner = a == std::string::npos ? std::string() : inner.substr(a, b - a + 1);
    if (!inner.empty() && inner.front() == '{' && inner.back() == '}')
        inner = inner.substr(1, inner.size() - 2);
    std::replace(inner.begin(), inner.end(), ',', ' ');
    ActionSet mask = 0;
    for (const std::string& w : words(inner)) {
        auto a = env.actions[static_cast<size_t>(agent)].find(w);
        if (!a)
            throw ParseError("unknown action '" + w + "' for agent " + env.agents.name(agent),
                             lineNo);
        mask |= ActionSet{1} << *a;
    }
    if (mask == 0) throw ParseError("empty action set", lineNo);
    return mask;
}

}  // namespace

Environment parse_environment(std::string_view text) {
    std::vector<Line> lines = splitLines(text);
    Environment env;
    auto headed = [&](const Line& l, const char* head) -> std::optional<std::string> {
        std::string prefix = std::string(head);
        if (l.text.rfind(prefix, 0) != 0) return std::nullopt;
        return l.text.substr(prefix.size());
    };

    // Sections may appear in any order; process by kind.
    for (const Line& l : lines)
        if (auto rest = headed(l, "agents:"))
            for (const std::string& w : words(*rest)) env.addAgent(w);
    for (const Line& l : lines) {
        if (auto rest = headed(l, "actions ")) {
            auto colon = rest->find(':');
            if (colon == std::string::npos) throw ParseError("missing ':'", l.no);
            std::string agent = *words(rest->substr(0, colon)).begin();
            auto id = env.agents.find(agent);
            if (!id) throw ParseError("unknown agent '" + agent + "'", l.no);
            for (const std::string& w : words(rest->substr(colon + 1))) env.addAction(*id, w);
        }
    }
    for (const Line& l : lines)
        if (auto rest = headed(l, "states:"))
            for (const std::string& w : words(*rest)) env.addState(w);
    for (const Line& l : lines) {
        if (auto rest = headed(l, "init:")) {
            for (const std::string& w : words(*rest)) {
                auto s = env.states.find(w);
                if (!s) throw ParseError("unknown state '" + w + "'", l.no);
                env.initial.push_back(*s);
            }
        }
    }
    env.seal();
    for (const Line& l : lines) {
        if (auto rest = headed(l, "obs ")) {
            auto colon = rest->find(':');
            if (colon == std::string::npos) throw ParseError("missing ':'", l.no);
            std::string agent = *words(rest->substr(0, colon)).begin();
            auto id = env.agents.find(agent);
            if (!id) throw ParseError("unknown agent '" + agent + "'", l.no);
            std::optional<std::string> catchAll;
            std::vector<std::pair<StateId, std::string>> entries;
            for (const std::string& w : words(rest->substr(colon + 1))) {
                auto eq = w.find('=');
                if (eq == std::string::npos)
                    throw ParseError("observation entries look like state=value", l.no);
                std::string key = w.substr(0, eq), value = w.substr(eq + 1);
                if (key == "*") {
                    catchAll = value;
                    continue;
                }
                auto s = env.states.find(key);
                if (!s) throw ParseError("unknown state '" + key + "'", l.no);
                entries.emplace_back(*s, value);
            }
            if (catchAll)
                for (StateId s = 0; s < env.stateCount(); ++s)
                    env.setObservation(*id, s, *catchAll);
            for (auto& [s, value] : entries) env.setObservation(*id, s, value);
        }
    }
    for (const Line& l : lines) {
        if (auto rest = headed(l, "label ")) {
            auto colon = rest->find(':');
            if (colon == std::string::npos) throw ParseError("missing ':'", l.no);
            std::string state = *words(rest->substr(0, colon)).begin();
            auto s = env.states.find(state);
            if (!s) throw ParseError("unknown state '" + state + "'", l.no);
            for (const std::string& w : words(rest->substr(colon + 1))) env.addLabel(*s, w);
        }
    }
    for (const Line& l : lines) {
        if (auto rest = headed(l, "trans ")) {
            auto colon = rest->find(':');
            if (colon == std::string::npos) throw ParseError("missing ':'", l.no);
            std::vector<std::string> lhs = words(rest->substr(0, colon));
            if (lhs.size() != 2)
                throw ParseError("transitions look like 'trans <state> (a,b): <targets>'", l.no);
            auto s = env.states.find(lhs[0]);
            if (!s) throw ParseError("unknown state '" + lhs[0] + "'", l.no);
            std::vector<int> jas = expandJoint(env, lhs[1], l.no);
            for (const std::string& w : words(rest->substr(colon + 1))) {
                auto t = env.states.find(w);
                if (!t) throw ParseError("unknown state '" + w + "'", l.no);
                for (int ja : jas) env.addTransition(*s, ja, *t);
            }
        }
    }
    for (const Line& l : lines) {
        bool known = false;
        for (const char* head :
             {"agents:", "actions ", "states:", "init:", "obs ", "label ", "trans "})
            if (l.text.rfind(head, 0) == 0) known = true;
        if (!known) throw ParseError("unknown section '" + l.text + "'", l.no);
    }
    env.seal();
    if (env.agentCount() == 0) throw ParseError("environment declares no agents");
    if (env.stateCount() == 0) throw ParseError("environment declares no states");
    return env;
}

std::string serialize_environment(const Environment& env) {
    std::ostringstream out;
    out << "agents:";
    for (AgentId i = 0; i < env.agentCount(); ++i) out << " " << env.agents.name(i);
    out << "\n";
    for (AgentId i = 0; i < env.agentCount(); ++i) {
        out << "actions " << env.agents.name(i) << ":";
        for (ActionId a = 0; a < env.actionCount(i); ++a)
            out << " " << env.actions[static_cast<size_t>(i)].name(a);
        out << "\n";
    }
    out << "states:";
    for (StateId s = 0; s < env.stateCount(); ++s) out << " " << env.states.name(s);
    out << "\ninit:";
    for (StateId s : env.initial) out << " " << env.states.name(s);
    out << "\n";
    for (AgentId i = 0; i < env.agentCount(); ++i) {
        out << "obs " << env.agents.name(i) << ":";
        for (StateId s = 0; s < env.stateCount(); ++s)
            out << " " << env.states.name(s) << "="
                << env.obsNames[static_cast<size_t>(i)].name(
                       env.obs[static_cast<size_t>(i)][static_cast<size_t>(s)]);
        out << "\n";
    }
    for (StateId s = 0; s < env.stateCount(); ++s) {
        if (env.labels[static_cast<size_t>(s)].empty()) continue;
        out << "label " << env.states.name(s) << ":";
        for (PropId p : env.labels[static_cast<size_t>(s)]) out << " " << env.props.name(p);
        out << "\n";
    }
    for (StateId s = 0; s < env.stateCount(); ++s) {
        for (int ja = 0; ja < env.jointCount(); ++ja) {
            const auto& succs = env.trans[static_cast<size_t>(s)][static_cast<size_t>(ja)];
            if (succs.empty()) continue;
            out << "trans " << env.states.name(s) << " " << env.jointName(ja) << ":";
            for (StateId t : succs) out << " " << env.states.name(t);
            out << "\n";
        }
    }
    return out.str();
}

StrategyProfile parse_strategy_table(std::string_view text, const Environment& env) {
    StrategyProfile out;
    out.byAgent.resize(static_cast<size_t>(env.agentCount()));
    std::vector<std::vector<bool>> assigned(static_cast<size_t>(env.agentCount()),
                                            std::vector<bool>(static_cast<size_t>(env.stateCount()), false));
    for (const Line& l : splitLines(text)) {
        if (l.text.rfind("agent ", 0) != 0)
            throw ParseError("rows look like 'agent <name>: <key> -> {actions}'", l.no);
        auto colon = l.text.find(':');
        if (colon == std::string::npos) throw ParseError("missing ':'", l.no);
        std::string agent = l.text.substr(6, colon - 6);
        agent.erase(std::remove_if(agent.begin(), agent.end(), ::isspace), agent.end());
        auto id = env.agents.find(agent);
        if (!id) throw ParseError("unknown agent '" + agent + "'", l.no);
        auto& strat = out.byAgent[static_cast<size_t>(*id)];
        if (strat.enabled.empty())
            strat.enabled.assign(static_cast<size_t>(env.stateCount()), 0);
        std::string rest = l.text.substr(colon + 1);
        auto arrow = rest.find("->");
        if (arrow == std::string::npos) throw ParseError("missing '->'", l.no);
        std::string key = rest.substr(0, arrow);
        key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
        ActionSet mask = parseActionSet(env, *id, rest.substr(arrow + 2), l.no);
        auto apply = [&](StateId s) {
            strat.enabled[static_cast<size_t>(s)] = mask;
            assigned[static_cast<size_t>(*id)][static_cast<size_t>(s)] = true;
        };
        if (key == "*") {
            for (StateId s = 0; s < env.stateCount(); ++s)
                if (!assigned[static_cast<size_t>(*id)][static_cast<size_t>(s)]) apply(s);
        } else if (key.rfind("obs:", 0) == 0) {
            auto value = env.obsNames[static_cast<size_t>(*id)].find(key.substr(4));
            if (!value)
                throw ParseError("unknown observation value '" + key.substr(4) + "'", l.no);
            for (StateId s = 0; s < env.stateCount(); ++s)
                if (env.obs[static_cast<size_t>(*id)][static_cast<size_t>(s)] == *value) apply(s);
        } else {
            auto s = env.states.find(key);
            if (!s) throw ParseError("unknown state '" + key + "'", l.no);
            apply(*s);
        }
    }
    for (AgentId i = 0; i < env.agentCount(); ++i) {
        if (out.byAgent[static_cast<size_t>(i)].enabled.empty())
            throw ParseError("table has no rows for agent " + env.agents.name(i));
        for (StateId s = 0; s < env.stateCount(); ++s)
            if (!assigned[static_cast<size_t>(i)][static_cast<size_t>(s)])
                throw ParseError("agent " + env.agents.name(i) + " has no actions at state " +
                                 env.states.name(s));
    }
    return out;
}

std::string serialize_strategy_table(const Environment& env, const StrategyProfile& profile) {
    std::ostringstream out;
    for (AgentId i = 0; i < env.agentCount(); ++i) {
        const IndividualStrategy& strat = profile.byAgent[static_cast<size_t>(i)];
        auto renderMask = [&](ActionSet mask) {
            std::string s = "{";
            bool first = true;
            for (ActionId a = 0; a < env.actionCount(i); ++a) {
                if (!((mask >> a) & 1)) continue;
                if (!first) s += ",";
                s += env.actions[static_cast<size_t>(i)].name(a);
                first = false;
            }
            return s + "}";
        };
        if (strat.uniformFor(env, i)) {
            // Uniform strategies read better keyed by observation.
            std::vector<ObsId> seen;
            for (StateId s = 0; s < env.stateCount(); ++s) {
                ObsId o = env.obs[static_cast<size_t>(i)][static_cast<size_t>(s)];
                if (std::find(seen.begin(), seen.end(), o) != seen.end()) continue;
                seen.push_back(o);
                out << "agent " << env.agents.name(i) << ": obs:"
                    << env.obsNames[static_cast<size_t>(i)].name(o) << " -> "
                    << renderMask(strat.enabled[static_cast<size_t>(s)]) << "\n";
            }
        } else {
            for (StateId s = 0; s < env.stateCount(); ++s)
                out << "agent " << env.agents.name(i) << ": " << env.states.name(s) << " -> "
                    << renderMask(strat.enabled[static_cast<size_t>(s)]) << "\n";
        }
    }
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << content;
}

}  // namespace esl
